#pragma once

// Beaming of decay products emitted isotropically by a moving parent.
//
// Each sampled emission angle theta0 (in the parent frame, measured from the
// boost axis) is mapped to its lab angle twice: once by closed-form velocity
// addition and once through the 2x2 spinor composition.  The two routes
// share no algebra, so their per-sample agreement is a live consistency
// check; the worst disagreement is carried in the result.
//
// Photons (beta0 = 1): lab angle obeys tan(theta/2) = exp(-xi) tan(theta0/2).
// The spinor route pushes a null direction spinor through the boost matrix.
// Massive daughters (beta0 < 1): closed-form route is the scalar two-boost
// kinematics; the spinor route composes and re-decomposes the matrices, and
// sin(theta) sinh(lambda) must survive the trip unchanged.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "detail/format.hpp"
#include "errors.hpp"
#include "kinematics.hpp"
#include "spin_algebra.hpp"

#include <json.hpp>

namespace lorentzflow {

enum class AngleMode {
    uniform_cos,   // isotropic in 3d: cos(theta0) uniform on (-1, 1]
    uniform_theta  // uniform on [0, pi)
};

struct DecaySpec {
    double xi{1.0};          // parent rapidity along +z
    std::size_t n{10000};    // number of sampled emissions
    std::size_t bins{64};    // histogram bins over [0, pi]
    AngleMode mode{AngleMode::uniform_cos};
    double beta0{1.0};       // daughter speed in the parent frame; 1 = photon
    std::uint64_t seed{12345};
};

struct DecayResult {
    std::vector<double> lab_angles;        // one per sample, in [0, pi]
    double max_route_disagreement{0.0};    // worst |theta_closed - theta_spinor|
    double max_invariant_mismatch{0.0};    // massive mode only; 0 for photons
};

namespace detail {

// Engine output -> uniform double in [0, 1): top 53 bits, explicitly, so the
// stream does not depend on library distribution internals.
[[nodiscard]] inline double uniform01(std::uint64_t raw) {
    return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

// Lab angle of a null direction pushed through a transformation.  Direction
// theta corresponds to the spinor (sin(theta/2), -cos(theta/2)) up to sign;
// the image direction is read back with the same chart.
[[nodiscard]] inline double aberrate_null(const SpinMatrix& l, double theta) {
    const double u0 = std::sin(theta / 2.0);
    const double u1 = -std::cos(theta / 2.0);
    double v0 = l.a * u0 + l.b * u1;
    double v1 = l.c * u0 + l.d * u1;
    if (v1 > 0.0) {
        v0 = -v0;
        v1 = -v1;
    }
    return 2.0 * std::atan2(v0, -v1);
}

} // namespace detail

// Sample n emission angles and map them to the lab through both routes.
[[nodiscard]] inline DecayResult sample_decay(const DecaySpec& spec) {
    if (!std::isfinite(spec.xi) || spec.xi < 0.0) {
        throw DomainError("sample_decay: xi must be finite and >= 0");
    }
    if (!(spec.beta0 > 0.0) || spec.beta0 > 1.0) {
        throw DomainError("sample_decay: beta0 must lie in (0, 1]");
    }
    if (spec.n == 0) {
        throw DegenerateInput("sample_decay: need at least one sample");
    }

    std::mt19937_64 engine(spec.seed);
    const bool photon = spec.beta0 == 1.0;
    const SpinMatrix parent = boost_matrix(spec.xi, 0.0);
    const double lambda0 = photon ? 0.0 : std::atanh(spec.beta0);
    const double exp_neg_xi = std::exp(-spec.xi);

    DecayResult out;
    out.lab_angles.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        const double u = detail::uniform01(engine());
        const double theta0 = spec.mode == AngleMode::uniform_cos
                                  ? std::acos(1.0 - 2.0 * u)
                                  : pi * u;
        double closed;
        double spinor;
        if (photon) {
            closed = 2.0 * std::atan(exp_neg_xi * std::tan(theta0 / 2.0));
            spinor = detail::aberrate_null(parent, theta0);
        } else {
            const CompositionInput in{spec.xi, lambda0, theta0};
            closed = resultant_theta(in);
            const Decomposition dec = decompose(parent * boost_matrix(lambda0, theta0));
            spinor = dec.theta;
            const double drift = std::abs(flow_invariant(dec.theta, dec.lambda) -
                                          flow_invariant(theta0, lambda0));
            out.max_invariant_mismatch = std::max(out.max_invariant_mismatch, drift);
        }
        out.max_route_disagreement =
            std::max(out.max_route_disagreement, std::abs(closed - spinor));
        out.lab_angles.push_back(closed);
    }
    return out;
}

// Equal-width histogram of the lab angles over [0, pi].
// Columns: bin_lo, bin_hi, count, fraction.
[[nodiscard]] inline std::string render_histogram_csv(const DecayResult& result,
                                                      std::size_t bins) {
    if (bins == 0) {
        throw DomainError("render_histogram_csv: need at least one bin");
    }
    std::vector<std::size_t> counts(bins, 0);
    const double width = pi / static_cast<double>(bins);
    for (double angle : result.lab_angles) {
        auto idx = static_cast<std::size_t>(angle / width);
        counts[std::min(idx, bins - 1)] += 1;
    }
    const auto n = static_cast<double>(result.lab_angles.size());
    std::string out = "bin_lo,bin_hi,count,fraction\n";
    for (std::size_t b = 0; b < bins; ++b) {
        out += detail::format_double(static_cast<double>(b) * width) + ',';
        out += detail::format_double(static_cast<double>(b + 1) * width) + ',';
        out += std::to_string(counts[b]) + ',';
        out += detail::format_double(static_cast<double>(counts[b]) / n) + '\n';
    }
    return out;
}

// Fraction of samples with lab angle below 1/cosh(xi), the natural beaming
// scale (half-angle of the forward cone at large xi).
[[nodiscard]] inline double beaming_fraction(const DecayResult& result, double xi) {
    const double threshold = 1.0 / std::cosh(xi);
    std::size_t below = 0;
    for (double angle : result.lab_angles) {
        if (angle < threshold) {
            ++below;
        }
    }
    return static_cast<double>(below) / static_cast<double>(result.lab_angles.size());
}

[[nodiscard]] inline std::string render_summary_json(const DecayResult& result,
                                                     const DecaySpec& spec) {
    std::vector<double> sorted = result.lab_angles;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 == 1 ? sorted[n / 2]
                                     : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    double mean = 0.0;
    for (double angle : sorted) {
        mean += angle;
    }
    mean /= static_cast<double>(n);

    nlohmann::ordered_json summary;
    summary["n"] = n;
    summary["xi"] = spec.xi;
    summary["beta0"] = spec.beta0;
    summary["mode"] = spec.mode == AngleMode::uniform_cos ? "cos" : "theta";
    summary["seed"] = spec.seed;
    summary["bins"] = spec.bins;
    summary["mean_theta"] = mean;
    summary["median_theta"] = median;
    summary["fraction_below_inv_cosh_xi"] = beaming_fraction(result, spec.xi);
    summary["max_route_disagreement"] = result.max_route_disagreement;
    summary["max_invariant_mismatch"] = result.max_invariant_mismatch;
    return summary.dump(2) + "\n";
}

} // namespace lorentzflow
