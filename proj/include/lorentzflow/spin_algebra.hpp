#pragma once

// Real 2x2 spinor representation of the Lorentz group restricted to one
// spatial plane: boosts with velocity in the x-z plane and rotations about
// the orthogonal axis.  Every in-plane transformation is a unimodular real
// matrix; boosts are the symmetric positive ones, rotations the orthogonal
// ones, and the polar factorization L = B * R is computed in closed form.
//
// Conventions used throughout:
//   - angles theta name directions in the plane, measured from +z toward +x;
//   - boost_matrix(kappa, theta) carries rapidity kappa (speed tanh(kappa))
//     along direction theta, with half-angle/half-rapidity matrix entries;
//   - rotation_matrix(tau) conjugates boost directions theta -> theta - tau,
//     i.e. rotation_matrix(-a) boost_matrix(k, t) rotation_matrix(a) equals
//     boost_matrix(k, t + a);
//   - composition order is matrix order: compose(second, first) applies
//     `first`, then `second`.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace lorentzflow {

inline constexpr double pi = std::numbers::pi_v<double>;

// |det - 1| allowed on matrices entering compose(), per unit of squared
// entry magnitude: the determinant is a difference of entry products, so
// its roundoff grows with the square of the largest entry.  Freshly
// constructed factors satisfy the scaled bound to roundoff; anything worse
// indicates caller error.
inline constexpr double det_tolerance = 1e-12;

// |det - 1| allowed on matrices entering decompose(), scaled the same way.
// Looser than the composition gate because products of many factors
// accumulate drift.
inline constexpr double unimodular_tolerance = 1e-9;

// 2x2 real matrix, row-major [[a, b], [c, d]].
struct SpinMatrix {
    double a{1.0};
    double b{0.0};
    double c{0.0};
    double d{1.0};

    [[nodiscard]] constexpr double det() const { return a * d - b * c; }
    [[nodiscard]] constexpr double trace() const { return a + d; }
    [[nodiscard]] constexpr SpinMatrix transposed() const { return {a, c, b, d}; }

    static constexpr SpinMatrix identity() { return {}; }

    friend constexpr SpinMatrix operator*(const SpinMatrix& m, const SpinMatrix& n) {
        return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    }

    friend constexpr SpinMatrix operator-(const SpinMatrix& m, const SpinMatrix& n) {
        return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
    }
};

[[nodiscard]] inline double max_abs_entry(const SpinMatrix& m) {
    return std::max(std::max(std::abs(m.a), std::abs(m.b)),
                    std::max(std::abs(m.c), std::abs(m.d)));
}

[[nodiscard]] inline bool all_finite(const SpinMatrix& m) {
    return std::isfinite(m.a) && std::isfinite(m.b) && std::isfinite(m.c) &&
           std::isfinite(m.d);
}

// Parameters of a single boost: rapidity kappa >= 0 along direction
// theta in [0, pi].  Directions outside the closed upper half-plane are not
// representable here; compositions that need them carry the extra half turn
// in the rotation factor instead.
struct BoostSpec {
    double kappa{0.0};
    double theta{0.0};
};

// Polar factors of a transformation L = B(lambda, theta) * R(tau):
// boost rapidity lambda >= 0, boost direction theta in [0, pi], rotation
// angle tau in (-pi, pi].
struct Decomposition {
    double lambda{0.0};
    double theta{0.0};
    double tau{0.0};
};

namespace detail {

inline void require_finite(const SpinMatrix& m, const char* where) {
    if (!all_finite(m)) {
        throw DomainError(std::string(where) + ": matrix has non-finite entries");
    }
}

// Wrap an angle into (-pi, pi].
[[nodiscard]] inline double wrap_angle(double x) {
    double w = std::remainder(x, 2.0 * pi);
    if (w <= -pi) {
        w += 2.0 * pi;
    }
    return w;
}

} // namespace detail

// exp(-(kappa/2) * sigma_theta) where sigma_theta = cos(theta) sigma_3 +
// sin(theta) sigma_1.  Symmetric, det 1, trace 2 cosh(kappa/2).
[[nodiscard]] inline SpinMatrix boost_matrix(const BoostSpec& spec) {
    if (!std::isfinite(spec.kappa) || !std::isfinite(spec.theta) || spec.kappa < 0.0) {
        throw DomainError("boost_matrix: rapidity must be finite and >= 0");
    }
    if (spec.theta < 0.0 || spec.theta > pi) {
        throw DomainError("boost_matrix: direction must lie in [0, pi]");
    }
    const double ch = std::cosh(spec.kappa / 2.0);
    const double sh = std::sinh(spec.kappa / 2.0);
    const double ct = std::cos(spec.theta);
    const double st = std::sin(spec.theta);
    return {ch - sh * ct, -sh * st, -sh * st, ch + sh * ct};
}

[[nodiscard]] inline SpinMatrix boost_matrix(double kappa, double theta) {
    return boost_matrix(BoostSpec{kappa, theta});
}

// Spinor rotation by tau: conjugation carries boost directions theta to
// theta - tau.  Half-angle entries, so tau and tau + 2 pi differ by an
// overall sign.
[[nodiscard]] inline SpinMatrix rotation_matrix(double tau) {
    if (!std::isfinite(tau)) {
        throw DomainError("rotation_matrix: angle must be finite");
    }
    const double c = std::cos(tau / 2.0);
    const double s = std::sin(tau / 2.0);
    return {c, s, -s, c};
}

namespace detail {

// Roundoff scale for a determinant check: ad - bc wobbles in units of E^2.
[[nodiscard]] inline double det_scale(const SpinMatrix& m) {
    const double e = max_abs_entry(m);
    return std::max(1.0, e * e);
}

} // namespace detail

// Matrix product with a unimodularity gate on both factors.
[[nodiscard]] inline SpinMatrix compose(const SpinMatrix& second, const SpinMatrix& first) {
    detail::require_finite(second, "compose");
    detail::require_finite(first, "compose");
    if (std::abs(second.det() - 1.0) > det_tolerance * detail::det_scale(second) ||
        std::abs(first.det() - 1.0) > det_tolerance * detail::det_scale(first)) {
        throw DetViolation("compose: factor determinant differs from 1 beyond the scaled gate");
    }
    return second * first;
}

// Polar factorization L = B * R.
//
// S = L L^T is symmetric positive definite with det 1, so S = B^2 for the
// boost factor and B = (S + I) / sqrt(tr S + 2) by Cayley-Hamilton.  The
// rotation is then R = B^{-1} L = adj(B) L.  Rapidity comes from
// tr S = 2 cosh(lambda), direction from the traceless part of B, and the
// rotation angle from R's first row, wrapped into (-pi, pi].  The result is
// invariant under L -> -L, so it is well defined on the double cover.
//
// A pure rotation (lambda = 0) has no direction; theta = 0 by convention.
// L = -I sits at the branch point of the wrap; tau = pi by convention.
[[nodiscard]] inline Decomposition decompose(const SpinMatrix& l) {
    detail::require_finite(l, "decompose");
    if (std::abs(l.det() - 1.0) > unimodular_tolerance * detail::det_scale(l)) {
        throw NotUnimodular("decompose: determinant differs from 1 beyond the scaled gate");
    }

    const SpinMatrix s = l * l.transposed();
    const double half_trace = s.trace() / 2.0;

    // half_trace = cosh(lambda) >= 1 exactly; allow roundoff undershoot
    // scaled by the magnitude of the cancelling terms.
    double cosh_lambda = half_trace;
    if (cosh_lambda < 1.0) {
        const double scale = std::max({1.0, std::abs(s.a), std::abs(s.d)});
        if (cosh_lambda < 1.0 - 64.0 * std::numeric_limits<double>::epsilon() * scale) {
            throw NotUnimodular("decompose: L L^T trace below 2, input is not a plane Lorentz spinor");
        }
        cosh_lambda = 1.0;
    }
    const double lambda = std::acosh(cosh_lambda);

    // B = (S + I) / sqrt(tr S + 2); traceless part encodes the direction via
    // B = cosh(lambda/2) I - sinh(lambda/2) sigma_theta.
    const double denom = std::sqrt(s.trace() + 2.0);
    const double ba = (s.a + 1.0) / denom;
    const double bb = s.b / denom;
    const double bd = (s.d + 1.0) / denom;

    double sin_part = -bb;                // sinh(lambda/2) sin(theta)
    const double cos_part = (bd - ba) / 2.0;  // sinh(lambda/2) cos(theta)
    const double off_scale = std::max(1.0, std::abs(ba) + std::abs(bd));
    double theta = 0.0;
    if (std::hypot(sin_part, cos_part) > 1e-14 * off_scale) {
        if (sin_part < 0.0) {
            // Roundoff can push the off-diagonal slightly past zero; anything
            // larger means the boost points outside the upper half-plane.
            if (sin_part < -1e-12 * off_scale) {
                throw DomainError("decompose: boost direction falls outside [0, pi]");
            }
            sin_part = 0.0;
        }
        theta = std::atan2(sin_part, cos_part);
    }

    // R = B^{-1} L with B^{-1} = adj(B) since det B = 1.
    const SpinMatrix b_inv{bd, -bb, -bb, ba};
    const SpinMatrix r = b_inv * l;

    double tau;
    if (r.a < -1.0 + 1e-12 && std::abs(r.b) < 1e-12) {
        tau = pi;  // R = -I: both wrap endpoints represent it; pick +pi
    } else {
        tau = detail::wrap_angle(2.0 * std::atan2(r.b, r.a));
    }
    return {lambda, theta, tau};
}

// Max-abs entrywise residual of R(tau) (B_eta B_xi) R(tau) - (B_xi B_eta),
// where tau is the Thomas angle of the forward product B_xi B_eta.  Exactly
// zero in exact arithmetic: the two orderings are conjugate transposes of a
// common polar pair.
[[nodiscard]] inline double reverse_order_identity_residual(double xi, double eta,
                                                            double theta0) {
    const SpinMatrix bxi = boost_matrix(xi, 0.0);
    const SpinMatrix beta_m = boost_matrix(eta, theta0);
    const SpinMatrix forward = compose(bxi, beta_m);
    const SpinMatrix reverse = compose(beta_m, bxi);
    const SpinMatrix r = rotation_matrix(decompose(forward).tau);
    return max_abs_entry(r * reverse * r - forward);
}

} // namespace lorentzflow
