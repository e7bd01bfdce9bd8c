#pragma once

// Parameter flow of the composed transformation as the +z boost grows.
//
// With the first boost fixed and xi the rapidity of the second, the polar
// parameters (theta, beta = tanh(lambda), tau) of the product evolve by
//
//   dtheta/dxi = -sin(theta) / beta
//   dbeta/dxi  =  cos(theta) (1 - beta^2)
//   dtau/dxi   =  (sin(theta) / beta) (1 - sqrt(1 - beta^2))
//
// an autonomous field on the (theta, beta) strip [0, pi] x [-1, 1] with tau
// slaved to it.  beta < 0 encodes a resultant pointing opposite the nominal
// direction; beta = 0 off the axis is a genuine singularity of the chart
// (the direction changes discontinuously), guarded here by beta_min.
//
// sin(theta) sinh(artanh(beta)) is conserved exactly by the field; the
// integrator monitors it only through tests, not by re-projection.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "spin_algebra.hpp"

namespace lorentzflow {

// Off-axis states with |beta| below this are rejected as NearSingularBeta.
inline constexpr double default_beta_min = 1e-6;

// Step-doubling local error bound per step (max-norm over the state).
inline constexpr double default_local_error_tol = 1e-6;

// |sin(theta)| at or below this counts as on-axis: the theta equation is
// 0/beta there and dtheta is 0 by continuity.
inline constexpr double axis_tolerance = 1e-12;

// Snap distance to the invariant edges beta = +-1, theta = 0, pi.
inline constexpr double edge_snap = 1e-12;

struct FlowState {
    double theta{0.0};
    double beta{0.0};
    double tau{0.0};
};

struct FlowDerivative {
    double dtheta{0.0};
    double dbeta{0.0};
    double dtau{0.0};
};

struct TrajectorySample {
    double xi{0.0};
    FlowState state{};
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double step{0.0};
};

enum class Stability { attractive, repulsive };

struct FixedPoint {
    double theta{0.0};
    double beta{0.0};
    // Eigenvalues of the (theta, beta) Jacobian, which is diagonal at every
    // fixed point: first the d(dtheta)/dtheta entry, then d(dbeta)/dbeta.
    std::array<double, 2> eigenvalues{0.0, 0.0};
    Stability stability{Stability::attractive};
};

// One node of the sampled direction field.  `singular` marks nodes in the
// off-axis beta ~ 0 band where the raw field blows up; dtheta there is
// reported as computed (+-inf at beta = +-0).
struct FieldNode {
    double theta{0.0};
    double beta{0.0};
    double dtheta{0.0};
    double dbeta{0.0};
    bool singular{false};
};

namespace detail {

[[nodiscard]] inline bool on_axis(double theta) {
    return std::abs(std::sin(theta)) <= axis_tolerance;
}

// Field evaluation used inside integration stages.  Stage states may
// overshoot |beta| = 1 by O(h * derivative); the sqrt is clamped, the
// overshoot is resolved after the full step.
[[nodiscard]] inline FlowDerivative stage_rhs(const FlowState& s, double beta_min,
                                              double xi_here) {
    const double st = std::sin(s.theta);
    if (std::abs(st) <= axis_tolerance) {
        return {0.0, std::cos(s.theta) * (1.0 - s.beta * s.beta), 0.0};
    }
    if (std::abs(s.beta) < beta_min) {
        throw NearSingularBeta("flow: |beta| < " + std::to_string(beta_min) +
                               " off the axis near xi = " + std::to_string(xi_here));
    }
    const double one_minus_b2 = 1.0 - s.beta * s.beta;
    const double root = std::sqrt(std::max(0.0, one_minus_b2));
    const double ratio = st / s.beta;
    return {-ratio, std::cos(s.theta) * one_minus_b2, ratio * (1.0 - root)};
}

[[nodiscard]] inline FlowState rk4_advance(const FlowState& s, double h, double beta_min,
                                           double xi0) {
    const auto apply = [](const FlowState& y, const FlowDerivative& k, double f) {
        return FlowState{y.theta + f * k.dtheta, y.beta + f * k.dbeta, y.tau + f * k.dtau};
    };
    const FlowDerivative k1 = stage_rhs(s, beta_min, xi0);
    const FlowDerivative k2 = stage_rhs(apply(s, k1, h / 2.0), beta_min, xi0);
    const FlowDerivative k3 = stage_rhs(apply(s, k2, h / 2.0), beta_min, xi0);
    const FlowDerivative k4 = stage_rhs(apply(s, k3, h), beta_min, xi0 + h);
    return {s.theta + h / 6.0 * (k1.dtheta + 2.0 * k2.dtheta + 2.0 * k3.dtheta + k4.dtheta),
            s.beta + h / 6.0 * (k1.dbeta + 2.0 * k2.dbeta + 2.0 * k3.dbeta + k4.dbeta),
            s.tau + h / 6.0 * (k1.dtau + 2.0 * k2.dtau + 2.0 * k3.dtau + k4.dtau)};
}

[[nodiscard]] inline double state_distance(const FlowState& x, const FlowState& y) {
    return std::max({std::abs(x.theta - y.theta), std::abs(x.beta - y.beta),
                     std::abs(x.tau - y.tau)});
}

} // namespace detail

// Right-hand side of the flow at a valid state.  Throws NearSingularBeta for
// off-axis states with |beta| < beta_min; on the axis the field is regular
// for every beta and dtheta = dtau = 0.
[[nodiscard]] inline FlowDerivative flow_rhs(const FlowState& s,
                                             double beta_min = default_beta_min) {
    if (!std::isfinite(s.theta) || !std::isfinite(s.beta) || !std::isfinite(s.tau)) {
        throw DomainError("flow_rhs: state must be finite");
    }
    if (s.theta < 0.0 || s.theta > pi || std::abs(s.beta) > 1.0) {
        throw DomainError("flow_rhs: state outside [0, pi] x [-1, 1]");
    }
    return detail::stage_rhs(s, beta_min, 0.0);
}

// Fixed-step classical RK4 from xi = 0 to xi_end, sampling the state at
// xi = 0, step, 2 step, ..., with a final partial step if xi_end is not a
// multiple of step.
//
// Every step is also taken as two half steps; if the max-norm difference
// divided by 15 (the RK4 Richardson factor) exceeds local_error_tol the
// step is refused with StepTooLarge.  The full-step result is what advances
// the trajectory, so accepted output is plain RK4 with the requested step.
//
// After each step, |beta| or theta past their invariant edges by at most
// edge_snap is snapped onto the edge; a larger excursion is StepTooLarge.
// tau is accumulated without wrapping.
[[nodiscard]] inline Trajectory integrate(const FlowState& initial, double xi_end,
                                          double step,
                                          double beta_min = default_beta_min,
                                          double local_error_tol = default_local_error_tol) {
    if (!std::isfinite(xi_end) || xi_end < 0.0) {
        throw DomainError("integrate: xi_end must be finite and >= 0");
    }
    if (!std::isfinite(step) || step <= 0.0 || step > 0.1) {
        throw DomainError("integrate: step must lie in (0, 0.1]");
    }
    if (!std::isfinite(initial.theta) || !std::isfinite(initial.beta) ||
        !std::isfinite(initial.tau)) {
        throw DomainError("integrate: initial state must be finite");
    }

    FlowState s = initial;
    // Accept roundoff-deep starts just outside the strip.
    if (s.theta < 0.0 || s.theta > pi) {
        if (s.theta < -edge_snap || s.theta > pi + edge_snap) {
            throw DomainError("integrate: initial theta outside [0, pi]");
        }
        s.theta = s.theta < 0.0 ? 0.0 : pi;
    }
    if (std::abs(s.beta) > 1.0) {
        if (std::abs(s.beta) > 1.0 + edge_snap) {
            throw DomainError("integrate: initial |beta| > 1");
        }
        s.beta = s.beta > 0.0 ? 1.0 : -1.0;
    }
    if (std::abs(s.beta) < beta_min && !detail::on_axis(s.theta)) {
        throw NearSingularBeta("integrate: initial state has |beta| < beta_min off the axis");
    }

    const std::size_t n_full = static_cast<std::size_t>(std::floor(xi_end / step + 1e-9));
    const double remainder = xi_end - static_cast<double>(n_full) * step;
    const bool has_partial = remainder > 1e-9 * step;
    const std::size_t n_steps = n_full + (has_partial ? 1 : 0);

    Trajectory out;
    out.step = step;
    out.samples.reserve(n_steps + 1);
    out.samples.push_back({0.0, s});

    for (std::size_t k = 1; k <= n_steps; ++k) {
        const double xi_prev = static_cast<double>(k - 1) * step;
        const bool last = (k == n_steps);
        const double h = last ? xi_end - xi_prev : step;
        const double xi_here = last ? xi_end : static_cast<double>(k) * step;

        const FlowState full = detail::rk4_advance(s, h, beta_min, xi_prev);
        const FlowState half = detail::rk4_advance(s, h / 2.0, beta_min, xi_prev);
        const FlowState fine = detail::rk4_advance(half, h / 2.0, beta_min, xi_prev + h / 2.0);
        const double est = detail::state_distance(full, fine) / 15.0;
        if (est > local_error_tol) {
            throw StepTooLarge("integrate: local error estimate " + std::to_string(est) +
                               " at xi = " + std::to_string(xi_here) +
                               " exceeds tolerance, reduce the step");
        }

        s = full;
        if (std::abs(s.beta) > 1.0) {
            if (std::abs(s.beta) > 1.0 + edge_snap) {
                throw StepTooLarge("integrate: step left |beta| <= 1 at xi = " +
                                   std::to_string(xi_here));
            }
            s.beta = s.beta > 0.0 ? 1.0 : -1.0;
        } else if (1.0 - std::abs(s.beta) < edge_snap) {
            s.beta = s.beta > 0.0 ? 1.0 : -1.0;  // beta = +-1 is invariant; stay on it
        }
        if (s.theta < 0.0 || s.theta > pi) {
            if (s.theta < -edge_snap || s.theta > pi + edge_snap) {
                throw StepTooLarge("integrate: step left theta in [0, pi] at xi = " +
                                   std::to_string(xi_here));
            }
            s.theta = s.theta < 0.0 ? 0.0 : pi;
        }
        out.samples.push_back({xi_here, s});
    }
    return out;
}

// The four equilibria of the (theta, beta) field: the light-speed corners of
// the strip.  The Jacobian
//   [[-cos(theta)/beta, sin(theta)/beta^2], [-sin(theta)(1-beta^2), -2 beta cos(theta)]]
// is diagonal at each corner, so the eigenvalues are read off directly.
[[nodiscard]] inline std::array<FixedPoint, 4> fixed_points() {
    return {FixedPoint{0.0, 1.0, {-1.0, -2.0}, Stability::attractive},
            FixedPoint{0.0, -1.0, {1.0, 2.0}, Stability::repulsive},
            FixedPoint{pi, 1.0, {1.0, 2.0}, Stability::repulsive},
            FixedPoint{pi, -1.0, {-1.0, -2.0}, Stability::attractive}};
}

// Sample the raw field on an inclusive n_theta x n_beta grid, row-major with
// theta as the slow index.  Nodes in the off-axis |beta| < beta_min band are
// flagged singular and their dtheta is the raw quotient (+-inf at beta = 0);
// nothing throws here, callers decide how to draw such nodes.
[[nodiscard]] inline std::vector<FieldNode> direction_field(double theta_lo, double theta_hi,
                                                            std::size_t n_theta,
                                                            double beta_lo, double beta_hi,
                                                            std::size_t n_beta,
                                                            double beta_min = default_beta_min) {
    if (n_theta < 2 || n_beta < 2) {
        throw DomainError("direction_field: need at least 2 nodes per axis");
    }
    if (!std::isfinite(theta_lo) || !std::isfinite(theta_hi) || !std::isfinite(beta_lo) ||
        !std::isfinite(beta_hi) || theta_lo >= theta_hi || beta_lo >= beta_hi) {
        throw DomainError("direction_field: ranges must be finite with lo < hi");
    }
    if (theta_lo < 0.0 || theta_hi > pi || beta_lo < -1.0 || beta_hi > 1.0) {
        throw DomainError("direction_field: grid outside [0, pi] x [-1, 1]");
    }

    std::vector<FieldNode> nodes;
    nodes.reserve(n_theta * n_beta);
    for (std::size_t i = 0; i < n_theta; ++i) {
        const double theta =
            theta_lo + (theta_hi - theta_lo) * static_cast<double>(i) /
                           static_cast<double>(n_theta - 1);
        const double st = std::sin(theta);
        const double ct = std::cos(theta);
        for (std::size_t j = 0; j < n_beta; ++j) {
            const double beta =
                beta_lo + (beta_hi - beta_lo) * static_cast<double>(j) /
                              static_cast<double>(n_beta - 1);
            FieldNode node;
            node.theta = theta;
            node.beta = beta;
            node.dbeta = ct * (1.0 - beta * beta);
            if (std::abs(st) <= axis_tolerance) {
                node.dtheta = 0.0;
            } else {
                node.dtheta = -st / beta;
                node.singular = std::abs(beta) < beta_min;
            }
            nodes.push_back(node);
        }
    }
    return nodes;
}

} // namespace lorentzflow
