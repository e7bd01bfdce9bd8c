#pragma once

// Closed-form kinematics of two composed boosts.
//
// Throughout, the composition is: first a boost of rapidity eta along
// direction theta0, then a boost of rapidity xi along +z (theta = 0).  The
// product is again a boost (rapidity lambda, direction theta) followed by a
// rotation through the Thomas angle tau.  These functions evaluate the polar
// parameters directly from (xi, eta, theta0) without constructing matrices;
// they are the scalar forms the matrix path must reproduce.
//
// Unlike single-boost construction, theta0 may lie anywhere in [-pi, pi]:
// the closed forms are odd/even in theta0 in the obvious ways and the wider
// domain costs nothing.

#include <cmath>
#include <limits>

#include "errors.hpp"
#include "spin_algebra.hpp"

namespace lorentzflow {

struct CompositionInput {
    double xi{0.0};     // second boost rapidity, along +z
    double eta{0.0};    // first boost rapidity
    double theta0{0.0}; // first boost direction, in [-pi, pi]
};

namespace detail {

inline void require_composition_domain(const CompositionInput& in, const char* where) {
    if (!std::isfinite(in.xi) || !std::isfinite(in.eta) || !std::isfinite(in.theta0) ||
        in.xi < 0.0 || in.eta < 0.0) {
        throw DomainError(std::string(where) + ": rapidities must be finite and >= 0");
    }
    if (std::abs(in.theta0) > pi) {
        throw DomainError(std::string(where) + ": theta0 must lie in [-pi, pi]");
    }
}

} // namespace detail

// Direction of the resultant boost, measured from +z.
// Undefined when xi = eta = 0 (no boost at all).
[[nodiscard]] inline double resultant_theta(const CompositionInput& in) {
    detail::require_composition_domain(in, "resultant_theta");
    if (in.xi == 0.0 && in.eta == 0.0) {
        throw DegenerateInput("resultant_theta: xi = eta = 0 has no direction");
    }
    const double num = std::sin(in.theta0) * std::sinh(in.eta);
    const double den = std::sinh(in.xi) * std::cosh(in.eta) +
                       std::cos(in.theta0) * std::cosh(in.xi) * std::sinh(in.eta);
    return std::atan2(num, den);
}

// Rapidity of the resultant boost: cosh(lambda) from the trace identity.
[[nodiscard]] inline double resultant_rapidity(const CompositionInput& in) {
    detail::require_composition_domain(in, "resultant_rapidity");
    double c = std::cosh(in.xi) * std::cosh(in.eta) +
               std::cos(in.theta0) * std::sinh(in.xi) * std::sinh(in.eta);
    // c >= 1 exactly; near-cancellation at theta0 = +-pi can undershoot by
    // roundoff proportional to the cancelled magnitude.
    if (c < 1.0) {
        const double scale = std::cosh(in.xi) * std::cosh(in.eta);
        if (c < 1.0 - 64.0 * std::numeric_limits<double>::epsilon() * scale) {
            throw DomainError("resultant_rapidity: cosh(lambda) fell below 1");
        }
        c = 1.0;
    }
    return std::acosh(c);
}

// Direction of the resultant of the swapped order (eta-boost applied after
// the xi-boost), measured in the same frame.  Equal to
// -resultant_theta(eta, xi, theta0) by the symmetry of the product.
[[nodiscard]] inline double reverse_order_phi(const CompositionInput& in) {
    detail::require_composition_domain(in, "reverse_order_phi");
    const double num = -std::sin(in.theta0) * std::sinh(in.xi);
    const double den = std::cosh(in.xi) * std::sinh(in.eta) +
                       std::cos(in.theta0) * std::sinh(in.xi) * std::cosh(in.eta);
    return std::atan2(num, den);
}

// Thomas rotation angle of the composition, in (-pi, pi]:
// tau = phi + theta0 - theta.  The two orderings of the product share one
// boost rapidity; tau measures how far their boost directions disagree once
// theta0 anchors the frame.
[[nodiscard]] inline double thomas_angle(const CompositionInput& in) {
    detail::require_composition_domain(in, "thomas_angle");
    if (in.xi == 0.0 && in.eta == 0.0) {
        throw DegenerateInput("thomas_angle: xi = eta = 0 has no rotation");
    }
    return detail::wrap_angle(reverse_order_phi(in) + in.theta0 - resultant_theta(in));
}

// First-order Thomas angle for an infinitesimal second boost delta_xi
// composed onto a finite eta-boost:
//   tau ~ sin(theta0) (cosh(eta) - 1) / sinh(eta) * delta_xi
//       = sin(theta0) tanh(eta / 2) * delta_xi.
// The tanh form is exact at eta = 0 where the quotient is 0/0.
[[nodiscard]] inline double infinitesimal_thomas(double delta_xi, double eta, double theta0) {
    if (!std::isfinite(delta_xi) || !std::isfinite(eta) || !std::isfinite(theta0) ||
        eta < 0.0) {
        throw DomainError("infinitesimal_thomas: eta must be finite and >= 0");
    }
    if (std::abs(theta0) > pi) {
        throw DomainError("infinitesimal_thomas: theta0 must lie in [-pi, pi]");
    }
    return std::sin(theta0) * std::tanh(eta / 2.0) * delta_xi;
}

// Accumulated rotation along a flow trajectory as a function of the
// direction variable, with the rapidity lambda held at its local value:
//   tau(theta) = tau0 + (1 - cosh(lambda)) / cosh(lambda) * (theta - theta0).
// Valid as a local (first-order) relation along the flow.
[[nodiscard]] inline double tau_theta_curve(double theta, double theta0, double tau0,
                                            double lambda) {
    if (!std::isfinite(theta) || !std::isfinite(theta0) || !std::isfinite(tau0) ||
        !std::isfinite(lambda) || lambda < 0.0) {
        throw DomainError("tau_theta_curve: lambda must be finite and >= 0");
    }
    const double ch = std::cosh(lambda);
    return tau0 + (1.0 - ch) / ch * (theta - theta0);
}

// Accumulated rotation as a function of rapidity with theta held at its
// local value:
//   tau(lambda) = tau0 + tan(theta) * [ln(cosh(lambda) + 1) - ln(cosh(lambda0) + 1)],
// the exact integral of dtau/dlambda = tan(theta) tanh(lambda / 2).  Like
// tau_theta_curve this is a local relation along the flow, good where theta
// varies slowly against lambda.  Unusable at theta = pi/2 where tan diverges.
[[nodiscard]] inline double tau_lambda_curve(double lambda, double lambda0, double tau0,
                                             double theta) {
    if (!std::isfinite(lambda) || !std::isfinite(lambda0) || !std::isfinite(tau0) ||
        !std::isfinite(theta) || lambda < 0.0 || lambda0 < 0.0) {
        throw DomainError("tau_lambda_curve: rapidities must be finite and >= 0");
    }
    if (std::abs(std::cos(theta)) < 1e-12) {
        throw DomainError("tau_lambda_curve: theta too close to pi/2, tan(theta) diverges");
    }
    return tau0 + std::tan(theta) *
                      (std::log(std::cosh(lambda) + 1.0) - std::log(std::cosh(lambda0) + 1.0));
}

// Conserved quantity of the composition flow: sin(theta) sinh(lambda).
// Equals sin(theta0) sinh(eta) for every xi along a trajectory.
[[nodiscard]] inline double flow_invariant(double theta, double lambda) {
    if (!std::isfinite(theta) || !std::isfinite(lambda)) {
        throw DomainError("flow_invariant: arguments must be finite");
    }
    return std::sin(theta) * std::sinh(lambda);
}

} // namespace lorentzflow
