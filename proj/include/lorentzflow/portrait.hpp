#pragma once

// Phase-portrait data for the (theta, beta) flow: a sampled direction field,
// a family of integrated trajectories, and the four equilibria, rendered
// either as CSV (for downstream plotting) or as a self-contained SVG.
//
// Both renderers format numbers with std::to_chars, so output is
// byte-deterministic for a given spec.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "detail/format.hpp"
#include "errors.hpp"
#include "flow.hpp"

namespace lorentzflow {

struct PortraitSpec {
    std::size_t n_theta{20};
    std::size_t n_beta{20};
    double theta_lo{0.0};
    double theta_hi{pi};
    double beta_lo{-1.0};
    double beta_hi{1.0};
    std::vector<FlowState> seeds;
    double xi_end{12.0};
    double step{1e-3};
    double beta_min{default_beta_min};
    double local_error_tol{default_local_error_tol};
};

// Full strip, 20 x 20 arrows, and twelve trajectories launched from
// theta = pi/2 at speeds +-{0.1, 0.26, 0.42, 0.58, 0.74, 0.9}.  The
// positive-beta family collimates toward (0, 1), the negative one toward
// (pi, -1).
[[nodiscard]] inline PortraitSpec standard_portrait_spec() {
    PortraitSpec spec;
    for (double b : {0.1, 0.26, 0.42, 0.58, 0.74, 0.9}) {
        spec.seeds.push_back({pi / 2.0, b, 0.0});
        spec.seeds.push_back({pi / 2.0, -b, 0.0});
    }
    return spec;
}

namespace detail {

// Field at a trajectory sample, with the same raw semantics as
// direction_field (never throws; accepted samples are never singular).
[[nodiscard]] inline FlowDerivative sample_rhs(const FlowState& s) {
    const double st = std::sin(s.theta);
    if (std::abs(st) <= axis_tolerance) {
        return {0.0, std::cos(s.theta) * (1.0 - s.beta * s.beta), 0.0};
    }
    const double root = std::sqrt(std::max(0.0, 1.0 - s.beta * s.beta));
    return {-st / s.beta, std::cos(s.theta) * (1.0 - s.beta * s.beta),
            st / s.beta * (1.0 - root)};
}

} // namespace detail

// CSV layout, one header plus four row kinds sharing eight columns
// (kind, xi, theta, beta, tau, dtheta, dbeta, singular):
//   arrow            field node; xi and tau empty, dtheta may be +-inf in
//                    the singular band, singular is 0/1
//   trajectory:<k>   sample of seed k with the field evaluated at the sample
//   trajectory-failed:<k>  seed k could not be integrated (marker row with
//                    the seed state; singular is 1)
//   fixed-attractive / fixed-repulsive
//                    equilibrium; dtheta and dbeta carry the two eigenvalues
[[nodiscard]] inline std::string render_portrait_csv(const PortraitSpec& spec) {
    std::string out = "kind,xi,theta,beta,tau,dtheta,dbeta,singular\n";
    using detail::format_double;

    const auto nodes = direction_field(spec.theta_lo, spec.theta_hi, spec.n_theta,
                                       spec.beta_lo, spec.beta_hi, spec.n_beta,
                                       spec.beta_min);
    for (const auto& node : nodes) {
        out += "arrow,,";
        out += format_double(node.theta) + ',' + format_double(node.beta) + ",,";
        out += format_double(node.dtheta) + ',' + format_double(node.dbeta) + ',';
        out += node.singular ? "1\n" : "0\n";
    }

    for (std::size_t k = 0; k < spec.seeds.size(); ++k) {
        const std::string tag = std::to_string(k);
        try {
            const Trajectory traj = integrate(spec.seeds[k], spec.xi_end, spec.step,
                                              spec.beta_min, spec.local_error_tol);
            for (const auto& sample : traj.samples) {
                const FlowDerivative d = detail::sample_rhs(sample.state);
                out += "trajectory:" + tag + ',' + format_double(sample.xi) + ',';
                out += format_double(sample.state.theta) + ',' +
                       format_double(sample.state.beta) + ',' +
                       format_double(sample.state.tau) + ',';
                out += format_double(d.dtheta) + ',' + format_double(d.dbeta) + ",0\n";
            }
        } catch (const Error&) {
            const FlowState& s = spec.seeds[k];
            out += "trajectory-failed:" + tag + ",0,";
            out += format_double(s.theta) + ',' + format_double(s.beta) + ',' +
                   format_double(s.tau) + ",0,0,1\n";
        }
    }

    for (const auto& fp : fixed_points()) {
        out += fp.stability == Stability::attractive ? "fixed-attractive,," : "fixed-repulsive,,";
        out += format_double(fp.theta) + ',' + format_double(fp.beta) + ",,";
        out += format_double(fp.eigenvalues[0]) + ',' + format_double(fp.eigenvalues[1]) +
               ",0\n";
    }
    return out;
}

namespace detail {

struct SvgFrame {
    double width{800.0};
    double height{600.0};
    double margin{60.0};
    double theta_lo, theta_hi, beta_lo, beta_hi;

    [[nodiscard]] double x(double theta) const {
        return margin + (theta - theta_lo) / (theta_hi - theta_lo) * (width - 2.0 * margin);
    }
    // beta increases upward.
    [[nodiscard]] double y(double beta) const {
        return height - margin -
               (beta - beta_lo) / (beta_hi - beta_lo) * (height - 2.0 * margin);
    }
};

inline void svg_line(std::string& out, double x1, double y1, double x2, double y2,
                     const char* style) {
    out += "<line x1=\"" + format_fixed(x1, 2) + "\" y1=\"" + format_fixed(y1, 2) +
           "\" x2=\"" + format_fixed(x2, 2) + "\" y2=\"" + format_fixed(y2, 2) + "\" " +
           style + "/>\n";
}

inline void svg_circle(std::string& out, double cx, double cy, double r, const char* style) {
    out += "<circle cx=\"" + format_fixed(cx, 2) + "\" cy=\"" + format_fixed(cy, 2) +
           "\" r=\"" + format_fixed(r, 1) + "\" " + style + "/>\n";
}

inline void svg_text(std::string& out, double x, double y, const std::string& body) {
    out += "<text x=\"" + format_fixed(x, 2) + "\" y=\"" + format_fixed(y, 2) +
           "\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#333\">" + body +
           "</text>\n";
}

} // namespace detail

// Self-contained SVG of the same data: arrows at field nodes (length grows
// with log(1 + |field|), capped at the grid cell), trajectory polylines, and
// equilibrium markers, filled when attractive and hollow when repulsive.
// Singular field nodes are drawn as small gray dots rather than arrows.
[[nodiscard]] inline std::string render_portrait_svg(const PortraitSpec& spec) {
    using detail::format_double;
    using detail::format_fixed;

    const detail::SvgFrame frame{800.0, 600.0, 60.0, spec.theta_lo, spec.theta_hi,
                                 spec.beta_lo, spec.beta_hi};
    std::string out =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
        "viewBox=\"0 0 800 600\">\n"
        "<rect width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";

    // frame and axis labels
    detail::svg_line(out, frame.x(spec.theta_lo), frame.y(spec.beta_lo),
                     frame.x(spec.theta_hi), frame.y(spec.beta_lo),
                     "stroke=\"#333\" stroke-width=\"1\"");
    detail::svg_line(out, frame.x(spec.theta_lo), frame.y(spec.beta_lo),
                     frame.x(spec.theta_lo), frame.y(spec.beta_hi),
                     "stroke=\"#333\" stroke-width=\"1\"");
    detail::svg_text(out, frame.x(spec.theta_hi) - 40.0, frame.y(spec.beta_lo) + 40.0,
                     "theta");
    detail::svg_text(out, frame.x(spec.theta_lo) - 50.0, frame.y(spec.beta_hi) + 5.0,
                     "beta");

    const double cell = (frame.x(spec.theta_hi) - frame.x(spec.theta_lo)) /
                        static_cast<double>(spec.n_theta - 1);
    const auto nodes = direction_field(spec.theta_lo, spec.theta_hi, spec.n_theta,
                                       spec.beta_lo, spec.beta_hi, spec.n_beta,
                                       spec.beta_min);
    for (const auto& node : nodes) {
        const double cx = frame.x(node.theta);
        const double cy = frame.y(node.beta);
        const double mag = std::hypot(node.dtheta, node.dbeta);
        if (node.singular || !std::isfinite(mag)) {
            detail::svg_circle(out, cx, cy, 1.5, "fill=\"#bbb\"");
            continue;
        }
        if (mag == 0.0) {
            detail::svg_circle(out, cx, cy, 1.5, "fill=\"#888\"");
            continue;
        }
        const double len = std::min(0.45 * cell * std::log1p(mag), 0.9 * cell);
        // unit step in state space, drawn in plot coordinates (y flips)
        const double ux = node.dtheta / mag;
        const double uy = -node.dbeta / mag;
        const double x2 = cx + len * ux;
        const double y2 = cy + len * uy;
        detail::svg_line(out, cx, cy, x2, y2, "stroke=\"#888\" stroke-width=\"1\"");
        detail::svg_circle(out, x2, y2, 1.5, "fill=\"#888\"");
    }

    static constexpr const char* palette[4] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    for (std::size_t k = 0; k < spec.seeds.size(); ++k) {
        try {
            const Trajectory traj = integrate(spec.seeds[k], spec.xi_end, spec.step,
                                              spec.beta_min, spec.local_error_tol);
            const std::size_t stride =
                std::max<std::size_t>(1, traj.samples.size() / 400);
            std::string points;
            for (std::size_t i = 0; i < traj.samples.size(); i += stride) {
                const auto& s = traj.samples[i].state;
                points += format_fixed(frame.x(s.theta), 2) + ',' +
                          format_fixed(frame.y(s.beta), 2) + ' ';
            }
            const auto& last = traj.samples.back().state;
            points += format_fixed(frame.x(last.theta), 2) + ',' +
                      format_fixed(frame.y(last.beta), 2);
            out += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" +
                   palette[k % 4] + "\" stroke-width=\"1.5\"/>\n";
        } catch (const Error&) {
            // unpaintable seed: mark its start with an x
            const double cx = frame.x(spec.seeds[k].theta);
            const double cy = frame.y(spec.seeds[k].beta);
            detail::svg_line(out, cx - 4, cy - 4, cx + 4, cy + 4,
                             "stroke=\"#d62728\" stroke-width=\"2\"");
            detail::svg_line(out, cx - 4, cy + 4, cx + 4, cy - 4,
                             "stroke=\"#d62728\" stroke-width=\"2\"");
        }
    }

    for (const auto& fp : fixed_points()) {
        const char* style = fp.stability == Stability::attractive
                                ? "fill=\"black\" stroke=\"black\" stroke-width=\"1.5\""
                                : "fill=\"white\" stroke=\"black\" stroke-width=\"1.5\"";
        detail::svg_circle(out, frame.x(fp.theta), frame.y(fp.beta), 6.0, style);
    }

    out += "</svg>\n";
    return out;
}

} // namespace lorentzflow
