// Command-line front end.
//
// Subcommands:
//   compose    full matrix path for one composition, cross-checked against
//              the 3x3 representation
//   thomas     scalar closed forms only (no matrices)
//   flow       integrate the parameter flow from an initial state
//   portrait   phase-portrait data (csv) or picture (svg)
//   collimate  sampled decay beaming: histogram (csv) or summary (json)
//   verify     deterministic self-consistency battery
//
// Exit codes: 0 success; 2 usage or domain error; 3 internal consistency
// failure (tolerance exceeded, step refused, non-Lorentz input); 4 flow
// evaluated too close to the beta = 0 singularity.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <lorentzflow/collimation.hpp>
#include <lorentzflow/detail/format.hpp>
#include <lorentzflow/flow.hpp>
#include <lorentzflow/kinematics.hpp>
#include <lorentzflow/oracle.hpp>
#include <lorentzflow/portrait.hpp>
#include <lorentzflow/spin_algebra.hpp>

namespace lf = lorentzflow;
using lf::detail::format_double;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_inconsistent = 3;
constexpr int exit_singular = 4;

struct Options {
    double step = 1e-3;
    double xi_end = 10.0;
    double tolerance = 1e-8;
    std::uint64_t seed = 12345;
    std::string format;  // empty = subcommand default
    std::string output;  // empty = stdout
    bool degrees = false;
    bool speed = false;
};

double to_radians(const Options& opt, double angle) {
    return opt.degrees ? angle * lf::pi / 180.0 : angle;
}

double from_radians(const Options& opt, double angle) {
    return opt.degrees ? angle * 180.0 / lf::pi : angle;
}

// Positional rapidity argument, optionally given as a speed.
double to_rapidity(const Options& opt, double value) {
    if (!opt.speed) {
        return value;
    }
    if (!std::isfinite(value) || std::abs(value) >= 1.0) {
        throw lf::SpeedOutOfRange("--speed: |value| must be < 1");
    }
    return std::atanh(value);
}

void emit(const Options& opt, const std::string& body) {
    if (opt.output.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(opt.output, std::ios::binary);
    if (!out) {
        throw lf::DomainError("cannot open output file: " + opt.output);
    }
    out << body;
}

std::string pick_format(const Options& opt, const std::string& fallback,
                        std::initializer_list<const char*> allowed) {
    const std::string fmt = opt.format.empty() ? fallback : opt.format;
    for (const char* a : allowed) {
        if (fmt == a) {
            return fmt;
        }
    }
    throw lf::DomainError("format '" + fmt + "' is not supported by this subcommand");
}

int cmd_compose(const Options& opt, double xi_arg, double eta_arg, double theta0_arg) {
    const std::string fmt = pick_format(opt, "text", {"text", "csv", "json"});
    const double xi = to_rapidity(opt, xi_arg);
    const double eta = to_rapidity(opt, eta_arg);
    const double theta0 = to_radians(opt, theta0_arg);
    if (xi == 0.0 && eta == 0.0) {
        throw lf::DegenerateInput("compose: xi = eta = 0 leaves the direction undefined");
    }

    // theta0 < 0 mirrors the composition across the z axis: run the matrix
    // path in the upper half-plane and flip the signed angles back.
    const double mirror = theta0 < 0.0 ? -1.0 : 1.0;
    const lf::SpinMatrix product =
        lf::compose(lf::boost_matrix(xi, 0.0), lf::boost_matrix(eta, std::abs(theta0)));
    lf::Decomposition dec = lf::decompose(product);
    dec.theta *= mirror;
    dec.tau *= mirror;
    if (dec.tau <= -lf::pi) {
        dec.tau += 2.0 * lf::pi;
    }
    const double phi = lf::reverse_order_phi({xi, eta, theta0});
    const double beta = std::tanh(dec.lambda);
    const double invariant = lf::flow_invariant(dec.theta, dec.lambda);

    // cross-check against the 3x3 representation.  Rapidity is compared
    // through the velocity (atanh near beta = 1 amplifies one ulp of beta
    // by gamma^2), and the rotation angle is allowed its conditioning
    // floor: extracting the residual rotation cancels products of
    // gamma-scale entries, so its resolution is about eps * cosh(lambda)^2.
    if (std::tanh(xi) >= 1.0 || std::tanh(eta) >= 1.0) {
        throw lf::DomainError("compose: rapidity saturates the velocity in double precision; "
                              "the thomas subcommand serves the closed forms at any rapidity");
    }
    const lf::FourMatrix oracle_product =
        lf::oracle_boost(std::tanh(xi), 0.0) * lf::oracle_boost(std::tanh(eta), theta0);
    const lf::OracleDecomposition od = lf::oracle_decompose(oracle_product);
    const double velocity_diff = std::abs(std::tanh(od.lambda) - std::tanh(dec.lambda));
    const double theta_diff = std::abs(od.theta - dec.theta);
    const double tau_diff = std::abs(od.tau - dec.tau);
    const double tau_floor = 64.0 * std::numeric_limits<double>::epsilon() *
                             std::cosh(dec.lambda) * std::cosh(dec.lambda);
    const double mismatch = std::max({velocity_diff, theta_diff, tau_diff});
    const bool disagree = velocity_diff > opt.tolerance || theta_diff > opt.tolerance ||
                          tau_diff > std::max(opt.tolerance, tau_floor);

    std::string body;
    if (fmt == "json") {
        nlohmann::ordered_json j;
        j["lambda"] = dec.lambda;
        j["theta"] = from_radians(opt, dec.theta);
        j["tau"] = from_radians(opt, dec.tau);
        j["phi"] = from_radians(opt, phi);
        j["beta"] = beta;
        j["invariant"] = invariant;
        j["oracle_mismatch"] = mismatch;
        body = j.dump(2) + "\n";
    } else if (fmt == "csv") {
        body = "lambda,theta,tau,phi,beta,invariant,oracle_mismatch\n";
        body += format_double(dec.lambda) + ',' + format_double(from_radians(opt, dec.theta)) +
                ',' + format_double(from_radians(opt, dec.tau)) + ',' +
                format_double(from_radians(opt, phi)) + ',' + format_double(beta) + ',' +
                format_double(invariant) + ',' + format_double(mismatch) + '\n';
    } else {
        body = "lambda " + format_double(dec.lambda) + '\n';
        body += "theta " + format_double(from_radians(opt, dec.theta)) + '\n';
        body += "tau " + format_double(from_radians(opt, dec.tau)) + '\n';
        body += "phi " + format_double(from_radians(opt, phi)) + '\n';
        body += "beta " + format_double(beta) + '\n';
        body += "invariant " + format_double(invariant) + '\n';
        body += "oracle_mismatch " + format_double(mismatch) + '\n';
    }
    emit(opt, body);
    if (disagree) {
        std::cerr << "compose: spinor and 3x3 paths disagree by " << format_double(mismatch)
                  << " (tolerance " << format_double(opt.tolerance) << ")\n";
        return exit_inconsistent;
    }
    return exit_ok;
}

int cmd_thomas(const Options& opt, double xi_arg, double eta_arg, double theta0_arg) {
    const std::string fmt = pick_format(opt, "text", {"text", "csv", "json"});
    const lf::CompositionInput in{to_rapidity(opt, xi_arg), to_rapidity(opt, eta_arg),
                                  to_radians(opt, theta0_arg)};
    const double lambda = lf::resultant_rapidity(in);
    const double theta = lf::resultant_theta(in);
    const double phi = lf::reverse_order_phi(in);
    const double tau = lf::thomas_angle(in);
    const double first_order = lf::infinitesimal_thomas(in.xi, in.eta, in.theta0);

    std::string body;
    if (fmt == "json") {
        nlohmann::ordered_json j;
        j["lambda"] = lambda;
        j["theta"] = from_radians(opt, theta);
        j["phi"] = from_radians(opt, phi);
        j["tau"] = from_radians(opt, tau);
        j["tau_first_order"] = from_radians(opt, first_order);
        body = j.dump(2) + "\n";
    } else if (fmt == "csv") {
        body = "lambda,theta,phi,tau,tau_first_order\n";
        body += format_double(lambda) + ',' + format_double(from_radians(opt, theta)) + ',' +
                format_double(from_radians(opt, phi)) + ',' +
                format_double(from_radians(opt, tau)) + ',' +
                format_double(from_radians(opt, first_order)) + '\n';
    } else {
        body = "lambda " + format_double(lambda) + '\n';
        body += "theta " + format_double(from_radians(opt, theta)) + '\n';
        body += "phi " + format_double(from_radians(opt, phi)) + '\n';
        body += "tau " + format_double(from_radians(opt, tau)) + '\n';
        body += "tau_first_order " + format_double(from_radians(opt, first_order)) + '\n';
    }
    emit(opt, body);
    return exit_ok;
}

int cmd_flow(const Options& opt, double theta0_arg, double beta0, double tau0_arg) {
    const std::string fmt = pick_format(opt, "csv", {"csv", "json"});
    const lf::FlowState start{to_radians(opt, theta0_arg), beta0, to_radians(opt, tau0_arg)};
    const lf::Trajectory traj = lf::integrate(start, opt.xi_end, opt.step);

    std::string body;
    if (fmt == "json") {
        nlohmann::ordered_json j;
        j["step"] = traj.step;
        j["samples"] = nlohmann::ordered_json::array();
        for (const auto& s : traj.samples) {
            j["samples"].push_back({{"xi", s.xi},
                                    {"theta", from_radians(opt, s.state.theta)},
                                    {"beta", s.state.beta},
                                    {"tau", from_radians(opt, s.state.tau)}});
        }
        body = j.dump(2) + "\n";
    } else {
        body = "xi,theta,beta,tau\n";
        for (const auto& s : traj.samples) {
            body += format_double(s.xi) + ',' + format_double(from_radians(opt, s.state.theta)) +
                    ',' + format_double(s.state.beta) + ',' +
                    format_double(from_radians(opt, s.state.tau)) + '\n';
        }
    }
    emit(opt, body);
    return exit_ok;
}

int cmd_portrait(const Options& opt) {
    const std::string fmt = pick_format(opt, "csv", {"csv", "svg"});
    lf::PortraitSpec spec = lf::standard_portrait_spec();
    spec.xi_end = opt.xi_end;
    spec.step = opt.step;
    emit(opt, fmt == "svg" ? lf::render_portrait_svg(spec) : lf::render_portrait_csv(spec));
    return exit_ok;
}

int cmd_collimate(const Options& opt, double xi, std::size_t n, std::size_t bins,
                  const std::string& mode, double beta0) {
    const std::string fmt = pick_format(opt, "csv", {"csv", "json"});
    lf::DecaySpec spec;
    spec.xi = xi;
    spec.n = n;
    spec.bins = bins;
    spec.mode = mode == "theta" ? lf::AngleMode::uniform_theta : lf::AngleMode::uniform_cos;
    spec.beta0 = beta0;
    spec.seed = opt.seed;
    const lf::DecayResult result = lf::sample_decay(spec);
    emit(opt, fmt == "json" ? lf::render_summary_json(result, spec)
                            : lf::render_histogram_csv(result, spec.bins));
    if (result.max_route_disagreement > opt.tolerance) {
        std::cerr << "collimate: closed-form and spinor routes disagree by "
                  << format_double(result.max_route_disagreement) << "\n";
        return exit_inconsistent;
    }
    return exit_ok;
}

int cmd_verify(const Options& opt) {
    std::mt19937_64 engine(opt.seed);
    const auto uniform = [&engine](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(engine() >> 11) * 0x1.0p-53);
    };
    bool ok = true;
    const auto report = [&ok](const std::string& name, double worst, double bound) {
        const bool pass = worst <= bound;
        ok = ok && pass;
        std::cout << (pass ? "[ok]   " : "[FAIL] ") << name << ": worst "
                  << format_double(worst) << " (bound " << format_double(bound) << ")\n";
    };

    double worst_closed = 0.0;
    double worst_oracle = 0.0;
    double worst_reverse = 0.0;
    double worst_roundtrip = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double xi = uniform(0.0, 5.0);
        const double eta = uniform(0.0, 5.0);
        const double theta0 = uniform(0.0, lf::pi);

        const lf::SpinMatrix product =
            lf::compose(lf::boost_matrix(xi, 0.0), lf::boost_matrix(eta, theta0));
        const lf::Decomposition dec = lf::decompose(product);
        const lf::CompositionInput in{xi, eta, theta0};
        worst_closed = std::max({worst_closed,
                                 std::abs(dec.lambda - lf::resultant_rapidity(in)),
                                 std::abs(dec.theta - lf::resultant_theta(in)),
                                 std::abs(dec.tau - lf::thomas_angle(in))});

        const lf::OracleDecomposition od = lf::oracle_decompose(
            lf::oracle_boost(std::tanh(xi), 0.0) * lf::oracle_boost(std::tanh(eta), theta0));
        // rapidity through the velocity (atanh near 1 amplifies by gamma^2);
        // the rotation-angle difference carries the same gamma^2 floor, so
        // it is rescaled into gate units before taking the worst
        const double tau_allowance =
            std::max(1e-8, 64.0 * std::numeric_limits<double>::epsilon() *
                               std::cosh(dec.lambda) * std::cosh(dec.lambda));
        worst_oracle = std::max({worst_oracle,
                                 std::abs(std::tanh(dec.lambda) - std::tanh(od.lambda)),
                                 std::abs(dec.theta - od.theta),
                                 std::abs(dec.tau - od.tau) * (1e-8 / tau_allowance)});

        worst_reverse =
            std::max(worst_reverse, lf::reverse_order_identity_residual(xi, eta, theta0));

        const double lam = uniform(0.0, 8.0);
        const double th = uniform(0.0, lf::pi);
        const double ta = uniform(-lf::pi, lf::pi);
        const lf::Decomposition rt = lf::decompose(
            lf::compose(lf::boost_matrix(lam, th), lf::rotation_matrix(ta)));
        // direction recovery is ill-conditioned for near-identity boosts
        worst_roundtrip = std::max({worst_roundtrip, std::abs(rt.lambda - lam),
                                    lam > 1e-3 ? std::abs(rt.theta - th) : 0.0,
                                    std::abs(rt.tau - ta)});
    }
    report("closed forms vs matrix path (200 samples)", worst_closed, 1e-9);
    report("3x3 representation vs matrix path", worst_oracle, 1e-8);
    report("reverse-order conjugation residual", worst_reverse, 1e-10);
    report("construct/decompose round trip", worst_roundtrip, 1e-9);

    // invariant conservation and endpoint agreement along one trajectory
    const double eta0 = std::atanh(0.6);
    const lf::Trajectory traj = lf::integrate({lf::pi / 2.0, 0.6, 0.0}, 5.0, 1e-3);
    double worst_drift = 0.0;
    const double invariant0 = lf::flow_invariant(lf::pi / 2.0, eta0);
    for (const auto& s : traj.samples) {
        worst_drift = std::max(worst_drift,
                               std::abs(lf::flow_invariant(s.state.theta,
                                                           std::atanh(s.state.beta)) -
                                        invariant0));
    }
    report("flow invariant drift to xi = 5", worst_drift, 1e-8);

    const lf::FlowState end = traj.samples.back().state;
    const lf::CompositionInput end_in{5.0, eta0, lf::pi / 2.0};
    const double endpoint_err =
        std::max({std::abs(end.theta - lf::resultant_theta(end_in)),
                  std::abs(end.beta - std::tanh(lf::resultant_rapidity(end_in))),
                  std::abs(end.tau - lf::thomas_angle(end_in))});
    report("flow endpoint vs closed forms", endpoint_err, 1e-7);

    if (!ok) {
        std::cerr << "verify: consistency failure\n";
        return exit_inconsistent;
    }
    std::cout << "verify: all checks passed\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Finite Lorentz composition in the plane: exact Thomas rotation, "
                 "parameter flow, phase portraits, decay beaming"};
    app.require_subcommand(1);
    app.add_option("--step", opt.step, "integration step in (0, 0.1]")
        ->capture_default_str();
    app.add_option("--xi-end", opt.xi_end, "integration endpoint")->capture_default_str();
    app.add_option("--tolerance", opt.tolerance, "consistency gate for cross-checks")
        ->capture_default_str();
    app.add_option("--seed", opt.seed, "RNG seed for collimate and verify")
        ->capture_default_str();
    app.add_option("--format", opt.format, "output format (subcommand-dependent)")
        ->check(CLI::IsMember({"text", "csv", "json", "svg"}));
    app.add_option("--output", opt.output, "write to file instead of stdout");
    app.add_flag("--degrees", opt.degrees, "angles in degrees on input and output");
    app.add_flag("--speed", opt.speed, "rapidity arguments are given as speeds");
    // global options remain usable after the subcommand name
    app.fallthrough();

    double xi = 0.0;
    double eta = 0.0;
    double theta0 = 0.0;
    double beta0 = 0.0;
    double tau0 = 0.0;
    std::size_t n_samples = 10000;
    std::size_t bins = 64;
    std::string mode = "cos";
    double daughter_beta0 = 1.0;

    CLI::App* compose = app.add_subcommand(
        "compose", "compose a theta0-boost then a z-boost; print the polar parameters");
    compose->add_option("xi", xi, "z-boost rapidity")->required();
    compose->add_option("eta", eta, "first boost rapidity")->required();
    compose->add_option("theta0", theta0, "first boost direction")->required();

    CLI::App* thomas = app.add_subcommand("thomas", "same composition, scalar forms only");
    thomas->add_option("xi", xi, "z-boost rapidity")->required();
    thomas->add_option("eta", eta, "first boost rapidity")->required();
    thomas->add_option("theta0", theta0, "first boost direction")->required();

    CLI::App* flow = app.add_subcommand("flow", "integrate the parameter flow in xi");
    flow->add_option("theta0", theta0, "initial direction")->required();
    flow->add_option("beta0", beta0, "initial speed in [-1, 1]")->required();
    flow->add_option("tau0", tau0, "initial accumulated rotation");

    CLI::App* portrait =
        app.add_subcommand("portrait", "direction field, trajectories and equilibria");

    CLI::App* collimate =
        app.add_subcommand("collimate", "sampled decay beaming for a parent of rapidity xi");
    collimate->add_option("xi", xi, "parent rapidity")->required();
    collimate->add_option("-n,--samples", n_samples, "number of emissions")
        ->capture_default_str();
    collimate->add_option("--bins", bins, "histogram bins over [0, pi]")
        ->capture_default_str();
    collimate->add_option("--mode", mode, "emission-angle law in the parent frame")
        ->check(CLI::IsMember({"cos", "theta"}))
        ->capture_default_str();
    collimate->add_option("--beta0", daughter_beta0, "daughter speed; 1 = photons")
        ->capture_default_str();

    CLI::App* verify = app.add_subcommand("verify", "run the self-consistency battery");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (compose->parsed()) {
            return cmd_compose(opt, xi, eta, theta0);
        }
        if (thomas->parsed()) {
            return cmd_thomas(opt, xi, eta, theta0);
        }
        if (flow->parsed()) {
            return cmd_flow(opt, theta0, beta0, tau0);
        }
        if (portrait->parsed()) {
            return cmd_portrait(opt);
        }
        if (collimate->parsed()) {
            return cmd_collimate(opt, xi, n_samples, bins, mode, daughter_beta0);
        }
        if (verify->parsed()) {
            return cmd_verify(opt);
        }
    } catch (const lf::NearSingularBeta& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_singular;
    } catch (const lf::DegenerateInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const lf::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const lf::SpeedOutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const lf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_inconsistent;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_inconsistent;
    }
    return exit_usage;
}
