#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <lorentzflow/flow.hpp>
#include <lorentzflow/kinematics.hpp>

using namespace lorentzflow;

TEST_CASE("field values at reference states") {
    const FlowDerivative mid = flow_rhs({pi / 2.0, 0.6, 0.0});
    CHECK_THAT(mid.dtheta, Catch::Matchers::WithinAbs(-1.6666666666666667, 1e-14));
    CHECK_THAT(mid.dbeta, Catch::Matchers::WithinAbs(0.0, 1e-15));
    CHECK_THAT(mid.dtau, Catch::Matchers::WithinAbs(0.3333333333333333, 1e-14));

    const FlowDerivative light = flow_rhs({pi / 2.0, 1.0, 0.0});
    CHECK_THAT(light.dtheta, Catch::Matchers::WithinAbs(-1.0, 1e-15));
    CHECK(light.dbeta == 0.0);
    CHECK_THAT(light.dtau, Catch::Matchers::WithinAbs(1.0, 1e-15));

    // on the axis the singular quotient cancels: dtheta = dtau = 0 for any beta
    const FlowDerivative axis = flow_rhs({0.0, 0.0, 0.0});
    CHECK(axis.dtheta == 0.0);
    CHECK(axis.dbeta == 1.0);
    CHECK(axis.dtau == 0.0);
    CHECK(flow_rhs({pi, 0.5, 0.0}).dtheta == 0.0);
}

TEST_CASE("field guards its domain") {
    CHECK_THROWS_AS(flow_rhs({1.0, 1e-7, 0.0}), NearSingularBeta);
    CHECK_THROWS_AS(flow_rhs({-0.1, 0.5, 0.0}), DomainError);
    CHECK_THROWS_AS(flow_rhs({0.5, 1.5, 0.0}), DomainError);
    CHECK_THROWS_AS(flow_rhs({std::nan(""), 0.5, 0.0}), DomainError);
}

TEST_CASE("integration sampling grid") {
    const Trajectory a = integrate({pi / 2.0, 0.6, 0.0}, 0.25, 0.1);
    REQUIRE(a.samples.size() == 4);
    CHECK(a.samples[0].xi == 0.0);
    CHECK(a.samples[1].xi == 0.1);
    CHECK(a.samples[2].xi == 0.2);
    CHECK(a.samples[3].xi == 0.25);

    const Trajectory b = integrate({pi / 2.0, 0.6, 0.0}, 0.2, 0.1);
    REQUIRE(b.samples.size() == 3);
    CHECK(b.samples.back().xi == 0.2);

    const Trajectory c = integrate({pi / 2.0, 0.6, 0.0}, 0.0, 0.1);
    REQUIRE(c.samples.size() == 1);

    CHECK_THROWS_AS(integrate({pi / 2.0, 0.6, 0.0}, 1.0, 0.2), DomainError);
    CHECK_THROWS_AS(integrate({pi / 2.0, 0.6, 0.0}, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(integrate({pi / 2.0, 0.6, 0.0}, -1.0, 0.1), DomainError);
    CHECK_THROWS_AS(integrate({pi / 2.0, 1e-7, 0.0}, 1.0, 0.1), NearSingularBeta);
}

TEST_CASE("trajectory endpoints match the closed forms") {
    // starting at (pi/2, 0.6) corresponds to eta = artanh(0.6), theta0 = pi/2
    const Trajectory traj = integrate({pi / 2.0, 0.6, 0.0}, 5.0, 1e-3);

    const TrajectorySample& at2 = traj.samples[2000];
    CHECK(at2.xi == 2.0 * 1e-3 * 1000);
    CHECK_THAT(at2.state.theta, Catch::Matchers::WithinAbs(0.16394746996435998, 1e-10));
    CHECK_THAT(at2.state.beta, Catch::Matchers::WithinAbs(0.97713022268988013, 1e-10));
    CHECK_THAT(at2.state.tau, Catch::Matchers::WithinAbs(0.49722544951481693, 1e-10));

    const FlowState& end = traj.samples.back().state;
    CHECK_THAT(end.theta, Catch::Matchers::WithinAbs(0.0080857272815290727, 1e-10));
    CHECK_THAT(end.beta, Catch::Matchers::WithinAbs(0.99994189167780943, 1e-10));
    CHECK_THAT(end.tau, Catch::Matchers::WithinAbs(0.63545896599834484, 1e-10));
}

TEST_CASE("invariant is conserved along trajectories") {
    const double eta = std::atanh(0.6);
    const double target = flow_invariant(pi / 2.0, eta);
    const Trajectory traj = integrate({pi / 2.0, 0.6, 0.0}, 5.0, 1e-3);
    double worst = 0.0;
    for (const auto& s : traj.samples) {
        worst = std::max(worst, std::abs(flow_invariant(s.state.theta,
                                                        std::atanh(s.state.beta)) -
                                         target));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("step-doubling monitor refuses inaccurate steps") {
    // near beta = 0 the field is stiff; a 0.1 step fails, a 0.01 step passes
    CHECK_THROWS_AS(integrate({pi / 2.0, 0.1, 0.0}, 1.0, 0.1), StepTooLarge);
    CHECK_NOTHROW(integrate({pi / 2.0, 0.1, 0.0}, 1.0, 0.01));
}

TEST_CASE("light-speed manifold is exactly invariant") {
    const Trajectory traj = integrate({1.0, 1.0, 0.0}, 3.0, 1e-3);
    for (const auto& s : traj.samples) {
        CHECK(s.state.beta == 1.0);
    }
    // on beta = 1 the direction obeys tan(theta/2) = exp(-xi) tan(theta0/2)
    const FlowState& end = traj.samples.back().state;
    CHECK_THAT(end.theta, Catch::Matchers::WithinAbs(0.054384190784702754, 1e-9));
    // and theta + tau is conserved there
    CHECK_THAT(end.tau + end.theta, Catch::Matchers::WithinAbs(1.0, 1e-9));
}

TEST_CASE("backward light-speed trajectory accumulates the limit rotation") {
    // beta < 0 start heading to the (pi, -1) corner; tau converges to a
    // finite limit below -pi that depends on the seed
    const Trajectory traj = integrate({0.01, -std::tanh(12.0), 0.0}, 25.0, 1e-3);
    const FlowState& end = traj.samples.back().state;
    CHECK(end.theta > pi - 0.01);
    CHECK(end.beta < -0.999);
    CHECK_THAT(end.tau, Catch::Matchers::WithinAbs(-3.12913499037, 1e-3));
    // the farther the seed sits from the axis, the farther the limit from -pi
    CHECK(std::abs(end.tau + pi) < 0.02);
    CHECK(std::abs(end.tau + pi) > 1e-4);
}

TEST_CASE("fixed points carry the analytic spectrum") {
    const auto fps = fixed_points();
    REQUIRE(fps.size() == 4);

    int attractive = 0;
    for (const auto& fp : fps) {
        CHECK((fp.theta == 0.0 || fp.theta == pi));
        CHECK(std::abs(fp.beta) == 1.0);
        if (fp.stability == Stability::attractive) {
            ++attractive;
            CHECK(fp.eigenvalues[0] < 0.0);
            CHECK(fp.eigenvalues[1] < 0.0);
        } else {
            CHECK(fp.eigenvalues[0] > 0.0);
            CHECK(fp.eigenvalues[1] > 0.0);
        }

        // finite-difference Jacobian, one-sided into the strip
        const double h = 1e-6;
        const double sg_t = fp.theta == 0.0 ? 1.0 : -1.0;
        const double sg_b = fp.beta > 0.0 ? -1.0 : 1.0;
        const FlowDerivative at = flow_rhs({fp.theta, fp.beta, 0.0});
        const FlowDerivative dth = flow_rhs({fp.theta + sg_t * h, fp.beta, 0.0});
        const FlowDerivative dbe = flow_rhs({fp.theta, fp.beta + sg_b * h, 0.0});
        const double j00 = (dth.dtheta - at.dtheta) / (sg_t * h);
        const double j11 = (dbe.dbeta - at.dbeta) / (sg_b * h);
        const double j01 = (dbe.dtheta - at.dtheta) / (sg_b * h);
        const double j10 = (dth.dbeta - at.dbeta) / (sg_t * h);
        CHECK_THAT(j00, Catch::Matchers::WithinAbs(fp.eigenvalues[0], 1e-5));
        CHECK_THAT(j11, Catch::Matchers::WithinAbs(fp.eigenvalues[1], 1e-5));
        CHECK_THAT(j01, Catch::Matchers::WithinAbs(0.0, 1e-5));
        CHECK_THAT(j10, Catch::Matchers::WithinAbs(0.0, 1e-5));
    }
    CHECK(attractive == 2);

    // equilibria really are equilibria
    for (const auto& fp : fps) {
        const FlowDerivative d = flow_rhs({fp.theta, fp.beta, 0.0});
        CHECK(d.dtheta == 0.0);
        CHECK_THAT(d.dbeta, Catch::Matchers::WithinAbs(0.0, 1e-15));
    }

    // a trajectory started at a fixed point stays put
    const Trajectory pinned = integrate({0.0, 1.0, 0.0}, 2.0, 0.05);
    for (const auto& s : pinned.samples) {
        CHECK(s.state.theta == 0.0);
        CHECK(s.state.beta == 1.0);
    }
}

TEST_CASE("direction field grid, flags and errors") {
    const auto nodes = direction_field(0.0, pi, 5, -1.0, 1.0, 5);
    REQUIRE(nodes.size() == 25);

    // row-major with theta slow: node (i, j) at index 5 i + j
    const FieldNode& center = nodes[2 * 5 + 2];  // theta = pi/2, beta = 0
    CHECK(center.singular);
    CHECK(std::isinf(center.dtheta));

    const FieldNode& offcenter = nodes[2 * 5 + 1];  // theta = pi/2, beta = -0.5
    CHECK_FALSE(offcenter.singular);
    CHECK_THAT(offcenter.dtheta, Catch::Matchers::WithinAbs(2.0, 1e-12));

    // axis nodes are regular even at beta = 0
    const FieldNode& axis = nodes[0 * 5 + 2];  // theta = 0, beta = 0
    CHECK_FALSE(axis.singular);
    CHECK(axis.dtheta == 0.0);
    CHECK_THAT(axis.dbeta, Catch::Matchers::WithinAbs(1.0, 1e-12));

    CHECK_THROWS_AS(direction_field(0.0, pi, 1, -1.0, 1.0, 5), DomainError);
    CHECK_THROWS_AS(direction_field(0.5, 0.4, 5, -1.0, 1.0, 5), DomainError);
    CHECK_THROWS_AS(direction_field(0.0, pi, 5, -1.5, 1.0, 5), DomainError);
}
