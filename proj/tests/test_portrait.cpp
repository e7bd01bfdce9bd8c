#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include <lorentzflow/portrait.hpp>

using namespace lorentzflow;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::size_t count_prefix(const std::vector<std::string>& lines, const std::string& prefix) {
    std::size_t n = 0;
    for (const auto& line : lines) {
        if (line.rfind(prefix, 0) == 0) {
            ++n;
        }
    }
    return n;
}

PortraitSpec small_spec() {
    PortraitSpec spec;
    spec.n_theta = 5;
    spec.n_beta = 5;
    spec.seeds = {{pi / 2.0, 0.4, 0.0}, {pi / 2.0, -0.4, 0.0}};
    spec.xi_end = 1.0;
    spec.step = 0.01;
    return spec;
}

} // namespace

TEST_CASE("csv layout and row accounting") {
    const PortraitSpec spec = small_spec();
    const auto lines = split_lines(render_portrait_csv(spec));

    REQUIRE(!lines.empty());
    CHECK(lines[0] == "kind,xi,theta,beta,tau,dtheta,dbeta,singular");

    const std::size_t arrows = count_prefix(lines, "arrow,");
    const std::size_t traj0 = count_prefix(lines, "trajectory:0,");
    const std::size_t traj1 = count_prefix(lines, "trajectory:1,");
    const std::size_t fixed_rows =
        count_prefix(lines, "fixed-attractive,") + count_prefix(lines, "fixed-repulsive,");
    CHECK(arrows == 25);
    CHECK(traj0 == 101);  // xi = 0, 0.01, ..., 1.0
    CHECK(traj1 == 101);
    CHECK(fixed_rows == 4);
    CHECK(count_prefix(lines, "fixed-attractive,") == 2);
    CHECK(lines.size() == 1 + 25 + 101 + 101 + 4);

    for (const auto& line : lines) {
        CHECK(split_fields(line).size() == 8);
    }
}

TEST_CASE("csv marks the singular band and keeps the axis clean") {
    const auto lines = split_lines(render_portrait_csv(small_spec()));
    bool saw_singular_inf = false;
    for (const auto& line : lines) {
        if (line.rfind("arrow,", 0) != 0) {
            continue;
        }
        const auto f = split_fields(line);
        const bool inf_dtheta = f[5] == "inf" || f[5] == "-inf";
        if (f[7] == "1") {
            CHECK(inf_dtheta);  // only the exact beta = 0 column is in-band here
            saw_singular_inf = true;
        } else {
            CHECK_FALSE(inf_dtheta);
        }
    }
    CHECK(saw_singular_inf);
}

TEST_CASE("csv trajectory rows conserve the invariant") {
    PortraitSpec spec = small_spec();
    spec.xi_end = 8.0;
    spec.step = 1e-3;
    const auto lines = split_lines(render_portrait_csv(spec));

    const double target = std::sin(pi / 2.0) * std::sinh(std::atanh(0.4));
    std::size_t checked = 0;
    for (const auto& line : lines) {
        if (line.rfind("trajectory:0,", 0) != 0) {
            continue;
        }
        const auto f = split_fields(line);
        const double theta = std::stod(f[2]);
        const double beta = std::stod(f[3]);
        CHECK(std::abs(std::sin(theta) * std::sinh(std::atanh(beta)) - target) < 1e-7);
        ++checked;
    }
    CHECK(checked == 8001);
}

TEST_CASE("renderers are byte deterministic") {
    const PortraitSpec spec = small_spec();
    CHECK(render_portrait_csv(spec) == render_portrait_csv(spec));
    CHECK(render_portrait_svg(spec) == render_portrait_svg(spec));
}

TEST_CASE("unintegrable seeds produce a marker row, not a throw") {
    PortraitSpec spec = small_spec();
    spec.seeds = {{pi / 2.0, 1e-7, 0.0}};
    const auto csv = render_portrait_csv(spec);
    CHECK(csv.find("trajectory-failed:0,") != std::string::npos);
    CHECK(csv.find("trajectory:0,") == std::string::npos);
    CHECK_NOTHROW(render_portrait_svg(spec));
}

TEST_CASE("svg structure") {
    const PortraitSpec spec = standard_portrait_spec();
    REQUIRE(spec.seeds.size() == 12);

    PortraitSpec quick = spec;
    quick.xi_end = 2.0;
    quick.step = 0.01;
    const std::string svg = render_portrait_svg(quick);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);

    std::size_t polylines = 0;
    std::string::size_type pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 9;
    }
    CHECK(polylines == 12);

    // two filled attractors, two hollow repellers
    std::size_t filled = 0;
    pos = 0;
    while ((pos = svg.find("fill=\"black\"", pos)) != std::string::npos) {
        ++filled;
        pos += 10;
    }
    CHECK(filled == 2);
    std::size_t hollow = 0;
    pos = 0;
    while ((pos = svg.find("fill=\"white\"", pos)) != std::string::npos) {
        ++hollow;
        pos += 10;
    }
    CHECK(hollow == 2);
}

TEST_CASE("standard spec integrates all seeds to the attractors") {
    PortraitSpec spec = standard_portrait_spec();
    spec.step = 0.01;  // coarser than default but well within the monitor
    const auto lines = split_lines(render_portrait_csv(spec));
    CHECK(count_prefix(lines, "trajectory-failed:") == 0);

    // last sample of every trajectory must sit near (0, 1) or (pi, -1)
    for (std::size_t k = 0; k < spec.seeds.size(); ++k) {
        const std::string prefix = "trajectory:" + std::to_string(k) + ',';
        std::string last;
        for (const auto& line : lines) {
            if (line.rfind(prefix, 0) == 0) {
                last = line;
            }
        }
        REQUIRE(!last.empty());
        const auto f = split_fields(last);
        const double theta = std::stod(f[2]);
        const double beta = std::stod(f[3]);
        const bool forward = std::abs(theta) < 1e-3 && std::abs(beta - 1.0) < 1e-3;
        const bool backward = std::abs(theta - pi) < 1e-3 && std::abs(beta + 1.0) < 1e-3;
        CHECK((forward || backward));
    }
}
