#pragma once

// Cross-check path in the defining 3-dimensional representation.
//
// Matrices act on (ct, x, z) with metric diag(1, -1, -1).  Boosts are the
// familiar symmetric velocity-parameterized matrices; nothing here touches
// the 2x2 spinor code, so agreement between the two paths checks the spinor
// algebra end to end rather than one implementation against itself.
//
// Convention bridge, pinned by tests: oracle_boost(tanh(kappa), theta)
// corresponds to the spinor boost of rapidity kappa along theta, and the
// rotation angle extracted by oracle_decompose is measured in the same sense
// as the spinor Thomas angle.  Concretely the residual rotation block stores
// [[cos tau, -sin tau], [sin tau, cos tau]] on its (x, z) rows, so
// tau = atan2(R[2][1], R[1][1]).  A sign slip in either convention makes the
// perpendicular composition test fail loudly.

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace lorentzflow {

// Row-major 3x3 matrix on (ct, x, z).
struct FourMatrix {
    double m[3][3]{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};

    static constexpr FourMatrix identity() { return {}; }

    friend constexpr FourMatrix operator*(const FourMatrix& p, const FourMatrix& q) {
        FourMatrix r;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                r.m[i][j] = p.m[i][0] * q.m[0][j] + p.m[i][1] * q.m[1][j] +
                            p.m[i][2] * q.m[2][j];
            }
        }
        return r;
    }
};

struct OracleDecomposition {
    double lambda{0.0};
    double theta{0.0};
    double tau{0.0};
};

// Boost with speed beta in (-1, 1) along direction theta (from +z toward +x).
// M00 = gamma, time-space entries gamma beta n, spatial block
// delta + (gamma - 1) n n^T.
[[nodiscard]] inline FourMatrix oracle_boost(double beta, double theta) {
    if (!std::isfinite(beta) || std::abs(beta) >= 1.0) {
        throw SpeedOutOfRange("oracle_boost: |beta| must be < 1");
    }
    if (!std::isfinite(theta)) {
        throw DomainError("oracle_boost: direction must be finite");
    }
    const double gamma = 1.0 / std::sqrt(1.0 - beta * beta);
    const double nx = std::sin(theta);
    const double nz = std::cos(theta);
    FourMatrix b;
    b.m[0][0] = gamma;
    b.m[0][1] = b.m[1][0] = gamma * beta * nx;
    b.m[0][2] = b.m[2][0] = gamma * beta * nz;
    b.m[1][1] = 1.0 + (gamma - 1.0) * nx * nx;
    b.m[1][2] = b.m[2][1] = (gamma - 1.0) * nx * nz;
    b.m[2][2] = 1.0 + (gamma - 1.0) * nz * nz;
    return b;
}

// Rotation of the (x, z) block in the Thomas-angle sense (see header note).
[[nodiscard]] inline FourMatrix oracle_rotation(double tau) {
    if (!std::isfinite(tau)) {
        throw DomainError("oracle_rotation: angle must be finite");
    }
    FourMatrix r;
    r.m[1][1] = std::cos(tau);
    r.m[1][2] = -std::sin(tau);
    r.m[2][1] = std::sin(tau);
    r.m[2][2] = std::cos(tau);
    return r;
}

// Max-abs residual of M^T g M - g with g = diag(1, -1, -1); zero for exact
// Lorentz matrices.
[[nodiscard]] inline double oracle_form_residual(const FourMatrix& m) {
    constexpr double g[3] = {1.0, -1.0, -1.0};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double entry = 0.0;
            for (int k = 0; k < 3; ++k) {
                entry += m.m[k][i] * g[k] * m.m[k][j];
            }
            const double target = (i == j) ? g[i] : 0.0;
            worst = std::max(worst, std::abs(entry - target));
        }
    }
    return worst;
}

// Split M into boost times rotation.  The boost velocity is read off the
// first column (the image of the rest worldline), the boost is divided out,
// and the rotation angle comes from the leftover (x, z) block.
[[nodiscard]] inline OracleDecomposition oracle_decompose(const FourMatrix& mat) {
    for (const auto& row : mat.m) {
        for (double v : row) {
            if (!std::isfinite(v)) {
                throw DomainError("oracle_decompose: matrix has non-finite entries");
            }
        }
    }
    if (mat.m[0][0] < 1.0 - 1e-9) {
        throw NotOrthochronous("oracle_decompose: M00 < 1, not an orthochronous Lorentz matrix");
    }
    const double bx = mat.m[1][0] / mat.m[0][0];
    const double bz = mat.m[2][0] / mat.m[0][0];
    const double beta = std::hypot(bx, bz);
    if (beta >= 1.0) {
        throw SpeedOutOfRange("oracle_decompose: first column is not timelike");
    }
    OracleDecomposition out;
    out.lambda = std::atanh(beta);
    out.theta = beta > 1e-14 ? std::atan2(bx, bz) : 0.0;
    const FourMatrix residual = oracle_boost(-beta, out.theta) * mat;
    out.tau = std::atan2(residual.m[2][1], residual.m[1][1]);
    return out;
}

} // namespace lorentzflow
