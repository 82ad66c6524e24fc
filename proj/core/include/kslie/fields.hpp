#pragma once

// The five vector fields generating the diffusion Riccati system, the
// t-dependent combination X(t) = sum_a a_alpha(t) X_alpha, Lie brackets with
// exact Jacobians, the fitted structure-constant tensor and minimal-algebra
// closure.
//
// Bracket orientation: [A, B] f = A(B f) - B(A f), in coordinates
// J_B . X_A - J_A . X_B. With this choice [X2, X3] = 2 X2 and [X1, X2] = 4 X3.

#include <Eigen/Dense>
#include <vector>

#include "kslie/dual.hpp"
#include "kslie/expr.hpp"
#include "kslie/geometry.hpp"

namespace kslie {

constexpr int kNumFields = 5;

/// X_alpha at a point, alpha in 1..5, templated so duals flow through.
template <class T>
Coords5<T> eval_field_t(int alpha, const Coords5<T>& p) {
    const T &x = p[0], &y = p[1], &u = p[3], &v = p[4];
    switch (alpha) {
        case 1:
            return {T(4) * x * x + y * y * y * y, T(4) * x * y, y * y,
                    T(4) * x * u + T(2) * y * y * y * v, T(2) * u * y};
        case 2:
            return {T(-1), T(0), T(0), T(0), T(0)};
        case 3:
            return {T(2) * x, y, T(0), u, T(0)};
        case 4:
            return {T(0), T(0), T(0), T(1), T(0)};
        case 5:
            return {T(0), T(0), T(0), T(-2) * x, -y};
        default:
            throw std::out_of_range("field index must be 1..5");
    }
}

inline Tangent5 eval_field(int alpha, const Point5& p) {
    return eval_field_t<double>(alpha, p.coords());
}

/// X(t, p) = sum_alpha a_alpha(t) X_alpha(p).
Tangent5 eval_system(double t, const Point5& p, const expr::CoeffSet& coeffs);

/// 5x5 Jacobian dX_alpha^i / dxi^j (row i, column j), via dual arithmetic.
Eigen::Matrix<double, 5, 5> field_jacobian(int alpha, const Point5& p);

/// [X_A, X_B](p) = J_B . X_A - J_A . X_B.
Tangent5 lie_bracket(int a, int b, const Point5& p);

/// c^gamma_{alpha beta} with [X_alpha, X_beta] = sum_gamma c^gamma X_gamma.
struct StructureTensor {
    // c[alpha-1][beta-1][gamma-1]
    double c[kNumFields][kNumFields][kNumFields] = {};

    double max_antisymmetry_defect() const;
    double max_jacobi_defect() const;

    /// Bracket of two coefficient vectors over the X basis.
    Eigen::Matrix<double, 5, 1> bracket(const Eigen::Matrix<double, 5, 1>& a,
                                        const Eigen::Matrix<double, 5, 1>& b) const;

    /// Killing form of the {X1, X2, X3} block.
    Eigen::Matrix3d sl2_killing_form() const;
};

struct StructureFit {
    StructureTensor tensor;
    double max_residual;  // worst bracket reconstruction error over the samples
};

/// Least-squares fit of the structure constants from brackets at the sample
/// points. Throws on a degenerate sample set.
StructureFit fit_structure_constants(const std::vector<Point5>& samples);

/// The fitted-then-frozen tensor shared by downstream modules (deterministic
/// internal sample set, fitted once).
const StructureTensor& frozen_structure_tensor();

/// Basis of the smallest bracket-closed subspace of span{X1..X5} containing
/// the coefficient vectors a(t_j); columns of the result are the basis.
Eigen::MatrixXd minimal_algebra(const expr::CoeffSet& coeffs,
                                const std::vector<double>& t_samples,
                                const StructureTensor& tensor = frozen_structure_tensor());

}  // namespace kslie
