#pragma once

// The four two-forms w1, w2, w3 = w+, w4 = w-, the 5x4 table of Hamiltonian
// component functions h^j_i, theta-pairings, Poisson brackets, the
// commutation table and the two Casimirs.
//
// Sign conventions (frozen by the check w1(X1, X2) = -4 h^3_1):
//   iota_{X_f} w = df          and          {f, g} := w(X_f, X_g).

#include <Eigen/Dense>
#include <vector>

#include "kslie/expr.hpp"
#include "kslie/fields.hpp"
#include "kslie/geometry.hpp"

namespace kslie {

constexpr int kNumForms = 4;

/// Coefficient matrix of w_i at p, i in 1..4.
FormMatrix omega(int i, const Point5& p);

/// h^j_i at p, j in 1..5, i in 1..4. Templated so differentials and
/// prolonged directional derivatives run on duals.
template <class T>
T hamiltonian_t(int j, int i, const Coords5<T>& p) {
    if (j < 1 || j > 5) throw std::out_of_range("hamiltonian row must be 1..5");
    if (i < 1 || i > 4) throw std::out_of_range("hamiltonian column must be 1..4");
    const T &x = p[0], &y = p[1], &z = p[2], &u = p[3], &v = p[4];
    const T y2 = y * y;
    switch (j) {
        case 1:
            switch (i) {
                case 1: return T(-2) * x * x / y2 + y2 / T(2);
                case 2:
                    return T(2) * exp(T(2) * z) / y2 *
                           (T(4) * x * x * v + u * y2 * y - T(2) * v * x * y2 -
                            T(2) * u * y * x);
                case 3: return exp(T(4) * z) * (x - x * x / y2 - y2 / T(4));
                case 4: return exp(T(-4) * z) * (-x - x * x / y2 - y2 / T(4));
            }
            break;
        case 2:
            switch (i) {
                case 1: return T(1) / (T(2) * y2);
                case 2: return T(-2) * exp(T(2) * z) * v / y2;
                case 3: return exp(T(4) * z) / (T(4) * y2);
                case 4: return exp(T(-4) * z) / (T(4) * y2);
            }
            break;
        case 3:
            switch (i) {
                case 1: return -x / y2;
                case 2: return (T(4) * v * x / y2 - u / y - v) * exp(T(2) * z);
                case 3: return -x * exp(T(4) * z) / (T(2) * y2) + exp(T(4) * z) / T(4);
                case 4: return -x * exp(T(-4) * z) / (T(2) * y2) - exp(T(-4) * z) / T(4);
            }
            break;
        case 4:
            return i == 2 ? -exp(T(2) * z) / y : T(0);
        case 5:
            return i == 2 ? T(2) * x * exp(T(2) * z) / y - y * exp(T(2) * z) : T(0);
    }
    return T(0);
}

inline double hamiltonian(int j, int i, const Point5& p) {
    return hamiltonian_t<double>(j, i, p.coords());
}

/// theta over the dual basis {e_1..e_4}; W is the theta_2 = 0 subspace.
using Covector4 = std::array<double, 4>;

inline bool in_W(const Covector4& theta) { return theta[1] == 0.0; }

/// h^j_theta = sum_i theta_i h^j_i.
template <class T>
T hamiltonian_theta_t(const Covector4& theta, int j, const Coords5<T>& p) {
    T s(0);
    for (int i = 1; i <= kNumForms; ++i)
        if (theta[i - 1] != 0.0) s += T(theta[i - 1]) * hamiltonian_t<T>(j, i, p);
    return s;
}

inline double hamiltonian_theta(const Covector4& theta, int j, const Point5& p) {
    return hamiltonian_theta_t<double>(theta, j, p.coords());
}

/// Omega_theta = sum_i theta_i w_i.
FormMatrix omega_theta(const Covector4& theta, const Point5& p);

/// Residual of iota_{X_alpha} w_i = d h^alpha_i at p; all five components
/// vanish when the pairing holds.
OneForm5 verify_hamiltonian_pair(int alpha, int i, const Point5& p);

/// {h^alpha_i, h^beta_i}_{w_i}(p) = w_i(X_alpha, X_beta)(p).
double poisson_bracket(int alpha, int beta, int i, const Point5& p);

/// The components of {h^alpha, h^beta}_Omega at p.
std::array<double, 4> omega_bracket(int alpha, int beta, const Point5& p);

/// k^gamma_{alpha beta} with {h^alpha, h^beta}_Omega = sum k^gamma h^gamma:
/// the non-vanishing rows are (1,2)->-4h^3, (1,3)->2h^1, (1,4)->-2h^5,
/// (2,3)->-2h^2, (2,5)->-2h^4, (3,4)->h^4, (3,5)->-h^5.
const double (&h_commutation_table())[kNumFields][kNumFields][kNumFields];

struct TableReport {
    double max_residual = 0;
    int worst_alpha = 0, worst_beta = 0, worst_form = 0;
};

/// Componentwise check of the commutation table at the given points.
TableReport verify_commutation_table(const std::vector<Point5>& samples);

/// C1^theta = h^1_theta h^2_theta + (h^3_theta)^2; only defined on W.
template <class T>
T casimir_c1_t(const Covector4& theta, const Coords5<T>& p) {
    if (!in_W(theta))
        throw std::invalid_argument("casimir_c1 requires theta_2 = 0");
    const T h1 = hamiltonian_theta_t<T>(theta, 1, p);
    const T h2 = hamiltonian_theta_t<T>(theta, 2, p);
    const T h3 = hamiltonian_theta_t<T>(theta, 3, p);
    return h1 * h2 + h3 * h3;
}

/// C2^theta = (h^4_theta)^2 h^1_theta + h^5_theta (2 h^4_theta h^3_theta -
/// h^5_theta h^2_theta), defined for every theta.
template <class T>
T casimir_c2_t(const Covector4& theta, const Coords5<T>& p) {
    T h[5];
    for (int j = 1; j <= 5; ++j) h[j - 1] = hamiltonian_theta_t<T>(theta, j, p);
    return h[3] * h[3] * h[0] + h[4] * (T(2) * h[3] * h[2] - h[4] * h[1]);
}

inline double casimir_c1(const Covector4& theta, const Point5& p) {
    return casimir_c1_t<double>(theta, p.coords());
}
inline double casimir_c2(const Covector4& theta, const Point5& p) {
    return casimir_c2_t<double>(theta, p.coords());
}

/// Residual of {C1^theta, h^alpha_theta}_theta = 0, evaluated as the
/// directional derivative X_alpha C1 and normalized by the product-rule term
/// magnitudes (the natural cancellation scale: the h-components carry
/// exp(+-4z) factors that dwarf the vanishing result).
double casimir1_bracket_residual(const Covector4& theta, int alpha, const Point5& p);

/// Same for C2^theta.
double casimir2_bracket_residual(const Covector4& theta, int alpha, const Point5& p);

struct MotionReport {
    bool constant = false;
    double max_residual = 0;
};

/// True iff {f, h_theta}_theta vanishes for every generator of the minimal
/// Lie algebra of the system, at every sample point. The bracket is evaluated
/// as the directional derivative X f, which equals w_theta(X_f, X) for
/// admissible f. f must be callable on Coords5<Dual<5>>.
template <class F>
MotionReport is_constant_of_motion(F&& f, const expr::CoeffSet& coeffs,
                                   const std::vector<Point5>& samples, double tol = 1e-9) {
    std::vector<double> ts;
    for (int k = 0; k <= 20; ++k) ts.push_back(-1.0 + 0.1 * k);
    const Eigen::MatrixXd basis = minimal_algebra(coeffs, ts);

    MotionReport rep;
    for (const Point5& p : samples) {
        const OneForm5 df = differential(f, p);
        for (int col = 0; col < basis.cols(); ++col) {
            double deriv = 0, scale = 0;
            for (int alpha = 1; alpha <= kNumFields; ++alpha) {
                const double w = basis(alpha - 1, col);
                if (w == 0.0) continue;
                const Tangent5 X = eval_field(alpha, p);
                for (int i = 0; i < 5; ++i) {
                    deriv += w * df[i] * X[i];
                    scale += std::abs(w * df[i] * X[i]);
                }
            }
            // cancellation-aware: residual relative to the summed magnitudes
            rep.max_residual =
                std::max(rep.max_residual, std::abs(deriv) / std::max(1.0, scale));
        }
    }
    rep.constant = rep.max_residual < tol;
    return rep;
}

}  // namespace kslie
