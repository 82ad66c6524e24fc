#include "kslie/fields.hpp"

#include <random>

namespace kslie {

Tangent5 eval_system(double t, const Point5& p, const expr::CoeffSet& coeffs) {
    const auto a = coeffs.eval(t);
    Tangent5 out{};
    for (int alpha = 1; alpha <= kNumFields; ++alpha) {
        if (a[alpha - 1] == 0.0) continue;
        const Tangent5 X = eval_field(alpha, p);
        for (int i = 0; i < 5; ++i) out[i] += a[alpha - 1] * X[i];
    }
    return out;
}

Eigen::Matrix<double, 5, 5> field_jacobian(int alpha, const Point5& p) {
    Coords5<Dual<5>> q;
    const Vec5 c = p.coords();
    for (std::size_t j = 0; j < 5; ++j) q[j] = Dual<5>::variable(c[j], j);
    const auto X = eval_field_t<Dual<5>>(alpha, q);
    Eigen::Matrix<double, 5, 5> J;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) J(i, j) = X[i].grad[j];
    return J;
}

Tangent5 lie_bracket(int a, int b, const Point5& p) {
    const Eigen::Matrix<double, 5, 5> Ja = field_jacobian(a, p);
    const Eigen::Matrix<double, 5, 5> Jb = field_jacobian(b, p);
    Eigen::Matrix<double, 5, 1> Xa, Xb;
    const Tangent5 va = eval_field(a, p), vb = eval_field(b, p);
    for (int i = 0; i < 5; ++i) {
        Xa(i) = va[i];
        Xb(i) = vb[i];
    }
    const Eigen::Matrix<double, 5, 1> r = Jb * Xa - Ja * Xb;
    return {r(0), r(1), r(2), r(3), r(4)};
}

double StructureTensor::max_antisymmetry_defect() const {
    double worst = 0;
    for (int a = 0; a < kNumFields; ++a)
        for (int b = 0; b < kNumFields; ++b)
            for (int g = 0; g < kNumFields; ++g)
                worst = std::max(worst, std::abs(c[a][b][g] + c[b][a][g]));
    return worst;
}

double StructureTensor::max_jacobi_defect() const {
    // sum_s ( c^s_ab c^g_sc + c^s_bc c^g_sa + c^s_ca c^g_sb ) = 0
    double worst = 0;
    for (int a = 0; a < kNumFields; ++a)
        for (int b = 0; b < kNumFields; ++b)
            for (int d = 0; d < kNumFields; ++d)
                for (int g = 0; g < kNumFields; ++g) {
                    double s = 0;
                    for (int e = 0; e < kNumFields; ++e)
                        s += c[a][b][e] * c[e][d][g] + c[b][d][e] * c[e][a][g] +
                             c[d][a][e] * c[e][b][g];
                    worst = std::max(worst, std::abs(s));
                }
    return worst;
}

Eigen::Matrix<double, 5, 1> StructureTensor::bracket(
    const Eigen::Matrix<double, 5, 1>& a, const Eigen::Matrix<double, 5, 1>& b) const {
    Eigen::Matrix<double, 5, 1> out = Eigen::Matrix<double, 5, 1>::Zero();
    for (int i = 0; i < kNumFields; ++i)
        for (int j = 0; j < kNumFields; ++j) {
            if (a(i) == 0.0 || b(j) == 0.0) continue;
            for (int g = 0; g < kNumFields; ++g) out(g) += a(i) * b(j) * c[i][j][g];
        }
    return out;
}

Eigen::Matrix3d StructureTensor::sl2_killing_form() const {
    // K_ab = sum_{c,d in {1,2,3}} c^d_ac c^c_bd over the sl(2) block
    Eigen::Matrix3d K = Eigen::Matrix3d::Zero();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int cc = 0; cc < 3; ++cc)
                for (int d = 0; d < 3; ++d) K(a, b) += c[a][cc][d] * c[b][d][cc];
    return K;
}

StructureFit fit_structure_constants(const std::vector<Point5>& samples) {
    if (samples.size() < 10)
        throw std::invalid_argument("structure-constant fit needs at least 10 sample points");
    const int n = static_cast<int>(samples.size());

    // One regression per ordered pair (a < b): rows are the 5 bracket
    // components at each point, columns the candidate X_gamma components.
    Eigen::MatrixXd A(5 * n, kNumFields);
    for (int k = 0; k < n; ++k)
        for (int g = 1; g <= kNumFields; ++g) {
            const Tangent5 X = eval_field(g, samples[k]);
            for (int i = 0; i < 5; ++i) A(5 * k + i, g - 1) = X[i];
        }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < kNumFields)
        throw std::runtime_error("degenerate sample set: regression matrix rank-deficient");

    StructureFit fit{};
    fit.max_residual = 0;
    for (int a = 1; a <= kNumFields; ++a)
        for (int b = a + 1; b <= kNumFields; ++b) {
            Eigen::VectorXd rhs(5 * n);
            for (int k = 0; k < n; ++k) {
                const Tangent5 br = lie_bracket(a, b, samples[k]);
                for (int i = 0; i < 5; ++i) rhs(5 * k + i) = br[i];
            }
            const Eigen::VectorXd coef = qr.solve(rhs);
            fit.max_residual =
                std::max(fit.max_residual, (A * coef - rhs).lpNorm<Eigen::Infinity>());
            for (int g = 0; g < kNumFields; ++g) {
                fit.tensor.c[a - 1][b - 1][g] = coef(g);
                fit.tensor.c[b - 1][a - 1][g] = -coef(g);
            }
        }
    return fit;
}

const StructureTensor& frozen_structure_tensor() {
    static const StructureTensor tensor = [] {
        std::mt19937_64 rng(0x6b736c6965ULL);
        std::uniform_real_distribution<double> box(-2.0, 2.0), ybox(0.5, 3.0);
        std::vector<Point5> pts;
        pts.reserve(24);
        for (int i = 0; i < 24; ++i)
            pts.emplace_back(box(rng), ybox(rng), box(rng), box(rng), box(rng));
        StructureFit fit = fit_structure_constants(pts);
        if (fit.max_residual > 1e-8)
            throw std::runtime_error("structure-constant fit failed verification");
        // the verified constants are small integers; snap the fit noise away
        for (auto& plane : fit.tensor.c)
            for (auto& row : plane)
                for (double& v : row)
                    if (std::abs(v - std::round(v)) < 1e-9) v = std::round(v);
        return fit.tensor;
    }();
    return tensor;
}

Eigen::MatrixXd minimal_algebra(const expr::CoeffSet& coeffs,
                                const std::vector<double>& t_samples,
                                const StructureTensor& tensor) {
    std::vector<Eigen::Matrix<double, 5, 1>> basis;
    constexpr double tol = 1e-10;

    auto insert = [&](Eigen::Matrix<double, 5, 1> v) {
        for (const auto& b : basis) v -= b.dot(v) * b;  // Gram-Schmidt
        const double n = v.norm();
        if (n > tol) {
            basis.push_back(v / n);
            return true;
        }
        return false;
    };

    for (double t : t_samples) {
        const auto a = coeffs.eval(t);
        Eigen::Matrix<double, 5, 1> v;
        for (int i = 0; i < 5; ++i) v(i) = a[i];
        if (v.norm() > tol) insert(v);
    }

    // close under the bracket until the dimension stabilizes
    bool grew = true;
    while (grew && basis.size() < 5) {
        grew = false;
        const std::size_t n = basis.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (insert(tensor.bracket(basis[i], basis[j]))) grew = true;
    }

    Eigen::MatrixXd out(5, basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) out.col(i) = basis[i];
    return out;
}

}  // namespace kslie
