#pragma once

// Points, tangent vectors, one-forms and two-form coefficient matrices on the
// y > 0 chart of R^5, plus the exterior-derivative and contraction helpers.
//
// Conventions, fixed once for the whole toolkit:
//   coordinate order       (x, y, z, u, v)
//   two-form               w = sum_{a<b} M_ab dxi^a ^ dxi^b, M antisymmetric
//   contraction            (iota_X w)_b = sum_a X^a M_ab
//   w(X, Y)                = X^T M Y

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "kslie/dual.hpp"

namespace kslie {

template <class T>
using Coords5 = std::array<T, 5>;

using Vec5 = Coords5<double>;
using Tangent5 = Vec5;
using OneForm5 = Vec5;
using FormMatrix = Eigen::Matrix<double, 5, 5>;

struct ChartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A state (x, y, z, u, v) on the y > 0 chart.
struct Point5 {
    double x, y, z, u, v;

    Point5() : x(0), y(1), z(0), u(0), v(0) {}
    Point5(double x_, double y_, double z_, double u_, double v_)
        : x(x_), y(y_), z(z_), u(u_), v(v_) {
        require_chart();
    }
    explicit Point5(const Vec5& a) : Point5(a[0], a[1], a[2], a[3], a[4]) {}

    Vec5 coords() const { return {x, y, z, u, v}; }

    bool in_chart() const {
        return y > 0 && std::isfinite(x) && std::isfinite(y) && std::isfinite(z) &&
               std::isfinite(u) && std::isfinite(v);
    }
    void require_chart() const {
        if (!in_chart()) throw ChartError("point outside the y > 0 chart");
    }

    friend bool operator==(const Point5&, const Point5&) = default;
};

/// d f at p, exact to roundoff via dual arithmetic. f must be callable on
/// Coords5<Dual<5>>.
template <class F>
OneForm5 differential(F&& f, const Point5& p) {
    Coords5<Dual<5>> q;
    const Vec5 c = p.coords();
    for (std::size_t i = 0; i < 5; ++i) q[i] = Dual<5>::variable(c[i], i);
    Dual<5> r = f(q);
    if (!isfinite(r)) throw std::runtime_error("non-finite value in differential");
    return {r.grad[0], r.grad[1], r.grad[2], r.grad[3], r.grad[4]};
}

/// iota_X w for a coefficient matrix M.
inline OneForm5 contract(const FormMatrix& M, const Tangent5& X) {
    OneForm5 out{};
    for (int b = 0; b < 5; ++b) {
        double s = 0;
        for (int a = 0; a < 5; ++a) s += X[a] * M(a, b);
        out[b] = s;
    }
    return out;
}

/// w(X, Y) = X^T M Y.
inline double pair_form(const FormMatrix& M, const Tangent5& X, const Tangent5& Y) {
    double s = 0;
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) s += X[a] * M(a, b) * Y[b];
    return s;
}

/// Max |(dw)_abc| estimated by central differences of the matrix entries.
/// The analytic identities elsewhere run on dual arithmetic; this one is a
/// finite-difference closedness check by construction, since the forms are
/// only known through their coefficient matrices here.
double closedness_residual(const std::function<FormMatrix(const Point5&)>& form,
                           const Point5& p, double h);

/// Rank of the (5k) x 5 vertical stack, singular values above 1e-9 * sigma_max.
int stacked_kernel_rank(const std::vector<FormMatrix>& forms);

}  // namespace kslie
