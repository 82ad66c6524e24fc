#pragma once

// Numerical superposition rule for the projection of the system onto
// (x, y, z): the constants triple (C1^{e1}, C+, C1^{e1+e3}) extracted from a
// solution pair, and damped-Newton reconstruction of the first copy from the
// second copy plus the triple.

#include <Eigen/Dense>

#include "kslie/prolong.hpp"

namespace kslie {

struct Point3 {
    double x, y, z;

    Point3() : x(0), y(1), z(0) {}
    Point3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
        if (!(y > 0) || !std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
            throw ChartError("projected point outside the y > 0 chart");
    }
};

struct ConstantsTriple {
    double k1, k2, k3;  // C1^{e1}, C+ = C1^{e3}, C1^{e1+e3}
};

inline Point3 project(const Point5& p) { return {p.x, p.y, p.z}; }

namespace detail {

template <class T>
Coords5<T> lift3(const T& x, const T& y, const T& z) {
    return {x, y, z, T(0), T(0)};
}

}  // namespace detail

/// The three constants as functions of the pair; u and v never enter.
template <class T>
std::array<T, 3> constants_triple_t(const T& x1, const T& y1, const T& z1,
                                    const Point3& xi2) {
    const Coords5<T> a = detail::lift3(x1, y1, z1);
    const Coords5<T> b = detail::lift3(T(xi2.x), T(xi2.y), T(xi2.z));
    return {conserved_t<T>(ConservedQuantityId::C1E1, a, b),
            conserved_t<T>(ConservedQuantityId::CPlus, a, b),
            conserved_t<T>(ConservedQuantityId::C1E1E3, a, b)};
}

ConstantsTriple constants_from_pair(const Point3& xi1, const Point3& xi2);

struct NewtonOptions {
    double tol = 1e-12;        // on ||F||_inf
    int max_iter = 50;
    double chart_floor = 1e-6;
    double max_condition = 1e12;
};

struct NewtonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NewtonResult {
    Point3 root;
    int iterations = 0;
    double residual = 0;
    double condition = 0;  // Jacobian condition estimate at the last step
};

/// Solve constants_from_pair(xi1, xi2) = k for xi1 by damped Newton with an
/// exact dual-arithmetic Jacobian. Step halving (up to 20) when the residual
/// does not decrease; iterates clamped to y > chart_floor.
NewtonResult reconstruct(const Point3& xi2, const ConstantsTriple& k, const Point3& guess,
                         const NewtonOptions& opts = {});

/// Rank of the 3x3 Jacobian d(k1,k2,k3)/d(x1,y1,z1).
int independence_rank3(const Point3& xi1, const Point3& xi2);

}  // namespace kslie
