#pragma once

// Diagonal prolongation to m copies and the five explicit conserved
// quantities of the two-copy prolonged system.

#include <Eigen/Dense>
#include <string_view>
#include <vector>

#include "kslie/ksymplectic.hpp"

namespace kslie {

/// (xi_1, ..., xi_m), every copy on the y > 0 chart.
struct ProlongedPoint {
    std::vector<Point5> copies;

    ProlongedPoint() = default;
    explicit ProlongedPoint(std::vector<Point5> c) : copies(std::move(c)) {
        if (copies.empty()) throw std::invalid_argument("prolongation needs m >= 1 copies");
    }
    std::size_t m() const { return copies.size(); }
};

/// Copy-wise X_alpha.
std::vector<Tangent5> prolong_field(int alpha, const ProlongedPoint& P);

/// Block-diagonal 5m x 5m coefficient matrix of w_i^[m].
Eigen::MatrixXd prolong_omega(int i, const ProlongedPoint& P);

/// h^{j,[m]}_i = sum_a h^j_i(xi_a).
double prolong_hamiltonian(int j, int i, const ProlongedPoint& P);

enum class ConservedQuantityId { C1E1, CPlus, CMinus, C1E1E3, C2E2 };

constexpr std::array<ConservedQuantityId, 5> kAllConserved = {
    ConservedQuantityId::C1E1, ConservedQuantityId::CPlus, ConservedQuantityId::CMinus,
    ConservedQuantityId::C1E1E3, ConservedQuantityId::C2E2};

std::string_view conserved_name(ConservedQuantityId id);

struct SingularConfiguration : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline double scalar_value(double x) { return x; }
template <std::size_t N>
double scalar_value(const Dual<N>& x) { return x.val; }
}  // namespace detail

/// The conserved quantities of the two-copy prolongation, as printed closed
/// forms. Templated over the scalar so dual gradients flow through.
template <class T>
T conserved_t(ConservedQuantityId id, const Coords5<T>& a, const Coords5<T>& b) {
    const T &x1 = a[0], &y1 = a[1], &z1 = a[2], &u1 = a[3], &v1 = a[4];
    const T &x2 = b[0], &y2 = b[1], &z2 = b[2], &u2 = b[3], &v2 = b[4];
    const T dx = x1 - x2;
    const T y1sq = y1 * y1, y2sq = y2 * y2;
    switch (id) {
        case ConservedQuantityId::C1E1: {
            const T s = y1sq + y2sq;
            return (T(-4) * dx * dx + s * s) / (T(4) * y1sq * y2sq);
        }
        case ConservedQuantityId::CPlus:
        case ConservedQuantityId::CMinus: {
            const double sg = id == ConservedQuantityId::CPlus ? 1.0 : -1.0;
            const T q = T(2) * dx - T(sg) * (y1sq - y2sq);
            return exp(T(sg * 4) * (z1 + z2)) * q * q / (T(-16) * y1sq * y2sq);
        }
        case ConservedQuantityId::C1E1E3: {
            const T e1 = exp(T(4) * z1), e2 = exp(T(4) * z2);
            const T inner = (e2 + T(2)) * (T(2) * dx - y1sq) + (e2 - T(2)) * y2sq;
            if (detail::scalar_value(inner) == 0.0)
                throw SingularConfiguration("C1^{e1+e3}: inner inverse factor vanishes");
            const T num = (e1 + T(2)) * (T(2) * dx + y2sq) + (T(2) - e1) * y1sq;
            return num * inner / (T(-16) * y1sq * y2sq);
        }
        case ConservedQuantityId::C2E2: {
            const T common =
                exp(T(2) * (z1 + z2)) * (T(2) * dx - y1sq + y2sq) / (y1sq * y2sq);
            const T t1 = exp(T(2) * z2) *
                         (-y1 * (u1 - u2 + v2 * y2) + v1 * (T(2) * dx + y2sq));
            const T t2 = exp(T(2) * z1) *
                         (v2 * (T(2) * dx - y1sq) + (-u1 + u2 + v1 * y1) * y2);
            return (t1 + t2) * common;
        }
    }
    throw std::out_of_range("unknown conserved quantity");
}

/// Evaluate the named quantity at an m = 2 prolonged point.
double conserved(ConservedQuantityId id, const ProlongedPoint& P);

struct DirectionalResidual {
    double max_residual = 0;  // cancellation-aware relative residual
};

/// X^[2]_alpha applied to the named quantity at P (exact dual gradient over
/// all 10 coordinates); zero for every alpha is the pointwise form of
/// conservation. Returns the residual relative to the summed term magnitudes.
double prolonged_directional_derivative(ConservedQuantityId id, int alpha,
                                        const ProlongedPoint& P);

/// Rank of the 4x5 Jacobian of (C1^{e1}, C+, C1^{e1+e3}, C2^{e2}) with
/// respect to the first-copy coordinates.
int independence_rank(const ProlongedPoint& P);

/// Rank of the 3x3 Jacobian of (C1^{e1}, C+, C1^{e1+e3}) with respect to
/// (x1, y1, z1).
int projected_independence_rank(const ProlongedPoint& P);

}  // namespace kslie
