#include "kslie/prolong.hpp"

namespace kslie {

std::vector<Tangent5> prolong_field(int alpha, const ProlongedPoint& P) {
    std::vector<Tangent5> out;
    out.reserve(P.m());
    for (const Point5& p : P.copies) out.push_back(eval_field(alpha, p));
    return out;
}

Eigen::MatrixXd prolong_omega(int i, const ProlongedPoint& P) {
    const std::size_t m = P.m();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(5 * m, 5 * m);
    for (std::size_t a = 0; a < m; ++a)
        M.block<5, 5>(5 * a, 5 * a) = omega(i, P.copies[a]);
    return M;
}

double prolong_hamiltonian(int j, int i, const ProlongedPoint& P) {
    double s = 0;
    for (const Point5& p : P.copies) s += hamiltonian(j, i, p);
    return s;
}

std::string_view conserved_name(ConservedQuantityId id) {
    switch (id) {
        case ConservedQuantityId::C1E1: return "C1_e1";
        case ConservedQuantityId::CPlus: return "C_plus";
        case ConservedQuantityId::CMinus: return "C_minus";
        case ConservedQuantityId::C1E1E3: return "C1_e1e3";
        case ConservedQuantityId::C2E2: return "C2_e2";
    }
    return "?";
}

namespace {

void require_two_copies(const ProlongedPoint& P) {
    if (P.m() != 2)
        throw std::invalid_argument("conserved quantities are implemented for m = 2 only");
}

}  // namespace

double conserved(ConservedQuantityId id, const ProlongedPoint& P) {
    require_two_copies(P);
    return conserved_t<double>(id, P.copies[0].coords(), P.copies[1].coords());
}

double prolonged_directional_derivative(ConservedQuantityId id, int alpha,
                                        const ProlongedPoint& P) {
    require_two_copies(P);
    using D = Dual<10>;
    Coords5<D> a, b;
    const Vec5 c1 = P.copies[0].coords(), c2 = P.copies[1].coords();
    for (std::size_t i = 0; i < 5; ++i) {
        a[i] = D::variable(c1[i], i);
        b[i] = D::variable(c2[i], 5 + i);
    }
    const D q = conserved_t<D>(id, a, b);

    const Tangent5 X1 = eval_field(alpha, P.copies[0]);
    const Tangent5 X2 = eval_field(alpha, P.copies[1]);
    double deriv = 0, scale = 0;
    for (int i = 0; i < 5; ++i) {
        deriv += q.grad[i] * X1[i] + q.grad[5 + i] * X2[i];
        scale += std::abs(q.grad[i] * X1[i]) + std::abs(q.grad[5 + i] * X2[i]);
    }
    return std::abs(deriv) / std::max(1.0, scale);
}

namespace {

int jacobian_rank(const ProlongedPoint& P, const std::vector<ConservedQuantityId>& ids,
                  int ncols) {
    using D = Dual<5>;
    Coords5<D> a;
    Coords5<D> b;
    const Vec5 c1 = P.copies[0].coords(), c2 = P.copies[1].coords();
    for (std::size_t i = 0; i < 5; ++i) {
        a[i] = D::variable(c1[i], i);
        b[i] = D(c2[i]);
    }
    Eigen::MatrixXd J(ids.size(), ncols);
    for (std::size_t r = 0; r < ids.size(); ++r) {
        const D q = conserved_t<D>(ids[r], a, b);
        for (int cidx = 0; cidx < ncols; ++cidx) J(r, cidx) = q.grad[cidx];
    }
    // scale rows so the rank threshold is insensitive to the size of each
    // quantity's gradient
    for (int r = 0; r < J.rows(); ++r) {
        const double n = J.row(r).norm();
        if (n == 0.0) return 0;
        J.row(r) /= n;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-9 * sv(0)) ++rank;
    return rank;
}

}  // namespace

int independence_rank(const ProlongedPoint& P) {
    require_two_copies(P);
    return jacobian_rank(P,
                         {ConservedQuantityId::C1E1, ConservedQuantityId::CPlus,
                          ConservedQuantityId::C1E1E3, ConservedQuantityId::C2E2},
                         5);
}

int projected_independence_rank(const ProlongedPoint& P) {
    require_two_copies(P);
    return jacobian_rank(P,
                         {ConservedQuantityId::C1E1, ConservedQuantityId::CPlus,
                          ConservedQuantityId::C1E1E3},
                         3);
}

}  // namespace kslie
