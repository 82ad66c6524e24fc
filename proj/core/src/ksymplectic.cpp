#include "kslie/ksymplectic.hpp"

#include <cmath>

namespace kslie {

namespace {

void set_entry(FormMatrix& M, int a, int b, double val) {
    M(a, b) += val;
    M(b, a) -= val;
}

}  // namespace

FormMatrix omega(int i, const Point5& p) {
    p.require_chart();
    const double x = p.x, y = p.y, z = p.z, v = p.v;
    FormMatrix M = FormMatrix::Zero();
    switch (i) {
        case 1:
            set_entry(M, 0, 1, 1.0 / (y * y * y));
            break;
        case 3:
        case 4: {
            const double sg = (i == 3) ? 1.0 : -1.0;
            const double e = std::exp(sg * 4.0 * z);
            set_entry(M, 0, 1, e / (2.0 * y * y * y));
            set_entry(M, 0, 2, -sg * e / (y * y));
            set_entry(M, 1, 2, e / y);
            break;
        }
        case 2: {
            const double F = 2.0 * std::exp(2.0 * z) / (y * y);
            // dz ^ (v y dy - 2 v dx + y du - y^2 dv)
            set_entry(M, 2, 1, v * y * F);
            set_entry(M, 2, 0, -2.0 * v * F);
            set_entry(M, 2, 3, y * F);
            set_entry(M, 2, 4, -y * y * F);
            // (dv / 2) ^ (y dy - 2 dx)
            set_entry(M, 4, 1, y * F / 2.0);
            set_entry(M, 4, 0, -F);
            // (dy / 2y) ^ (4 v dx - y du)
            set_entry(M, 1, 0, 2.0 * v * F / y);
            set_entry(M, 1, 3, -F / 2.0);
            break;
        }
        default:
            throw std::out_of_range("form index must be 1..4");
    }
    return M;
}

FormMatrix omega_theta(const Covector4& theta, const Point5& p) {
    FormMatrix M = FormMatrix::Zero();
    for (int i = 1; i <= kNumForms; ++i)
        if (theta[i - 1] != 0.0) M += theta[i - 1] * omega(i, p);
    return M;
}

OneForm5 verify_hamiltonian_pair(int alpha, int i, const Point5& p) {
    const OneForm5 lhs = contract(omega(i, p), eval_field(alpha, p));
    const OneForm5 rhs = differential(
        [&](const Coords5<Dual<5>>& q) { return hamiltonian_t<Dual<5>>(alpha, i, q); }, p);
    OneForm5 res;
    for (int k = 0; k < 5; ++k) res[k] = lhs[k] - rhs[k];
    return res;
}

double poisson_bracket(int alpha, int beta, int i, const Point5& p) {
    return pair_form(omega(i, p), eval_field(alpha, p), eval_field(beta, p));
}

std::array<double, 4> omega_bracket(int alpha, int beta, const Point5& p) {
    std::array<double, 4> out;
    for (int i = 1; i <= kNumForms; ++i) out[i - 1] = poisson_bracket(alpha, beta, i, p);
    return out;
}

const double (&h_commutation_table())[kNumFields][kNumFields][kNumFields] {
    static const auto table = [] {
        struct Entry {
            int a, b, g;
            double k;
        };
        // {h^a, h^b}_Omega = sum_g k^g_ab h^g, non-vanishing rows only
        constexpr Entry rows[] = {
            {1, 2, 3, -4.0}, {1, 3, 1, 2.0}, {1, 4, 5, -2.0}, {2, 3, 2, -2.0},
            {2, 5, 4, -2.0}, {3, 4, 4, 1.0}, {3, 5, 5, -1.0},
        };
        static double k[kNumFields][kNumFields][kNumFields] = {};
        for (const Entry& e : rows) {
            k[e.a - 1][e.b - 1][e.g - 1] = e.k;
            k[e.b - 1][e.a - 1][e.g - 1] = -e.k;
        }
        return &k;
    }();
    return *table;
}

namespace {

struct HTheta {
    double value;
    double deriv;  // X_alpha h_theta
    double deriv_scale;  // sum of |dh_i X^i| contraction terms
};

HTheta h_theta_along(const Covector4& theta, int j, int alpha, const Point5& p) {
    HTheta out{hamiltonian_theta(theta, j, p), 0, 0};
    const OneForm5 dh = differential(
        [&](const Coords5<Dual<5>>& q) { return hamiltonian_theta_t<Dual<5>>(theta, j, q); },
        p);
    const Tangent5 X = eval_field(alpha, p);
    for (int i = 0; i < 5; ++i) {
        out.deriv += dh[i] * X[i];
        out.deriv_scale += std::abs(dh[i] * X[i]);
    }
    return out;
}

}  // namespace

double casimir1_bracket_residual(const Covector4& theta, int alpha, const Point5& p) {
    if (!in_W(theta)) throw std::invalid_argument("casimir_c1 requires theta_2 = 0");
    const HTheta h1 = h_theta_along(theta, 1, alpha, p);
    const HTheta h2 = h_theta_along(theta, 2, alpha, p);
    const HTheta h3 = h_theta_along(theta, 3, alpha, p);
    // X(C1) = X(h1) h2 + h1 X(h2) + 2 h3 X(h3)
    const double deriv = h1.deriv * h2.value + h1.value * h2.deriv + 2 * h3.value * h3.deriv;
    const double scale = h1.deriv_scale * std::abs(h2.value) +
                         std::abs(h1.value) * h2.deriv_scale +
                         2 * std::abs(h3.value) * h3.deriv_scale;
    return std::abs(deriv) / std::max(1.0, scale);
}

double casimir2_bracket_residual(const Covector4& theta, int alpha, const Point5& p) {
    HTheta h[5];
    for (int j = 1; j <= 5; ++j) h[j - 1] = h_theta_along(theta, j, alpha, p);
    // C2 = h4^2 h1 + 2 h3 h4 h5 - h2 h5^2
    const double deriv = 2 * h[3].value * h[3].deriv * h[0].value +
                         h[3].value * h[3].value * h[0].deriv +
                         2 * (h[2].deriv * h[3].value * h[4].value +
                              h[2].value * h[3].deriv * h[4].value +
                              h[2].value * h[3].value * h[4].deriv) -
                         h[1].deriv * h[4].value * h[4].value -
                         2 * h[1].value * h[4].value * h[4].deriv;
    const double scale = 2 * std::abs(h[3].value) * h[3].deriv_scale * std::abs(h[0].value) +
                         h[3].value * h[3].value * h[0].deriv_scale +
                         2 * (h[2].deriv_scale * std::abs(h[3].value * h[4].value) +
                              std::abs(h[2].value) * h[3].deriv_scale * std::abs(h[4].value) +
                              std::abs(h[2].value * h[3].value) * h[4].deriv_scale) +
                         h[1].deriv_scale * h[4].value * h[4].value +
                         2 * std::abs(h[1].value * h[4].value) * h[4].deriv_scale;
    return std::abs(deriv) / std::max(1.0, scale);
}

TableReport verify_commutation_table(const std::vector<Point5>& samples) {
    const auto& k = h_commutation_table();
    TableReport rep;
    for (const Point5& p : samples)
        for (int a = 1; a <= kNumFields; ++a)
            for (int b = a + 1; b <= kNumFields; ++b)
                for (int i = 1; i <= kNumForms; ++i) {
                    const double lhs = poisson_bracket(a, b, i, p);
                    double rhs = 0, scale = std::abs(lhs);
                    for (int g = 1; g <= kNumFields; ++g) {
                        const double kv = k[a - 1][b - 1][g - 1];
                        if (kv == 0.0) continue;
                        const double term = kv * hamiltonian(g, i, p);
                        rhs += term;
                        scale = std::max(scale, std::abs(term));
                    }
                    const double res = std::abs(lhs - rhs) / std::max(1.0, scale);
                    if (res > rep.max_residual) {
                        rep.max_residual = res;
                        rep.worst_alpha = a;
                        rep.worst_beta = b;
                        rep.worst_form = i;
                    }
                }
    return rep;
}

}  // namespace kslie
