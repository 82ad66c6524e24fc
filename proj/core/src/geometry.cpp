#include "kslie/geometry.hpp"

#include <vector>

namespace kslie {

double closedness_residual(const std::function<FormMatrix(const Point5&)>& form,
                           const Point5& p, double h) {
    // partial_c M_ab by central differences in coordinate c
    std::array<FormMatrix, 5> dM;
    const Vec5 c0 = p.coords();
    for (int c = 0; c < 5; ++c) {
        Vec5 cp = c0, cm = c0;
        cp[c] += h;
        cm[c] -= h;
        if (cm[1] <= 0) throw ChartError("closedness step leaves the chart");
        dM[c] = (form(Point5(cp)) - form(Point5(cm))) / (2 * h);
    }
    double worst = 0;
    for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b)
            for (int c = b + 1; c < 5; ++c) {
                double r = dM[a](b, c) + dM[b](c, a) + dM[c](a, b);
                worst = std::max(worst, std::abs(r));
            }
    return worst;
}

int stacked_kernel_rank(const std::vector<FormMatrix>& forms) {
    if (forms.empty()) throw std::invalid_argument("need at least one form");
    Eigen::MatrixXd S(5 * forms.size(), 5);
    for (std::size_t i = 0; i < forms.size(); ++i) S.block<5, 5>(5 * i, 0) = forms[i];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(S);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-9 * sv(0)) ++rank;
    return rank;
}

}  // namespace kslie
