#include "kslie/superpose.hpp"

namespace kslie {

ConstantsTriple constants_from_pair(const Point3& xi1, const Point3& xi2) {
    const auto k = constants_triple_t<double>(xi1.x, xi1.y, xi1.z, xi2);
    return {k[0], k[1], k[2]};
}

namespace {

struct Eval {
    Eigen::Vector3d F;
    Eigen::Matrix3d J;
};

Eval eval_map(const Point3& xi1, const Point3& xi2, const ConstantsTriple& k) {
    using D = Dual<3>;
    const auto f = constants_triple_t<D>(D::variable(xi1.x, 0), D::variable(xi1.y, 1),
                                         D::variable(xi1.z, 2), xi2);
    Eval e;
    const double target[3] = {k.k1, k.k2, k.k3};
    for (int r = 0; r < 3; ++r) {
        // scale each component by its target so tol acts relatively
        const double s = 1.0 / std::max(1.0, std::abs(target[r]));
        e.F(r) = (f[r].val - target[r]) * s;
        for (int c = 0; c < 3; ++c) e.J(r, c) = f[r].grad[c] * s;
    }
    return e;
}

}  // namespace

NewtonResult reconstruct(const Point3& xi2, const ConstantsTriple& k, const Point3& guess,
                         const NewtonOptions& opts) {
    Point3 xi = guess;
    Eval e = eval_map(xi, xi2, k);
    double res = e.F.lpNorm<Eigen::Infinity>();

    NewtonResult out;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        if (res < opts.tol) {
            out.root = xi;
            out.iterations = iter;
            out.residual = res;
            return out;
        }
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(e.J, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (sv(2) == 0.0 || sv(0) / sv(2) > opts.max_condition)
            throw NewtonError("singular Jacobian in superposition reconstruction");
        out.condition = sv(0) / sv(2);
        const Eigen::Vector3d step = svd.solve(-e.F);

        // damping: halve until the residual decreases and we stay in chart
        double lambda = 1.0;
        bool advanced = false;
        for (int halve = 0; halve <= 20; ++halve, lambda *= 0.5) {
            const double ytry = xi.y + lambda * step(1);
            if (ytry <= opts.chart_floor) continue;
            Point3 trial(xi.x + lambda * step(0), ytry, xi.z + lambda * step(2));
            Eval et;
            try {
                et = eval_map(trial, xi2, k);
            } catch (const SingularConfiguration&) {
                continue;
            }
            const double rt = et.F.lpNorm<Eigen::Infinity>();
            if (rt < res) {
                xi = trial;
                e = et;
                res = rt;
                advanced = true;
                break;
            }
        }
        if (!advanced)
            throw NewtonError("no residual decrease after 20 step halvings");
    }
    if (res < opts.tol) {
        out.root = xi;
        out.iterations = opts.max_iter;
        out.residual = res;
        return out;
    }
    throw NewtonError("Newton did not converge within max_iter");
}

int independence_rank3(const Point3& xi1, const Point3& xi2) {
    const Eigen::Matrix3d J = eval_map(xi1, xi2, ConstantsTriple{0, 0, 0}).J;
    Eigen::Matrix3d S = J;
    for (int r = 0; r < 3; ++r) {
        const double n = S.row(r).norm();
        if (n == 0.0) return 0;
        S.row(r) /= n;
    }
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(S);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < 3; ++i)
        if (sv(i) > 1e-9 * sv(0)) ++rank;
    return rank;
}

}  // namespace kslie
