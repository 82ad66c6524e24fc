#include "kslie/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace kslie {

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0))
        throw std::invalid_argument("integrator tolerances must be positive");
    if (!(h_min <= h_init && h_init <= h_max))
        throw std::invalid_argument("require h_min <= h_init <= h_max");
    if (!(t0 < t1) && !(t1 < t0))
        throw std::invalid_argument("empty time window");
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,      0.0,         500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784,  11.0 / 84,   0.0};
constexpr double kB4[7] = {5179.0 / 57600,  0.0,          7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

using State = std::vector<double>;

State to_state(const ProlongedPoint& P) {
    State s;
    s.reserve(5 * P.m());
    for (const Point5& p : P.copies) {
        const Vec5 c = p.coords();
        s.insert(s.end(), c.begin(), c.end());
    }
    return s;
}

ProlongedPoint to_point(const State& s) {
    std::vector<Point5> copies;
    for (std::size_t a = 0; a * 5 < s.size(); ++a)
        copies.emplace_back(s[5 * a], s[5 * a + 1], s[5 * a + 2], s[5 * a + 3], s[5 * a + 4]);
    return ProlongedPoint(std::move(copies));
}

void rhs(double t, const State& s, const expr::CoeffSet& coeffs, double chart_floor,
         State& out) {
    const auto a = coeffs.eval(t);
    const std::size_t m = s.size() / 5;
    for (std::size_t c = 0; c < m; ++c) {
        if (s[5 * c + 1] < chart_floor)
            throw IntegrationError("trajectory left the y > 0 chart", t);
        const Point5 p(s[5 * c], s[5 * c + 1], s[5 * c + 2], s[5 * c + 3], s[5 * c + 4]);
        Tangent5 v{};
        for (int alpha = 1; alpha <= kNumFields; ++alpha) {
            if (a[alpha - 1] == 0.0) continue;
            const Tangent5 X = eval_field(alpha, p);
            for (int i = 0; i < 5; ++i) v[i] += a[alpha - 1] * X[i];
        }
        for (int i = 0; i < 5; ++i) out[5 * c + i] = v[i];
    }
}

}  // namespace

Trajectory integrate(const ProlongedPoint& init, const expr::CoeffSet& coeffs,
                     const IntegratorConfig& cfg) {
    cfg.validate();
    for (const Point5& p : init.copies)
        if (p.y < cfg.chart_floor)
            throw ChartError("initial condition below the chart floor");

    const double dir = cfg.t1 > cfg.t0 ? 1.0 : -1.0;
    const std::size_t n = 5 * init.m();

    Trajectory traj;
    State y = to_state(init);
    double t = cfg.t0;
    traj.times.push_back(t);
    traj.points.push_back(init);

    std::array<State, 7> k;
    for (auto& ki : k) ki.assign(n, 0.0);
    State ytmp(n), y5(n), y4(n);

    rhs(t, y, coeffs, cfg.chart_floor, k[0]);
    double h = std::clamp(cfg.h_init, cfg.h_min, cfg.h_max);

    while (dir * (cfg.t1 - t) > 0) {
        h = std::min(h, std::abs(cfg.t1 - t));
        const double hs = dir * h;

        bool failed = false;
        try {
            for (int stage = 1; stage < 7; ++stage) {
                for (std::size_t i = 0; i < n; ++i) {
                    double acc = 0;
                    for (int j = 0; j < stage; ++j) acc += kA[stage][j] * k[j][i];
                    ytmp[i] = y[i] + hs * acc;
                }
                rhs(t + kC[stage] * hs, ytmp, coeffs, cfg.chart_floor, k[stage]);
            }
        } catch (const IntegrationError&) {
            failed = true;  // stage left the chart; retry with a smaller step
        }

        double err = 0;
        if (!failed) {
            for (std::size_t i = 0; i < n; ++i) {
                double s5 = 0, s4 = 0;
                for (int j = 0; j < 7; ++j) {
                    s5 += kB5[j] * k[j][i];
                    s4 += kB4[j] * k[j][i];
                }
                y5[i] = y[i] + hs * s5;
                y4[i] = y[i] + hs * s4;
                const double w =
                    cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
                const double e = (y5[i] - y4[i]) / w;
                err += e * e;
            }
            err = std::sqrt(err / n);
        }

        if (!failed && err <= 1.0) {
            t += hs;
            y = y5;
            // FSAL: stage 7 of DP5 equals the first stage of the next step
            k[0] = k[6];
            for (std::size_t c = 0; c < init.m(); ++c)
                if (y[5 * c + 1] < cfg.chart_floor)
                    throw IntegrationError("trajectory left the y > 0 chart", t);
            traj.times.push_back(t);
            traj.points.push_back(to_point(y));
            ++traj.accepted_steps;
        } else {
            ++traj.rejected_steps;
        }

        const double factor =
            failed ? 0.5
                   : std::clamp(0.9 * std::pow(std::max(err, 1e-300), -0.2), 0.2, 5.0);
        h = std::clamp(h * factor, cfg.h_min, cfg.h_max);
        if (h <= cfg.h_min && (failed || err > 1.0))
            throw IntegrationError("step size underflow", t);
    }
    return traj;
}

std::map<ConservedQuantityId, DriftRecord> monitor(
    const Trajectory& traj, const std::vector<ConservedQuantityId>& ids) {
    if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
    std::map<ConservedQuantityId, DriftRecord> out;
    for (ConservedQuantityId id : ids) {
        DriftRecord rec;
        std::optional<double> q0;
        for (const ProlongedPoint& P : traj.points) {
            double q;
            try {
                q = conserved(id, P);
            } catch (const SingularConfiguration&) {
                ++rec.gaps;
                continue;
            }
            if (!q0) {
                q0 = q;
                continue;
            }
            rec.max_relative_drift = std::max(
                rec.max_relative_drift, std::abs(q - *q0) / std::max(1.0, std::abs(*q0)));
        }
        out[id] = rec;
    }
    return out;
}

void write_csv(const Trajectory& traj, std::ostream& out) {
    const std::size_t m = traj.points.empty() ? 0 : traj.points.front().m();
    out << "t";
    for (std::size_t a = 1; a <= m; ++a)
        out << ",x" << a << ",y" << a << ",z" << a << ",u" << a << ",v" << a;
    out << "\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (std::size_t i = 0; i < traj.size(); ++i) {
        put(traj.times[i]);
        for (const Point5& p : traj.points[i].copies)
            for (double c : p.coords()) {
                out << ',';
                put(c);
            }
        out << "\n";
    }
}

void write_csv_file(const Trajectory& traj, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    write_csv(traj, f);
}

std::string trajectory_json(const Trajectory& traj) {
    std::ostringstream os;
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    os << "[";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (i) os << ",";
        os << "{\"t\":";
        put(traj.times[i]);
        os << ",\"state\":[";
        for (std::size_t a = 0; a < traj.points[i].m(); ++a) {
            if (a) os << ",";
            os << "[";
            const Vec5 c = traj.points[i].copies[a].coords();
            for (int j = 0; j < 5; ++j) {
                if (j) os << ",";
                put(c[j]);
            }
            os << "]";
        }
        os << "]}";
    }
    os << "]";
    return os.str();
}

}  // namespace kslie
