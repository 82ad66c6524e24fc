// Command-line surface: `verify` runs the identity checks, `simulate`
// integrates the system and monitors invariant drift, `superpose` demonstrates
// the projected superposition rule by Newton reconstruction.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "kslie/expr.hpp"
#include "kslie/integrate.hpp"
#include "kslie/ksymplectic.hpp"
#include "kslie/sampling.hpp"
#include "kslie/superpose.hpp"

using nlohmann::json;

namespace {

constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    kslie::expr::CoeffSet coeffs;
    std::vector<kslie::Point5> initial_conditions;
    kslie::IntegratorConfig integrator;
    std::uint64_t seed = 20140523;
    int samples = 200;
    double tolerance = 1e-9;
    std::vector<kslie::ConservedQuantityId> conserved = {
        kslie::kAllConserved.begin(), kslie::kAllConserved.end()};
};

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& path) {
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known) throw ConfigError("unknown key '" + path + key + "'");
    }
}

kslie::ConservedQuantityId conserved_by_name(const std::string& name) {
    for (kslie::ConservedQuantityId id : kslie::kAllConserved)
        if (kslie::conserved_name(id) == name) return id;
    throw ConfigError("unknown conserved quantity '" + name + "'");
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be an object");
    reject_unknown_keys(doc,
                        {"coefficients", "initial_conditions", "t0", "t1", "integrator",
                         "seed", "samples", "tolerance", "conserved"},
                        "");

    RunConfig cfg;
    if (!doc.contains("coefficients") || !doc["coefficients"].is_array() ||
        doc["coefficients"].size() != 5)
        throw ConfigError("'coefficients' must be an array of 5 expression strings");
    std::array<std::string, 5> src;
    for (int i = 0; i < 5; ++i) {
        if (!doc["coefficients"][i].is_string())
            throw ConfigError("'coefficients[" + std::to_string(i) + "]' must be a string");
        src[i] = doc["coefficients"][i].get<std::string>();
    }
    try {
        cfg.coeffs = kslie::expr::parse_coeffs(src);
    } catch (const kslie::expr::ParseError& e) {
        throw ConfigError(std::string("coefficient expression: ") + e.what());
    }

    if (doc.contains("initial_conditions")) {
        const json& ics = doc["initial_conditions"];
        if (!ics.is_array() || ics.empty() || ics.size() > 2)
            throw ConfigError("'initial_conditions' must hold one or two points");
        for (const json& ic : ics) {
            if (!ic.is_array() || ic.size() != 5)
                throw ConfigError("each initial condition must be an array of 5 numbers");
            std::array<double, 5> c;
            for (int i = 0; i < 5; ++i) {
                if (!ic[i].is_number())
                    throw ConfigError("initial-condition entries must be numbers");
                c[i] = ic[i].get<double>();
            }
            if (c[1] <= 0) throw ConfigError("initial condition must satisfy y > 0");
            cfg.initial_conditions.emplace_back(c[0], c[1], c[2], c[3], c[4]);
        }
    }

    cfg.integrator.t0 = doc.value("t0", 0.0);
    cfg.integrator.t1 = doc.value("t1", 1.0);
    if (doc.contains("integrator")) {
        const json& it = doc["integrator"];
        if (!it.is_object()) throw ConfigError("'integrator' must be an object");
        reject_unknown_keys(
            it, {"rel_tol", "abs_tol", "h_init", "h_min", "h_max", "chart_floor"},
            "integrator.");
        cfg.integrator.rel_tol = it.value("rel_tol", cfg.integrator.rel_tol);
        cfg.integrator.abs_tol = it.value("abs_tol", cfg.integrator.abs_tol);
        cfg.integrator.h_init = it.value("h_init", cfg.integrator.h_init);
        cfg.integrator.h_min = it.value("h_min", cfg.integrator.h_min);
        cfg.integrator.h_max = it.value("h_max", cfg.integrator.h_max);
        cfg.integrator.chart_floor = it.value("chart_floor", cfg.integrator.chart_floor);
    }
    try {
        cfg.integrator.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("integrator: ") + e.what());
    }

    cfg.seed = doc.value("seed", cfg.seed);
    cfg.samples = doc.value("samples", cfg.samples);
    if (cfg.samples <= 0) throw ConfigError("'samples' must be positive");
    cfg.tolerance = doc.value("tolerance", cfg.tolerance);
    if (cfg.tolerance <= 0) throw ConfigError("'tolerance' must be positive");

    if (doc.contains("conserved")) {
        cfg.conserved.clear();
        for (const json& name : doc["conserved"]) {
            if (!name.is_string()) throw ConfigError("'conserved' entries must be strings");
            cfg.conserved.push_back(conserved_by_name(name.get<std::string>()));
        }
    }
    return cfg;
}

// --- verify -----------------------------------------------------------------

struct CheckResult {
    std::string name;
    double max_residual;
    double tolerance;
    bool pass;
};

double pairing_relative_residual(int alpha, int i, const kslie::Point5& p) {
    const kslie::OneForm5 lhs =
        kslie::contract(kslie::omega(i, p), kslie::eval_field(alpha, p));
    const kslie::OneForm5 res = kslie::verify_hamiltonian_pair(alpha, i, p);
    double scale = 1.0, worst = 0.0;
    for (int c = 0; c < 5; ++c) scale = std::max(scale, std::abs(lhs[c]));
    for (int c = 0; c < 5; ++c) worst = std::max(worst, std::abs(res[c]));
    return worst / scale;
}

template <class F>
double directional_residual(F&& f, int alpha, const kslie::Point5& p) {
    const kslie::OneForm5 df = kslie::differential(f, p);
    const kslie::Tangent5 X = kslie::eval_field(alpha, p);
    double deriv = 0, scale = 0;
    for (int i = 0; i < 5; ++i) {
        deriv += df[i] * X[i];
        scale += std::abs(df[i] * X[i]);
    }
    return std::abs(deriv) / std::max(1.0, scale);
}

std::vector<CheckResult> run_verify_checks(const RunConfig& cfg) {
    using namespace kslie;
    std::vector<CheckResult> results;
    auto add = [&](const std::string& name, double residual, double tol) {
        results.push_back({name, residual, tol, residual < tol});
    };
    ChartSampler sampler(cfg.seed);
    const std::vector<Point5> pts = sampler.points(cfg.samples);
    const std::size_t few = std::min<std::size_t>(pts.size(), 25);

    // closedness of all four forms (finite-difference oracle), residual
    // relative to the form's local magnitude
    for (int i = 1; i <= kNumForms; ++i) {
        double worst = 0;
        for (std::size_t k = 0; k < few; ++k) {
            const double res = closedness_residual(
                [i](const Point5& q) { return omega(i, q); }, pts[k], 1e-4);
            const double scale =
                std::max(1.0, omega(i, pts[k]).cwiseAbs().maxCoeff());
            worst = std::max(worst, res / scale);
        }
        add("closedness_w" + std::to_string(i), worst, 1e-6);
    }

    // kernel intersection triviality
    {
        int min_rank = 5;
        for (const Point5& p : pts) {
            std::vector<FormMatrix> forms;
            for (int i = 1; i <= kNumForms; ++i) forms.push_back(omega(i, p));
            min_rank = std::min(min_rank, stacked_kernel_rank(forms));
        }
        add("kernel_rank", std::abs(min_rank - 5.0), 0.5);
    }

    // the 20 Hamiltonian pairings
    {
        double worst = 0;
        for (const Point5& p : pts)
            for (int alpha = 1; alpha <= kNumFields; ++alpha)
                for (int i = 1; i <= kNumForms; ++i)
                    worst = std::max(worst, pairing_relative_residual(alpha, i, p));
        add("hamiltonian_pairing", worst, cfg.tolerance);
    }

    add("commutation_table", verify_commutation_table(pts).max_residual, cfg.tolerance);

    // Casimir brackets
    {
        const std::vector<std::pair<std::string, Covector4>> c1_thetas = {
            {"e1", {1, 0, 0, 0}}, {"e3", {0, 0, 1, 0}}, {"e4", {0, 0, 0, 1}},
            {"e1+e3", {1, 0, 1, 0}}};
        const std::vector<std::pair<std::string, Covector4>> c2_thetas = {
            {"e2", {0, 1, 0, 0}}, {"e1+e2", {1, 1, 0, 0}}};
        double worst1 = 0, worst2 = 0;
        const std::size_t n = std::min<std::size_t>(pts.size(), 50);
        for (std::size_t k = 0; k < n; ++k)
            for (int alpha = 1; alpha <= kNumFields; ++alpha) {
                for (const auto& [_, th] : c1_thetas)
                    worst1 = std::max(worst1,
                                      casimir1_bracket_residual(th, alpha, pts[k]));
                for (const auto& [_, th] : c2_thetas)
                    worst2 = std::max(worst2,
                                      casimir2_bracket_residual(th, alpha, pts[k]));
            }
        add("casimir_c1_brackets", worst1, cfg.tolerance);
        add("casimir_c2_brackets", worst2, cfg.tolerance);
    }

    // structure-constant fit and algebra checks
    {
        const std::size_t n = std::min<std::size_t>(pts.size(), 25);
        StructureFit fit =
            fit_structure_constants({pts.begin(), pts.begin() + n});
        add("structure_fit", fit.max_residual, cfg.tolerance);
        add("structure_antisymmetry", fit.tensor.max_antisymmetry_defect(), 1e-15);
        add("structure_jacobi", fit.tensor.max_jacobi_defect(), 1e-12);

        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(fit.tensor.sl2_killing_form());
        int pos = 0, neg = 0;
        for (int i = 0; i < 3; ++i) {
            if (eig.eigenvalues()(i) > 1e-9) ++pos;
            if (eig.eigenvalues()(i) < -1e-9) ++neg;
        }
        add("killing_signature_2_1", (pos == 2 && neg == 1) ? 0.0 : 1.0, 0.5);

        const auto& k = h_commutation_table();
        double worst = 0;
        for (int a = 0; a < kNumFields; ++a)
            for (int b = 0; b < kNumFields; ++b)
                for (int g = 0; g < kNumFields; ++g)
                    worst = std::max(worst, std::abs(k[a][b][g] + fit.tensor.c[a][b][g]));
        add("anti_homomorphism", worst, cfg.tolerance);
    }
    return results;
}

json report_json(const std::vector<CheckResult>& results, std::uint64_t seed) {
    json checks = json::array();
    bool all = true;
    for (const CheckResult& r : results) {
        checks.push_back({{"check", r.name},
                          {"max_residual", r.max_residual},
                          {"tolerance", r.tolerance},
                          {"pass", r.pass},
                          {"seed", seed}});
        all = all && r.pass;
    }
    return {{"seed", seed}, {"pass", all}, {"checks", checks}};
}

int cmd_verify(const RunConfig& cfg) {
    const auto results = run_verify_checks(cfg);
    const json rep = report_json(results, cfg.seed);
    std::cout << rep.dump(2) << "\n";
    return rep["pass"].get<bool>() ? 0 : kExitCheckFailure;
}

// --- simulate ---------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg, const std::string& out_prefix) {
    if (cfg.initial_conditions.empty())
        throw ConfigError("simulate requires 'initial_conditions'");
    const kslie::ProlongedPoint init(cfg.initial_conditions);
    const kslie::Trajectory traj = kslie::integrate(init, cfg.coeffs, cfg.integrator);

    kslie::write_csv_file(traj, out_prefix + ".csv");
    {
        std::ofstream f(out_prefix + ".json");
        if (!f) throw std::runtime_error("cannot open " + out_prefix + ".json");
        f << kslie::trajectory_json(traj) << "\n";
    }

    json rep = {{"samples", traj.size()},
                {"accepted_steps", traj.accepted_steps},
                {"rejected_steps", traj.rejected_steps},
                {"t_final", traj.times.back()}};
    if (init.m() == 2 && !cfg.conserved.empty()) {
        json drifts = json::object();
        for (const auto& [id, rec] : kslie::monitor(traj, cfg.conserved))
            drifts[std::string(kslie::conserved_name(id))] = {
                {"max_relative_drift", rec.max_relative_drift}, {"gaps", rec.gaps}};
        rep["drift"] = drifts;
    }
    std::cout << rep.dump(2) << "\n";
    return 0;
}

// --- superpose --------------------------------------------------------------

int cmd_superpose(const RunConfig& cfg, const std::string& out_path) {
    if (cfg.initial_conditions.size() != 2)
        throw ConfigError("superpose requires two initial conditions");

    const kslie::Point3 p1 = kslie::project(cfg.initial_conditions[0]);
    const kslie::Point3 p2 = kslie::project(cfg.initial_conditions[1]);
    if (p1.x == p2.x && p1.y == p2.y && p1.z == p2.z)
        std::cerr << "warning: coincident initial conditions give a degenerate "
                     "constants map\n";

    const kslie::ProlongedPoint init(cfg.initial_conditions);
    const kslie::Trajectory traj = kslie::integrate(init, cfg.coeffs, cfg.integrator);
    const kslie::ConstantsTriple k = kslie::constants_from_pair(p1, p2);

    json samples = json::array();
    double max_error = 0, max_condition = 0;
    std::size_t failures = 0;
    kslie::Point3 guess = p1;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const kslie::Point3 truth = kslie::project(traj.points[i].copies[0]);
        const kslie::Point3 known = kslie::project(traj.points[i].copies[1]);
        json rec = {{"t", traj.times[i]}};
        try {
            const kslie::NewtonResult r = kslie::reconstruct(known, k, guess);
            const double err = std::max({std::abs(r.root.x - truth.x),
                                         std::abs(r.root.y - truth.y),
                                         std::abs(r.root.z - truth.z)});
            max_error = std::max(max_error, err);
            max_condition = std::max(max_condition, r.condition);
            rec["error"] = err;
            rec["iterations"] = r.iterations;
            rec["condition"] = r.condition;
            guess = r.root;  // warm start
        } catch (const kslie::NewtonError& e) {
            rec["failure"] = e.what();
            ++failures;
            guess = truth;  // re-anchor so later samples stay meaningful
        }
        samples.push_back(std::move(rec));
    }

    const json rep = {{"constants", {k.k1, k.k2, k.k3}},
                      {"max_error", max_error},
                      {"max_condition", max_condition},
                      {"newton_failures", failures},
                      {"samples", samples}};
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open " + out_path);
    f << rep.dump(2) << "\n";
    std::cout << "max_error " << max_error << ", newton_failures " << failures << "\n";
    return failures == 0 ? 0 : kExitRuntimeError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"4-symplectic diffusion Riccati system toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_prefix, out_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> samples_override;

    CLI::App* verify = app.add_subcommand("verify", "run the identity checks");
    verify->add_option("--config", config_path, "JSON config")->required();
    verify->add_option("--seed", seed_override, "override the config seed");
    verify->add_option("--samples", samples_override, "override the sample count");

    CLI::App* simulate = app.add_subcommand("simulate", "integrate the system");
    simulate->add_option("--config", config_path, "JSON config")->required();
    simulate->add_option("--out-prefix", out_prefix, "output path prefix")->required();

    CLI::App* superpose =
        app.add_subcommand("superpose", "reconstruct copy 1 from copy 2 plus constants");
    superpose->add_option("--config", config_path, "JSON config")->required();
    superpose->add_option("--out", out_path, "report output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path);
        if (seed_override) cfg.seed = *seed_override;
        if (samples_override) {
            if (*samples_override <= 0) throw ConfigError("'samples' must be positive");
            cfg.samples = *samples_override;
        }
        if (verify->parsed()) return cmd_verify(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg, out_prefix);
        return cmd_superpose(cfg, out_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
}
