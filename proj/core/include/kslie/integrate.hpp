#pragma once

// Adaptive Dormand-Prince 5(4) integration of the system and its diagonal
// prolongations, with conserved-quantity drift monitoring and CSV/JSON
// trajectory export.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kslie/expr.hpp"
#include "kslie/prolong.hpp"

namespace kslie {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-12;
    double h_max = 0.1;
    double t0 = 0.0;
    double t1 = 1.0;
    double chart_floor = 1e-6;  // abort when any y_a drops below this

    void validate() const;
};

struct IntegrationError : std::runtime_error {
    double t_reached;
    IntegrationError(const std::string& msg, double t)
        : std::runtime_error(msg + " (t = " + std::to_string(t) + ")"), t_reached(t) {}
};

struct Trajectory {
    std::vector<double> times;             // strictly increasing
    std::vector<ProlongedPoint> points;    // same length as times
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;

    std::size_t size() const { return times.size(); }
};

Trajectory integrate(const ProlongedPoint& init, const expr::CoeffSet& coeffs,
                     const IntegratorConfig& cfg);

struct DriftRecord {
    double max_relative_drift = 0;  // |Q(t) - Q(t0)| / max(1, |Q(t0)|)
    std::size_t gaps = 0;           // samples where the quantity was singular
};

/// Per-quantity drift along an m = 2 trajectory.
std::map<ConservedQuantityId, DriftRecord> monitor(
    const Trajectory& traj, const std::vector<ConservedQuantityId>& ids);

/// Header t,x1,y1,z1,u1,v1[,x2,...]; %.17g round-trippable values.
void write_csv(const Trajectory& traj, std::ostream& out);
void write_csv_file(const Trajectory& traj, const std::string& path);

/// One JSON record per sample: {"t": ..., "state": [[...5 reals...], ...]}.
std::string trajectory_json(const Trajectory& traj);

}  // namespace kslie
