#pragma once

// Seeded random chart points for verification runs: y in [0.5, 3], the other
// coordinates in [-2, 2]. Shared by the CLI and the test suites so reports
// are reproducible from the seed alone.

#include <random>
#include <vector>

#include "kslie/geometry.hpp"
#include "kslie/prolong.hpp"

namespace kslie {

class ChartSampler {
public:
    explicit ChartSampler(std::uint64_t seed) : rng_(seed) {}

    Point5 point() {
        return {box_(rng_), ybox_(rng_), box_(rng_), box_(rng_), box_(rng_)};
    }

    std::vector<Point5> points(std::size_t n) {
        std::vector<Point5> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(point());
        return out;
    }

    ProlongedPoint prolonged(std::size_t m = 2) {
        std::vector<Point5> copies;
        for (std::size_t i = 0; i < m; ++i) copies.push_back(point());
        return ProlongedPoint(std::move(copies));
    }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }

private:
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> box_{-2.0, 2.0};
    std::uniform_real_distribution<double> ybox_{0.5, 3.0};
};

}  // namespace kslie
