#pragma once

// Hand-rolled generators for property tests. Each case is reproducible from its seed.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qws/walk_core.hpp"

namespace qws::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::uint64_t word() { return rng_(); }

    int even_sites(int lo, int hi) { return 2 * integer(lo / 2, hi / 2); }

    WalkerState random_state(int sites) {
        std::normal_distribution<double> n;
        std::vector<Complex> amps(2 * static_cast<std::size_t>(sites));
        double acc = 0.0;
        for (auto& a : amps) {
            a = {n(rng_), n(rng_)};
            acc += std::norm(a);
        }
        for (auto& a : amps) a /= std::sqrt(acc);
        return WalkerState(std::move(amps));
    }

    std::vector<double> random_row(int sites) {
        std::vector<double> row(static_cast<std::size_t>(sites));
        for (auto& a : row) a = uniform(0.0, 2.0 * kPi);
        return row;
    }

    DisorderSpec random_disorder() {
        DisorderSpec spec;
        spec.kind = static_cast<DisorderKind>(integer(0, 2));
        spec.theta0 = uniform(0.0, 0.5 * kPi);
        spec.strength = spec.kind == DisorderKind::Clean ? 0.0 : uniform(0.0, kPi);
        spec.distribution = integer(0, 1) ? Distribution::Binary : Distribution::UniformInterval;
        return spec;
    }

private:
    std::mt19937_64 rng_;
};

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline WalkConfig make_config(int sites, int steps, DisorderKind kind, double theta0, double strength,
                              std::uint64_t seed = 1) {
    WalkConfig c;
    c.sites = sites;
    c.steps = steps;
    c.seed = seed;
    c.disorder.kind = kind;
    c.disorder.theta0 = theta0;
    c.disorder.strength = strength;
    return c;
}

}  // namespace qws::testing
