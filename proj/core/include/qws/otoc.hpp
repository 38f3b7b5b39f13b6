#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qws/ensemble.hpp"
#include "qws/operator_dynamics.hpp"
#include "qws/walk_core.hpp"

namespace qws {

/// Prefactor N applied after the 1/2 of the squared-commutator expectation.
enum class Normalization {
    Trace,  // 1/D, infinite-temperature normalized trace
    Half,   // 1/2
    Unit,   // 1
};

std::string_view to_string(Normalization n);
Normalization parse_normalization(std::string_view text);
double normalization_factor(Normalization n, int hilbert_dim);

/// (mu, nu): W^mu sits at site l, V^nu at the origin.
struct AxisPair {
    Axis mu = Axis::X;
    Axis nu = Axis::X;

    std::string label() const { return {axis_char(mu), axis_char(nu)}; }
    friend bool operator==(const AxisPair&, const AxisPair&) = default;
};

AxisPair parse_pair(std::string_view text);
std::vector<AxisPair> parse_pairs(std::string_view comma_list);
std::vector<AxisPair> all_pairs();

/// C_{mu nu}(l, t) on t = 0..T and centered labels l = -L/2..L/2-1.
struct OtocGrid {
    WalkConfig config;
    Normalization normalization = Normalization::Trace;
    std::vector<AxisPair> pairs;
    int realizations = 1;
    // Per pair: (T+1) x L row-major, column = l + L/2.
    std::vector<std::vector<double>> values;
    std::vector<std::vector<double>> std_error;

    int sites() const { return config.sites; }
    int steps() const { return config.steps; }
    double at(std::size_t pair, int t, int label) const {
        return values[pair][static_cast<std::size_t>(t) * sites() + (label + sites() / 2)];
    }
    double error_at(std::size_t pair, int t, int label) const {
        return std_error[pair][static_cast<std::size_t>(t) * sites() + (label + sites() / 2)];
    }
    std::size_t pair_index(AxisPair p) const;
};

/// One time slice for every site l (internal order) from V^nu_0 pushed forward t steps:
/// C(l) = N (|alpha_l|^2 + |beta_l|^2 - Re Tr[sigma^mu M_l sigma^mu M_l]).
std::vector<double> otoc_row(const Rank2Operator& evolved, Axis mu, double prefactor);

/// Single realization using the schedule drawn from config.seed.
OtocGrid otoc_grid(const WalkConfig& config, std::span<const AxisPair> pairs, Normalization norm);

/// Cell-wise ensemble mean and standard error; realization r uses derive_seed(config.seed, r).
OtocGrid otoc_ensemble(const WalkConfig& config, std::span<const AxisPair> pairs, Normalization norm,
                       int realizations, int workers = default_workers());

struct FrontFit {
    bool found = false;          // false: degenerate grid, no front
    double slope = 0.0;          // sites per step
    double intercept = 0.0;
    double residual = 0.0;       // RMS deviation of the fitted points
    std::vector<int> extent;     // per t, largest |l| over threshold, -1 if none
};

/// Largest |l| at time t with C >= threshold_fraction * (global max of the pair's grid); -1 if none.
int front_extent(const OtocGrid& grid, std::size_t pair, int t, double threshold_fraction = 0.1);

/// Least-squares slope of the front extent against t over t in [T/4, T].
FrontFit front_velocity(const OtocGrid& grid, std::size_t pair, double threshold_fraction = 0.1);

}  // namespace qws
