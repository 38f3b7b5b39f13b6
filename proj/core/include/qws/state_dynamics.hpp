#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qws/walk_core.hpp"

namespace qws {

/// Position distributions p_x(t) for t = 0..T, stored row-major in internal site order.
struct Trajectory {
    int sites = 0;
    int steps = 0;
    std::vector<double> probabilities;  // (T+1) x L
    std::vector<double> ipr;            // T+1 entries

    std::span<const double> row(int t) const {
        return std::span<const double>(probabilities).subspan(static_cast<std::size_t>(t) * sites, sites);
    }
};

enum class InitialState { Symmetric, Up, Down };
std::string_view to_string(InitialState s);
InitialState parse_initial_state(std::string_view text);

/// Walker at the origin with the given coin state; Symmetric is (|up> + i|down>)/sqrt(2).
WalkerState initial_state(int sites, InitialState kind);

std::vector<double> position_distribution(const WalkerState& state);

/// Evolves `initial` through config.steps steps using the schedule drawn from config.seed.
Trajectory evolve(const WalkConfig& config, const WalkerState& initial);
Trajectory evolve(const CoinSchedule& schedule, int steps, const WalkerState& initial);

/// Sum of p_x^2.
double ipr(std::span<const double> distribution);

/// Second central moment of the position distribution over centered labels.
double position_variance(std::span<const double> distribution);

/// Positive branch of omega(k, theta) = sqrt(k^2 cos(theta) + 2 (1 - cos(theta))).
/// Throws std::domain_error when the radicand is negative.
double dispersion(double k, double theta);

/// d omega / dk on the positive branch. The removable singularity at (0, 0) returns 1.
double group_velocity(double k, double theta);

/// max_k |v_g(k, theta)| over `k_points` evenly spaced points on [-pi, pi] (endpoints included).
double butterfly_velocity(double theta, int k_points = 1024);

/// 1 / |ln cos(theta)| for theta in [0, pi/2]; std::nullopt means unbounded (theta = 0).
std::optional<double> localization_length(double theta);

}  // namespace qws
