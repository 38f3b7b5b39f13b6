#include "qws/state_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qws {

std::string_view to_string(InitialState s) {
    switch (s) {
        case InitialState::Symmetric: return "sym";
        case InitialState::Up: return "up";
        case InitialState::Down: return "down";
    }
    return "unknown";
}

InitialState parse_initial_state(std::string_view text) {
    if (text == "sym") return InitialState::Symmetric;
    if (text == "up") return InitialState::Up;
    if (text == "down") return InitialState::Down;
    throw std::invalid_argument("unknown initial state '" + std::string(text) + "'");
}

WalkerState initial_state(int sites, InitialState kind) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (kind) {
        case InitialState::Up: return WalkerState::localized(sites, 0, 1.0, 0.0);
        case InitialState::Down: return WalkerState::localized(sites, 0, 0.0, 1.0);
        case InitialState::Symmetric: break;
    }
    return WalkerState::localized(sites, 0, Complex{r, 0.0}, Complex{0.0, r});
}

std::vector<double> position_distribution(const WalkerState& state) {
    std::vector<double> p(static_cast<std::size_t>(state.sites()));
    for (int x = 0; x < state.sites(); ++x) p[x] = std::norm(state.up(x)) + std::norm(state.down(x));
    return p;
}

Trajectory evolve(const WalkConfig& config, const WalkerState& initial) {
    config.validate();
    if (initial.sites() != config.sites) throw std::invalid_argument("initial state does not match lattice size");
    return evolve(sample_schedule(config), config.steps, initial);
}

Trajectory evolve(const CoinSchedule& schedule, int steps, const WalkerState& initial) {
    Trajectory traj;
    traj.sites = initial.sites();
    traj.steps = steps;
    traj.probabilities.reserve(static_cast<std::size_t>(steps + 1) * traj.sites);
    traj.ipr.reserve(static_cast<std::size_t>(steps) + 1);

    auto record = [&traj](const WalkerState& s) {
        const auto p = position_distribution(s);
        traj.probabilities.insert(traj.probabilities.end(), p.begin(), p.end());
        traj.ipr.push_back(ipr(p));
    };

    WalkerState cur = initial;
    WalkerState next(initial.sites());
    record(cur);
    for (int t = 1; t <= steps; ++t) {
        apply_step(cur.amplitudes(), next.amplitudes(), schedule.row(t));
        std::swap(cur, next);
        record(cur);
    }
    return traj;
}

double ipr(std::span<const double> distribution) {
    double acc = 0.0;
    for (double p : distribution) acc += p * p;
    return acc;
}

double position_variance(std::span<const double> distribution) {
    const int sites = static_cast<int>(distribution.size());
    double total = 0.0, mean = 0.0;
    for (int x = 0; x < sites; ++x) {
        total += distribution[x];
        mean += distribution[x] * centered_label(x, sites);
    }
    mean /= total;
    double var = 0.0;
    for (int x = 0; x < sites; ++x) {
        const double d = centered_label(x, sites) - mean;
        var += distribution[x] * d * d;
    }
    return var / total;
}

namespace {

double radicand(double k, double theta) {
    const double c = std::cos(theta);
    const double r = k * k * c + 2.0 * (1.0 - c);
    if (r < 0.0 || !std::isfinite(r)) {
        throw std::domain_error("dispersion radicand negative at k=" + std::to_string(k) +
                                ", theta=" + std::to_string(theta));
    }
    return r;
}

}  // namespace

double dispersion(double k, double theta) { return std::sqrt(radicand(k, theta)); }

double group_velocity(double k, double theta) {
    const double r = radicand(k, theta);
    if (r == 0.0) return 1.0;  // (k, theta) = (0, 0), continuous along theta = 0
    return k * std::cos(theta) / std::sqrt(r);
}

double butterfly_velocity(double theta, int k_points) {
    if (k_points < 64) throw std::invalid_argument("butterfly_velocity needs at least 64 k points");
    double best = 0.0;
    for (int i = 0; i < k_points; ++i) {
        const double k = -kPi + 2.0 * kPi * i / (k_points - 1);
        best = std::max(best, std::abs(group_velocity(k, theta)));
    }
    return best;
}

std::optional<double> localization_length(double theta) {
    if (!(theta >= 0.0 && theta <= 0.5 * kPi)) {
        throw std::domain_error("localization length defined for theta in [0, pi/2]");
    }
    const double c = std::cos(theta);
    if (c >= 1.0) return std::nullopt;
    if (c <= 1e-15) return 0.0;
    return 1.0 / std::abs(std::log(c));
}

}  // namespace qws
