#pragma once

// Discrete-time quantum walk on a periodic ring: coin, disorder schedules and
// the single-step unitary action on coin (x) position amplitudes.

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qws {

using Complex = std::complex<double>;
using Coin = std::array<std::array<double, 2>, 2>;

inline constexpr double kPi = 3.14159265358979323846;

/// Real rotation coin [[cos t, sin t], [-sin t, cos t]] acting on (up, down).
struct CoinParams {
    double theta = 0.0;
};

Coin coin_matrix(CoinParams params);

enum class DisorderKind { Clean, Spatial, Temporal };
enum class Distribution { UniformInterval, Binary };

std::string_view to_string(DisorderKind kind);
std::string_view to_string(Distribution dist);
DisorderKind parse_disorder_kind(std::string_view text);
Distribution parse_distribution(std::string_view text);

struct DisorderSpec {
    DisorderKind kind = DisorderKind::Clean;
    double theta0 = 0.0;
    double strength = 0.0;  // W, full width of the angle window
    Distribution distribution = Distribution::UniformInterval;

    void validate() const;
};

struct WalkConfig {
    int sites = 0;  // L, even
    DisorderSpec disorder;
    int steps = 0;  // T
    std::uint64_t seed = 0;

    void validate() const;
    int hilbert_dim() const { return 2 * sites; }
    /// True when T > L/2, i.e. the ring wraparound can reach back inside the light cone.
    bool exceeds_causal_horizon() const { return 2 * steps > sites; }
};

/// Coin angles for one realization. Spatial holds L angles reused every step,
/// Temporal holds T angles (one per step), Clean holds the single angle theta0.
class CoinSchedule {
public:
    CoinSchedule(DisorderKind kind, std::vector<double> angles);

    DisorderKind kind() const { return kind_; }
    std::span<const double> angles() const { return angles_; }

    /// Angles active at step `step` (1-based): L values for Spatial, one value otherwise.
    std::span<const double> row(int step) const;

private:
    DisorderKind kind_;
    std::vector<double> angles_;
};

CoinSchedule sample_schedule(const DisorderSpec& spec, int sites, int steps, std::uint64_t seed);
inline CoinSchedule sample_schedule(const WalkConfig& config) {
    return sample_schedule(config.disorder, config.sites, config.steps, config.seed);
}

/// Spinor index layout shared by every state vector: amplitude (coin, site) at 2*site + coin.
enum Spin : int { Up = 0, Down = 1 };
constexpr std::size_t amp_index(int site, int spin) { return 2 * static_cast<std::size_t>(site) + spin; }

/// 2L amplitudes over coin (x) position.
class WalkerState {
public:
    WalkerState() = default;
    explicit WalkerState(int sites);
    explicit WalkerState(std::vector<Complex> amplitudes);

    /// Spinor (up, down) placed on one site; the spinor is used as given.
    static WalkerState localized(int sites, int site, Complex up, Complex down);

    int sites() const { return static_cast<int>(amps_.size() / 2); }
    std::size_t dim() const { return amps_.size(); }
    std::span<const Complex> amplitudes() const { return amps_; }
    std::span<Complex> amplitudes() { return amps_; }
    Complex up(int site) const { return amps_[amp_index(site, Up)]; }
    Complex down(int site) const { return amps_[amp_index(site, Down)]; }

    double norm() const;
    Complex inner(const WalkerState& other) const;  // <this|other>

private:
    std::vector<Complex> amps_;
};

/// One walk step U = S (C (x) I). Down components move to site+1, up components to site-1.
/// `coin_row` holds either one angle or one angle per site.
WalkerState step_unitary_action(const WalkerState& state, std::span<const double> coin_row);

/// U^dagger, the exact inverse of step_unitary_action.
WalkerState step_adjoint_action(const WalkerState& state, std::span<const double> coin_row);

/// In-place kernels behind the two actions; `out` must not alias `in`.
void apply_step(std::span<const Complex> in, std::span<Complex> out, std::span<const double> coin_row);
void apply_step_adjoint(std::span<const Complex> in, std::span<Complex> out, std::span<const double> coin_row);

/// Internal ring index (origin at 0) to centered label in [-L/2, L/2).
constexpr int centered_label(int site, int sites) {
    const int half = sites / 2;
    return ((site + half) % sites) - half;
}
constexpr int internal_site(int label, int sites) { return ((label % sites) + sites) % sites; }

}  // namespace qws
