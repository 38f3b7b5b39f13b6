#include "qws/walk_core.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qws {

Coin coin_matrix(CoinParams params) {
    const double c = std::cos(params.theta);
    const double s = std::sin(params.theta);
    return {{{c, s}, {-s, c}}};
}

std::string_view to_string(DisorderKind kind) {
    switch (kind) {
        case DisorderKind::Clean: return "clean";
        case DisorderKind::Spatial: return "spatial";
        case DisorderKind::Temporal: return "temporal";
    }
    return "unknown";
}

std::string_view to_string(Distribution dist) {
    return dist == Distribution::Binary ? "binary" : "uniform";
}

DisorderKind parse_disorder_kind(std::string_view text) {
    if (text == "clean") return DisorderKind::Clean;
    if (text == "spatial") return DisorderKind::Spatial;
    if (text == "temporal") return DisorderKind::Temporal;
    throw std::invalid_argument("unknown disorder kind '" + std::string(text) + "'");
}

Distribution parse_distribution(std::string_view text) {
    if (text == "uniform") return Distribution::UniformInterval;
    if (text == "binary") return Distribution::Binary;
    throw std::invalid_argument("unknown disorder distribution '" + std::string(text) + "'");
}

void DisorderSpec::validate() const {
    if (!std::isfinite(theta0)) throw std::invalid_argument("theta0 must be finite");
    if (!(strength >= 0.0 && strength <= kPi)) {
        throw std::invalid_argument("disorder strength W must lie in [0, pi]");
    }
}

void WalkConfig::validate() const {
    if (sites <= 0 || sites % 2 != 0) throw std::invalid_argument("sites must be a positive even integer");
    if (steps <= 0) throw std::invalid_argument("steps must be a positive integer");
    disorder.validate();
}

CoinSchedule::CoinSchedule(DisorderKind kind, std::vector<double> angles)
    : kind_(kind), angles_(std::move(angles)) {
    if (angles_.empty()) throw std::invalid_argument("coin schedule needs at least one angle");
    if (kind_ == DisorderKind::Clean && angles_.size() != 1) {
        throw std::invalid_argument("clean schedule holds exactly one angle");
    }
}

std::span<const double> CoinSchedule::row(int step) const {
    switch (kind_) {
        case DisorderKind::Spatial: return angles_;
        case DisorderKind::Temporal:
            if (step < 1 || static_cast<std::size_t>(step) > angles_.size()) {
                throw std::out_of_range("temporal schedule has no angle for step " + std::to_string(step));
            }
            return std::span<const double>(angles_).subspan(step - 1, 1);
        case DisorderKind::Clean: break;
    }
    return angles_;
}

CoinSchedule sample_schedule(const DisorderSpec& spec, int sites, int steps, std::uint64_t seed) {
    spec.validate();
    if (spec.kind == DisorderKind::Clean) return CoinSchedule(DisorderKind::Clean, {spec.theta0});

    const int count = spec.kind == DisorderKind::Spatial ? sites : steps;
    if (count <= 0) throw std::invalid_argument("schedule length must be positive");

    std::mt19937_64 gen(seed);
    const double lo = spec.theta0 - 0.5 * spec.strength;
    const double hi = spec.theta0 + 0.5 * spec.strength;
    std::vector<double> angles(static_cast<std::size_t>(count));
    for (auto& a : angles) {
        const std::uint64_t bits = gen();
        if (spec.strength == 0.0) {
            a = spec.theta0;
        } else if (spec.distribution == Distribution::Binary) {
            a = (bits >> 63) ? hi : lo;
        } else {
            // 53-bit uniform in [0, 1); portable unlike std::uniform_real_distribution
            const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
            a = lo + spec.strength * u;
        }
    }
    return CoinSchedule(spec.kind, std::move(angles));
}

WalkerState::WalkerState(int sites) : amps_(2 * static_cast<std::size_t>(sites)) {
    if (sites <= 0) throw std::invalid_argument("state needs a positive number of sites");
}

WalkerState::WalkerState(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty() || amps_.size() % 2 != 0) {
        throw std::invalid_argument("state dimension must be a positive multiple of 2");
    }
}

WalkerState WalkerState::localized(int sites, int site, Complex up, Complex down) {
    if (site < 0 || site >= sites) throw std::out_of_range("site outside lattice");
    WalkerState s(sites);
    s.amps_[amp_index(site, Up)] = up;
    s.amps_[amp_index(site, Down)] = down;
    return s;
}

double WalkerState::norm() const {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return std::sqrt(acc);
}

Complex WalkerState::inner(const WalkerState& other) const {
    if (other.amps_.size() != amps_.size()) throw std::invalid_argument("state dimension mismatch");
    Complex acc{};
    for (std::size_t i = 0; i < amps_.size(); ++i) acc += std::conj(amps_[i]) * other.amps_[i];
    return acc;
}

namespace {

void check_dims(std::span<const Complex> in, std::span<Complex> out, std::span<const double> coin_row) {
    const std::size_t sites = in.size() / 2;
    if (in.size() % 2 != 0 || in.empty()) throw std::invalid_argument("state dimension must be a positive multiple of 2");
    if (out.size() != in.size()) throw std::invalid_argument("output buffer dimension mismatch");
    if (coin_row.size() != 1 && coin_row.size() != sites) {
        throw std::invalid_argument("coin row has " + std::to_string(coin_row.size()) + " angles for " +
                                    std::to_string(sites) + " sites");
    }
}

}  // namespace

void apply_step(std::span<const Complex> in, std::span<Complex> out, std::span<const double> coin_row) {
    check_dims(in, out, coin_row);
    const int sites = static_cast<int>(in.size() / 2);
    const bool uniform = coin_row.size() == 1;
    double c = std::cos(coin_row[0]);
    double s = std::sin(coin_row[0]);
    for (int x = 0; x < sites; ++x) {
        if (!uniform) {
            c = std::cos(coin_row[x]);
            s = std::sin(coin_row[x]);
        }
        const Complex u = in[amp_index(x, Up)];
        const Complex d = in[amp_index(x, Down)];
        const int left = x == 0 ? sites - 1 : x - 1;
        const int right = x == sites - 1 ? 0 : x + 1;
        out[amp_index(left, Up)] = c * u + s * d;
        out[amp_index(right, Down)] = -s * u + c * d;
    }
}

void apply_step_adjoint(std::span<const Complex> in, std::span<Complex> out, std::span<const double> coin_row) {
    check_dims(in, out, coin_row);
    const int sites = static_cast<int>(in.size() / 2);
    const bool uniform = coin_row.size() == 1;
    double c = std::cos(coin_row[0]);
    double s = std::sin(coin_row[0]);
    for (int x = 0; x < sites; ++x) {
        if (!uniform) {
            c = std::cos(coin_row[x]);
            s = std::sin(coin_row[x]);
        }
        const int left = x == 0 ? sites - 1 : x - 1;
        const int right = x == sites - 1 ? 0 : x + 1;
        const Complex u = in[amp_index(left, Up)];
        const Complex d = in[amp_index(right, Down)];
        out[amp_index(x, Up)] = c * u - s * d;
        out[amp_index(x, Down)] = s * u + c * d;
    }
}

WalkerState step_unitary_action(const WalkerState& state, std::span<const double> coin_row) {
    WalkerState out(state.sites());
    apply_step(state.amplitudes(), out.amplitudes(), coin_row);
    return out;
}

WalkerState step_adjoint_action(const WalkerState& state, std::span<const double> coin_row) {
    WalkerState out(state.sites());
    apply_step_adjoint(state.amplitudes(), out.amplitudes(), coin_row);
    return out;
}

}  // namespace qws
