#include "qws/otoc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qws {

std::string_view to_string(Normalization n) {
    switch (n) {
        case Normalization::Trace: return "trace";
        case Normalization::Half: return "half";
        case Normalization::Unit: return "unit";
    }
    return "unknown";
}

Normalization parse_normalization(std::string_view text) {
    if (text == "trace" || text == "1/D") return Normalization::Trace;
    if (text == "half" || text == "1/2") return Normalization::Half;
    if (text == "unit" || text == "1") return Normalization::Unit;
    throw std::invalid_argument("unknown normalization '" + std::string(text) + "'");
}

double normalization_factor(Normalization n, int hilbert_dim) {
    switch (n) {
        case Normalization::Trace: return 1.0 / hilbert_dim;
        case Normalization::Half: return 0.5;
        case Normalization::Unit: break;
    }
    return 1.0;
}

AxisPair parse_pair(std::string_view text) {
    if (text.size() != 2) throw std::invalid_argument("axis pair must be two characters, got '" + std::string(text) + "'");
    return {parse_axis(text[0]), parse_axis(text[1])};
}

std::vector<AxisPair> parse_pairs(std::string_view comma_list) {
    std::vector<AxisPair> out;
    while (!comma_list.empty()) {
        const auto pos = comma_list.find(',');
        const auto item = comma_list.substr(0, pos);
        if (!item.empty()) out.push_back(parse_pair(item));
        if (pos == std::string_view::npos) break;
        comma_list.remove_prefix(pos + 1);
    }
    if (out.empty()) throw std::invalid_argument("no axis pairs given");
    return out;
}

std::vector<AxisPair> all_pairs() {
    std::vector<AxisPair> out;
    for (Axis mu : {Axis::X, Axis::Y, Axis::Z}) {
        for (Axis nu : {Axis::X, Axis::Y, Axis::Z}) out.push_back({mu, nu});
    }
    return out;
}

std::size_t OtocGrid::pair_index(AxisPair p) const {
    const auto it = std::find(pairs.begin(), pairs.end(), p);
    if (it == pairs.end()) throw std::out_of_range("pair " + p.label() + " not in grid");
    return static_cast<std::size_t>(it - pairs.begin());
}

namespace {

using Mat2 = Block2;

Mat2 mul(const Mat2& a, const Mat2& b) {
    Mat2 m{};
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) m[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
    }
    return m;
}

}  // namespace

std::vector<double> otoc_row(const Rank2Operator& evolved, Axis mu, double prefactor) {
    const int sites = evolved.sites();
    const Mat2 sigma = pauli(mu);
    std::vector<double> row(static_cast<std::size_t>(sites));
    const auto& a = evolved.plus_state();
    const auto& b = evolved.minus_state();
    for (int l = 0; l < sites; ++l) {
        const double weight = std::norm(a.up(l)) + std::norm(a.down(l)) + std::norm(b.up(l)) + std::norm(b.down(l));
        if (weight == 0.0) {
            row[l] = 0.0;
            continue;
        }
        const Mat2 m = site_block(evolved, l);
        const Mat2 sm = mul(sigma, m);
        const Mat2 p = mul(sm, sm);
        const double diff = weight - (p[0][0] + p[1][1]).real();
        // Both terms are O(weight); a difference within a few ulps of it is cancellation noise.
        if (std::abs(diff) <= 8.0 * std::numeric_limits<double>::epsilon() * weight) {
            row[l] = 0.0;
            continue;
        }
        double value = prefactor * diff;
        if (value < 0.0 && value > -1e-12) value = 0.0;
        row[l] = value;
    }
    return row;
}

namespace {

// Flattened pair-major grid for one realization, columns in centered order.
std::vector<double> single_realization(const WalkConfig& config, std::span<const AxisPair> pairs, double prefactor) {
    const int sites = config.sites;
    const int steps = config.steps;
    const std::size_t per_pair = static_cast<std::size_t>(steps + 1) * sites;
    std::vector<double> out(per_pair * pairs.size());
    const CoinSchedule schedule = sample_schedule(config);

    auto emit = [&](const Rank2Operator& op, Axis nu, int t) {
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            if (pairs[p].nu != nu) continue;
            const auto row = otoc_row(op, pairs[p].mu, prefactor);
            double* dst = out.data() + p * per_pair + static_cast<std::size_t>(t) * sites;
            for (int x = 0; x < sites; ++x) dst[centered_label(x, sites) + sites / 2] = row[x];
        }
    };

    for (Axis nu : {Axis::X, Axis::Y, Axis::Z}) {
        const bool needed = std::any_of(pairs.begin(), pairs.end(), [nu](const AxisPair& p) { return p.nu == nu; });
        if (!needed) continue;
        Rank2Operator op = initial_local_operator(nu, 0, sites);
        WalkerState scratch(sites);
        emit(op, nu, 0);
        for (int t = 1; t <= steps; ++t) {
            conjugate_step_inplace(op, schedule.row(t), Direction::Forward, scratch);
            emit(op, nu, t);
        }
    }
    return out;
}

OtocGrid unpack(const WalkConfig& config, std::span<const AxisPair> pairs, Normalization norm,
                const EnsembleResult& result) {
    OtocGrid grid;
    grid.config = config;
    grid.normalization = norm;
    grid.pairs.assign(pairs.begin(), pairs.end());
    grid.realizations = result.realizations;
    const std::size_t per_pair = static_cast<std::size_t>(config.steps + 1) * config.sites;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto first = static_cast<std::ptrdiff_t>(p * per_pair);
        const auto last = static_cast<std::ptrdiff_t>((p + 1) * per_pair);
        grid.values.emplace_back(result.mean.begin() + first, result.mean.begin() + last);
        grid.std_error.emplace_back(result.std_error.begin() + first, result.std_error.begin() + last);
    }
    return grid;
}

}  // namespace

OtocGrid otoc_grid(const WalkConfig& config, std::span<const AxisPair> pairs, Normalization norm) {
    config.validate();
    if (pairs.empty()) throw std::invalid_argument("no axis pairs requested");
    const double prefactor = normalization_factor(norm, config.hilbert_dim());
    EnsembleResult single;
    single.realizations = 1;
    single.mean = single_realization(config, pairs, prefactor);
    single.std_error.assign(single.mean.size(), 0.0);
    return unpack(config, pairs, norm, single);
}

OtocGrid otoc_ensemble(const WalkConfig& config, std::span<const AxisPair> pairs, Normalization norm,
                       int realizations, int workers) {
    config.validate();
    if (pairs.empty()) throw std::invalid_argument("no axis pairs requested");
    const double prefactor = normalization_factor(norm, config.hilbert_dim());
    const auto result = run_ensemble(
        [&](std::uint64_t seed, int) {
            WalkConfig c = config;
            c.seed = seed;
            return single_realization(c, pairs, prefactor);
        },
        EnsembleSpec{realizations, config.seed}, workers);
    return unpack(config, pairs, norm, result);
}

namespace {

double grid_max(const OtocGrid& grid, std::size_t pair) {
    const auto& v = grid.values.at(pair);
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

int extent_at(const OtocGrid& grid, std::size_t pair, int t, double cut) {
    const int half = grid.sites() / 2;
    int best = -1;
    for (int label = -half; label < half; ++label) {
        if (grid.at(pair, t, label) >= cut) best = std::max(best, std::abs(label));
    }
    return best;
}

}  // namespace

int front_extent(const OtocGrid& grid, std::size_t pair, int t, double threshold_fraction) {
    const double peak = grid_max(grid, pair);
    if (peak <= 0.0) return -1;
    return extent_at(grid, pair, t, threshold_fraction * peak);
}

FrontFit front_velocity(const OtocGrid& grid, std::size_t pair, double threshold_fraction) {
    if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
        throw std::invalid_argument("threshold fraction must lie in (0, 1)");
    }
    FrontFit fit;
    const double peak = grid_max(grid, pair);
    fit.extent.assign(static_cast<std::size_t>(grid.steps()) + 1, -1);
    if (peak <= 0.0) return fit;
    for (int t = 0; t <= grid.steps(); ++t) fit.extent[t] = extent_at(grid, pair, t, threshold_fraction * peak);

    const int first = (grid.steps() + 3) / 4;
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int t = first; t <= grid.steps(); ++t) {
        if (fit.extent[t] < 0) continue;
        n += 1;
        sx += t;
        sy += fit.extent[t];
        sxx += static_cast<double>(t) * t;
        sxy += static_cast<double>(t) * fit.extent[t];
    }
    const double denom = n * sxx - sx * sx;
    if (n < 2 || denom == 0.0) return fit;
    fit.found = true;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double rss = 0.0;
    for (int t = first; t <= grid.steps(); ++t) {
        if (fit.extent[t] < 0) continue;
        const double r = fit.extent[t] - (fit.intercept + fit.slope * t);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

}  // namespace qws
