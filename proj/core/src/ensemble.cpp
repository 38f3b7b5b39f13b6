#include "qws/ensemble.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace qws {

int default_workers() {
    if (const char* env = std::getenv("QWS_WORKERS")) {
        int value = 0;
        const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), value);
        if (ec == std::errc{} && *ptr == '\0' && value > 0) return value;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

EnsembleResult reduce_mean_stderr(const std::vector<std::vector<double>>& samples) {
    if (samples.empty()) throw std::invalid_argument("no samples to reduce");
    const std::size_t cells = samples.front().size();
    for (const auto& s : samples) {
        if (s.size() != cells) throw std::invalid_argument("realizations returned differently sized outputs");
    }
    const auto n = static_cast<double>(samples.size());

    EnsembleResult out;
    out.realizations = static_cast<int>(samples.size());
    out.mean.assign(cells, 0.0);
    out.std_error.assign(cells, 0.0);
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < cells; ++i) out.mean[i] += s[i];
    }
    for (auto& m : out.mean) m /= n;
    if (samples.size() == 1) return out;

    // Cells where every realization agrees keep the exact common value.
    std::vector<char> constant(cells, 1);
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < cells; ++i) constant[i] &= static_cast<char>(s[i] == samples.front()[i]);
    }
    for (std::size_t i = 0; i < cells; ++i) {
        if (constant[i]) out.mean[i] = samples.front()[i];
    }

    for (const auto& s : samples) {
        for (std::size_t i = 0; i < cells; ++i) {
            const double d = s[i] - out.mean[i];
            out.std_error[i] += d * d;
        }
    }
    for (std::size_t i = 0; i < cells; ++i) {
        out.std_error[i] = constant[i] ? 0.0 : std::sqrt(out.std_error[i] / (n - 1.0) / n);
    }
    return out;
}

}  // namespace qws
