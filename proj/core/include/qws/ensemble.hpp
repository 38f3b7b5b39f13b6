#pragma once

// Seeded disorder ensembles. Realization r draws its seed from a counter-based
// mix of (base_seed, r), runs on any worker, and writes into its own slot; the
// reduction walks the slots in index order, so results do not depend on the
// worker count or on scheduling.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qws {

/// Raised when a realization fails; carries its index, derived seed and original exception.
class EnsembleError : public std::runtime_error {
public:
    EnsembleError(int index, std::uint64_t seed, std::exception_ptr cause, const std::string& what)
        : std::runtime_error("realization " + std::to_string(index) + " (seed " + std::to_string(seed) +
                             ") failed: " + what),
          index_(index), seed_(seed), cause_(std::move(cause)) {}

    int index() const { return index_; }
    std::uint64_t seed() const { return seed_; }
    std::exception_ptr cause() const { return cause_; }

private:
    int index_;
    std::uint64_t seed_;
    std::exception_ptr cause_;
};

struct EnsembleSpec {
    int realizations = 100;
    std::uint64_t base_seed = 0;
};

struct EnsembleResult {
    int realizations = 0;
    std::vector<double> mean;
    std::vector<double> std_error;  // sample std / sqrt(N); zero when N == 1
};

/// splitmix64 finalizer: a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Distinct for distinct r at fixed base: r -> base + (r+1)*gamma is injective mod 2^64 and mix64 is a bijection.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t realization) {
    return mix64(base_seed + (realization + 1) * 0x9e3779b97f4a7c15ULL);
}

/// Worker budget from QWS_WORKERS, falling back to the hardware concurrency.
int default_workers();

/// Cell-wise mean and standard error over equally sized samples, summed in index order.
EnsembleResult reduce_mean_stderr(const std::vector<std::vector<double>>& samples);

/// `task(seed, index)` must be a pure function of its arguments returning a fixed-length vector.
template <class Task>
EnsembleResult run_ensemble(Task&& task, const EnsembleSpec& spec, int workers = default_workers()) {
    if (spec.realizations < 1) throw std::invalid_argument("ensemble needs at least one realization");
    const int n = spec.realizations;
    std::vector<std::vector<double>> slots(static_cast<std::size_t>(n));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    std::vector<std::string> messages(static_cast<std::size_t>(n));
    std::atomic<int> next{0};

    auto worker = [&] {
        for (int r = next.fetch_add(1); r < n; r = next.fetch_add(1)) {
            try {
                slots[r] = task(derive_seed(spec.base_seed, static_cast<std::uint64_t>(r)), r);
            } catch (const std::exception& e) {
                errors[r] = std::current_exception();
                messages[r] = e.what();
            } catch (...) {
                errors[r] = std::current_exception();
                messages[r] = "unknown error";
            }
        }
    };

    const int pool = std::max(1, std::min(workers, n));
    if (pool == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(pool));
        for (int i = 0; i < pool; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    for (int r = 0; r < n; ++r) {
        if (errors[r]) throw EnsembleError(r, derive_seed(spec.base_seed, r), errors[r], messages[r]);
    }
    return reduce_mean_stderr(slots);
}

}  // namespace qws
