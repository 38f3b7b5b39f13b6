#include <doctest.h>

#include <cmath>
#include <set>

#include "qws/ensemble.hpp"
#include "qws/otoc.hpp"
#include "support/generators.hpp"

using namespace qws;
using qws::testing::make_config;

TEST_CASE("derived seeds are pairwise distinct") {
    for (std::uint64_t base : {0ULL, 1ULL, 0xdeadbeefULL, ~0ULL}) {
        std::set<std::uint64_t> seen;
        for (std::uint64_t r = 0; r < 5000; ++r) seen.insert(derive_seed(base, r));
        CHECK(seen.size() == 5000);
    }
}

TEST_CASE("identical realizations reduce to the exact value with zero stderr") {
    const auto res = run_ensemble([](std::uint64_t, int) { return std::vector<double>{0.1, 0.7, 1.0 / 3.0}; },
                                  EnsembleSpec{7, 3}, 3);
    CHECK(res.mean == std::vector<double>{0.1, 0.7, 1.0 / 3.0});
    for (double e : res.std_error) CHECK(e == 0.0);
}

TEST_CASE("mean and standard error match the textbook estimator") {
    const auto res = run_ensemble([](std::uint64_t, int r) { return std::vector<double>{static_cast<double>(r)}; },
                                  EnsembleSpec{5, 0}, 2);
    CHECK(res.mean[0] == doctest::Approx(2.0));
    CHECK(res.std_error[0] == doctest::Approx(std::sqrt(2.5 / 5.0)));
}

TEST_CASE("results are bit-identical across worker counts and reruns") {
    const std::vector<AxisPair> pairs{{Axis::X, Axis::X}, {Axis::Z, Axis::Y}};
    const auto config = make_config(40, 20, DisorderKind::Spatial, 0.25 * kPi, 0.5 * kPi, 1234);
    const auto one = otoc_ensemble(config, pairs, Normalization::Trace, 24, 1);
    for (int workers : {1, 2, 8}) {
        const auto other = otoc_ensemble(config, pairs, Normalization::Trace, 24, workers);
        CHECK(other.values == one.values);
        CHECK(other.std_error == one.std_error);
    }
}

TEST_CASE("failures abort with realization index and seed") {
    try {
        (void)run_ensemble(
            [](std::uint64_t, int r) -> std::vector<double> {
                if (r == 5 || r == 9) throw std::runtime_error("boom");
                return {1.0};
            },
            EnsembleSpec{12, 42}, 4);
        FAIL("expected EnsembleError");
    } catch (const EnsembleError& e) {
        CHECK(e.index() == 5);
        CHECK(e.seed() == derive_seed(42, 5));
        CHECK(e.cause() != nullptr);
    }
    CHECK_THROWS_AS(run_ensemble([](std::uint64_t, int) { return std::vector<double>{}; }, EnsembleSpec{0, 0}),
                    std::invalid_argument);
}

TEST_CASE("worker budget from the environment") {
    ::setenv("QWS_WORKERS", "3", 1);
    CHECK(default_workers() == 3);
    ::setenv("QWS_WORKERS", "bogus", 1);
    CHECK(default_workers() >= 1);
    ::unsetenv("QWS_WORKERS");
}

TEST_CASE("N = 100 and N = 500 spatial OTOC means agree within 3 combined stderr") {
    const std::vector<AxisPair> xx{{Axis::X, Axis::X}};
    const auto small = otoc_ensemble(make_config(60, 30, DisorderKind::Spatial, 0.25 * kPi, 0.5 * kPi, 100), xx,
                                     Normalization::Trace, 100);
    const auto large = otoc_ensemble(make_config(60, 30, DisorderKind::Spatial, 0.25 * kPi, 0.5 * kPi, 500), xx,
                                     Normalization::Trace, 500);
    int cells = 0, agree = 0;
    for (std::size_t i = 0; i < small.values[0].size(); ++i) {
        const double se = std::hypot(small.std_error[0][i], large.std_error[0][i]);
        const double diff = std::abs(small.values[0][i] - large.values[0][i]);
        if (se == 0.0 && diff == 0.0) continue;  // outside the cone
        ++cells;
        agree += diff <= 3.0 * se;
    }
    REQUIRE(cells > 0);
    CHECK(static_cast<double>(agree) / cells >= 0.99);
}

TEST_CASE("disjoint base seeds give statistically compatible means") {
    // Scalar summary: C_xx at the origin, t = 10, averaged over the ensemble.
    const std::vector<AxisPair> xx{{Axis::X, Axis::X}};
    const auto a = otoc_ensemble(make_config(40, 10, DisorderKind::Temporal, 0.25 * kPi, 0.5 * kPi, 1), xx, Normalization::Trace, 200);
    const auto b = otoc_ensemble(make_config(40, 10, DisorderKind::Temporal, 0.25 * kPi, 0.5 * kPi, 2), xx, Normalization::Trace, 200);
    const double diff = std::abs(a.at(0, 10, 0) - b.at(0, 10, 0));
    CHECK(diff <= 4.0 * std::hypot(a.error_at(0, 10, 0), b.error_at(0, 10, 0)));
}
