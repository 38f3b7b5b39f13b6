#include "qws/krylov.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace qws {

GramMatrix::GramMatrix(int size, std::vector<double> entries) : size_(size), entries_(std::move(entries)) {
    if (size <= 0 || entries_.size() != static_cast<std::size_t>(size) * size) {
        throw std::invalid_argument("Gram matrix entries do not match its size");
    }
}

double GramMatrix::min_eigenvalue() const {
    const Eigen::Map<const Eigen::MatrixXd> g(entries_.data(), size_, size_);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

std::vector<Rank2Operator> operator_snapshots(const WalkConfig& config, Axis mu, int site) {
    config.validate();
    const CoinSchedule schedule = sample_schedule(config);
    std::vector<Rank2Operator> snaps;
    snaps.reserve(static_cast<std::size_t>(config.steps) + 1);
    snaps.push_back(initial_local_operator(mu, internal_site(site, config.sites), config.sites));
    WalkerState scratch(config.sites);
    for (int t = 1; t <= config.steps; ++t) {
        Rank2Operator next = snaps.back();
        conjugate_step_inplace(next, schedule.row(t), Direction::Backward, scratch);
        snaps.push_back(std::move(next));
    }
    return snaps;
}

GramMatrix gram_matrix(const std::vector<Rank2Operator>& snapshots) {
    if (snapshots.empty()) throw std::invalid_argument("no snapshots");
    const int n = static_cast<int>(snapshots.size());
    const int dim = snapshots.front().hilbert_dim();
    const double norm0 = frobenius_inner(snapshots[0], snapshots[0], dim);
    std::vector<double> g(static_cast<std::size_t>(n) * n);
    for (int s = 0; s < n; ++s) {
        for (int t = s; t < n; ++t) {
            const double v = frobenius_inner(snapshots[s], snapshots[t], dim) / norm0;
            g[static_cast<std::size_t>(s) * n + t] = v;
            g[static_cast<std::size_t>(t) * n + s] = v;
        }
    }
    return GramMatrix(n, std::move(g));
}

GramMatrix gram_matrix(const WalkConfig& config, Axis mu, int site) {
    return gram_matrix(operator_snapshots(config, mu, site));
}

double KrylovDecomposition::completeness(int t) const {
    double acc = 0.0;
    for (const auto& row : amplitudes) acc += row[t] * row[t];
    return acc;
}

namespace {

constexpr double kPsdTolerance = 1e-10;

std::vector<double> apply_gram(const GramMatrix& g, const std::vector<double>& v) {
    const int n = g.size();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int s = 0; s < n; ++s) {
        double acc = 0.0;
        for (int t = 0; t < n; ++t) acc += g(s, t) * v[t];
        out[s] = acc;
    }
    return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace

KrylovDecomposition krylov_decompose(const GramMatrix& gram, double epsilon) {
    const int n = gram.size();
    KrylovDecomposition out;
    out.snapshots = n;

    // metric[i] = G c_i, so (O_i|v) = metric[i] . v and phi_{i,t} = metric[i][t].
    std::vector<std::vector<double>> metric;
    for (int k = 0; k < n; ++k) {
        std::vector<double> v(static_cast<std::size_t>(n), 0.0);
        v[k] = 1.0;
        // Two modified Gram-Schmidt sweeps keep the basis orthonormal when G is ill-conditioned.
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (int i = 0; i < out.rank; ++i) {
                const double proj = dot(metric[i], v);
                if (proj == 0.0) continue;
                for (int s = 0; s <= i; ++s) v[s] -= proj * out.coeffs[i][s];
            }
        }
        const auto gv = apply_gram(gram, v);
        const double norm_sq = dot(v, gv);
        if (norm_sq < -kPsdTolerance) {
            throw NumericalDegeneracyError(k, "Gram matrix not positive semidefinite at snapshot " + std::to_string(k) +
                                                  " (||A||^2 = " + std::to_string(norm_sq) + ")");
        }
        if (norm_sq < epsilon) {
            out.exhausted_norm_sq = norm_sq;
            break;
        }
        const double norm = std::sqrt(norm_sq);
        for (auto& x : v) x /= norm;
        std::vector<double> w(gv);
        for (auto& x : w) x /= norm;
        out.coeffs.push_back(std::move(v));
        metric.push_back(std::move(w));
        out.norms.push_back(norm);
        ++out.rank;
    }

    out.amplitudes.assign(static_cast<std::size_t>(out.rank), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    out.complexity.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < out.rank; ++i) {
        for (int t = i; t < n; ++t) {
            const double phi = metric[i][t];
            out.amplitudes[i][t] = phi;
            out.complexity[t] += i * phi * phi;
        }
    }
    return out;
}

EnsembleResult k_complexity_ensemble(const WalkConfig& config, Axis mu, int site, int realizations, int workers,
                                     double epsilon) {
    config.validate();
    return run_ensemble(
        [&](std::uint64_t seed, int) {
            WalkConfig c = config;
            c.seed = seed;
            return krylov_decompose(gram_matrix(c, mu, site), epsilon).complexity;
        },
        EnsembleSpec{realizations, config.seed}, workers);
}

}  // namespace qws
