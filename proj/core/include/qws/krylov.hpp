#pragma once

// Discrete-time Krylov decomposition. Snapshots O_t = U_t^dagger O_{t-1} U_t of
// a local operator are orthogonalized in order; every step works on the
// (T+1)-dimensional Gram representation, never on operator matrices.

#include <vector>

#include "qws/ensemble.hpp"
#include "qws/errors.hpp"
#include "qws/operator_dynamics.hpp"
#include "qws/walk_core.hpp"

namespace qws {

/// G_{s,t} = (O_s|O_t) / (O_0|O_0), symmetric with unit diagonal.
class GramMatrix {
public:
    GramMatrix() = default;
    GramMatrix(int size, std::vector<double> entries);

    int size() const { return size_; }
    double operator()(int s, int t) const { return entries_[static_cast<std::size_t>(s) * size_ + t]; }
    const std::vector<double>& entries() const { return entries_; }

    double min_eigenvalue() const;

private:
    int size_ = 0;
    std::vector<double> entries_;
};

/// Snapshots of sigma^mu (x) |site><site| (site is a centered label) for t = 0..config.steps.
std::vector<Rank2Operator> operator_snapshots(const WalkConfig& config, Axis mu, int site);
GramMatrix gram_matrix(const WalkConfig& config, Axis mu, int site);
GramMatrix gram_matrix(const std::vector<Rank2Operator>& snapshots);

struct KrylovDecomposition {
    int snapshots = 0;  // T+1
    int rank = 0;       // retained basis vectors
    // Row n: coefficients of |O_n) on the normalized snapshots (zero beyond column n).
    std::vector<std::vector<double>> coeffs;
    std::vector<double> norms;  // ||A_n|| before normalization, n < rank
    double exhausted_norm_sq = 0.0;  // ||A_rank||^2 when the basis terminated early
    // phi[n][t] = (O_n|O_t), zero for n > t.
    std::vector<std::vector<double>> amplitudes;
    std::vector<double> complexity;  // K(t) = sum_n n phi_{n,t}^2

    /// sum_n phi_{n,t}^2
    double completeness(int t) const;
};

inline constexpr double kRankTolerance = 1e-12;

/// Gram-Schmidt in snapshot order under the metric G. ||A_n||^2 < epsilon ends the basis;
/// ||A_n||^2 below -1e-10 throws NumericalDegeneracyError naming n.
KrylovDecomposition krylov_decompose(const GramMatrix& gram, double epsilon = kRankTolerance);

/// Mean K(t) and its standard error over seeded realizations of config.disorder.
EnsembleResult k_complexity_ensemble(const WalkConfig& config, Axis mu, int site, int realizations,
                                     int workers = default_workers(), double epsilon = kRankTolerance);

}  // namespace qws
