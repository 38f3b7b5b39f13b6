#pragma once

// Ground-truth implementations on full 2L x 2L matrices. Test and validation
// use only; cost grows as O(L^3) per step so lattices above 32 sites are
// refused unless explicitly allowed.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qws/operator_dynamics.hpp"
#include "qws/walk_core.hpp"

namespace qws::dense {

using DenseOperator = Eigen::MatrixXcd;

inline constexpr int kMaxSites = 32;

struct Guard {
    bool allow_large = false;
};

/// U = S (oplus_x C(theta_x)) assembled entry by entry from the shift and coin definitions.
DenseOperator step_unitary(std::span<const double> coin_row, int sites, Guard guard = {});

/// sigma^mu (x) |site><site|.
DenseOperator local_operator(Axis mu, int site, int sites, Guard guard = {});

DenseOperator to_dense(const Rank2Operator& op);

/// (A|B) = Tr(A^dagger B) / D.
double frobenius_inner(const DenseOperator& a, const DenseOperator& b);

/// O_t = U_t^dagger O_{t-1} U_t for t = 0..steps.
std::vector<DenseOperator> evolve_backward(const DenseOperator& op, const CoinSchedule& schedule, int steps,
                                           Guard guard = {});

/// N * (1/2) Tr([W^mu_l(t), V^nu_0]^dagger [W^mu_l(t), V^nu_0]) with W(t) = U(t)^dagger W U(t)
/// and U(t) = U_t ... U_1. Result is (steps+1) x sites in internal site order.
std::vector<double> commutator_otoc(const CoinSchedule& schedule, int sites, int steps, Axis mu, Axis nu,
                                    double prefactor, Guard guard = {});

/// Unit-diagonal Gram matrix of the snapshots of sigma^mu (x) |site><site|, row-major (steps+1)^2.
std::vector<double> gram(const CoinSchedule& schedule, int sites, int steps, Axis mu, int site, Guard guard = {});

}  // namespace qws::dense
