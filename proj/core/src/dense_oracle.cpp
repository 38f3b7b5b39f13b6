#include "qws/dense_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qws::dense {

namespace {

void check_size(int sites, Guard guard) {
    if (sites <= 0) throw std::invalid_argument("dense oracle needs a positive lattice size");
    if (sites > kMaxSites && !guard.allow_large) {
        throw std::invalid_argument("dense oracle refuses L=" + std::to_string(sites) + " > " +
                                    std::to_string(kMaxSites) + " without an override");
    }
}

// Row/column index of |spin> (x) |site>.
Eigen::Index idx(int spin, int site) { return 2 * site + spin; }

}  // namespace

DenseOperator step_unitary(std::span<const double> coin_row, int sites, Guard guard) {
    check_size(sites, guard);
    if (coin_row.size() != 1 && coin_row.size() != static_cast<std::size_t>(sites)) {
        throw std::invalid_argument("coin row dimension mismatch");
    }
    const Eigen::Index dim = 2 * sites;

    DenseOperator coin = DenseOperator::Zero(dim, dim);
    for (int x = 0; x < sites; ++x) {
        const double theta = coin_row.size() == 1 ? coin_row[0] : coin_row[x];
        const Coin c = coin_matrix({theta});
        for (int r = 0; r < 2; ++r) {
            for (int k = 0; k < 2; ++k) coin(idx(r, x), idx(k, x)) = c[r][k];
        }
    }

    // S = |down><down| (x) T+ + |up><up| (x) T-, T+- |x> = |x +- 1>
    DenseOperator shift = DenseOperator::Zero(dim, dim);
    for (int x = 0; x < sites; ++x) {
        shift(idx(Down, (x + 1) % sites), idx(Down, x)) = 1.0;
        shift(idx(Up, (x - 1 + sites) % sites), idx(Up, x)) = 1.0;
    }
    return shift * coin;
}

DenseOperator local_operator(Axis mu, int site, int sites, Guard guard) {
    check_size(sites, guard);
    if (site < 0 || site >= sites) throw std::out_of_range("site outside lattice");
    DenseOperator op = DenseOperator::Zero(2 * sites, 2 * sites);
    const Block2 s = pauli(mu);
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) op(idx(r, site), idx(c, site)) = s[r][c];
    }
    return op;
}

DenseOperator to_dense(const Rank2Operator& op) {
    const auto a = op.plus_state().amplitudes();
    const auto b = op.minus_state().amplitudes();
    const Eigen::Map<const Eigen::VectorXcd> va(a.data(), static_cast<Eigen::Index>(a.size()));
    const Eigen::Map<const Eigen::VectorXcd> vb(b.data(), static_cast<Eigen::Index>(b.size()));
    return va * va.adjoint() - vb * vb.adjoint();
}

double frobenius_inner(const DenseOperator& a, const DenseOperator& b) {
    return (a.adjoint() * b).trace().real() / static_cast<double>(a.rows());
}

std::vector<DenseOperator> evolve_backward(const DenseOperator& op, const CoinSchedule& schedule, int steps,
                                           Guard guard) {
    const int sites = static_cast<int>(op.rows() / 2);
    std::vector<DenseOperator> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    out.push_back(op);
    for (int t = 1; t <= steps; ++t) {
        const DenseOperator u = step_unitary(schedule.row(t), sites, guard);
        out.push_back(u.adjoint() * out.back() * u);
    }
    return out;
}

std::vector<double> commutator_otoc(const CoinSchedule& schedule, int sites, int steps, Axis mu, Axis nu,
                                    double prefactor, Guard guard) {
    check_size(sites, guard);
    const Eigen::Index dim = 2 * sites;
    const DenseOperator v = local_operator(nu, 0, sites, guard);
    std::vector<DenseOperator> w;
    for (int l = 0; l < sites; ++l) w.push_back(local_operator(mu, l, sites, guard));

    std::vector<double> out(static_cast<std::size_t>(steps + 1) * sites);
    DenseOperator evolution = DenseOperator::Identity(dim, dim);
    for (int t = 0; t <= steps; ++t) {
        if (t > 0) evolution = step_unitary(schedule.row(t), sites, guard) * evolution;
        for (int l = 0; l < sites; ++l) {
            const DenseOperator wt = evolution.adjoint() * w[l] * evolution;
            const DenseOperator comm = wt * v - v * wt;
            const double sq = (comm.adjoint() * comm).trace().real();
            out[static_cast<std::size_t>(t) * sites + l] = prefactor * 0.5 * sq;
        }
    }
    return out;
}

std::vector<double> gram(const CoinSchedule& schedule, int sites, int steps, Axis mu, int site, Guard guard) {
    const auto snaps = evolve_backward(local_operator(mu, site, sites, guard), schedule, steps, guard);
    const double n0 = frobenius_inner(snaps[0], snaps[0]);
    const std::size_t n = snaps.size();
    std::vector<double> g(n * n);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) g[s * n + t] = frobenius_inner(snaps[s], snaps[t]) / n0;
    }
    return g;
}

}  // namespace qws::dense
