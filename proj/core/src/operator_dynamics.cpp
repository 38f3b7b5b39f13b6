#include "qws/operator_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qws {

char axis_char(Axis a) {
    switch (a) {
        case Axis::X: return 'x';
        case Axis::Y: return 'y';
        case Axis::Z: return 'z';
    }
    return '?';
}

Axis parse_axis(char c) {
    switch (c) {
        case 'x': case 'X': return Axis::X;
        case 'y': case 'Y': return Axis::Y;
        case 'z': case 'Z': return Axis::Z;
        default: break;
    }
    throw std::invalid_argument(std::string("unknown spin axis '") + c + "'");
}

Block2 pauli(Axis a) {
    const Complex i{0.0, 1.0};
    switch (a) {
        case Axis::X: return {{{0.0, 1.0}, {1.0, 0.0}}};
        case Axis::Y: return {{{0.0, -i}, {i, 0.0}}};
        case Axis::Z: break;
    }
    return {{{1.0, 0.0}, {0.0, -1.0}}};
}

Rank2Operator::Rank2Operator(WalkerState plus, WalkerState minus)
    : plus_(std::move(plus)), minus_(std::move(minus)) {
    if (plus_.dim() != minus_.dim()) throw std::invalid_argument("rank-2 member states differ in dimension");
}

double Rank2Operator::orthonormality_drift() const {
    const double na = std::abs(plus_.inner(plus_).real() - 1.0);
    const double nb = std::abs(minus_.inner(minus_).real() - 1.0);
    const double ov = std::abs(plus_.inner(minus_));
    return std::max({na, nb, ov});
}

Rank2Operator initial_local_operator(Axis mu, int site, int sites) {
    const double r = 1.0 / std::sqrt(2.0);
    const Complex i{0.0, 1.0};
    switch (mu) {
        case Axis::X:
            return {WalkerState::localized(sites, site, r, r), WalkerState::localized(sites, site, r, -r)};
        case Axis::Y:
            return {WalkerState::localized(sites, site, r, i * r), WalkerState::localized(sites, site, r, -i * r)};
        case Axis::Z: break;
    }
    return {WalkerState::localized(sites, site, 1.0, 0.0), WalkerState::localized(sites, site, 0.0, 1.0)};
}

namespace {

void advance(WalkerState& s, std::span<const double> coin_row, Direction direction, WalkerState& scratch) {
    if (scratch.dim() != s.dim()) scratch = WalkerState(s.sites());
    if (direction == Direction::Forward) {
        apply_step(s.amplitudes(), scratch.amplitudes(), coin_row);
    } else {
        apply_step_adjoint(s.amplitudes(), scratch.amplitudes(), coin_row);
    }
    std::swap(s, scratch);
}

}  // namespace

void conjugate_step_inplace(Rank2Operator& op, std::span<const double> coin_row, Direction direction,
                            WalkerState& scratch) {
    advance(op.plus_, coin_row, direction, scratch);
    advance(op.minus_, coin_row, direction, scratch);
}

Rank2Operator conjugate_step(const Rank2Operator& op, std::span<const double> coin_row, Direction direction) {
    Rank2Operator out = op;
    WalkerState scratch;
    conjugate_step_inplace(out, coin_row, direction, scratch);
    return out;
}

double frobenius_inner(const Rank2Operator& a, const Rank2Operator& b, int hilbert_dim) {
    if (a.hilbert_dim() != b.hilbert_dim()) throw std::invalid_argument("operator dimension mismatch");
    const double aa = std::norm(a.plus_state().inner(b.plus_state()));
    const double ab = std::norm(a.plus_state().inner(b.minus_state()));
    const double ba = std::norm(a.minus_state().inner(b.plus_state()));
    const double bb = std::norm(a.minus_state().inner(b.minus_state()));
    return (aa - ab - ba + bb) / hilbert_dim;
}

Block2 site_block(const Rank2Operator& op, int site) {
    if (site < 0 || site >= op.sites()) throw std::out_of_range("site outside lattice");
    const std::array<Complex, 2> alpha{op.plus_state().up(site), op.plus_state().down(site)};
    const std::array<Complex, 2> beta{op.minus_state().up(site), op.minus_state().down(site)};
    Block2 m{};
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) m[r][c] = alpha[r] * std::conj(alpha[c]) - beta[r] * std::conj(beta[c]);
    }
    return m;
}

}  // namespace qws
