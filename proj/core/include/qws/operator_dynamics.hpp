#pragma once

// Heisenberg-evolved local operators sigma^mu (x) |l><l| kept exactly as
// |a><a| - |b><b| with <a|b> = 0. Conjugating by a unitary maps each member
// state independently, so evolution costs O(L) per step.

#include <array>
#include <span>
#include <string_view>

#include "qws/walk_core.hpp"

namespace qws {

enum class Axis { X = 0, Y = 1, Z = 2 };

char axis_char(Axis a);
Axis parse_axis(char c);

using Block2 = std::array<std::array<Complex, 2>, 2>;

Block2 pauli(Axis a);

enum class Direction {
    Forward,   // O -> U O U^dagger (member states pushed by U)
    Backward,  // O -> U^dagger O U (member states pulled by U^dagger)
};

class Rank2Operator {
public:
    Rank2Operator(WalkerState plus, WalkerState minus);

    const WalkerState& plus_state() const { return plus_; }
    const WalkerState& minus_state() const { return minus_; }
    int sites() const { return plus_.sites(); }
    int hilbert_dim() const { return static_cast<int>(plus_.dim()); }

    /// max(|<a|a> - 1|, |<b|b> - 1|, |<a|b>|)
    double orthonormality_drift() const;

    friend void conjugate_step_inplace(Rank2Operator& op, std::span<const double> coin_row, Direction direction,
                                       WalkerState& scratch);

private:
    WalkerState plus_;
    WalkerState minus_;
};

/// sigma^mu (x) |site><site| with plus/minus the +1/-1 eigenvectors of sigma^mu.
Rank2Operator initial_local_operator(Axis mu, int site, int sites);

Rank2Operator conjugate_step(const Rank2Operator& op, std::span<const double> coin_row, Direction direction);

/// In-place variant for hot loops; `scratch` is resized as needed.
void conjugate_step_inplace(Rank2Operator& op, std::span<const double> coin_row, Direction direction,
                            WalkerState& scratch);

/// (A|B) = Tr(A^dagger B) / D.
double frobenius_inner(const Rank2Operator& a, const Rank2Operator& b, int hilbert_dim);

/// Coin-space block <l| O |l> = alpha alpha^dagger - beta beta^dagger.
Block2 site_block(const Rank2Operator& op, int site);

}  // namespace qws
