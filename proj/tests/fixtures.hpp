#pragma once

#include <vector>

#include "marcopolo/adversary.hpp"
#include "marcopolo/dmdp.hpp"

// Small DMDPs shared across the suites. Actions are a=0, b=1 throughout.
namespace fixtures {

using marcopolo::Action;
using marcopolo::Dmdp;
using marcopolo::RewardSequence;
using marcopolo::Round;
using marcopolo::State;

// Two states; action a swaps them, action b self-loops.
inline Dmdp d2() { return Dmdp(2, 2, {1, 0, 0, 1}); }

// Two isolated self-loops: not weakly communicating.
inline Dmdp dsplit() { return Dmdp(2, 1, {0, 1}); }

// Two states, one action, swap: the unique cycle covers both states.
inline Dmdp dswap() { return Dmdp(2, 1, {1, 0}); }

// Chain 0 -> 1 -> 2 with an absorbing self-loop at 2.
inline Dmdp chain3() { return Dmdp(3, 1, {1, 2, 2}); }

// Edges 0->1 (both actions), 1->{0,2}, 2->0: cycles of lengths 2 and 3
// sharing vertices, aperiodic, no self-loop.
inline Dmdp triangle3() { return Dmdp(3, 2, {1, 1, 0, 2, 0, 0}); }

// Ring 0->1->2->3 with b dropping back to 0 from 0,1,2 and a self-loop at 3
// (a). Self-loops at 0 (b) and 3 (a) are vertex-disjoint: weakly
// communicating but not unichain. Uniform path length d = 3.
inline Dmdp ring4() { return Dmdp(4, 2, {1, 0, 2, 0, 3, 0, 3, 0}); }

// Two 2-state swap components joined by jump actions: weakly communicating,
// not unichain (the paper's joined-unichains construction).
// Action 0: swap within the component; action 1: 0->2, 2->0, elsewhere swap-like.
inline Dmdp joined() { return Dmdp(4, 2, {1, 2, 0, 0, 3, 0, 2, 2}); }

inline RewardSequence constant_rewards(const Dmdp& m, Round horizon, double value) {
    return RewardSequence(horizon, m.num_states(), m.num_actions(),
                          [value](Round, State, Action) { return value; });
}

// Pays 1 exactly on the listed (state, action) pairs, every round.
inline RewardSequence indicator_rewards(const Dmdp& m, Round horizon,
                                        std::vector<std::pair<State, Action>> pairs) {
    marcopolo::AdversarySpec spec;
    spec.kind = marcopolo::AdversarySpec::Kind::Indicator;
    spec.pairs = std::move(pairs);
    return marcopolo::make_rewards(spec, m, horizon);
}

} // namespace fixtures
