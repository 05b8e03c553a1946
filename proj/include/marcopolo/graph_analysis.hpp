#pragma once

#include <optional>
#include <vector>

#include "marcopolo/dmdp.hpp"

namespace marcopolo {

/// Adjacency matrix of the state graph: edge (s, s') iff some action maps s
/// to s'. No parallel edges; self-loops allowed.
std::vector<std::vector<char>> transition_graph(const Dmdp& m);

struct ClosedSetResult {
    bool weakly_communicating = false;
    std::vector<State> closed;    // sorted; empty on failure
    std::vector<State> transient; // sorted; empty on failure
};

/// Finds the unique terminal strongly connected component, requiring every
/// state outside it to be transient under all policies (no cycle among the
/// removed states). Failure means the DMDP is not weakly communicating.
ClosedSetResult closed_communicating_set(const Dmdp& m);

/// True iff no two vertex-disjoint cycles exist in the state graph.
/// Exhaustive simple-cycle enumeration; supported for N <= 12 only.
bool is_unichain(const Dmdp& m);

/// Smallest d >= 1 such that every ordered pair s != s' in the closed set is
/// joined by some action sequence of length exactly d. Searched by boolean
/// reachability powers up to the Wielandt cap (|closed|-1)^2 + 1; absent when
/// no such d exists within the cap. A singleton closed set vacuously gives 1.
std::optional<int> minimal_uniform_path_length(const Dmdp& m, const std::vector<State>& closed);

/// Action sequence of exactly len steps from s to s', or nullopt when none
/// exists. Ties broken toward the lowest action index at every step, so the
/// result is the lexicographically smallest such sequence.
std::optional<std::vector<Action>> fixed_length_path(const Dmdp& m, State from, State to,
                                                     std::int64_t len);

struct StructureReport {
    bool weakly_communicating = false;
    std::vector<State> closed;
    std::vector<State> transient;
    std::optional<bool> unichain; // absent when N exceeds the analyzer's range
    std::optional<int> assumption1_d;
};

/// Bundles the classifiers above.
StructureReport analyze_structure(const Dmdp& m);

} // namespace marcopolo
