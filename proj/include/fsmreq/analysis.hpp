#pragma once

#include <optional>

#include "fsmreq/fsm.hpp"

namespace fsmreq {

/// Breadth-first state cover: traces[i] reaches targets[i] from the initial
/// state, traces[0] is the empty trace, targets are pairwise distinct and
/// enumerate every reachable state in discovery order. Inputs are explored in
/// alphabet order, so each trace is the length-lexicographically least one
/// reaching its target.
struct StateCover {
    std::vector<InputTrace> traces;
    std::vector<StateId> targets;
};

StateCover state_cover(const Dfsm& m);

struct Minimized {
    /// Prime machine: equivalent states merged, unreachable classes dropped.
    Dfsm machine;
    /// original state -> least-indexed equivalent original state
    std::vector<StateId> representative;
    /// original state -> state of machine, or kNoState if the class is
    /// unreachable from the initial state
    std::vector<StateId> state_class;
};

/// Partition refinement starting from the output-row partition.
Minimized minimize(const Dfsm& m);

bool is_prime(const Dfsm& m);

/// Shortest input trace on which q and r produce different outputs, ties
/// broken lexicographically; absent when the states are equivalent.
std::optional<InputTrace> distinguishing_trace(const Dfsm& m, StateId q, StateId r);

/// Shortest input trace on which the two machines' outputs differ, ties
/// broken lexicographically; absent when L(a) = L(b). Requires identical
/// input alphabets and equal output alphabets (as sets).
std::optional<InputTrace> equivalence_counterexample(const Dfsm& a, const Dfsm& b);

inline bool language_equivalent(const Dfsm& a, const Dfsm& b) {
    return !equivalence_counterexample(a, b).has_value();
}

namespace detail {

/// All-pairs shortest distinguishing length table (kInf for equivalent
/// pairs), flattened n*n, symmetric.
inline constexpr std::uint32_t kInfDistance = ~std::uint32_t{0};
std::vector<std::uint32_t> distinguishing_lengths(const Dfsm& m);

/// Up to max_count shortest distinguishing traces for (q, r), in
/// lexicographic order. Empty when the states are equivalent.
std::vector<InputTrace> shortest_distinguishers(const Dfsm& m,
                                                const std::vector<std::uint32_t>& lengths,
                                                StateId q, StateId r,
                                                std::size_t max_count);

} // namespace detail

} // namespace fsmreq
