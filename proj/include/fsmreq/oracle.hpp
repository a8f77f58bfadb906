#pragma once

#include "fsmreq/abstraction.hpp"

namespace fsmreq {

/// Reduction route: breadth-first product of the SUT with M1', flagging the
/// first reachable step whose SUT output leaves the allowed set. The returned
/// witness is the SUT's shortest violating I/O trace (lexicographically least
/// among shortest). output_map translates SUT output ids to reference ids.
std::optional<IOTrace> violation_by_reduction(const Dfsm& sut, const NondetAbstraction& m1p,
                                              const std::vector<SymbolId>& output_map);

/// Definition route: worklist fixpoint over reachable (SUT state, model
/// state) pairs; for each requirement item, every SUT state paired with the
/// item's state must answer inside the allowed set. Verdict only.
bool satisfied_by_definition(const Dfsm& sut, const Dfsm& model, const ResolvedRequirement& r,
                             const std::vector<SymbolId>& output_map);

/// Requirement-satisfaction oracle: absent when the SUT fulfils the composite
/// requirement with acceptable deviations. Runs both routes above and throws
/// std::logic_error if their verdicts disagree.
std::optional<IOTrace> satisfies_oracle(const Dfsm& sut, const Dfsm& model,
                                        const CompositeRequirement& r);

/// Membership in the requirement-trace set: the trace is nonempty, its last
/// symbol is some item's input, and its prefix drives the model to that
/// item's state.
bool is_requirement_trace(const Dfsm& model, const ResolvedRequirement& r,
                          const InputTrace& trace);
bool is_requirement_trace(const Dfsm& model, const CompositeRequirement& r,
                          const InputTrace& trace);

} // namespace fsmreq
