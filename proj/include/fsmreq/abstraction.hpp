#pragma once

#include "fsmreq/analysis.hpp"
#include "fsmreq/requirements.hpp"

namespace fsmreq {

/// A set of concrete outputs acting as one abstract output symbol. The full
/// alphabet is the don't-care class and renders as "*"; everything else
/// renders as "{y1|y2|...}" in output-alphabet order.
struct OutputClass {
    std::vector<SymbolId> members; // ascending
    bool full = false;
    std::vector<char> mask; // indexed by concrete output id

    bool contains(SymbolId y) const { return mask[y]; }
    std::string render(const Alphabet& outputs) const;

    bool operator==(const OutputClass& other) const { return members == other.members; }
};

/// Deterministic abstraction M1: same states and transitions as the model,
/// outputs replaced by allowed-set classes (requirement cells) or the
/// don't-care class (all other cells).
struct AbstractDfsm {
    Dfsm machine; // outputs are the rendered class names
    Alphabet concrete_outputs;
    std::vector<OutputClass> classes; // indexed by machine output id

    const OutputClass& cell_class(StateId q, SymbolId x) const {
        return classes[machine.output(q, x)];
    }
};

AbstractDfsm build_m1(const Dfsm& model, const CompositeRequirement& r);
AbstractDfsm build_m1(const Dfsm& model, const ResolvedRequirement& r);

/// M1 for the equivalence requirement: every cell's class is the singleton of
/// the modelled output. Distinguishes states exactly as the model does.
AbstractDfsm identity_abstraction(const Dfsm& model);

/// Prime machine of M1 together with the state -> class map. A class that
/// carries a requirement cell carries it for all of its member states.
struct ClassMap {
    AbstractDfsm m2;
    std::vector<StateId> state_class; // model state -> m2 state
    std::size_t class_count() const { return m2.machine.state_count(); }
};

ClassMap build_m2(const AbstractDfsm& m1);

/// Observable nondeterministic unfolding M1' of M1: per (state, input) one
/// transition for every concrete output in the cell's class, all to the
/// deterministic target. The most permissive machine satisfying the
/// requirement.
struct NondetAbstraction {
    std::vector<std::string> state_names;
    StateId initial = 0;
    Alphabet inputs;
    Alphabet outputs; // concrete
    std::vector<StateId> delta; // row-major, deterministic targets
    std::vector<std::uint32_t> cell_class; // row-major -> index into classes
    std::vector<OutputClass> classes;

    std::size_t state_count() const { return state_names.size(); }
    std::size_t input_count() const { return inputs.size(); }
    StateId next(StateId q, SymbolId x) const { return delta[q * inputs.size() + x]; }
    const OutputClass& allowed(StateId q, SymbolId x) const {
        return classes[cell_class[q * inputs.size() + x]];
    }

    Fsm to_fsm() const;
};

NondetAbstraction build_m1_prime(const Dfsm& model, const CompositeRequirement& r);
NondetAbstraction build_m1_prime(const AbstractDfsm& m1);

/// Reads a pre-built abstraction in the model file format against its
/// concrete model: "*" cells decode to the don't-care class, "{a|b}" cells to
/// the listed outputs, and a bare output name to its singleton. State set and
/// transition targets must agree with the model, and every cell's class must
/// contain the modelled output.
AbstractDfsm parse_abstraction(const Dfsm& model, std::string_view text);
AbstractDfsm parse_abstraction_file(const Dfsm& model, const std::filesystem::path& path);

/// Requirement items encoded by an abstraction: one per non-don't-care cell,
/// in row-major cell order.
CompositeRequirement requirement_from_abstraction(const Dfsm& model, const AbstractDfsm& m1);

/// One "q,x,y,q'" line per transition, in (state, input, output) order.
std::string serialize_transitions(const NondetAbstraction& m1p);

} // namespace fsmreq
