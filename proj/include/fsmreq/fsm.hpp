#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fsmreq {

using StateId = std::uint32_t;
using SymbolId = std::uint32_t;

inline constexpr StateId kNoState = ~StateId{0};

using InputTrace = std::vector<SymbolId>;
using OutputTrace = std::vector<SymbolId>;

/// An input trace paired with the outputs observed alongside it.
struct IOTrace {
    InputTrace inputs;
    OutputTrace outputs;

    bool operator==(const IOTrace&) const = default;
};

/// Ordered list of distinct symbol names with a name -> index lookup.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> symbols);

    std::size_t size() const { return symbols_.size(); }
    const std::string& name(SymbolId id) const { return symbols_.at(id); }
    const std::vector<std::string>& symbols() const { return symbols_; }

    std::optional<SymbolId> find(std::string_view name) const;
    /// Like find(), but throws std::out_of_range for unknown names.
    SymbolId id(std::string_view name) const;

    bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, SymbolId> index_;
};

struct Transition {
    StateId from;
    SymbolId input;
    SymbolId output;
    StateId to;

    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// General finite state machine over named states and alphabets. The
/// transition relation may be nondeterministic or incomplete; use Dfsm for
/// machines that are both deterministic and completely specified.
class Fsm {
public:
    Fsm(std::vector<std::string> state_names, StateId initial, Alphabet inputs,
        Alphabet outputs, std::vector<Transition> transitions);

    std::size_t state_count() const { return state_names_.size(); }
    StateId initial() const { return initial_; }
    const std::string& state_name(StateId q) const { return state_names_.at(q); }
    const std::vector<std::string>& state_names() const { return state_names_; }
    const Alphabet& inputs() const { return inputs_; }
    const Alphabet& outputs() const { return outputs_; }
    /// Sorted and duplicate-free.
    const std::vector<Transition>& transitions() const { return transitions_; }

private:
    std::vector<std::string> state_names_;
    StateId initial_ = 0;
    Alphabet inputs_;
    Alphabet outputs_;
    std::vector<Transition> transitions_;
};

struct MachineProperties {
    bool deterministic = false;
    bool completely_specified = false;
    bool observable = false;
};

/// The three independent structural judgments on a transition relation.
MachineProperties check_properties(const Fsm& m);

/// Deterministic, completely specified FSM: exactly one transition per
/// (state, input) pair, represented by total next-state and output tables.
class Dfsm {
public:
    /// delta and omega are row-major (state * input_count + input) tables.
    Dfsm(std::vector<std::string> state_names, StateId initial, Alphabet inputs,
         Alphabet outputs, std::vector<StateId> delta, std::vector<SymbolId> omega);

    std::size_t state_count() const { return state_names_.size(); }
    std::size_t input_count() const { return inputs_.size(); }
    StateId initial() const { return initial_; }
    const std::string& state_name(StateId q) const { return state_names_.at(q); }
    const std::vector<std::string>& state_names() const { return state_names_; }
    const Alphabet& inputs() const { return inputs_; }
    const Alphabet& outputs() const { return outputs_; }
    const std::vector<StateId>& delta() const { return delta_; }
    const std::vector<SymbolId>& omega() const { return omega_; }

    StateId next(StateId q, SymbolId x) const { return delta_[q * input_count_ + x]; }
    SymbolId output(StateId q, SymbolId x) const { return omega_[q * input_count_ + x]; }

    /// State reached from q by the trace; q itself for the empty trace.
    StateId after(StateId q, const InputTrace& trace) const;
    /// Output sequence produced from q along the trace (same length).
    OutputTrace output_trace(StateId q, const InputTrace& trace) const;

    Fsm to_fsm() const;

private:
    std::vector<std::string> state_names_;
    StateId initial_ = 0;
    std::size_t input_count_ = 0;
    Alphabet inputs_;
    Alphabet outputs_;
    std::vector<StateId> delta_;
    std::vector<SymbolId> omega_;
};

/// Thrown when two machines that must share an interface do not; see
/// require_compatible for the exact rules.
struct AlphabetMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Maps the SUT's output ids onto the reference's by name. Input alphabets
/// must be identical (names and order, since declaration order drives
/// tie-breaking); the SUT's outputs must form a subset of the reference's,
/// and additionally an equal set when exact is requested.
std::vector<SymbolId> require_compatible(const Dfsm& reference, const Dfsm& sut, bool exact_outputs);

} // namespace fsmreq
