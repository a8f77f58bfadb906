#include "fsmreq/fsm.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fsmreq {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    for (SymbolId i = 0; i < symbols_.size(); ++i) {
        if (symbols_[i].empty()) {
            throw std::invalid_argument("alphabet symbol must be non-empty");
        }
        if (!index_.emplace(symbols_[i], i).second) {
            throw std::invalid_argument("duplicate alphabet symbol: " + symbols_[i]);
        }
    }
}

std::optional<SymbolId> Alphabet::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

SymbolId Alphabet::id(std::string_view name) const {
    if (auto found = find(name)) {
        return *found;
    }
    throw std::out_of_range("unknown symbol: " + std::string(name));
}

Fsm::Fsm(std::vector<std::string> state_names, StateId initial, Alphabet inputs,
         Alphabet outputs, std::vector<Transition> transitions)
    : state_names_(std::move(state_names)),
      initial_(initial),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      transitions_(std::move(transitions)) {
    if (state_names_.empty()) {
        throw std::invalid_argument("machine needs at least one state");
    }
    if (initial_ >= state_names_.size()) {
        throw std::invalid_argument("initial state index out of range");
    }
    for (const Transition& t : transitions_) {
        if (t.from >= state_names_.size() || t.to >= state_names_.size() ||
            t.input >= inputs_.size() || t.output >= outputs_.size()) {
            throw std::invalid_argument("transition index out of range");
        }
    }
    std::sort(transitions_.begin(), transitions_.end());
    transitions_.erase(std::unique(transitions_.begin(), transitions_.end()),
                       transitions_.end());
}

MachineProperties check_properties(const Fsm& m) {
    MachineProperties props;
    std::map<std::pair<StateId, SymbolId>, std::size_t> per_pair;
    std::set<std::tuple<StateId, SymbolId, SymbolId>> triples;
    props.deterministic = true;
    props.observable = true;
    for (const Transition& t : m.transitions()) {
        if (++per_pair[{t.from, t.input}] > 1) {
            props.deterministic = false;
        }
        if (!triples.emplace(t.from, t.input, t.output).second) {
            // same (q,x,y) with two different targets; duplicates were removed
            props.observable = false;
        }
    }
    props.completely_specified =
        per_pair.size() == m.state_count() * m.inputs().size();
    return props;
}

Dfsm::Dfsm(std::vector<std::string> state_names, StateId initial, Alphabet inputs,
           Alphabet outputs, std::vector<StateId> delta, std::vector<SymbolId> omega)
    : state_names_(std::move(state_names)),
      initial_(initial),
      input_count_(inputs.size()),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      delta_(std::move(delta)),
      omega_(std::move(omega)) {
    if (state_names_.empty()) {
        throw std::invalid_argument("machine needs at least one state");
    }
    if (initial_ >= state_names_.size()) {
        throw std::invalid_argument("initial state index out of range");
    }
    const std::size_t cells = state_names_.size() * input_count_;
    if (delta_.size() != cells || omega_.size() != cells) {
        throw std::invalid_argument("transition tables must cover every (state, input) cell");
    }
    for (StateId target : delta_) {
        if (target >= state_names_.size()) {
            throw std::invalid_argument("next-state entry out of range");
        }
    }
    for (SymbolId y : omega_) {
        if (y >= outputs_.size()) {
            throw std::invalid_argument("output entry out of range");
        }
    }
}

StateId Dfsm::after(StateId q, const InputTrace& trace) const {
    for (SymbolId x : trace) {
        q = next(q, x);
    }
    return q;
}

OutputTrace Dfsm::output_trace(StateId q, const InputTrace& trace) const {
    OutputTrace out;
    out.reserve(trace.size());
    for (SymbolId x : trace) {
        out.push_back(output(q, x));
        q = next(q, x);
    }
    return out;
}

Fsm Dfsm::to_fsm() const {
    std::vector<Transition> transitions;
    transitions.reserve(state_count() * input_count_);
    for (StateId q = 0; q < state_count(); ++q) {
        for (SymbolId x = 0; x < input_count_; ++x) {
            transitions.push_back({q, x, output(q, x), next(q, x)});
        }
    }
    return Fsm(state_names_, initial_, inputs_, outputs_, std::move(transitions));
}

std::vector<SymbolId> require_compatible(const Dfsm& reference, const Dfsm& sut,
                                         bool exact_outputs) {
    if (reference.inputs() != sut.inputs()) {
        throw AlphabetMismatchError("input alphabets differ");
    }
    std::vector<SymbolId> map(sut.outputs().size());
    for (SymbolId y = 0; y < sut.outputs().size(); ++y) {
        auto found = reference.outputs().find(sut.outputs().name(y));
        if (!found) {
            throw AlphabetMismatchError("SUT output '" + sut.outputs().name(y) +
                                        "' is not in the reference output alphabet");
        }
        map[y] = *found;
    }
    if (exact_outputs && sut.outputs().size() != reference.outputs().size()) {
        throw AlphabetMismatchError("output alphabets differ");
    }
    return map;
}

} // namespace fsmreq
