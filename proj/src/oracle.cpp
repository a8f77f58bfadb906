#include "fsmreq/oracle.hpp"

#include <algorithm>
#include <deque>

namespace fsmreq {

std::optional<IOTrace> violation_by_reduction(const Dfsm& sut, const NondetAbstraction& m1p,
                                              const std::vector<SymbolId>& output_map) {
    const std::size_t nm = m1p.state_count();
    struct Visit {
        StateId parent;
        SymbolId via;
    };
    std::vector<std::int64_t> seen(sut.state_count() * nm, -1);
    std::vector<std::pair<StateId, StateId>> order;
    std::vector<Visit> visits;
    std::deque<std::size_t> frontier;

    auto push = [&](StateId s, StateId q, StateId parent, SymbolId via) {
        if (seen[s * nm + q] >= 0) {
            return;
        }
        seen[s * nm + q] = static_cast<std::int64_t>(order.size());
        order.emplace_back(s, q);
        visits.push_back({parent, via});
        frontier.push_back(order.size() - 1);
    };

    push(sut.initial(), m1p.initial, kNoState, 0);
    while (!frontier.empty()) {
        std::size_t node = frontier.front();
        frontier.pop_front();
        auto [s, q] = order[node];
        for (SymbolId x = 0; x < sut.input_count(); ++x) {
            if (!m1p.allowed(q, x).contains(output_map[sut.output(s, x)])) {
                InputTrace inputs;
                std::size_t walk = node;
                while (visits[walk].parent != kNoState) {
                    inputs.push_back(visits[walk].via);
                    walk = visits[walk].parent;
                }
                std::reverse(inputs.begin(), inputs.end());
                inputs.push_back(x);
                OutputTrace outputs = sut.output_trace(sut.initial(), inputs);
                for (SymbolId& y : outputs) {
                    y = output_map[y]; // report in the reference alphabet
                }
                return IOTrace{inputs, std::move(outputs)};
            }
        }
        for (SymbolId x = 0; x < sut.input_count(); ++x) {
            push(sut.next(s, x), m1p.next(q, x), static_cast<StateId>(node), x);
        }
    }
    return std::nullopt;
}

bool satisfied_by_definition(const Dfsm& sut, const Dfsm& model, const ResolvedRequirement& r,
                             const std::vector<SymbolId>& output_map) {
    const std::size_t nm = model.state_count();
    std::vector<char> reachable(sut.state_count() * nm, 0);
    std::vector<std::pair<StateId, StateId>> worklist;
    reachable[sut.initial() * nm + model.initial()] = 1;
    worklist.emplace_back(sut.initial(), model.initial());
    while (!worklist.empty()) {
        auto [s, q] = worklist.back();
        worklist.pop_back();
        for (SymbolId x = 0; x < sut.input_count(); ++x) {
            StateId s2 = sut.next(s, x);
            StateId q2 = model.next(q, x);
            if (!reachable[s2 * nm + q2]) {
                reachable[s2 * nm + q2] = 1;
                worklist.emplace_back(s2, q2);
            }
        }
    }
    for (const ResolvedItem& item : r.items) {
        for (StateId s = 0; s < sut.state_count(); ++s) {
            if (reachable[s * nm + item.state] &&
                !item.allowed_mask[output_map[sut.output(s, item.input)]]) {
                return false;
            }
        }
    }
    return true;
}

std::optional<IOTrace> satisfies_oracle(const Dfsm& sut, const Dfsm& model,
                                        const CompositeRequirement& r) {
    std::vector<SymbolId> output_map = require_compatible(model, sut, /*exact_outputs=*/false);
    ResolvedRequirement resolved = resolve_requirement(model, r);
    std::optional<IOTrace> witness =
        violation_by_reduction(sut, build_m1_prime(build_m1(model, resolved)), output_map);
    bool satisfied = satisfied_by_definition(sut, model, resolved, output_map);
    if (satisfied == witness.has_value()) {
        throw std::logic_error("requirement oracle routes disagree");
    }
    return witness;
}

bool is_requirement_trace(const Dfsm& model, const ResolvedRequirement& r,
                          const InputTrace& trace) {
    if (trace.empty()) {
        return false;
    }
    StateId q = model.initial();
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
        q = model.next(q, trace[i]);
    }
    return r.find(q, trace.back()) != nullptr;
}

bool is_requirement_trace(const Dfsm& model, const CompositeRequirement& r,
                          const InputTrace& trace) {
    return is_requirement_trace(model, resolve_requirement(model, r), trace);
}

} // namespace fsmreq
