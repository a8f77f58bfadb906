#include "fsmreq/reduction.hpp"

#include <algorithm>
#include <deque>

#include "fsmreq/trace_trie.hpp"

namespace fsmreq {

ReductionSuite reduction_suite(const NondetAbstraction& m1p, const ClassMap& classes,
                               std::uint32_t sut_bound) {
    const std::uint32_t n_classes = static_cast<std::uint32_t>(classes.class_count());
    if (sut_bound < n_classes) {
        throw std::invalid_argument("SUT state bound is below the abstraction's class count");
    }

    // deterministic state cover of M1', breadth-first over classes: targets
    // are deterministic, only outputs vary, so covering the minimized classes
    // covers the abstraction's behaviour
    ReductionSuite out;
    out.n_classes = n_classes;
    out.sut_bound = sut_bound;
    std::vector<char> seen(n_classes, 0);
    std::deque<std::pair<StateId, InputTrace>> frontier;
    StateId initial_class = classes.state_class[m1p.initial];
    seen[initial_class] = 1;
    out.cover.push_back({});
    frontier.emplace_back(m1p.initial, InputTrace{});
    while (!frontier.empty()) {
        auto [q, trace] = std::move(frontier.front());
        frontier.pop_front();
        for (SymbolId x = 0; x < m1p.input_count(); ++x) {
            StateId target = m1p.next(q, x);
            StateId target_class = classes.state_class[target];
            if (seen[target_class]) {
                continue;
            }
            seen[target_class] = 1;
            InputTrace extended = trace;
            extended.push_back(x);
            out.cover.push_back(extended);
            frontier.emplace_back(target, std::move(extended));
        }
    }

    const std::uint32_t bound = sut_bound * n_classes - n_classes + 1;
    std::vector<InputTrace>& cases = out.suite.cases;
    for (const InputTrace& v : out.cover) {
        std::vector<InputTrace> layer{v};
        for (std::uint32_t depth = 0; depth < bound; ++depth) {
            std::vector<InputTrace> next_layer;
            next_layer.reserve(layer.size() * m1p.input_count());
            for (const InputTrace& t : layer) {
                for (SymbolId x = 0; x < m1p.input_count(); ++x) {
                    InputTrace extended = t;
                    extended.push_back(x);
                    next_layer.push_back(std::move(extended));
                }
            }
            layer = std::move(next_layer);
        }
        cases.insert(cases.end(), layer.begin(), layer.end());
    }
    std::sort(cases.begin(), cases.end(), TraceLess{});
    cases.erase(std::unique(cases.begin(), cases.end()), cases.end());

    out.suite.method = "reduction";
    out.suite.extra_states = sut_bound - n_classes;
    out.suite.model_digest = text_digest(serialize_transitions(m1p));
    return out;
}

TestSuite filter_requirement_suite(const TestSuite& ts, const Dfsm& model,
                                   const CompositeRequirement& r) {
    ResolvedRequirement resolved = resolve_requirement(model, r);

    TraceTrie retained(model.input_count());
    for (const InputTrace& trace : ts.cases) {
        StateId q = model.initial();
        InputTrace prefix;
        prefix.reserve(trace.size());
        for (SymbolId x : trace) {
            prefix.push_back(x);
            if (resolved.find(q, x) != nullptr) {
                retained.insert(prefix);
            }
            q = model.next(q, x);
        }
    }

    TestSuite out;
    out.cases = retained.maximal();
    out.method = "req-cmp";
    out.extra_states = ts.extra_states;
    out.model_digest = model_digest(model);
    return out;
}

std::vector<std::vector<OutputClass>> expected_output_sets(const NondetAbstraction& m1p,
                                                           const TestSuite& suite) {
    std::vector<std::vector<OutputClass>> out;
    out.reserve(suite.cases.size());
    for (const InputTrace& trace : suite.cases) {
        std::vector<OutputClass> sets;
        sets.reserve(trace.size());
        StateId q = m1p.initial;
        for (SymbolId x : trace) {
            sets.push_back(m1p.allowed(q, x));
            q = m1p.next(q, x);
        }
        out.push_back(std::move(sets));
    }
    return out;
}

std::string serialize_expected_sets(const Dfsm& model, const NondetAbstraction& m1p,
                                    const TestSuite& suite) {
    std::vector<std::string> rendered;
    rendered.reserve(suite.cases.size());
    for (const InputTrace& trace : suite.cases) {
        rendered.push_back(render_trace(model, trace));
    }
    std::vector<std::size_t> order(suite.cases.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rendered[a] < rendered[b]; });

    std::string out;
    for (std::size_t i : order) {
        out += rendered[i];
        out += '/';
        StateId q = m1p.initial;
        const InputTrace& trace = suite.cases[i];
        for (std::size_t j = 0; j < trace.size(); ++j) {
            if (j) {
                out += ';';
            }
            const OutputClass& cls = m1p.allowed(q, trace[j]);
            std::vector<std::string> names;
            names.reserve(cls.members.size());
            for (SymbolId y : cls.members) {
                names.push_back(m1p.outputs.name(y));
            }
            std::sort(names.begin(), names.end());
            out += '{';
            for (std::size_t k = 0; k < names.size(); ++k) {
                if (k) {
                    out += '|';
                }
                out += names[k];
            }
            out += '}';
            q = m1p.next(q, trace[j]);
        }
        out += '\n';
    }
    return out;
}

} // namespace fsmreq
