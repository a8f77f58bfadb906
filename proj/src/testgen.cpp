#include "fsmreq/testgen.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "fsmreq/model_io.hpp"
#include "fsmreq/trace_trie.hpp"

namespace fsmreq {

namespace {

constexpr std::size_t kCandidateCap = 128;

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct TraceHasher {
    std::size_t operator()(const InputTrace& t) const {
        std::uint64_t h = 1469598103934665603ull;
        for (SymbolId x : t) {
            h ^= x + 1;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

/// Cover traces plus their extensions by up to extra+1 symbols, deduplicated,
/// with reach state, abstraction class, and set membership per trace.
struct TraceTable {
    std::vector<InputTrace> traces;
    std::vector<StateId> state;
    std::vector<StateId> cls;
    std::vector<char> in_v, in_w;
    std::vector<std::uint32_t> rank; // position under length-lex order
    std::unordered_map<InputTrace, std::uint32_t, TraceHasher> index;

    std::uint32_t add(const Dfsm& model, const std::vector<StateId>& state_class,
                      const InputTrace& t) {
        auto [it, inserted] = index.emplace(t, static_cast<std::uint32_t>(traces.size()));
        if (inserted) {
            traces.push_back(t);
            StateId q = model.after(model.initial(), t);
            state.push_back(q);
            cls.push_back(state_class[q]);
            in_v.push_back(0);
            in_w.push_back(0);
        }
        return it->second;
    }
};

TraceTable build_trace_table(const Dfsm& model, const StateCover& cover,
                             const std::vector<StateId>& state_class, std::uint32_t extra) {
    TraceTable table;
    for (const InputTrace& v : cover.traces) {
        std::uint32_t idx = table.add(model, state_class, v);
        table.in_v[idx] = 1;
    }
    for (const InputTrace& v : cover.traces) {
        std::vector<InputTrace> layer{v};
        for (std::uint32_t depth = 1; depth <= extra + 1; ++depth) {
            std::vector<InputTrace> next_layer;
            next_layer.reserve(layer.size() * model.input_count());
            for (const InputTrace& t : layer) {
                for (SymbolId x = 0; x < model.input_count(); ++x) {
                    InputTrace extended = t;
                    extended.push_back(x);
                    std::uint32_t idx = table.add(model, state_class, extended);
                    table.in_w[idx] = 1;
                    next_layer.push_back(std::move(extended));
                }
            }
            layer = std::move(next_layer);
        }
    }
    std::vector<std::uint32_t> order(table.traces.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return TraceLess{}(table.traces[a], table.traces[b]);
    });
    table.rank.resize(order.size());
    for (std::uint32_t pos = 0; pos < order.size(); ++pos) {
        table.rank[order[pos]] = pos;
    }
    return table;
}

struct RawPairs {
    std::vector<PairSets::Pair> a, b, c;
};

RawPairs collect_pairs(const TraceTable& table) {
    RawPairs out;
    auto canonical = [&](std::uint32_t i, std::uint32_t j) {
        if (table.rank[i] > table.rank[j]) {
            std::swap(i, j);
        }
        return PairSets::Pair{i, j};
    };
    auto finish = [](std::vector<PairSets::Pair>& pairs) {
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    };

    std::vector<std::uint32_t> v_indices, w_indices;
    for (std::uint32_t i = 0; i < table.traces.size(); ++i) {
        if (table.in_v[i]) {
            v_indices.push_back(i);
        }
        if (table.in_w[i]) {
            w_indices.push_back(i);
        }
    }
    for (std::size_t i = 0; i < v_indices.size(); ++i) {
        for (std::size_t j = i + 1; j < v_indices.size(); ++j) {
            out.a.push_back(canonical(v_indices[i], v_indices[j]));
        }
    }
    for (std::uint32_t vi : v_indices) {
        for (std::uint32_t wj : w_indices) {
            if (vi != wj) {
                out.b.push_back(canonical(vi, wj));
            }
        }
    }
    for (std::uint32_t wj : w_indices) {
        const InputTrace& full = table.traces[wj];
        InputTrace prefix;
        prefix.reserve(full.size());
        for (std::size_t len = 1; len < full.size(); ++len) {
            prefix.push_back(full[len - 1]);
            auto it = table.index.find(prefix);
            if (it != table.index.end() && table.in_w[it->second]) {
                out.c.push_back(canonical(it->second, wj));
            }
        }
    }
    finish(out.a);
    finish(out.b);
    finish(out.c);
    return out;
}

bool distinguishable_in_model(const TraceTable& table, const std::vector<std::uint32_t>& lengths,
                              std::size_t n, PairSets::Pair p) {
    StateId s = table.state[p.alpha];
    StateId t = table.state[p.beta];
    return s != t && lengths[s * n + t] != detail::kInfDistance;
}

bool distinguishable_in_abstraction(const TraceTable& table, PairSets::Pair p) {
    return table.cls[p.alpha] != table.cls[p.beta];
}

/// Shortest distinguishing traces per unordered state pair, lex order, capped.
class CandidateCache {
public:
    CandidateCache(const Dfsm& model, const std::vector<std::uint32_t>& lengths)
        : model_(model), lengths_(lengths) {}

    const std::vector<InputTrace>& get(StateId p, StateId q) {
        if (p > q) {
            std::swap(p, q);
        }
        std::uint64_t key = static_cast<std::uint64_t>(p) * model_.state_count() + q;
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            it = cache_
                     .emplace(key, detail::shortest_distinguishers(model_, lengths_, p, q,
                                                                   kCandidateCap))
                     .first;
        }
        return it->second;
    }

private:
    const Dfsm& model_;
    const std::vector<std::uint32_t>& lengths_;
    std::unordered_map<std::uint64_t, std::vector<InputTrace>> cache_;
};

} // namespace

std::string text_digest(std::string_view text) {
    std::ostringstream out;
    out << std::hex << fnv1a(text);
    return out.str();
}

std::string model_digest(const Dfsm& model) {
    return text_digest(serialize_model(model));
}

PairSets compute_pair_sets(const Dfsm& model, const AbstractDfsm& m1, const StateCover& cover,
                           std::uint32_t extra_states) {
    ClassMap m2 = build_m2(m1);
    TraceTable table = build_trace_table(model, cover, m2.state_class, extra_states);
    RawPairs raw = collect_pairs(table);
    auto lengths = detail::distinguishing_lengths(model);
    CandidateCache candidates(model, lengths);

    PairSets out;
    out.traces = table.traces;
    out.a = raw.a;
    out.b = raw.b;
    out.c = raw.c;
    auto witness_of = [&](PairSets::Pair p) {
        const auto& traces = candidates.get(table.state[p.alpha], table.state[p.beta]);
        return traces.front();
    };
    for (PairSets::Pair p : raw.a) {
        if (distinguishable_in_model(table, lengths, model.state_count(), p)) {
            out.a_m.push_back(p);
            out.witness_a.push_back(witness_of(p));
        }
    }
    for (PairSets::Pair p : raw.b) {
        if (distinguishable_in_abstraction(table, p)) {
            out.b_m1.push_back(p);
            out.witness_b.push_back(witness_of(p));
        }
    }
    for (PairSets::Pair p : raw.c) {
        if (distinguishable_in_abstraction(table, p)) {
            out.c_m1.push_back(p);
            out.witness_c.push_back(witness_of(p));
        }
    }
    return out;
}

TestSuite exhaustive_suite_for_abstraction(const Dfsm& model, const AbstractDfsm& m1,
                                           std::uint32_t extra_states, std::string method) {
    if (!is_prime(model)) {
        throw std::invalid_argument("reference model must be a prime machine");
    }
    ClassMap m2 = build_m2(m1);
    StateCover cover = state_cover(model);
    TraceTable table = build_trace_table(model, cover, m2.state_class, extra_states);
    RawPairs raw = collect_pairs(table);
    auto lengths = detail::distinguishing_lengths(model);
    CandidateCache candidates(model, lengths);

    TraceTrie trie(model.input_count());
    for (const InputTrace& t : table.traces) {
        trie.insert(t);
    }
    std::vector<std::int32_t> node_of(table.traces.size());
    for (std::uint32_t i = 0; i < table.traces.size(); ++i) {
        node_of[i] = trie.walk(0, table.traces[i]);
    }

    // pairs that need a shared distinguishing extension
    std::vector<PairSets::Pair> pending;
    for (PairSets::Pair p : raw.a) {
        if (distinguishable_in_model(table, lengths, model.state_count(), p)) {
            pending.push_back(p);
        }
    }
    for (PairSets::Pair p : raw.b) {
        if (distinguishable_in_abstraction(table, p)) {
            pending.push_back(p);
        }
    }
    for (PairSets::Pair p : raw.c) {
        if (distinguishable_in_abstraction(table, p)) {
            pending.push_back(p);
        }
    }
    std::sort(pending.begin(), pending.end());
    pending.erase(std::unique(pending.begin(), pending.end()), pending.end());

    // pairs whose state pair has a unique shortest distinguisher first: their
    // extension is not negotiable, and later free pairs can then reuse it
    auto rank_less = [&](PairSets::Pair lhs, PairSets::Pair rhs) {
        return std::pair(table.rank[lhs.alpha], table.rank[lhs.beta]) <
               std::pair(table.rank[rhs.alpha], table.rank[rhs.beta]);
    };
    std::vector<PairSets::Pair> forced, free_pairs;
    for (PairSets::Pair p : pending) {
        const auto& cand = candidates.get(table.state[p.alpha], table.state[p.beta]);
        (cand.size() == 1 ? forced : free_pairs).push_back(p);
    }
    std::sort(forced.begin(), forced.end(), rank_less);
    std::sort(free_pairs.begin(), free_pairs.end(), rank_less);

    auto process = [&](const std::vector<PairSets::Pair>& pairs) {
        for (PairSets::Pair p : pairs) {
            const auto& cand = candidates.get(table.state[p.alpha], table.state[p.beta]);
            const InputTrace* chosen = nullptr;
            int best_score = -1;
            for (const InputTrace& gamma : cand) {
                int score = (trie.walk(node_of[p.alpha], gamma) != TraceTrie::kNone ? 1 : 0) +
                            (trie.walk(node_of[p.beta], gamma) != TraceTrie::kNone ? 1 : 0);
                if (score > best_score) {
                    best_score = score;
                    chosen = &gamma;
                    if (score == 2) {
                        break;
                    }
                }
            }
            InputTrace extended = table.traces[p.alpha];
            extended.insert(extended.end(), chosen->begin(), chosen->end());
            trie.insert(extended);
            extended = table.traces[p.beta];
            extended.insert(extended.end(), chosen->begin(), chosen->end());
            trie.insert(extended);
        }
    };
    process(forced);
    process(free_pairs);

    TestSuite suite;
    suite.cases = trie.maximal();
    suite.method = std::move(method);
    suite.extra_states = extra_states;
    suite.model_digest = model_digest(model);
    verify_exhaustive_conditions(model, m1, extra_states, suite);
    return suite;
}

TestSuite h_suite(const Dfsm& model, std::uint32_t extra_states) {
    return exhaustive_suite_for_abstraction(model, identity_abstraction(model), extra_states,
                                            "equiv");
}

TestSuite exhaustive_req_suite(const Dfsm& model, const CompositeRequirement& r,
                               std::uint32_t extra_states) {
    return exhaustive_suite_for_abstraction(model, build_m1(model, r), extra_states, "req-exh");
}

std::vector<IOTrace> expected_results(const Dfsm& model, const TestSuite& suite) {
    std::vector<IOTrace> out;
    out.reserve(suite.cases.size());
    for (const InputTrace& trace : suite.cases) {
        out.push_back({trace, model.output_trace(model.initial(), trace)});
    }
    return out;
}

void verify_exhaustive_conditions(const Dfsm& model, const AbstractDfsm& m1,
                                  std::uint32_t extra_states, const TestSuite& suite) {
    TraceTrie trie(model.input_count());
    for (const InputTrace& t : suite.cases) {
        trie.insert(t);
    }
    for (const InputTrace& t : suite.cases) {
        if (!trie.is_leaf(trie.walk(0, t))) {
            throw std::logic_error("suite case '" + render_trace(model, t) +
                                   "' is a proper prefix of another case");
        }
    }

    StateCover cover = state_cover(model);

    // core-set condition: the trie subtree under every cover trace must be
    // complete down to depth extra+1
    struct Frame {
        std::int32_t node;
        std::uint32_t depth;
    };
    for (const InputTrace& v : cover.traces) {
        std::int32_t start = trie.walk(0, v);
        if (start == TraceTrie::kNone) {
            throw std::logic_error("core-set condition violated at cover trace '" +
                                   render_trace(model, v) + "'");
        }
        std::deque<Frame> stack{{start, 0}};
        while (!stack.empty()) {
            Frame frame = stack.back();
            stack.pop_back();
            if (frame.depth == extra_states + 1) {
                continue;
            }
            for (SymbolId x = 0; x < model.input_count(); ++x) {
                std::int32_t child = trie.child(frame.node, x);
                if (child == TraceTrie::kNone) {
                    throw std::logic_error("core-set condition violated below cover trace '" +
                                           render_trace(model, v) + "'");
                }
                stack.push_back({child, frame.depth + 1});
            }
        }
    }

    // pair condition: search a common extension distinguishing the pair
    ClassMap m2 = build_m2(m1);
    TraceTable table = build_trace_table(model, cover, m2.state_class, extra_states);
    RawPairs raw = collect_pairs(table);
    auto lengths = detail::distinguishing_lengths(model);
    CandidateCache candidates(model, lengths);

    std::vector<PairSets::Pair> pairs;
    for (PairSets::Pair p : raw.a) {
        if (distinguishable_in_model(table, lengths, model.state_count(), p)) {
            pairs.push_back(p);
        }
    }
    for (PairSets::Pair p : raw.b) {
        if (distinguishable_in_abstraction(table, p)) {
            pairs.push_back(p);
        }
    }
    for (PairSets::Pair p : raw.c) {
        if (distinguishable_in_abstraction(table, p)) {
            pairs.push_back(p);
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    auto replay_differs = [&](StateId p, StateId q, const InputTrace& gamma) {
        return model.output_trace(p, gamma) != model.output_trace(q, gamma);
    };

    for (PairSets::Pair p : pairs) {
        std::int32_t node_a = trie.walk(0, table.traces[p.alpha]);
        std::int32_t node_b = trie.walk(0, table.traces[p.beta]);
        StateId sa = table.state[p.alpha];
        StateId sb = table.state[p.beta];
        bool found = false;
        for (const InputTrace& gamma : candidates.get(sa, sb)) {
            if (trie.walk(node_a, gamma) != TraceTrie::kNone &&
                trie.walk(node_b, gamma) != TraceTrie::kNone && replay_differs(sa, sb, gamma)) {
                found = true;
                break;
            }
        }
        if (!found) {
            // full search over common extensions present in the suite
            struct ProductNode {
                std::int32_t a, b;
                StateId p, q;
            };
            std::deque<ProductNode> frontier{{node_a, node_b, sa, sb}};
            while (!frontier.empty() && !found) {
                ProductNode node = frontier.front();
                frontier.pop_front();
                for (SymbolId x = 0; x < model.input_count(); ++x) {
                    std::int32_t ca = trie.child(node.a, x);
                    std::int32_t cb = trie.child(node.b, x);
                    if (ca == TraceTrie::kNone || cb == TraceTrie::kNone) {
                        continue;
                    }
                    if (model.output(node.p, x) != model.output(node.q, x)) {
                        found = true;
                        break;
                    }
                    frontier.push_back({ca, cb, model.next(node.p, x), model.next(node.q, x)});
                }
            }
        }
        if (!found) {
            throw std::logic_error("pair condition violated for (" +
                                   render_trace(model, table.traces[p.alpha]) + ", " +
                                   render_trace(model, table.traces[p.beta]) + ")");
        }
    }
}

std::string render_trace(const Dfsm& model, const InputTrace& trace) {
    std::string out;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (i) {
            out += '.';
        }
        out += model.inputs().name(trace[i]);
    }
    return out;
}

namespace {

std::vector<std::size_t> file_order(const Dfsm& model, const TestSuite& suite,
                                    std::vector<std::string>& rendered) {
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
    return order;
}

} // namespace

std::string serialize_suite(const Dfsm& model, const TestSuite& suite) {
    for (const std::string& name : model.inputs().symbols()) {
        if (name.find('.') != std::string::npos) {
            throw std::logic_error("input name '" + name + "' cannot appear in a suite file");
        }
    }
    std::vector<std::string> rendered;
    std::vector<std::size_t> order = file_order(model, suite, rendered);
    std::string out;
    for (std::size_t i : order) {
        out += rendered[i];
        out += '\n';
    }
    return out;
}

TestSuite parse_suite(const Dfsm& model, std::string_view text, std::string method) {
    TestSuite suite;
    suite.method = std::move(method);
    suite.model_digest = model_digest(model);
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line(text.substr(
            pos, eol == std::string_view::npos ? text.size() - pos : eol - pos));
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        InputTrace trace;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t dot = line.find('.', start);
            std::string name =
                line.substr(start, dot == std::string::npos ? line.size() - start : dot - start);
            auto id = model.inputs().find(name);
            if (!id) {
                throw std::runtime_error("suite line " + std::to_string(line_no) +
                                         ": unknown input '" + name + "'");
            }
            trace.push_back(*id);
            if (dot == std::string::npos) {
                break;
            }
            start = dot + 1;
        }
        suite.cases.push_back(std::move(trace));
    }
    return suite;
}

TestSuite parse_suite_file(const Dfsm& model, const std::filesystem::path& path,
                           std::string method) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open suite file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_suite(model, buffer.str(), std::move(method));
}

std::string serialize_expected_results(const Dfsm& model, const TestSuite& suite) {
    std::vector<std::string> rendered;
    std::vector<std::size_t> order = file_order(model, suite, rendered);
    std::string out;
    for (std::size_t i : order) {
        OutputTrace outputs = model.output_trace(model.initial(), suite.cases[i]);
        out += rendered[i];
        out += '/';
        for (std::size_t j = 0; j < outputs.size(); ++j) {
            if (j) {
                out += '.';
            }
            out += model.outputs().name(outputs[j]);
        }
        out += '\n';
    }
    return out;
}

} // namespace fsmreq
