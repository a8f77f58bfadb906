#include "fsmreq/analysis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>

namespace fsmreq {

StateCover state_cover(const Dfsm& m) {
    StateCover cover;
    std::vector<char> seen(m.state_count(), 0);
    std::deque<std::pair<StateId, InputTrace>> frontier;
    seen[m.initial()] = 1;
    cover.traces.push_back({});
    cover.targets.push_back(m.initial());
    frontier.emplace_back(m.initial(), InputTrace{});
    while (!frontier.empty()) {
        auto [q, trace] = std::move(frontier.front());
        frontier.pop_front();
        for (SymbolId x = 0; x < m.input_count(); ++x) {
            StateId target = m.next(q, x);
            if (seen[target]) {
                continue;
            }
            seen[target] = 1;
            InputTrace extended = trace;
            extended.push_back(x);
            cover.traces.push_back(extended);
            cover.targets.push_back(target);
            frontier.emplace_back(target, std::move(extended));
        }
    }
    return cover;
}

namespace {

/// Equivalence classes by iterated refinement; block ids are numbered by
/// first occurrence when scanning states in index order.
std::vector<StateId> equivalence_classes(const Dfsm& m, std::size_t* count_out) {
    const std::size_t n = m.state_count();
    const std::size_t ni = m.input_count();
    std::vector<StateId> block(n);
    std::size_t blocks = 0;
    {
        std::map<std::vector<SymbolId>, StateId> by_row;
        for (StateId q = 0; q < n; ++q) {
            std::vector<SymbolId> row(m.omega().begin() + q * ni,
                                      m.omega().begin() + (q + 1) * ni);
            auto [it, inserted] = by_row.emplace(std::move(row), static_cast<StateId>(blocks));
            if (inserted) {
                ++blocks;
            }
            block[q] = it->second;
        }
        // renumber by first occurrence for a stable order
        std::vector<StateId> renamed(blocks, kNoState);
        std::size_t next_id = 0;
        for (StateId q = 0; q < n; ++q) {
            if (renamed[block[q]] == kNoState) {
                renamed[block[q]] = static_cast<StateId>(next_id++);
            }
            block[q] = renamed[block[q]];
        }
    }

    while (true) {
        std::map<std::vector<StateId>, StateId> by_key;
        std::vector<StateId> refined(n);
        std::size_t refined_count = 0;
        for (StateId q = 0; q < n; ++q) {
            std::vector<StateId> key;
            key.reserve(ni + 1);
            key.push_back(block[q]);
            for (SymbolId x = 0; x < ni; ++x) {
                key.push_back(block[m.next(q, x)]);
            }
            auto [it, inserted] = by_key.emplace(std::move(key),
                                                 static_cast<StateId>(refined_count));
            if (inserted) {
                ++refined_count;
            }
            refined[q] = it->second;
        }
        std::vector<StateId> renamed(refined_count, kNoState);
        std::size_t next_id = 0;
        for (StateId q = 0; q < n; ++q) {
            if (renamed[refined[q]] == kNoState) {
                renamed[refined[q]] = static_cast<StateId>(next_id++);
            }
            refined[q] = renamed[refined[q]];
        }
        if (refined_count == blocks) {
            block = std::move(refined);
            break;
        }
        blocks = refined_count;
        block = std::move(refined);
    }
    if (count_out) {
        *count_out = blocks;
    }
    return block;
}

} // namespace

Minimized minimize(const Dfsm& m) {
    const std::size_t n = m.state_count();
    const std::size_t ni = m.input_count();
    std::size_t blocks = 0;
    std::vector<StateId> block = equivalence_classes(m, &blocks);

    std::vector<StateId> representative_of_block(blocks, kNoState);
    std::vector<StateId> representative(n);
    for (StateId q = 0; q < n; ++q) {
        if (representative_of_block[block[q]] == kNoState) {
            representative_of_block[block[q]] = q;
        }
    }
    for (StateId q = 0; q < n; ++q) {
        representative[q] = representative_of_block[block[q]];
    }

    // keep only classes reachable from the initial class
    std::vector<StateId> class_state(blocks, kNoState);
    std::vector<StateId> kept_blocks;
    std::deque<StateId> frontier;
    auto discover = [&](StateId b) {
        if (class_state[b] == kNoState) {
            class_state[b] = static_cast<StateId>(kept_blocks.size());
            kept_blocks.push_back(b);
            frontier.push_back(b);
        }
    };
    discover(block[m.initial()]);
    while (!frontier.empty()) {
        StateId b = frontier.front();
        frontier.pop_front();
        StateId rep = representative_of_block[b];
        for (SymbolId x = 0; x < ni; ++x) {
            discover(block[m.next(rep, x)]);
        }
    }
    // stable order: ascending representative among reachable classes
    std::sort(kept_blocks.begin(), kept_blocks.end(), [&](StateId a, StateId b) {
        return representative_of_block[a] < representative_of_block[b];
    });
    std::fill(class_state.begin(), class_state.end(), kNoState);
    for (StateId i = 0; i < kept_blocks.size(); ++i) {
        class_state[kept_blocks[i]] = i;
    }

    std::vector<std::string> names;
    names.reserve(kept_blocks.size());
    std::vector<StateId> delta(kept_blocks.size() * ni);
    std::vector<SymbolId> omega(kept_blocks.size() * ni);
    for (StateId i = 0; i < kept_blocks.size(); ++i) {
        StateId rep = representative_of_block[kept_blocks[i]];
        names.push_back(m.state_name(rep));
        for (SymbolId x = 0; x < ni; ++x) {
            delta[i * ni + x] = class_state[block[m.next(rep, x)]];
            omega[i * ni + x] = m.output(rep, x);
        }
    }

    Minimized result{Dfsm(std::move(names), class_state[block[m.initial()]], m.inputs(),
                          m.outputs(), std::move(delta), std::move(omega)),
                     std::move(representative),
                     std::vector<StateId>(n)};
    for (StateId q = 0; q < n; ++q) {
        result.state_class[q] = class_state[block[q]];
    }
    return result;
}

bool is_prime(const Dfsm& m) {
    return minimize(m).machine.state_count() == m.state_count();
}

namespace detail {

std::vector<std::uint32_t> distinguishing_lengths(const Dfsm& m) {
    const std::size_t n = m.state_count();
    const std::size_t ni = m.input_count();
    std::vector<std::uint32_t> dist(n * n, kInfDistance);
    std::deque<std::pair<StateId, StateId>> frontier;

    auto at = [&](StateId a, StateId b) -> std::uint32_t& { return dist[a * n + b]; };

    for (StateId a = 0; a < n; ++a) {
        for (StateId b = a + 1; b < n; ++b) {
            for (SymbolId x = 0; x < ni; ++x) {
                if (m.output(a, x) != m.output(b, x)) {
                    at(a, b) = at(b, a) = 1;
                    frontier.emplace_back(a, b);
                    break;
                }
            }
        }
    }

    // reverse edges of the pair graph
    std::vector<std::vector<std::pair<StateId, StateId>>> preimage(n * n);
    for (StateId a = 0; a < n; ++a) {
        for (StateId b = a + 1; b < n; ++b) {
            for (SymbolId x = 0; x < ni; ++x) {
                StateId a2 = m.next(a, x);
                StateId b2 = m.next(b, x);
                if (a2 == b2) {
                    continue;
                }
                if (a2 > b2) {
                    std::swap(a2, b2);
                }
                preimage[a2 * n + b2].emplace_back(a, b);
            }
        }
    }

    while (!frontier.empty()) {
        auto [a, b] = frontier.front();
        frontier.pop_front();
        std::uint32_t d = at(a, b);
        for (auto [pa, pb] : preimage[a * n + b]) {
            if (at(pa, pb) == kInfDistance) {
                at(pa, pb) = at(pb, pa) = d + 1;
                frontier.emplace_back(pa, pb);
            }
        }
    }
    return dist;
}

namespace {

void collect_distinguishers(const Dfsm& m, const std::vector<std::uint32_t>& lengths,
                            StateId q, StateId r, std::uint32_t remaining,
                            InputTrace& prefix, std::vector<InputTrace>& out,
                            std::size_t max_count) {
    if (out.size() >= max_count) {
        return;
    }
    const std::size_t n = m.state_count();
    if (remaining == 1) {
        for (SymbolId x = 0; x < m.input_count(); ++x) {
            if (m.output(q, x) != m.output(r, x)) {
                prefix.push_back(x);
                out.push_back(prefix);
                prefix.pop_back();
                if (out.size() >= max_count) {
                    return;
                }
            }
        }
        return;
    }
    for (SymbolId x = 0; x < m.input_count(); ++x) {
        if (m.output(q, x) != m.output(r, x)) {
            continue; // would distinguish earlier, so no shortest trace starts here
        }
        StateId q2 = m.next(q, x);
        StateId r2 = m.next(r, x);
        if (q2 == r2 || lengths[q2 * n + r2] != remaining - 1) {
            continue;
        }
        prefix.push_back(x);
        collect_distinguishers(m, lengths, q2, r2, remaining - 1, prefix, out, max_count);
        prefix.pop_back();
        if (out.size() >= max_count) {
            return;
        }
    }
}

} // namespace

std::vector<InputTrace> shortest_distinguishers(const Dfsm& m,
                                                const std::vector<std::uint32_t>& lengths,
                                                StateId q, StateId r,
                                                std::size_t max_count) {
    std::vector<InputTrace> out;
    if (q == r) {
        return out;
    }
    std::uint32_t d = lengths[q * m.state_count() + r];
    if (d == kInfDistance) {
        return out;
    }
    InputTrace prefix;
    collect_distinguishers(m, lengths, q, r, d, prefix, out, max_count);
    return out;
}

} // namespace detail

std::optional<InputTrace> distinguishing_trace(const Dfsm& m, StateId q, StateId r) {
    if (q >= m.state_count() || r >= m.state_count()) {
        throw std::out_of_range("state index out of range");
    }
    auto lengths = detail::distinguishing_lengths(m);
    auto traces = detail::shortest_distinguishers(m, lengths, q, r, 1);
    if (traces.empty()) {
        return std::nullopt;
    }
    return traces.front();
}

std::optional<InputTrace> equivalence_counterexample(const Dfsm& a, const Dfsm& b) {
    std::vector<SymbolId> output_map = require_compatible(a, b, /*exact_outputs=*/true);

    const std::size_t nb = b.state_count();
    struct Visit {
        StateId parent = kNoState; // index into visit order
        SymbolId via = 0;
    };
    std::vector<std::int64_t> seen(a.state_count() * nb, -1);
    std::vector<Visit> visits;
    std::vector<std::pair<StateId, StateId>> order;
    std::deque<std::size_t> frontier;

    auto push = [&](StateId pa, StateId pb, StateId parent, SymbolId via) {
        if (seen[pa * nb + pb] >= 0) {
            return;
        }
        seen[pa * nb + pb] = static_cast<std::int64_t>(order.size());
        order.emplace_back(pa, pb);
        visits.push_back({parent, via});
        frontier.push_back(order.size() - 1);
    };

    auto rebuild = [&](std::size_t node, SymbolId last) {
        InputTrace trace;
        while (visits[node].parent != kNoState) {
            trace.push_back(visits[node].via);
            node = visits[node].parent;
        }
        std::reverse(trace.begin(), trace.end());
        trace.push_back(last);
        return trace;
    };

    push(a.initial(), b.initial(), kNoState, 0);
    while (!frontier.empty()) {
        std::size_t node = frontier.front();
        frontier.pop_front();
        auto [pa, pb] = order[node];
        for (SymbolId x = 0; x < a.input_count(); ++x) {
            if (a.output(pa, x) != output_map[b.output(pb, x)]) {
                return rebuild(node, x);
            }
        }
        for (SymbolId x = 0; x < a.input_count(); ++x) {
            push(a.next(pa, x), b.next(pb, x), static_cast<StateId>(node), x);
        }
    }
    return std::nullopt;
}

} // namespace fsmreq
