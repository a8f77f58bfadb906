#pragma once

#include <algorithm>

#include "fsmreq/fsm.hpp"

namespace fsmreq {

/// Length-lexicographic order on input traces.
struct TraceLess {
    bool operator()(const InputTrace& a, const InputTrace& b) const {
        if (a.size() != b.size()) {
            return a.size() < b.size();
        }
        return a < b;
    }
};

/// Prefix tree over input traces. Nodes are exactly the prefixes of the
/// inserted traces, so membership of a node doubles as "is a prefix of some
/// inserted trace"; leaves are the traces no other inserted trace extends.
class TraceTrie {
public:
    explicit TraceTrie(std::size_t input_count) : input_count_(input_count) {
        children_.assign(input_count_, -1);
    }

    static constexpr std::int32_t kNone = -1;

    void insert(const InputTrace& trace) {
        inserted_any_ = true;
        std::int32_t node = 0;
        for (SymbolId x : trace) {
            std::size_t slot = static_cast<std::size_t>(node) * input_count_ + x;
            if (children_[slot] == kNone) {
                children_[slot] = static_cast<std::int32_t>(node_count());
                children_.resize(children_.size() + input_count_, kNone);
            }
            node = children_[slot];
        }
    }

    std::int32_t child(std::int32_t node, SymbolId x) const {
        return children_[static_cast<std::size_t>(node) * input_count_ + x];
    }

    std::int32_t walk(std::int32_t node, const InputTrace& trace) const {
        for (SymbolId x : trace) {
            if (node == kNone) {
                return kNone;
            }
            node = child(node, x);
        }
        return node;
    }

    bool contains_prefix(const InputTrace& trace) const {
        return inserted_any_ && walk(0, trace) != kNone;
    }

    bool contains_prefix(const InputTrace& head, const InputTrace& tail) const {
        if (!inserted_any_) {
            return false;
        }
        std::int32_t node = walk(0, head);
        return node != kNone && walk(node, tail) != kNone;
    }

    bool is_leaf(std::int32_t node) const {
        for (SymbolId x = 0; x < input_count_; ++x) {
            if (child(node, x) != kNone) {
                return false;
            }
        }
        return true;
    }

    std::size_t node_count() const { return children_.size() / input_count_; }

    /// Maximal inserted traces in length-lexicographic order.
    std::vector<InputTrace> maximal() const {
        std::vector<InputTrace> out;
        if (!inserted_any_) {
            return out;
        }
        InputTrace prefix;
        collect(0, prefix, out);
        std::sort(out.begin(), out.end(), TraceLess{});
        return out;
    }

private:
    void collect(std::int32_t node, InputTrace& prefix, std::vector<InputTrace>& out) const {
        bool leaf = true;
        for (SymbolId x = 0; x < input_count_; ++x) {
            std::int32_t c = child(node, x);
            if (c == kNone) {
                continue;
            }
            leaf = false;
            prefix.push_back(x);
            collect(c, prefix, out);
            prefix.pop_back();
        }
        if (leaf) {
            out.push_back(prefix);
        }
    }

    std::size_t input_count_;
    std::vector<std::int32_t> children_;
    bool inserted_any_ = false;
};

} // namespace fsmreq
