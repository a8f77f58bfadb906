#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fsmreq/fsm.hpp"

namespace fsmreq {

/// R(q, x, Z): in any implementation state corresponding to q, input x must
/// produce an output from `allowed`. Symbols are stored by name and resolved
/// against a concrete model during validation.
struct ElementaryRequirement {
    std::string state;
    std::string input;
    std::vector<std::string> allowed;

    bool operator==(const ElementaryRequirement&) const = default;
};

/// Conjunction of elementary requirements with pairwise distinct
/// (state, input) pairs.
struct CompositeRequirement {
    std::vector<ElementaryRequirement> items;

    bool operator==(const CompositeRequirement&) const = default;
};

struct RequirementError : std::runtime_error {
    enum class Code {
        unknown_state,
        unknown_input,
        unknown_output,
        empty_allowed_set,
        allowed_set_full,
        expected_output_not_allowed,
        duplicate_pair,
        syntax,
    };

    RequirementError(Code code, const std::string& what);

    Code code;
};

/// Checks every invariant: known symbols, non-empty allowed set that is a
/// strict subset of the output alphabet, the modelled output inside it, and
/// no repeated (state, input) pair. Throws RequirementError otherwise.
void validate_requirement(const Dfsm& model, const CompositeRequirement& r);

/// Requirement resolved to symbol ids, with a per-cell item lookup.
struct ResolvedItem {
    StateId state;
    SymbolId input;
    std::vector<SymbolId> allowed; // ascending
    std::vector<char> allowed_mask; // indexed by output id
};

struct ResolvedRequirement {
    std::vector<ResolvedItem> items;
    /// (state * input_count + input) -> item index, or -1
    std::vector<std::int32_t> item_at;
    std::size_t input_count = 0;

    const ResolvedItem* find(StateId q, SymbolId x) const {
        std::int32_t idx = item_at[q * input_count + x];
        return idx < 0 ? nullptr : &items[static_cast<std::size_t>(idx)];
    }
};

/// Validates and resolves in one step.
ResolvedRequirement resolve_requirement(const Dfsm& model, const CompositeRequirement& r);

/// R_eq: one singleton-allowed item per (state, input) cell; satisfying it is
/// the same as being language-equivalent to the model.
CompositeRequirement equivalence_requirement(const Dfsm& model);

/// Requirement file format, one item per line:
///   <state>,<input>,{<out1>|<out2>|...}
/// '#' starts a comment; line order defines item order.
CompositeRequirement parse_requirement(std::string_view text);
CompositeRequirement parse_requirement_file(const std::filesystem::path& path);
std::string serialize_requirement(const CompositeRequirement& r);

} // namespace fsmreq
