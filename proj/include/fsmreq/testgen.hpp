#pragma once

#include "fsmreq/abstraction.hpp"

namespace fsmreq {

/// A set of test cases (input traces). Generated suites are prefix-free and
/// kept in length-lexicographic order.
struct TestSuite {
    std::vector<InputTrace> cases;
    std::string method; // "equiv" | "req-exh" | "req-cmp" | "reduction"
    std::uint32_t extra_states = 0;
    std::string model_digest;
};

/// The trace-pair machinery behind the exhaustive construction. `traces` is
/// the table of cover traces and their bounded extensions; pairs are stored
/// canonically (alpha before beta in length-lex order, no diagonal, no
/// mirrored duplicates). a/b/c are the raw sets, a_m/b_m1/c_m1 the variants
/// filtered by distinguishability in the model resp. the abstraction, each
/// filtered pair carrying its shortest (lex-least) distinguisher from the
/// model as witness.
struct PairSets {
    struct Pair {
        std::uint32_t alpha;
        std::uint32_t beta;

        friend auto operator<=>(const Pair&, const Pair&) = default;
    };

    std::vector<InputTrace> traces;
    std::vector<Pair> a, b, c;
    std::vector<Pair> a_m, b_m1, c_m1;
    std::vector<InputTrace> witness_a, witness_b, witness_c;
};

/// Language-equivalence suite in the H-method style: complete for the fault
/// domain of DFSMs with at most state_count + extra_states states.
TestSuite h_suite(const Dfsm& model, std::uint32_t extra_states);

/// Requirements-exhaustive suite: passing it (outputs equal to the model's)
/// implies the composite requirement holds, for the same fault domain.
TestSuite exhaustive_req_suite(const Dfsm& model, const CompositeRequirement& r,
                               std::uint32_t extra_states);

/// Shared generator: core set plus one distinguishing extension per pair that
/// the model (A) or the abstraction (B/C) can tell apart.
TestSuite exhaustive_suite_for_abstraction(const Dfsm& model, const AbstractDfsm& m1,
                                           std::uint32_t extra_states, std::string method);

PairSets compute_pair_sets(const Dfsm& model, const AbstractDfsm& m1, const StateCover& cover,
                           std::uint32_t extra_states);

/// One expected I/O trace per case, outputs taken from the model.
std::vector<IOTrace> expected_results(const Dfsm& model, const TestSuite& suite);

/// Independently re-derives the core-set and pair-extension conditions and
/// checks them against the suite (witness search included); throws
/// std::logic_error naming the first violated condition. Also rejects suites
/// with a case that is a proper prefix of another.
void verify_exhaustive_conditions(const Dfsm& model, const AbstractDfsm& m1,
                                  std::uint32_t extra_states, const TestSuite& suite);

/// FNV-1a over the given text, as a hex string.
std::string text_digest(std::string_view text);

/// text_digest of the serialized model.
std::string model_digest(const Dfsm& model);

/// Suite file: one case per line, input names joined by '.', lines sorted
/// byte-lexicographically.
std::string serialize_suite(const Dfsm& model, const TestSuite& suite);
TestSuite parse_suite(const Dfsm& model, std::string_view text, std::string method);
TestSuite parse_suite_file(const Dfsm& model, const std::filesystem::path& path,
                           std::string method);

/// Expected-results file: "<case>/<outputs-joined-by-.>", same line order as
/// the suite file.
std::string serialize_expected_results(const Dfsm& model, const TestSuite& suite);

std::string render_trace(const Dfsm& model, const InputTrace& trace);

} // namespace fsmreq
