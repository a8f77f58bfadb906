// Acceptance suite: runs every guarantee the toolkit is supposed to deliver
// at desk scale and prints one verdict line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "fsmreq/harness.hpp"
#include "fsmreq/model_io.hpp"

using namespace fsmreq;

namespace {

std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(FIXTURES_DIR) / name;
}

struct Outcome {
    bool passed = true;
    std::ostringstream detail;
};

#define REQUIRE_THAT(outcome, condition)                                      \
    do {                                                                      \
        if (!(condition)) {                                                   \
            (outcome).passed = false;                                         \
            (outcome).detail << " [" #condition "]";                          \
        }                                                                     \
    } while (0)

struct Fixtures {
    Dfsm m = parse_model_file(fixture("M.csv"));
    Dfsm s = parse_model_file(fixture("S.csv"));
    Dfsm s_violating = parse_model_file(fixture("S_violating.csv"));
    Dfsm fsb = parse_model_file(fixture("fsb_rts.csv"));
    CompositeRequirement r = parse_requirement_file(fixture("R.req"));
    CompositeRequirement r1 = parse_requirement_file(fixture("R1.req"));
    CompositeRequirement r2 = parse_requirement_file(fixture("R2.req"));
};

// 1. structural facts of the cabin-controller model
Outcome structural_facts(const Fixtures& fx) {
    Outcome out;
    REQUIRE_THAT(out, fx.fsb.state_count() == 24);
    REQUIRE_THAT(out, fx.fsb.input_count() == 9);
    REQUIRE_THAT(out, fx.fsb.outputs().size() == 3);
    REQUIRE_THAT(out, minimize(fx.fsb).machine.state_count() == 24);
    REQUIRE_THAT(out, build_m2(build_m1(fx.fsb, fx.r1)).class_count() == 1);
    return out;
}

// 2. suite sizes inside the published factor-2 bands, with the hard ordering
Outcome suite_size_bands(const Fixtures& fx) {
    Outcome out;
    const std::size_t h_low[] = {259, 2035, 17663};
    const std::size_t h_high[] = {1036, 8138, 70650};
    const std::size_t r1_low[] = {97, 869, 7817};
    const std::size_t r1_high[] = {386, 3474, 31266};
    const std::size_t r2_low[] = {169, 1518, 13664};
    const std::size_t r2_high[] = {674, 6070, 54654};
    for (std::uint32_t extra = 0; extra <= 2; ++extra) {
        auto start = std::chrono::steady_clock::now();
        TestSuite h = h_suite(fx.fsb, extra);
        TestSuite s1 = exhaustive_req_suite(fx.fsb, fx.r1, extra);
        TestSuite s2 = exhaustive_req_suite(fx.fsb, fx.r2, extra);
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                             .count();
        out.detail << " extra=" << extra << ": H=" << h.cases.size()
                   << " R1=" << s1.cases.size() << " R2=" << s2.cases.size();
        REQUIRE_THAT(out, h.cases.size() >= h_low[extra] && h.cases.size() <= h_high[extra]);
        REQUIRE_THAT(out, s1.cases.size() >= r1_low[extra] && s1.cases.size() <= r1_high[extra]);
        REQUIRE_THAT(out, s2.cases.size() >= r2_low[extra] && s2.cases.size() <= r2_high[extra]);
        REQUIRE_THAT(out, s1.cases.size() < s2.cases.size());
        REQUIRE_THAT(out, s2.cases.size() < h.cases.size());
        REQUIRE_THAT(out, seconds < (extra <= 1 ? 60.0 : 900.0));
    }
    return out;
}

// 3. the four-case requirement suite passes the compliant implementation,
// the five-case equivalence suite uncovers it
Outcome small_model_reproduction(const Fixtures& fx) {
    Outcome out;
    TestSuite req_suite = exhaustive_req_suite(fx.m, fx.r, 0);
    REQUIRE_THAT(out, req_suite.cases.size() <= 6);
    REQUIRE_THAT(out, all_passed(run_suite_equiv(fx.s, fx.m, req_suite)));

    TestSuite eq_suite = h_suite(fx.m, 0);
    std::vector<CaseResult> results = run_suite_equiv(fx.s, fx.m, eq_suite);
    bool found = false;
    for (const CaseResult& result : results) {
        if (result.passed) {
            continue;
        }
        found = true;
        REQUIRE_THAT(out, render_trace(fx.m, result.input) == "a.a.a");
        REQUIRE_THAT(out, result.first_divergence == 3);
        const OutputTrace& expected = std::get<OutputTrace>(result.expected);
        REQUIRE_THAT(out, fx.m.outputs().name(expected[2]) == "0");
        REQUIRE_THAT(out, fx.m.outputs().name(result.observed[2]) == "1");
        REQUIRE_THAT(out, fx.m.outputs().name(result.observed[0]) == "1");
        REQUIRE_THAT(out, fx.m.outputs().name(result.observed[1]) == "0");
    }
    REQUIRE_THAT(out, found);
    out.detail << " req-cases=" << req_suite.cases.size()
               << " equiv-cases=" << eq_suite.cases.size();
    return out;
}

// 4. exhaustive suites never accept a requirement-violating machine
Outcome exhaustive_guarantee(const Fixtures& fx) {
    Outcome out;
    MachineEnumerator universe(3, fx.m.inputs(), fx.m.outputs());
    REQUIRE_THAT(out, universe.total() == 531441);
    CoverageReport report =
        coverage_experiment(fx.m, fx.r, 0, Strategy::exhaustive_equal, universe);
    REQUIRE_THAT(out, report.examined == 531441);
    REQUIRE_THAT(out, report.pass_viol == 0);
    out.detail << " " << report.summary_line();
    for (const std::string& example : report.counterexamples) {
        out.detail << " | " << example;
    }
    return out;
}

// 5. the filtered reduction suite accepts exactly the satisfying machines
Outcome complete_guarantee(const Fixtures& fx) {
    Outcome out;
    MachineEnumerator universe(3, fx.m.inputs(), fx.m.outputs());
    CoverageReport report =
        coverage_experiment(fx.m, fx.r, 0, Strategy::complete_membership, universe);
    REQUIRE_THAT(out, report.examined == 531441);
    REQUIRE_THAT(out, report.pass_viol == 0);
    REQUIRE_THAT(out, report.fail_sat == 0);
    out.detail << " " << report.summary_line();
    for (const std::string& example : report.counterexamples) {
        out.detail << " | " << example;
    }
    return out;
}

// 6. the two oracle routes agree everywhere
Outcome oracle_agreement(const Fixtures& fx) {
    Outcome out;
    ResolvedRequirement resolved = resolve_requirement(fx.m, fx.r);
    NondetAbstraction m1p = build_m1_prime(fx.m, fx.r);
    MachineEnumerator universe(3, fx.m.inputs(), fx.m.outputs());
    std::uint64_t disagreements = 0;
    std::vector<SymbolId> identity_map(fx.m.outputs().size());
    for (SymbolId y = 0; y < identity_map.size(); ++y) {
        identity_map[y] = y;
    }
    while (auto machine = universe.next()) {
        bool by_definition = satisfied_by_definition(*machine, fx.m, resolved, identity_map);
        bool by_reduction = !violation_by_reduction(*machine, m1p, identity_map).has_value();
        disagreements += by_definition != by_reduction;
    }
    out.detail << " disagreements=" << disagreements;
    REQUIRE_THAT(out, disagreements == 0);
    return out;
}

// 7. under the strictest requirement the pass set is the equivalence set
Outcome equivalence_bridge(const Fixtures& fx) {
    Outcome out;
    TestSuite suite = exhaustive_req_suite(fx.m, equivalence_requirement(fx.m), 0);
    std::vector<OutputTrace> expected;
    for (const InputTrace& input : suite.cases) {
        expected.push_back(fx.m.output_trace(fx.m.initial(), input));
    }
    MachineEnumerator universe(3, fx.m.inputs(), fx.m.outputs());
    std::uint64_t disagreements = 0;
    std::uint64_t equivalent = 0;
    while (auto machine = universe.next()) {
        const Dfsm& sut = *machine;
        bool pass = true;
        for (std::size_t i = 0; pass && i < suite.cases.size(); ++i) {
            StateId q = sut.initial();
            for (std::size_t j = 0; j < suite.cases[i].size(); ++j) {
                SymbolId x = suite.cases[i][j];
                if (sut.output(q, x) != expected[i][j]) {
                    pass = false;
                    break;
                }
                q = sut.next(q, x);
            }
        }
        bool same_language = language_equivalent(fx.m, sut);
        disagreements += pass != same_language;
        equivalent += same_language;
    }
    out.detail << " disagreements=" << disagreements << " equivalent=" << equivalent;
    REQUIRE_THAT(out, disagreements == 0);
    REQUIRE_THAT(out, equivalent >= 1);
    return out;
}

// 8. the violating fixture slips through the four cases under membership but
// not past the oracle
Outcome negative_control(const Fixtures& fx) {
    Outcome out;
    TestSuite suite = exhaustive_req_suite(fx.m, fx.r, 0);
    NondetAbstraction m1p = build_m1_prime(fx.m, fx.r);
    REQUIRE_THAT(out, all_passed(run_suite_reduction(fx.s_violating, m1p, suite)));
    auto witness = satisfies_oracle(fx.s_violating, fx.m, fx.r);
    REQUIRE_THAT(out, witness.has_value());
    if (witness) {
        REQUIRE_THAT(out, render_trace(fx.m, witness->inputs) == "b.a.a.b");
    }
    return out;
}

// 9. length and size bounds on every generated suite, and the derived
// reduction-suite cardinality
Outcome bound_invariants(const Fixtures& fx) {
    Outcome out;
    auto check_suite = [&](const Dfsm& model, const TestSuite& suite) {
        const std::size_t n = model.state_count();
        const std::size_t total = n + suite.extra_states;
        double size_limit = static_cast<double>(n) * static_cast<double>(n) *
                            std::pow(static_cast<double>(model.input_count()),
                                     static_cast<double>(suite.extra_states) + 1.0);
        REQUIRE_THAT(out, static_cast<double>(suite.cases.size()) <= size_limit);
        for (const InputTrace& trace : suite.cases) {
            REQUIRE_THAT(out, trace.size() <= n + total - 1);
        }
    };
    check_suite(fx.m, exhaustive_req_suite(fx.m, fx.r, 0));
    check_suite(fx.m, h_suite(fx.m, 0));
    check_suite(fx.m, h_suite(fx.m, 1));
    for (std::uint32_t extra = 0; extra <= 1; ++extra) {
        check_suite(fx.fsb, h_suite(fx.fsb, extra));
        check_suite(fx.fsb, exhaustive_req_suite(fx.fsb, fx.r1, extra));
        check_suite(fx.fsb, exhaustive_req_suite(fx.fsb, fx.r2, extra));
    }

    AbstractDfsm m1 = build_m1(fx.m, fx.r);
    ClassMap classes = build_m2(m1);
    ReductionSuite red = reduction_suite(build_m1_prime(m1), classes, 3);
    REQUIRE_THAT(out, red.n_classes == 2);
    REQUIRE_THAT(out, red.suite.cases.size() == 64);
    std::size_t max_cover = 0;
    for (const InputTrace& v : red.cover) {
        max_cover = std::max(max_cover, v.size());
    }
    const std::size_t bound = red.sut_bound * red.n_classes - red.n_classes + 1;
    for (const InputTrace& trace : red.suite.cases) {
        REQUIRE_THAT(out, trace.size() <= max_cover + bound);
        REQUIRE_THAT(out, trace.size() <= red.sut_bound * red.n_classes);
    }
    out.detail << " reduction-cases=" << red.suite.cases.size();
    return out;
}

// 10. sampled mutants of the cabin controller never pass while violating
Outcome mutant_experiment(const Fixtures& fx) {
    Outcome out;
    TestSuite suites[2] = {exhaustive_req_suite(fx.fsb, fx.r1, 0),
                           exhaustive_req_suite(fx.fsb, fx.r1, 1)};
    std::vector<OutputTrace> expected[2];
    for (int i = 0; i < 2; ++i) {
        for (const InputTrace& input : suites[i].cases) {
            expected[i].push_back(fx.fsb.output_trace(fx.fsb.initial(), input));
        }
    }
    NondetAbstraction m1p = build_m1_prime(fx.fsb, fx.r1);
    std::vector<SymbolId> identity_map(fx.fsb.outputs().size());
    for (SymbolId y = 0; y < identity_map.size(); ++y) {
        identity_map[y] = y;
    }

    MutantSource universe(fx.fsb, 1, 10000);
    std::uint64_t examined = 0;
    std::uint64_t pass_viol = 0;
    std::uint64_t violating = 0;
    while (auto machine = universe.next()) {
        const Dfsm& mutant = *machine;
        // suite for the fault domain matching the mutant's state count
        int which = mutant.state_count() > fx.fsb.state_count() ? 1 : 0;
        bool pass = true;
        for (std::size_t i = 0; pass && i < suites[which].cases.size(); ++i) {
            StateId q = mutant.initial();
            const InputTrace& input = suites[which].cases[i];
            for (std::size_t j = 0; j < input.size(); ++j) {
                if (mutant.output(q, input[j]) != expected[which][i][j]) {
                    pass = false;
                    break;
                }
                q = mutant.next(q, input[j]);
            }
        }
        bool violates = violation_by_reduction(mutant, m1p, identity_map).has_value();
        violating += violates;
        pass_viol += pass && violates;
        ++examined;
    }
    out.detail << " examined=" << examined << " violating=" << violating
               << " pass_viol=" << pass_viol;
    REQUIRE_THAT(out, examined == 10000);
    REQUIRE_THAT(out, pass_viol == 0);
    REQUIRE_THAT(out, violating > 0);
    return out;
}

} // namespace

int main() {
    Fixtures fx;
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome(const Fixtures&)> check;
        double budget_seconds;
    };
    const Criterion criteria[] = {
        {1, "cabin-controller structural facts", structural_facts, 1.0},
        {2, "suite sizes within published bands", suite_size_bands, 2000.0},
        {3, "small-model suite reproduction", small_model_reproduction, 60.0},
        {4, "exhaustive guarantee on the enumerated universe", exhaustive_guarantee, 600.0},
        {5, "complete guarantee on the enumerated universe", complete_guarantee, 900.0},
        {6, "oracle routes agree on the enumerated universe", oracle_agreement, 600.0},
        {7, "strictest requirement matches language equivalence", equivalence_bridge, 600.0},
        {8, "violating fixture slips past membership but not the oracle", negative_control, 60.0},
        {9, "length, size and cardinality bounds", bound_invariants, 600.0},
        {10, "sampled cabin-controller mutants", mutant_experiment, 300.0},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome outcome = criterion.check(fx);
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > criterion.budget_seconds) {
            outcome.passed = false;
            outcome.detail << " [over budget " << criterion.budget_seconds << "s]";
        }
        failures += !outcome.passed;
        std::printf("[%s] %2d %s (%.2f s)%s\n", outcome.passed ? "PASS" : "FAIL", criterion.id,
                    criterion.name, seconds, outcome.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
