#include <doctest.h>

#include <fstream>
#include <set>

#include "fsmreq/harness.hpp"

#include "test_util.hpp"

using namespace fsmreq;
using testutil::fixture;
using testutil::load_model;
using testutil::trace_of;

namespace {

struct SmallSetting {
    Dfsm model;
    CompositeRequirement requirement;
    AbstractDfsm m1;
    NondetAbstraction m1p;
    ClassMap classes;
};

SmallSetting small_setting() {
    Dfsm model = load_model("M.csv");
    CompositeRequirement r = parse_requirement_file(fixture("R.req"));
    AbstractDfsm m1 = build_m1(model, r);
    NondetAbstraction m1p = build_m1_prime(m1);
    ClassMap classes = build_m2(m1);
    return {std::move(model), std::move(r), std::move(m1), std::move(m1p), std::move(classes)};
}

} // namespace

TEST_CASE("reduction suite for the small setting") {
    SmallSetting s = small_setting();
    REQUIRE(s.classes.class_count() == 2);
    ReductionSuite red = reduction_suite(s.m1p, s.classes, 3);

    REQUIRE(red.cover.size() == 2);
    CHECK(red.cover[0].empty());
    CHECK(red.cover[1] == trace_of(s.model, "b"));
    CHECK(red.n_classes == 2);
    CHECK(red.sut_bound == 3);

    // bound m*n' - n' + 1 = 5; family leaves only
    CHECK(red.suite.cases.size() == 64);
    std::size_t len5 = 0, len6 = 0;
    for (const InputTrace& trace : red.suite.cases) {
        if (trace.size() == 5) {
            ++len5;
        } else if (trace.size() == 6) {
            ++len6;
            CHECK(s.model.inputs().name(trace.front()) == "b");
        } else {
            FAIL("unexpected case length");
        }
        // worst-case reduction length m*n'
        CHECK(trace.size() <= 6);
    }
    CHECK(len5 == 32);
    CHECK(len6 == 32);
}

TEST_CASE("reduction suite on a one-class abstraction") {
    Dfsm m = parse_model("state,a,b\ns0,s0/0,s0/1\n");
    CompositeRequirement r = parse_requirement("s0,a,{0}");
    ClassMap classes = build_m2(build_m1(m, r));
    REQUIRE(classes.class_count() == 1);
    ReductionSuite red = reduction_suite(build_m1_prime(m, r), classes, 1);
    std::set<std::string> cases;
    for (const InputTrace& trace : red.suite.cases) {
        cases.insert(render_trace(m, trace));
    }
    CHECK(cases == std::set<std::string>{"a", "b"});
}

TEST_CASE("reduction suite rejects a bound below the class count") {
    SmallSetting s = small_setting();
    CHECK_THROWS_AS(reduction_suite(s.m1p, s.classes, 1), std::invalid_argument);
}

TEST_CASE("filtering keeps exactly the requirement traces") {
    SmallSetting s = small_setting();
    ReductionSuite red = reduction_suite(s.m1p, s.classes, 3);
    TestSuite filtered = filter_requirement_suite(red.suite, s.model, s.requirement);
    CHECK(!filtered.cases.empty());
    CHECK(filtered.cases.size() < red.suite.cases.size());

    ResolvedRequirement resolved = resolve_requirement(s.model, s.requirement);
    SymbolId a = s.model.inputs().id("a");
    for (const InputTrace& trace : filtered.cases) {
        CHECK(is_requirement_trace(s.model, resolved, trace));
        StateId before = s.model.after(s.model.initial(),
                                       InputTrace(trace.begin(), trace.end() - 1));
        if (trace.back() == a) {
            CHECK((s.model.state_name(before) == "q0" || s.model.state_name(before) == "q2"));
        } else {
            CHECK(s.model.state_name(before) == "q1");
        }
    }

    // no retained case is a prefix of another
    for (const InputTrace& shorter : filtered.cases) {
        for (const InputTrace& longer : filtered.cases) {
            if (shorter.size() < longer.size()) {
                CHECK(!std::equal(shorter.begin(), shorter.end(), longer.begin()));
            }
        }
    }
}

TEST_CASE("filtering a suite without requirement prefixes yields nothing") {
    Dfsm m = load_model("M.csv");
    CompositeRequirement only_q0 = parse_requirement("q0,a,{0|1}");
    TestSuite ts;
    ts.cases = {trace_of(m, "b.b")};
    CHECK(filter_requirement_suite(ts, m, only_q0).cases.empty());
}

TEST_CASE("known requirement traces filter to themselves") {
    Dfsm m = load_model("M.csv");
    CompositeRequirement r = parse_requirement_file(fixture("R.req"));
    ResolvedRequirement resolved = resolve_requirement(m, r);

    std::ifstream in(fixture("requirement_traces.txt"));
    REQUIRE(in.good());
    TestSuite listed;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            listed.cases.push_back(trace_of(m, line));
        }
    }
    REQUIRE(listed.cases.size() == 16);
    for (const InputTrace& trace : listed.cases) {
        CHECK(is_requirement_trace(m, resolved, trace));
    }

    TestSuite refiltered = filter_requirement_suite(listed, m, r);
    std::set<std::string> before, after;
    for (const InputTrace& t : listed.cases) {
        before.insert(render_trace(m, t));
    }
    for (const InputTrace& t : refiltered.cases) {
        after.insert(render_trace(m, t));
    }
    CHECK(before == after);
}

TEST_CASE("membership criterion is complete on the small setting") {
    SmallSetting s = small_setting();
    ReductionSuite red = reduction_suite(s.m1p, s.classes, 3);
    TestSuite filtered = filter_requirement_suite(red.suite, s.model, s.requirement);

    // the compliant implementation passes, the violating one fails
    CHECK(all_passed(run_suite_reduction(load_model("S.csv"), s.m1p, filtered)));
    CHECK(!all_passed(run_suite_reduction(load_model("S_violating.csv"), s.m1p, filtered)));
}

TEST_CASE("equality passes imply membership passes case by case") {
    SmallSetting s = small_setting();
    for (const char* sut_name : {"S.csv", "S_violating.csv"}) {
        Dfsm sut = load_model(sut_name);
        TestSuite suite = exhaustive_req_suite(s.model, s.requirement, 0);
        std::vector<CaseResult> equal = run_suite_equiv(sut, s.model, suite);
        std::vector<CaseResult> member = run_suite_reduction(sut, s.m1p, suite);
        REQUIRE(equal.size() == member.size());
        for (std::size_t i = 0; i < equal.size(); ++i) {
            if (equal[i].passed) {
                CHECK(member[i].passed);
            }
        }
    }
}

TEST_CASE("expected output sets follow the abstraction") {
    SmallSetting s = small_setting();
    TestSuite suite;
    suite.cases = {trace_of(s.model, "b.a.a.b")};
    auto sets = expected_output_sets(s.m1p, suite);
    REQUIRE(sets.size() == 1);
    REQUIRE(sets[0].size() == 4);
    CHECK(sets[0][0].render(s.model.outputs()) == "*");
    CHECK(sets[0][1].render(s.model.outputs()) == "*");
    CHECK(sets[0][2].render(s.model.outputs()) == "*");
    CHECK(sets[0][3].render(s.model.outputs()) == "{0|2}");

    std::string text = serialize_expected_sets(s.model, s.m1p, suite);
    CHECK(text == "b.a.a.b/{0|1|2};{0|1|2};{0|1|2};{0|2}\n");
}
