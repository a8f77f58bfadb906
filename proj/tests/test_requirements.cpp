#include <doctest.h>

#include "fsmreq/oracle.hpp"

#include "test_util.hpp"

using namespace fsmreq;
using testutil::fixture;
using testutil::load_model;
using testutil::trace_of;

namespace {

CompositeRequirement small_requirement() {
    return parse_requirement_file(fixture("R.req"));
}

} // namespace

TEST_CASE("requirement files parse with comments and item order") {
    CompositeRequirement r = small_requirement();
    REQUIRE(r.items.size() == 3);
    CHECK(r.items[0] == ElementaryRequirement{"q0", "a", {"0", "1"}});
    CHECK(r.items[1] == ElementaryRequirement{"q1", "b", {"0", "2"}});
    CHECK(r.items[2] == ElementaryRequirement{"q2", "a", {"0", "1"}});
    CHECK(parse_requirement(serialize_requirement(r)) == r);
}

TEST_CASE("validation accepts the cabin-controller requirements") {
    Dfsm fsb = load_model("fsb_rts.csv");
    CompositeRequirement r1 = parse_requirement_file(fixture("R1.req"));
    CHECK(r1.items.size() == 24);
    CHECK_NOTHROW(validate_requirement(fsb, r1));
    CompositeRequirement r2 = parse_requirement_file(fixture("R2.req"));
    CHECK(r2.items.size() == 168);
    CHECK_NOTHROW(validate_requirement(fsb, r2));
}

TEST_CASE("validation rejects each invariant breach") {
    Dfsm fsb = load_model("fsb_rts.csv");
    auto code_of = [&](const char* line) {
        try {
            validate_requirement(fsb, parse_requirement(line));
        } catch (const RequirementError& e) {
            return e.code;
        }
        FAIL("expected a requirement error");
        return RequirementError::Code::syntax;
    };
    CHECK(code_of("s0,d1,{00|11|10}") == RequirementError::Code::allowed_set_full);
    CHECK(code_of("s0,f1,{00}") == RequirementError::Code::expected_output_not_allowed);
    CHECK(code_of("s0,d1,{10}\ns0,d1,{10|00}") == RequirementError::Code::duplicate_pair);
    CHECK(code_of("s99,d1,{10}") == RequirementError::Code::unknown_state);
    CHECK(code_of("s0,zz,{10}") == RequirementError::Code::unknown_input);
    CHECK(code_of("s0,d1,{99}") == RequirementError::Code::unknown_output);
    CHECK(code_of("s0,d1,{}") == RequirementError::Code::empty_allowed_set);
}

TEST_CASE("abstraction of the small reference model") {
    Dfsm m = load_model("M.csv");
    AbstractDfsm m1 = build_m1(m, small_requirement());
    CHECK(m1.machine.delta() == m.delta());

    SymbolId a = m.inputs().id("a");
    SymbolId b = m.inputs().id("b");
    auto class_at = [&](StateId q, SymbolId x) { return m1.cell_class(q, x).render(m.outputs()); };
    CHECK(class_at(0, a) == "{0|1}");
    CHECK(class_at(1, b) == "{0|2}");
    CHECK(class_at(2, a) == "{0|1}");
    CHECK(class_at(0, b) == "*");
    CHECK(class_at(1, a) == "*");
    CHECK(class_at(2, b) == "*");
}

TEST_CASE("abstraction of the decompression requirement") {
    Dfsm fsb = load_model("fsb_rts.csv");
    AbstractDfsm m1 = build_m1(fsb, parse_requirement_file(fixture("R1.req")));
    CHECK(m1.machine.delta() == fsb.delta());
    SymbolId d1 = fsb.inputs().id("d1");
    for (StateId q = 0; q < fsb.state_count(); ++q) {
        for (SymbolId x = 0; x < fsb.input_count(); ++x) {
            const OutputClass& cls = m1.cell_class(q, x);
            if (x == d1) {
                CHECK(cls.render(fsb.outputs()) == "{10}");
            } else {
                CHECK(cls.full);
            }
        }
    }
}

TEST_CASE("equivalence requirement abstracts to singleton classes") {
    Dfsm m = load_model("M.csv");
    AbstractDfsm m1 = build_m1(m, equivalence_requirement(m));
    for (StateId q = 0; q < m.state_count(); ++q) {
        for (SymbolId x = 0; x < m.input_count(); ++x) {
            CHECK(m1.cell_class(q, x).members == std::vector<SymbolId>{m.output(q, x)});
        }
    }
    CHECK(build_m2(m1).class_count() == m.state_count());
}

TEST_CASE("minimized abstraction classes") {
    Dfsm m = load_model("M.csv");
    ClassMap classes = build_m2(build_m1(m, small_requirement()));
    CHECK(classes.class_count() == 2);
    // q0 and q2 fall together, q1 stays apart
    CHECK(classes.state_class[0] == classes.state_class[2]);
    CHECK(classes.state_class[0] != classes.state_class[1]);

    Dfsm fsb = load_model("fsb_rts.csv");
    AbstractDfsm r1_m1 = build_m1(fsb, parse_requirement_file(fixture("R1.req")));
    CHECK(build_m2(r1_m1).class_count() == 1);

    // with a single class, no pair of abstraction states is distinguishable
    SplitMix64 rng(8);
    for (int round = 0; round < 50; ++round) {
        StateId a = static_cast<StateId>(rng.below(fsb.state_count()));
        StateId b = static_cast<StateId>(rng.below(fsb.state_count()));
        CHECK(!distinguishing_trace(r1_m1.machine, a, b).has_value());
    }
}

TEST_CASE("classes that carry a requirement cell agree on it") {
    Dfsm fsb = load_model("fsb_rts.csv");
    for (const char* req : {"R1.req", "R2.req"}) {
        CompositeRequirement r = parse_requirement_file(fixture(req));
        ClassMap classes = build_m2(build_m1(fsb, r));
        ResolvedRequirement resolved = resolve_requirement(fsb, r);
        for (const ResolvedItem& item : resolved.items) {
            for (StateId q = 0; q < fsb.state_count(); ++q) {
                if (classes.state_class[q] != classes.state_class[item.state]) {
                    continue;
                }
                const ResolvedItem* other = resolved.find(q, item.input);
                REQUIRE(other != nullptr);
                CHECK(other->allowed == item.allowed);
            }
        }
    }
}

TEST_CASE("nondeterministic unfolding of the abstraction") {
    Dfsm m = load_model("M.csv");
    AbstractDfsm m1 = build_m1(m, small_requirement());
    NondetAbstraction m1p = build_m1_prime(m1);
    SymbolId a = m.inputs().id("a");
    SymbolId b = m.inputs().id("b");

    CHECK(m1p.allowed(0, a).members.size() == 2);
    CHECK(m1p.next(0, a) == m.next(0, a));
    CHECK(m1p.allowed(1, a).members.size() == 3); // don't-care pair
    for (StateId q = 0; q < m.state_count(); ++q) {
        for (SymbolId x : {a, b}) {
            CHECK(m1p.allowed(q, x) == m1.cell_class(q, x));
        }
    }

    MachineProperties props = check_properties(m1p.to_fsm());
    CHECK(!props.deterministic);
    CHECK(props.completely_specified);
    CHECK(props.observable);

    // singleton classes give one transition per cell and keep determinism
    NondetAbstraction eq_prime = build_m1_prime(identity_abstraction(m));
    for (StateId q = 0; q < m.state_count(); ++q) {
        for (SymbolId x : {a, b}) {
            CHECK(eq_prime.allowed(q, x).members.size() == 1);
        }
    }
    CHECK(check_properties(eq_prime.to_fsm()).deterministic);
}

TEST_CASE("the model's language stays inside the unfolded abstraction") {
    SplitMix64 rng(4242);
    Dfsm m = load_model("M.csv");
    NondetAbstraction m1p = build_m1_prime(m, small_requirement());
    for (int round = 0; round < 500; ++round) {
        InputTrace input = testutil::random_trace(rng, m, 8);
        OutputTrace outputs = m.output_trace(m.initial(), input);
        StateId q = m1p.initial;
        for (std::size_t i = 0; i < input.size(); ++i) {
            CHECK(m1p.allowed(q, input[i]).contains(outputs[i]));
            q = m1p.next(q, input[i]);
        }
    }
}

TEST_CASE("oracle verdicts on the three fixture machines") {
    Dfsm m = load_model("M.csv");
    CompositeRequirement r = small_requirement();
    CHECK(!satisfies_oracle(load_model("S.csv"), m, r).has_value());
    CHECK(!satisfies_oracle(m, m, r).has_value());

    auto witness = satisfies_oracle(load_model("S_violating.csv"), m, r);
    REQUIRE(witness.has_value());
    CHECK(witness->inputs == trace_of(m, "b.a.a.b"));
    CHECK(testutil::outputs_of(m, witness->outputs) == "1.1.0.1");
}

TEST_CASE("oracle routes agree on random machines") {
    SplitMix64 rng(31337);
    Dfsm m = load_model("M.csv");
    CompositeRequirement r = small_requirement();
    NondetAbstraction m1p = build_m1_prime(m, r);
    ResolvedRequirement resolved = resolve_requirement(m, r);
    int violations = 0;
    for (int round = 0; round < 2000; ++round) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(4));
        std::vector<std::string> names;
        for (std::uint32_t q = 0; q < n; ++q) {
            names.push_back("t" + std::to_string(q));
        }
        std::vector<StateId> delta;
        std::vector<SymbolId> omega;
        for (std::size_t cell = 0; cell < n * m.input_count(); ++cell) {
            delta.push_back(static_cast<StateId>(rng.below(n)));
            omega.push_back(static_cast<SymbolId>(rng.below(m.outputs().size())));
        }
        Dfsm candidate(std::move(names), 0, m.inputs(), m.outputs(), std::move(delta),
                       std::move(omega));
        std::vector<SymbolId> map = require_compatible(m, candidate, false);
        bool by_definition = satisfied_by_definition(candidate, m, resolved, map);
        auto by_reduction = violation_by_reduction(candidate, m1p, map);
        CHECK(by_definition == !by_reduction.has_value());
        if (by_reduction) {
            ++violations;
            // the witness must end in a forbidden requirement response
            const InputTrace& inputs = by_reduction->inputs;
            StateId q = m.after(m.initial(), InputTrace(inputs.begin(), inputs.end() - 1));
            const ResolvedItem* item = resolved.find(q, inputs.back());
            REQUIRE(item != nullptr);
            CHECK(!item->allowed_mask[by_reduction->outputs.back()]);
        }
    }
    CHECK(violations > 0);
}

TEST_CASE("strictest requirement characterizes language equivalence") {
    // every 2-state machine over two inputs and two outputs, against a fixed
    // prime reference
    Dfsm reference = parse_model("state,a,b\nq0,q0/0,q1/0\nq1,q1/1,q0/0\n");
    REQUIRE(is_prime(reference));
    CompositeRequirement r_eq = equivalence_requirement(reference);
    MachineEnumerator universe(2, reference.inputs(), reference.outputs());
    CHECK(universe.total() == 256);
    std::uint64_t equivalent = 0;
    while (auto machine = universe.next()) {
        bool satisfied = !satisfies_oracle(*machine, reference, r_eq).has_value();
        bool same_language = language_equivalent(reference, *machine);
        CHECK(satisfied == same_language);
        equivalent += same_language;
    }
    CHECK(equivalent > 0);
}

TEST_CASE("requirement traces of the small model") {
    Dfsm m = load_model("M.csv");
    CompositeRequirement r = small_requirement();
    ResolvedRequirement resolved = resolve_requirement(m, r);
    CHECK(is_requirement_trace(m, resolved, trace_of(m, "b.a.a.b")));
    CHECK(is_requirement_trace(m, resolved, trace_of(m, "a.a")));
    CHECK(!is_requirement_trace(m, resolved, InputTrace{}));
    CHECK(!is_requirement_trace(m, resolved, trace_of(m, "a.b"))); // ends in b after q2
    CHECK(is_requirement_trace(m, r, trace_of(m, "a")));           // a from q0
}

TEST_CASE("abstractions round-trip through the model format") {
    Dfsm m = load_model("M.csv");
    AbstractDfsm m1 = build_m1(m, small_requirement());
    std::string text = serialize_model(m1.machine);
    AbstractDfsm reparsed = parse_abstraction(m, text);
    for (StateId q = 0; q < m.state_count(); ++q) {
        for (SymbolId x = 0; x < m.input_count(); ++x) {
            CHECK(reparsed.cell_class(q, x) == m1.cell_class(q, x));
        }
    }
    CHECK(requirement_from_abstraction(m, reparsed).items.size() == 3);

    // a bare output name decodes as its singleton, so plain models work too
    AbstractDfsm identity = parse_abstraction(m, serialize_model(m));
    for (StateId q = 0; q < m.state_count(); ++q) {
        for (SymbolId x = 0; x < m.input_count(); ++x) {
            CHECK(identity.cell_class(q, x).members == std::vector<SymbolId>{m.output(q, x)});
        }
    }
}

TEST_CASE("transition listing of the unfolded abstraction") {
    Dfsm m = load_model("M.csv");
    NondetAbstraction m1p = build_m1_prime(m, small_requirement());
    std::string text = serialize_transitions(m1p);
    CHECK(text.find("q0,a,0,q2\n") != std::string::npos);
    CHECK(text.find("q0,a,1,q2\n") != std::string::npos);
    CHECK(text.find("q0,a,2,q2") == std::string::npos);
    // three requirement cells with two outputs each, three don't-care cells
    // with three outputs each
    std::size_t lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
    CHECK(lines == 2 + 2 + 2 + 3 * 3);
}
