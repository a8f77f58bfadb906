#pragma once

#include "fsmreq/oracle.hpp"
#include "fsmreq/testgen.hpp"

namespace fsmreq {

/// Basic complete reduction suite against M1': a deterministic state cover V
/// of M1' (one trace per minimized class) extended by every input sequence of
/// length sut_bound*n' - n' + 1. Pruning is per cover family, so the suite is
/// exactly the family leaves and has |V| * |inputs|^bound cases.
struct ReductionSuite {
    TestSuite suite;
    std::uint32_t n_classes = 0; // n', states of the minimized abstraction
    std::uint32_t sut_bound = 0; // m, maximal SUT state count
    std::vector<InputTrace> cover;
};

/// Throws std::invalid_argument when sut_bound < the class count.
ReductionSuite reduction_suite(const NondetAbstraction& m1p, const ClassMap& classes,
                               std::uint32_t sut_bound);

/// Keeps exactly the requirement traces among the prefixes of the cases, then
/// prunes to maximal traces: pref(TS) ∩ Π̄.
TestSuite filter_requirement_suite(const TestSuite& ts, const Dfsm& model,
                                   const CompositeRequirement& r);

/// Per case, per step: the abstraction's allowed output set along the case.
std::vector<std::vector<OutputClass>> expected_output_sets(const NondetAbstraction& m1p,
                                                           const TestSuite& suite);

/// Expected-sets file: "<case>/<set1>;<set2>;...", sets rendered "{y|y}", in
/// suite-file line order.
std::string serialize_expected_sets(const Dfsm& model, const NondetAbstraction& m1p,
                                    const TestSuite& suite);

} // namespace fsmreq
