#include "fsmreq/harness.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace fsmreq {

namespace {

std::vector<SymbolId> map_outputs(const Alphabet& ref_inputs, const Alphabet& ref_outputs,
                                  const Dfsm& sut) {
    if (!(ref_inputs == sut.inputs())) {
        throw AlphabetMismatchError("input alphabets differ");
    }
    std::vector<SymbolId> map(sut.outputs().size());
    for (SymbolId y = 0; y < sut.outputs().size(); ++y) {
        auto found = ref_outputs.find(sut.outputs().name(y));
        if (!found) {
            throw AlphabetMismatchError("SUT output '" + sut.outputs().name(y) +
                                        "' is not in the reference output alphabet");
        }
        map[y] = *found;
    }
    return map;
}

} // namespace

std::vector<CaseResult> run_suite_equiv(const Dfsm& sut, const Dfsm& model,
                                        const TestSuite& suite) {
    std::vector<SymbolId> map = require_compatible(model, sut, /*exact_outputs=*/false);
    std::vector<CaseResult> results;
    results.reserve(suite.cases.size());
    for (const InputTrace& input : suite.cases) {
        CaseResult r;
        r.input = input;
        OutputTrace expected = model.output_trace(model.initial(), input);
        r.observed = sut.output_trace(sut.initial(), input);
        for (SymbolId& y : r.observed) {
            y = map[y];
        }
        for (std::size_t j = 0; j < input.size(); ++j) {
            if (r.observed[j] != expected[j]) {
                r.first_divergence = j + 1;
                break;
            }
        }
        r.passed = !r.first_divergence.has_value();
        r.expected = std::move(expected);
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<CaseResult> run_suite_reduction(const Dfsm& sut, const NondetAbstraction& m1p,
                                            const TestSuite& suite) {
    std::vector<SymbolId> map = map_outputs(m1p.inputs, m1p.outputs, sut);
    std::vector<CaseResult> results;
    results.reserve(suite.cases.size());
    for (const InputTrace& input : suite.cases) {
        CaseResult r;
        r.input = input;
        r.observed = sut.output_trace(sut.initial(), input);
        for (SymbolId& y : r.observed) {
            y = map[y];
        }
        std::vector<OutputClass> allowed;
        allowed.reserve(input.size());
        StateId q = m1p.initial;
        for (std::size_t j = 0; j < input.size(); ++j) {
            allowed.push_back(m1p.allowed(q, input[j]));
            if (!r.first_divergence && !allowed.back().contains(r.observed[j])) {
                r.first_divergence = j + 1;
            }
            q = m1p.next(q, input[j]);
        }
        r.passed = !r.first_divergence.has_value();
        r.expected = std::move(allowed);
        results.push_back(std::move(r));
    }
    return results;
}

MachineEnumerator::MachineEnumerator(std::uint32_t states, Alphabet inputs, Alphabet outputs)
    : states_(states), inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
    if (states_ == 0 || inputs_.size() == 0 || outputs_.size() == 0) {
        throw std::invalid_argument("enumeration grid must be non-empty");
    }
    for (std::uint32_t q = 0; q < states_; ++q) {
        state_names_.push_back("s" + std::to_string(q));
    }
    const std::uint64_t options = static_cast<std::uint64_t>(states_) * outputs_.size();
    const std::size_t cells = states_ * inputs_.size();
    total_ = 1;
    for (std::size_t i = 0; i < cells; ++i) {
        if (total_ > std::numeric_limits<std::uint64_t>::max() / options) {
            throw std::invalid_argument("universe too large to enumerate");
        }
        total_ *= options;
    }
    digits_.assign(cells, 0);
}

std::optional<Dfsm> MachineEnumerator::next() {
    if (yielded_ == total_) {
        return std::nullopt;
    }
    const std::size_t no = outputs_.size();
    std::vector<StateId> delta(digits_.size());
    std::vector<SymbolId> omega(digits_.size());
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        delta[i] = static_cast<StateId>(digits_[i] / no);
        omega[i] = static_cast<SymbolId>(digits_[i] % no);
    }
    ++yielded_;
    const std::uint32_t options = static_cast<std::uint32_t>(states_ * no);
    for (std::size_t i = digits_.size(); i-- > 0;) {
        if (++digits_[i] < options) {
            break;
        }
        digits_[i] = 0;
    }
    return Dfsm(state_names_, 0, inputs_, outputs_, std::move(delta), std::move(omega));
}

Dfsm MachineEnumerator::at(std::uint64_t index) const {
    if (index >= total_) {
        throw std::out_of_range("machine index out of range");
    }
    const std::size_t no = outputs_.size();
    const std::uint64_t options = static_cast<std::uint64_t>(states_) * no;
    std::vector<StateId> delta(digits_.size());
    std::vector<SymbolId> omega(digits_.size());
    for (std::size_t i = digits_.size(); i-- > 0;) {
        std::uint64_t digit = index % options;
        index /= options;
        delta[i] = static_cast<StateId>(digit / no);
        omega[i] = static_cast<SymbolId>(digit % no);
    }
    return Dfsm(state_names_, 0, inputs_, outputs_, std::move(delta), std::move(omega));
}

void MachineEnumerator::reset() {
    yielded_ = 0;
    std::fill(digits_.begin(), digits_.end(), 0);
}

MutantSource::MutantSource(const Dfsm& model, std::uint64_t seed, std::size_t count)
    : model_(model), seed_(seed), remaining_(count), rng_(seed) {
    std::vector<char> seen(model.state_count(), 0);
    std::vector<StateId> stack{model.initial()};
    seen[model.initial()] = 1;
    while (!stack.empty()) {
        StateId q = stack.back();
        stack.pop_back();
        reachable_.push_back(q);
        for (SymbolId x = 0; x < model.input_count(); ++x) {
            StateId t = model.next(q, x);
            if (!seen[t]) {
                seen[t] = 1;
                stack.push_back(t);
            }
        }
    }
    std::sort(reachable_.begin(), reachable_.end());
    if (model.outputs().size() < 2 && model.state_count() < 2) {
        throw std::invalid_argument("model admits no mutation");
    }
}

std::optional<Dfsm> MutantSource::next() {
    if (remaining_ == 0) {
        return std::nullopt;
    }
    --remaining_;
    const std::size_t n = model_.state_count();
    const std::size_t ni = model_.input_count();
    const std::size_t no = model_.outputs().size();

    std::uint64_t edits = 1 + rng_.below(3);
    bool add_state = rng_.below(4) == 0;

    std::vector<std::string> names = model_.state_names();
    std::vector<StateId> delta = model_.delta();
    std::vector<SymbolId> omega = model_.omega();
    std::vector<std::size_t> edited;

    auto fresh_cell = [&]() {
        while (true) {
            StateId q = reachable_[rng_.below(reachable_.size())];
            SymbolId x = static_cast<SymbolId>(rng_.below(ni));
            std::size_t cell = q * ni + x;
            if (std::find(edited.begin(), edited.end(), cell) == edited.end()) {
                edited.push_back(cell);
                return cell;
            }
        }
    };

    std::size_t total_states = n;
    if (add_state) {
        StateId src = static_cast<StateId>(rng_.below(n));
        for (std::size_t suffix = 0;; ++suffix) {
            std::string candidate = "m" + std::to_string(suffix);
            if (std::find(names.begin(), names.end(), candidate) == names.end()) {
                names.push_back(candidate);
                break;
            }
        }
        delta.insert(delta.end(), model_.delta().begin() + src * ni,
                     model_.delta().begin() + (src + 1) * ni);
        omega.insert(omega.end(), model_.omega().begin() + src * ni,
                     model_.omega().begin() + (src + 1) * ni);
        total_states = n + 1;
        delta[fresh_cell()] = static_cast<StateId>(n); // make the clone reachable
        --edits;
    }

    while (edits-- > 0) {
        bool can_output = no >= 2;
        bool can_target = total_states >= 2;
        if (!can_output && !can_target) {
            break;
        }
        bool change_output = can_output && (!can_target || rng_.below(2) == 0);
        std::size_t cell = fresh_cell();
        if (change_output) {
            SymbolId replacement = static_cast<SymbolId>(rng_.below(no - 1));
            if (replacement >= omega[cell]) {
                ++replacement;
            }
            omega[cell] = replacement;
        } else {
            StateId replacement = static_cast<StateId>(rng_.below(total_states - 1));
            if (replacement >= delta[cell]) {
                ++replacement;
            }
            delta[cell] = replacement;
        }
    }

    return Dfsm(std::move(names), model_.initial(), model_.inputs(), model_.outputs(),
                std::move(delta), std::move(omega));
}

std::vector<Dfsm> mutate(const Dfsm& model, std::uint64_t seed, std::size_t count) {
    MutantSource source(model, seed, count);
    std::vector<Dfsm> out;
    out.reserve(count);
    while (auto mutant = source.next()) {
        out.push_back(std::move(*mutant));
    }
    return out;
}

std::string CoverageReport::summary_line() const {
    std::ostringstream out;
    out << "universe=" << examined << " pass_sat=" << pass_sat << " pass_viol=" << pass_viol
        << " fail_sat=" << fail_sat << " fail_viol=" << fail_viol << " seed=" << seed;
    return out.str();
}

std::string CoverageReport::text() const {
    std::ostringstream out;
    out << "machines examined: " << examined << "\n"
        << "  passed suite, requirement satisfied: " << pass_sat << "\n"
        << "  passed suite, requirement violated:  " << pass_viol << "\n"
        << "  failed suite, requirement satisfied: " << fail_sat << "\n"
        << "  failed suite, requirement violated:  " << fail_viol << "\n";
    for (const std::string& example : counterexamples) {
        out << "  counterexample: " << example << "\n";
    }
    out << summary_line() << "\n";
    return out.str();
}

CoverageReport coverage_experiment(const Dfsm& model, const CompositeRequirement& r,
                                   std::uint32_t extra, Strategy strategy,
                                   MachineSource& universe, std::size_t counterexample_cap) {
    AbstractDfsm m1 = build_m1(model, r);
    NondetAbstraction m1p = build_m1_prime(m1);

    TestSuite suite;
    std::vector<OutputTrace> expected;
    std::vector<std::vector<const OutputClass*>> allowed;
    if (strategy == Strategy::exhaustive_equal) {
        suite = exhaustive_suite_for_abstraction(model, m1, extra, "req-exh");
        expected.reserve(suite.cases.size());
        for (const InputTrace& input : suite.cases) {
            expected.push_back(model.output_trace(model.initial(), input));
        }
    } else {
        ClassMap m2 = build_m2(m1);
        ReductionSuite red = reduction_suite(
            m1p, m2, static_cast<std::uint32_t>(model.state_count()) + extra);
        suite = filter_requirement_suite(red.suite, model, r);
        allowed.reserve(suite.cases.size());
        for (const InputTrace& input : suite.cases) {
            std::vector<const OutputClass*> sets;
            sets.reserve(input.size());
            StateId q = m1p.initial;
            for (SymbolId x : input) {
                sets.push_back(&m1p.allowed(q, x));
                q = m1p.next(q, x);
            }
            allowed.push_back(std::move(sets));
        }
    }

    CoverageReport report;
    report.seed = universe.seed();
    std::uint64_t index = 0;
    while (auto machine = universe.next()) {
        const Dfsm& sut = *machine;
        std::vector<SymbolId> map = require_compatible(model, sut, /*exact_outputs=*/false);

        bool pass = true;
        if (strategy == Strategy::exhaustive_equal) {
            for (std::size_t i = 0; pass && i < suite.cases.size(); ++i) {
                StateId q = sut.initial();
                const InputTrace& input = suite.cases[i];
                for (std::size_t j = 0; j < input.size(); ++j) {
                    if (map[sut.output(q, input[j])] != expected[i][j]) {
                        pass = false;
                        break;
                    }
                    q = sut.next(q, input[j]);
                }
            }
        } else {
            for (std::size_t i = 0; pass && i < suite.cases.size(); ++i) {
                StateId q = sut.initial();
                const InputTrace& input = suite.cases[i];
                for (std::size_t j = 0; j < input.size(); ++j) {
                    if (!allowed[i][j]->contains(map[sut.output(q, input[j])])) {
                        pass = false;
                        break;
                    }
                    q = sut.next(q, input[j]);
                }
            }
        }

        std::optional<IOTrace> witness = violation_by_reduction(sut, m1p, map);
        bool sat = !witness.has_value();
        if (pass && sat) {
            ++report.pass_sat;
        } else if (pass && !sat) {
            ++report.pass_viol;
        } else if (sat) {
            ++report.fail_sat;
        } else {
            ++report.fail_viol;
        }

        bool offending = (pass && !sat) ||
                         (strategy == Strategy::complete_membership && !pass && sat);
        if (offending && report.counterexamples.size() < counterexample_cap) {
            std::ostringstream what;
            what << "machine " << index << (pass ? " passed" : " failed") << " the suite, "
                 << (sat ? "satisfies" : "violates") << " the requirement";
            if (witness) {
                what << " (witness " << render_trace(model, witness->inputs) << ")";
            }
            report.counterexamples.push_back(what.str());
        }
        ++index;
        ++report.examined;
    }
    return report;
}

} // namespace fsmreq
