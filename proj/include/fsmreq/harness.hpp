#pragma once

#include <variant>

#include "fsmreq/reduction.hpp"

namespace fsmreq {

/// Outcome of one test case. `observed` holds the SUT outputs translated to
/// the reference alphabet; `expected` is the reference output trace under the
/// equality criterion or the per-step allowed sets under the membership
/// criterion. first_divergence is the 1-based index of the earliest step
/// whose output leaves the expected value resp. set.
struct CaseResult {
    InputTrace input;
    OutputTrace observed;
    std::variant<OutputTrace, std::vector<OutputClass>> expected;
    bool passed = false;
    std::optional<std::size_t> first_divergence;
};

/// Equality criterion: observed outputs must match the model's exactly.
std::vector<CaseResult> run_suite_equiv(const Dfsm& sut, const Dfsm& model,
                                        const TestSuite& suite);

/// Membership criterion: each observed output must lie in the abstraction's
/// allowed set for that step.
std::vector<CaseResult> run_suite_reduction(const Dfsm& sut, const NondetAbstraction& m1p,
                                            const TestSuite& suite);

inline bool all_passed(const std::vector<CaseResult>& results) {
    for (const CaseResult& r : results) {
        if (!r.passed) {
            return false;
        }
    }
    return true;
}

/// SplitMix64: the documented 64-bit mixing generator behind every seeded
/// experiment (constants 0x9E3779B97F4A7C15, 0xBF58476D1CE4E5B9,
/// 0x94D049BB133111EB).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform-ish draw from [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

private:
    std::uint64_t state_;
};

/// Stream interface over a fault-domain sample; implementations must be
/// duplicate-free and order-stable across runs.
struct MachineSource {
    virtual ~MachineSource() = default;
    virtual std::optional<Dfsm> next() = 0;
    virtual std::uint64_t seed() const { return 0; }
};

/// Canonical enumeration of every completely specified DFSM over the grid:
/// cells in row-major (state, input) order, each cell cycling through
/// (target, output) pairs, the last cell fastest. Machines with fewer
/// effective states appear since unreachable and duplicate states are
/// permitted in the fault domain.
class MachineEnumerator : public MachineSource {
public:
    MachineEnumerator(std::uint32_t states, Alphabet inputs, Alphabet outputs);

    std::uint64_t total() const { return total_; }
    std::optional<Dfsm> next() override;
    Dfsm at(std::uint64_t index) const;
    void reset();

private:
    std::uint32_t states_;
    Alphabet inputs_;
    Alphabet outputs_;
    std::vector<std::string> state_names_;
    std::uint64_t total_ = 0;
    std::uint64_t yielded_ = 0;
    std::vector<std::uint32_t> digits_;
};

/// Reproducible mutants of the model: each differs from it in 1-3 cells
/// (output change, target change, or a redirect onto one added state cloned
/// from an existing row), staying a complete DFSM with at most one extra
/// state.
class MutantSource : public MachineSource {
public:
    MutantSource(const Dfsm& model, std::uint64_t seed, std::size_t count);

    std::optional<Dfsm> next() override;
    std::uint64_t seed() const override { return seed_; }

private:
    const Dfsm& model_;
    std::uint64_t seed_;
    std::size_t remaining_;
    SplitMix64 rng_;
    std::vector<StateId> reachable_;
};

std::vector<Dfsm> mutate(const Dfsm& model, std::uint64_t seed, std::size_t count);

enum class Strategy {
    exhaustive_equal,      // requirements-exhaustive suite, equality criterion
    complete_membership,   // filtered reduction suite, membership criterion
};

struct CoverageReport {
    std::uint64_t examined = 0;
    std::uint64_t pass_sat = 0;
    std::uint64_t pass_viol = 0;
    std::uint64_t fail_sat = 0;
    std::uint64_t fail_viol = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> counterexamples; // canonically first few

    /// Zero counts in the cells the strategy's guarantee forbids.
    bool clean(Strategy strategy) const {
        return pass_viol == 0 && (strategy == Strategy::exhaustive_equal || fail_sat == 0);
    }

    std::string summary_line() const;
    std::string text() const;
};

/// Generates the strategy's suite once from (model, r, extra), then streams
/// the universe and tallies suite verdict against the requirement oracle.
/// SUT state counts are the caller's obligation (fault domain n + extra).
CoverageReport coverage_experiment(const Dfsm& model, const CompositeRequirement& r,
                                   std::uint32_t extra, Strategy strategy,
                                   MachineSource& universe, std::size_t counterexample_cap = 5);

} // namespace fsmreq
