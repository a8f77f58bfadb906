#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "fsmreq/harness.hpp"
#include "fsmreq/model_io.hpp"

namespace fsmreq::cli {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path.string());
    }
    out << content;
}

struct GenerateOptions {
    std::string model_path;
    std::string spec_path; // requirement (.req) or pre-built abstraction, positional
    std::string requirement_path;
    std::string abstraction_path;
    std::string method;
    bool h_flag = false;
    bool s_flag = false;
    std::uint32_t extra = 0;
    std::string out_dir = ".";
};

struct CheckOptions {
    std::string model_path;
    std::string sut_path;
    std::string suite_path;
    std::string criterion;
    std::string requirement_path;
    std::string abstraction_path;
};

struct ExperimentOptions {
    std::string model_path;
    std::string requirement_path;
    std::uint32_t extra = 0;
    std::string strategy = "exhaustive";
    std::uint32_t enumerate_states = 0;
    std::uint64_t mutants = 0;
    bool sampling = false;
    std::uint64_t seed = 1;
    std::string report_path = "report.txt";
};

struct AbstractOptions {
    std::string model_path;
    std::string requirement_path;
    std::string out_dir = ".";
};

/// Splits the optional second input of `generate` into requirement vs
/// pre-built abstraction; exactly one of the two may be in play.
struct RequirementInput {
    CompositeRequirement requirement;
    AbstractDfsm m1;
};

RequirementInput load_requirement_input(const Dfsm& model, const GenerateOptions& opt) {
    std::string req = opt.requirement_path;
    std::string abs = opt.abstraction_path;
    if (!opt.spec_path.empty()) {
        if (opt.spec_path.size() > 4 &&
            opt.spec_path.compare(opt.spec_path.size() - 4, 4, ".req") == 0) {
            req = opt.spec_path;
        } else {
            abs = opt.spec_path;
        }
    }
    if (req.empty() == abs.empty()) {
        throw CLI::ValidationError(
            "requirement-based methods need exactly one of a requirement file or a "
            "pre-built abstraction");
    }
    if (!req.empty()) {
        CompositeRequirement requirement = parse_requirement_file(req);
        validate_requirement(model, requirement);
        AbstractDfsm m1 = build_m1(model, requirement);
        return {std::move(requirement), std::move(m1)};
    }
    AbstractDfsm m1 = parse_abstraction_file(model, abs);
    CompositeRequirement requirement = requirement_from_abstraction(model, m1);
    return {std::move(requirement), std::move(m1)};
}

int cmd_generate(const GenerateOptions& opt) {
    Dfsm model = parse_model_file(opt.model_path);
    std::string method = opt.method;
    if (method.empty()) {
        method = opt.s_flag ? "req-exh" : (opt.h_flag ? "equiv" : "");
    }
    if (method.empty()) {
        throw CLI::ValidationError("choose a method: --method, -h (equiv) or -s (req-exh)");
    }
    std::filesystem::create_directories(opt.out_dir);
    std::filesystem::path dir(opt.out_dir);

    TestSuite suite;
    std::string expectations;
    std::filesystem::path expectations_name;
    if (method == "equiv") {
        suite = h_suite(model, opt.extra);
        expectations = serialize_expected_results(model, suite);
        expectations_name = "expected_results.txt";
    } else if (method == "req-exh") {
        RequirementInput input = load_requirement_input(model, opt);
        suite = exhaustive_suite_for_abstraction(model, input.m1, opt.extra, "req-exh");
        expectations = serialize_expected_results(model, suite);
        expectations_name = "expected_results.txt";
    } else if (method == "req-cmp") {
        RequirementInput input = load_requirement_input(model, opt);
        NondetAbstraction m1p = build_m1_prime(input.m1);
        ClassMap m2 = build_m2(input.m1);
        ReductionSuite red = reduction_suite(
            m1p, m2, static_cast<std::uint32_t>(model.state_count()) + opt.extra);
        suite = filter_requirement_suite(red.suite, model, input.requirement);
        expectations = serialize_expected_sets(model, m1p, suite);
        expectations_name = "expected_sets.txt";
    } else {
        throw CLI::ValidationError("unknown method '" + method + "'");
    }

    write_file(dir / "suite.txt", serialize_suite(model, suite));
    write_file(dir / expectations_name, expectations);
    std::size_t max_len = 0;
    for (const InputTrace& trace : suite.cases) {
        max_len = std::max(max_len, trace.size());
    }
    std::cout << "cases=" << suite.cases.size() << " max_len=" << max_len << "\n";
    return kExitPass;
}

int cmd_check(const CheckOptions& opt) {
    Dfsm model = parse_model_file(opt.model_path);
    Dfsm sut = parse_model_file(opt.sut_path);
    TestSuite suite = parse_suite_file(model, opt.suite_path, opt.criterion);

    std::vector<CaseResult> results;
    if (opt.criterion == "equiv") {
        results = run_suite_equiv(sut, model, suite);
    } else if (opt.criterion == "reduction") {
        if (opt.requirement_path.empty() == opt.abstraction_path.empty()) {
            throw CLI::ValidationError(
                "reduction checks need exactly one of --requirement or --abstraction");
        }
        AbstractDfsm m1 = opt.requirement_path.empty()
                              ? parse_abstraction_file(model, opt.abstraction_path)
                              : build_m1(model, parse_requirement_file(opt.requirement_path));
        results = run_suite_reduction(sut, build_m1_prime(m1), suite);
    } else {
        throw CLI::ValidationError("criterion must be 'equiv' or 'reduction'");
    }

    std::size_t failed = 0;
    for (const CaseResult& result : results) {
        if (result.passed) {
            continue;
        }
        ++failed;
        std::cout << "FAIL " << render_trace(model, result.input) << " at step "
                  << *result.first_divergence;
        std::size_t step = *result.first_divergence - 1;
        if (const auto* outputs = std::get_if<OutputTrace>(&result.expected)) {
            std::cout << ": expected " << model.outputs().name((*outputs)[step]);
        } else {
            const auto& sets = std::get<std::vector<OutputClass>>(result.expected);
            std::cout << ": allowed " << sets[step].render(model.outputs());
        }
        std::cout << ", observed " << model.outputs().name(result.observed[step]) << "\n";
    }
    std::cout << "cases=" << results.size() << " failed=" << failed << "\n";
    return failed == 0 ? kExitPass : kExitFail;
}

int cmd_experiment(const ExperimentOptions& opt) {
    Dfsm model = parse_model_file(opt.model_path);
    CompositeRequirement requirement = parse_requirement_file(opt.requirement_path);
    validate_requirement(model, requirement);

    Strategy strategy;
    if (opt.strategy == "exhaustive" || opt.strategy == "exh") {
        strategy = Strategy::exhaustive_equal;
    } else if (opt.strategy == "complete" || opt.strategy == "cmp") {
        strategy = Strategy::complete_membership;
    } else {
        throw CLI::ValidationError("strategy must be 'exhaustive' or 'complete'");
    }

    CoverageReport report;
    if (opt.sampling) {
        MutantSource universe(model, opt.seed, opt.mutants);
        report = coverage_experiment(model, requirement, opt.extra, strategy, universe);
    } else {
        if (opt.enumerate_states == 0) {
            throw CLI::ValidationError("pick a mode: --enumerate <states> or --mutants <count>");
        }
        MachineEnumerator universe(opt.enumerate_states, model.inputs(), model.outputs());
        report = coverage_experiment(model, requirement, opt.extra, strategy, universe);
    }
    write_file(opt.report_path, report.text());
    std::cout << report.summary_line() << "\n";
    return report.clean(strategy) ? kExitPass : kExitFail;
}

int cmd_abstract(const AbstractOptions& opt) {
    Dfsm model = parse_model_file(opt.model_path);
    CompositeRequirement requirement = parse_requirement_file(opt.requirement_path);
    AbstractDfsm m1 = build_m1(model, requirement);
    ClassMap m2 = build_m2(m1);
    NondetAbstraction m1p = build_m1_prime(m1);

    std::filesystem::create_directories(opt.out_dir);
    std::filesystem::path dir(opt.out_dir);
    write_file(dir / "m1.csv", serialize_model(m1.machine));
    write_file(dir / "m2.csv", serialize_model(m2.m2.machine));
    write_file(dir / "m1prime.txt", serialize_transitions(m1p));
    std::cout << "classes=" << m2.class_count() << "\n";
    return kExitPass;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Requirements-based test generation for deterministic FSMs"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    GenerateOptions gen;
    CLI::App* generate = app.add_subcommand(
        "generate", "generate a test suite and its expected results");
    generate->set_help_flag("--help", "print help");
    generate->add_option("model", gen.model_path, "reference model file")->required();
    generate->add_option("spec", gen.spec_path,
                         "requirement file (.req) or pre-built abstraction model");
    generate->add_option("--method", gen.method, "equiv | req-exh | req-cmp");
    generate->add_flag("-h", gen.h_flag, "equivalence-testing method");
    generate->add_flag("-s", gen.s_flag, "requirement-based method");
    generate->add_option("-a,--extra-states", gen.extra, "maximal additional SUT states")
        ->required();
    generate->add_option("-o,--out", gen.out_dir, "output directory");
    generate->add_option("--requirement", gen.requirement_path, "requirement file");
    generate->add_option("--abstraction", gen.abstraction_path, "pre-built abstraction model");

    CheckOptions chk;
    CLI::App* check = app.add_subcommand("check", "run a suite against an SUT model");
    check->set_help_flag("--help", "print help");
    check->add_option("model", chk.model_path, "reference model file")->required();
    check->add_option("sut", chk.sut_path, "SUT model file")->required();
    check->add_option("suite", chk.suite_path, "suite file")->required();
    check->add_option("--criterion", chk.criterion, "equiv | reduction")->required();
    check->add_option("--requirement", chk.requirement_path, "requirement file");
    check->add_option("--abstraction", chk.abstraction_path, "pre-built abstraction model");

    ExperimentOptions exp;
    CLI::App* experiment = app.add_subcommand(
        "experiment", "fault-coverage experiment over an enumerated or sampled universe");
    experiment->set_help_flag("--help", "print help");
    experiment->add_option("model", exp.model_path, "reference model file")->required();
    experiment->add_option("requirement", exp.requirement_path, "requirement file")->required();
    experiment->add_option("-a,--extra-states", exp.extra, "maximal additional SUT states");
    experiment->add_option("--strategy", exp.strategy, "exhaustive | complete");
    experiment->add_option("--enumerate", exp.enumerate_states,
                           "enumerate every machine with this many states");
    CLI::Option* mutants = experiment->add_option("--mutants", exp.mutants,
                                                  "sample this many seeded mutants");
    experiment->add_option("--seed", exp.seed, "mutation seed");
    experiment->add_option("-o,--report", exp.report_path, "report file");
    experiment->callback([&, mutants] { exp.sampling = mutants->count() > 0; });

    AbstractOptions abs;
    CLI::App* abstract = app.add_subcommand(
        "abstract", "write the requirement abstractions for a model");
    abstract->set_help_flag("--help", "print help");
    abstract->add_option("model", abs.model_path, "reference model file")->required();
    abstract->add_option("requirement", abs.requirement_path, "requirement file")->required();
    abstract->add_option("-o,--out", abs.out_dir, "output directory");

    std::vector<const char*> argv;
    argv.push_back("fsmreq");
    for (const std::string& arg : args) {
        argv.push_back(arg.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (generate->parsed()) {
            return cmd_generate(gen);
        }
        if (check->parsed()) {
            return cmd_check(chk);
        }
        if (experiment->parsed()) {
            return cmd_experiment(exp);
        }
        if (abstract->parsed()) {
            return cmd_abstract(abs);
        }
        return kExitUsage;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "model format error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const RequirementError& e) {
        std::cerr << "requirement error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFormat;
    }
}

} // namespace fsmreq::cli
