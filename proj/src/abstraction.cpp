#include "fsmreq/abstraction.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "fsmreq/model_io.hpp"

namespace fsmreq {

std::string OutputClass::render(const Alphabet& outputs) const {
    if (full) {
        return "*";
    }
    std::vector<std::string> names;
    names.reserve(members.size());
    for (SymbolId y : members) {
        names.push_back(outputs.name(y));
    }
    std::sort(names.begin(), names.end());
    std::string out = "{";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) {
            out += "|";
        }
        out += names[i];
    }
    return out + "}";
}

namespace {

OutputClass make_class(std::vector<SymbolId> members, std::size_t output_count) {
    OutputClass cls;
    cls.members = std::move(members);
    std::sort(cls.members.begin(), cls.members.end());
    cls.members.erase(std::unique(cls.members.begin(), cls.members.end()), cls.members.end());
    cls.full = cls.members.size() == output_count;
    cls.mask.assign(output_count, 0);
    for (SymbolId y : cls.members) {
        cls.mask[y] = 1;
    }
    return cls;
}

OutputClass full_class(std::size_t output_count) {
    std::vector<SymbolId> all(output_count);
    for (SymbolId y = 0; y < output_count; ++y) {
        all[y] = y;
    }
    return make_class(std::move(all), output_count);
}

AbstractDfsm assemble(const Dfsm& model, std::vector<OutputClass> classes,
                      std::vector<SymbolId> cell_class) {
    std::vector<std::string> class_names;
    class_names.reserve(classes.size());
    for (const OutputClass& cls : classes) {
        class_names.push_back(cls.render(model.outputs()));
    }
    Dfsm machine(model.state_names(), model.initial(), model.inputs(),
                 Alphabet(std::move(class_names)), model.delta(), std::move(cell_class));
    return AbstractDfsm{std::move(machine), model.outputs(), std::move(classes)};
}

} // namespace

AbstractDfsm build_m1(const Dfsm& model, const ResolvedRequirement& r) {
    std::vector<OutputClass> classes;
    classes.push_back(full_class(model.outputs().size()));
    std::map<std::vector<SymbolId>, SymbolId> class_ids;
    std::vector<SymbolId> cell_class(model.state_count() * model.input_count(), 0);
    for (const ResolvedItem& item : r.items) {
        auto [it, inserted] =
            class_ids.emplace(item.allowed, static_cast<SymbolId>(classes.size()));
        if (inserted) {
            classes.push_back(make_class(item.allowed, model.outputs().size()));
        }
        cell_class[item.state * model.input_count() + item.input] = it->second;
    }
    return assemble(model, std::move(classes), std::move(cell_class));
}

AbstractDfsm build_m1(const Dfsm& model, const CompositeRequirement& r) {
    return build_m1(model, resolve_requirement(model, r));
}

AbstractDfsm identity_abstraction(const Dfsm& model) {
    std::vector<OutputClass> classes;
    classes.push_back(full_class(model.outputs().size()));
    std::map<std::vector<SymbolId>, SymbolId> class_ids;
    class_ids.emplace(classes[0].members, 0);
    std::vector<SymbolId> cell_class(model.state_count() * model.input_count());
    for (StateId q = 0; q < model.state_count(); ++q) {
        for (SymbolId x = 0; x < model.input_count(); ++x) {
            std::vector<SymbolId> members{model.output(q, x)};
            auto [it, inserted] =
                class_ids.emplace(members, static_cast<SymbolId>(classes.size()));
            if (inserted) {
                classes.push_back(make_class(std::move(members), model.outputs().size()));
            }
            cell_class[q * model.input_count() + x] = it->second;
        }
    }
    return assemble(model, std::move(classes), std::move(cell_class));
}

ClassMap build_m2(const AbstractDfsm& m1) {
    Minimized minimized = minimize(m1.machine);
    // M1 shares the model's transitions, so every class is reachable whenever
    // the model is initially connected; the state_class map is then total.
    return ClassMap{AbstractDfsm{std::move(minimized.machine), m1.concrete_outputs, m1.classes},
                    std::move(minimized.state_class)};
}

NondetAbstraction build_m1_prime(const AbstractDfsm& m1) {
    NondetAbstraction out;
    out.state_names = m1.machine.state_names();
    out.initial = m1.machine.initial();
    out.inputs = m1.machine.inputs();
    out.outputs = m1.concrete_outputs;
    out.delta = m1.machine.delta();
    out.classes = m1.classes;
    out.cell_class.assign(m1.machine.omega().begin(), m1.machine.omega().end());
    return out;
}

NondetAbstraction build_m1_prime(const Dfsm& model, const CompositeRequirement& r) {
    return build_m1_prime(build_m1(model, r));
}

Fsm NondetAbstraction::to_fsm() const {
    std::vector<Transition> transitions;
    for (StateId q = 0; q < state_count(); ++q) {
        for (SymbolId x = 0; x < input_count(); ++x) {
            for (SymbolId y : allowed(q, x).members) {
                transitions.push_back({q, x, y, next(q, x)});
            }
        }
    }
    return Fsm(state_names, initial, inputs, outputs, std::move(transitions));
}

AbstractDfsm parse_abstraction(const Dfsm& model, std::string_view text) {
    Dfsm raw = parse_model(text);
    if (raw.state_count() != model.state_count() || raw.inputs() != model.inputs()) {
        throw std::runtime_error("abstraction must share the model's states and inputs");
    }
    std::unordered_map<std::string, StateId> model_state;
    for (StateId q = 0; q < model.state_count(); ++q) {
        model_state.emplace(model.state_name(q), q);
    }
    std::vector<StateId> to_model(raw.state_count());
    for (StateId q = 0; q < raw.state_count(); ++q) {
        auto it = model_state.find(raw.state_name(q));
        if (it == model_state.end()) {
            throw std::runtime_error("abstraction state '" + raw.state_name(q) +
                                     "' is not a model state");
        }
        to_model[q] = it->second;
    }
    if (to_model[raw.initial()] != model.initial()) {
        throw std::runtime_error("abstraction initial state differs from the model's");
    }

    std::vector<OutputClass> classes;
    std::map<std::vector<SymbolId>, SymbolId> class_ids;
    auto intern = [&](std::vector<SymbolId> members) {
        OutputClass cls = make_class(std::move(members), model.outputs().size());
        auto [it, inserted] = class_ids.emplace(cls.members, static_cast<SymbolId>(classes.size()));
        if (inserted) {
            classes.push_back(std::move(cls));
        }
        return it->second;
    };

    auto decode = [&](const std::string& name) {
        std::vector<SymbolId> members;
        if (name == "*") {
            for (SymbolId y = 0; y < model.outputs().size(); ++y) {
                members.push_back(y);
            }
            return intern(std::move(members));
        }
        auto lookup = [&](const std::string& out_name) {
            auto y = model.outputs().find(out_name);
            if (!y) {
                throw std::runtime_error("abstraction output '" + out_name +
                                         "' is not a model output");
            }
            return *y;
        };
        if (name.size() >= 2 && name.front() == '{' && name.back() == '}') {
            std::string body = name.substr(1, name.size() - 2);
            std::size_t start = 0;
            while (start <= body.size() && !body.empty()) {
                std::size_t bar = body.find('|', start);
                std::string part = body.substr(
                    start, bar == std::string::npos ? body.size() - start : bar - start);
                if (part.empty()) {
                    throw std::runtime_error("empty output name in class '" + name + "'");
                }
                members.push_back(lookup(part));
                if (bar == std::string::npos) {
                    break;
                }
                start = bar + 1;
            }
            if (members.empty()) {
                throw std::runtime_error("empty output class in abstraction");
            }
        } else {
            members.push_back(lookup(name));
        }
        return intern(std::move(members));
    };

    std::vector<SymbolId> decoded_output(raw.outputs().size());
    for (SymbolId y = 0; y < raw.outputs().size(); ++y) {
        decoded_output[y] = decode(raw.outputs().name(y));
    }

    std::vector<SymbolId> cell_class(model.state_count() * model.input_count());
    for (StateId q = 0; q < raw.state_count(); ++q) {
        StateId mq = to_model[q];
        for (SymbolId x = 0; x < raw.input_count(); ++x) {
            if (to_model[raw.next(q, x)] != model.next(mq, x)) {
                throw std::runtime_error("abstraction transition (" + raw.state_name(q) + ", " +
                                         model.inputs().name(x) +
                                         ") disagrees with the model");
            }
            SymbolId cls = decoded_output[raw.output(q, x)];
            if (!classes[cls].contains(model.output(mq, x))) {
                throw std::runtime_error("abstraction class at (" + raw.state_name(q) + ", " +
                                         model.inputs().name(x) +
                                         ") excludes the modelled output");
            }
            cell_class[mq * model.input_count() + x] = cls;
        }
    }
    return assemble(model, std::move(classes), std::move(cell_class));
}

AbstractDfsm parse_abstraction_file(const Dfsm& model, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open abstraction file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_abstraction(model, buffer.str());
}

CompositeRequirement requirement_from_abstraction(const Dfsm& model, const AbstractDfsm& m1) {
    CompositeRequirement r;
    for (StateId q = 0; q < model.state_count(); ++q) {
        for (SymbolId x = 0; x < model.input_count(); ++x) {
            const OutputClass& cls = m1.cell_class(q, x);
            if (cls.full) {
                continue;
            }
            ElementaryRequirement item;
            item.state = model.state_name(q);
            item.input = model.inputs().name(x);
            for (SymbolId y : cls.members) {
                item.allowed.push_back(model.outputs().name(y));
            }
            r.items.push_back(std::move(item));
        }
    }
    return r;
}

std::string serialize_transitions(const NondetAbstraction& m1p) {
    std::ostringstream out;
    for (StateId q = 0; q < m1p.state_count(); ++q) {
        for (SymbolId x = 0; x < m1p.input_count(); ++x) {
            for (SymbolId y : m1p.allowed(q, x).members) {
                out << m1p.state_names[q] << ',' << m1p.inputs.name(x) << ','
                    << m1p.outputs.name(y) << ',' << m1p.state_names[m1p.next(q, x)] << '\n';
            }
        }
    }
    return out.str();
}

} // namespace fsmreq
