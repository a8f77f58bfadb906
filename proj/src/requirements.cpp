#include "fsmreq/requirements.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace fsmreq {

RequirementError::RequirementError(Code code_, const std::string& what)
    : std::runtime_error(what), code(code_) {}

namespace {

std::unordered_map<std::string, StateId> state_index(const Dfsm& m) {
    std::unordered_map<std::string, StateId> index;
    for (StateId q = 0; q < m.state_count(); ++q) {
        index.emplace(m.state_name(q), q);
    }
    return index;
}

std::string describe(const ElementaryRequirement& item) {
    std::string out = "(" + item.state + ", " + item.input + ", {";
    for (std::size_t i = 0; i < item.allowed.size(); ++i) {
        if (i) {
            out += "|";
        }
        out += item.allowed[i];
    }
    return out + "})";
}

} // namespace

ResolvedRequirement resolve_requirement(const Dfsm& model, const CompositeRequirement& r) {
    if (r.items.empty()) {
        throw RequirementError(RequirementError::Code::syntax,
                               "composite requirement needs at least one item");
    }
    auto states = state_index(model);
    ResolvedRequirement resolved;
    resolved.input_count = model.input_count();
    resolved.item_at.assign(model.state_count() * model.input_count(), -1);

    for (const ElementaryRequirement& item : r.items) {
        auto state = states.find(item.state);
        if (state == states.end()) {
            throw RequirementError(RequirementError::Code::unknown_state,
                                   "unknown state '" + item.state + "' in " + describe(item));
        }
        auto input = model.inputs().find(item.input);
        if (!input) {
            throw RequirementError(RequirementError::Code::unknown_input,
                                   "unknown input '" + item.input + "' in " + describe(item));
        }
        if (item.allowed.empty()) {
            throw RequirementError(RequirementError::Code::empty_allowed_set,
                                   "empty allowed set in " + describe(item));
        }
        ResolvedItem out{state->second, *input, {}, std::vector<char>(model.outputs().size(), 0)};
        for (const std::string& name : item.allowed) {
            auto y = model.outputs().find(name);
            if (!y) {
                throw RequirementError(RequirementError::Code::unknown_output,
                                       "unknown output '" + name + "' in " + describe(item));
            }
            if (!out.allowed_mask[*y]) {
                out.allowed_mask[*y] = 1;
                out.allowed.push_back(*y);
            }
        }
        std::sort(out.allowed.begin(), out.allowed.end());
        if (out.allowed.size() == model.outputs().size()) {
            throw RequirementError(RequirementError::Code::allowed_set_full,
                                   "allowed set equals the full output alphabet in " +
                                       describe(item));
        }
        SymbolId expected = model.output(out.state, out.input);
        if (!out.allowed_mask[expected]) {
            throw RequirementError(RequirementError::Code::expected_output_not_allowed,
                                   "modelled output '" + model.outputs().name(expected) +
                                       "' is outside the allowed set in " + describe(item));
        }
        std::int32_t& slot = resolved.item_at[out.state * model.input_count() + out.input];
        if (slot >= 0) {
            throw RequirementError(RequirementError::Code::duplicate_pair,
                                   "duplicate (state, input) pair in " + describe(item));
        }
        slot = static_cast<std::int32_t>(resolved.items.size());
        resolved.items.push_back(std::move(out));
    }
    return resolved;
}

void validate_requirement(const Dfsm& model, const CompositeRequirement& r) {
    resolve_requirement(model, r);
}

CompositeRequirement equivalence_requirement(const Dfsm& model) {
    CompositeRequirement r;
    r.items.reserve(model.state_count() * model.input_count());
    for (StateId q = 0; q < model.state_count(); ++q) {
        for (SymbolId x = 0; x < model.input_count(); ++x) {
            r.items.push_back({model.state_name(q), model.inputs().name(x),
                               {model.outputs().name(model.output(q, x))}});
        }
    }
    return r;
}

CompositeRequirement parse_requirement(std::string_view text) {
    CompositeRequirement r;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line(text.substr(
            pos, eol == std::string_view::npos ? text.size() - pos : eol - pos));
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        if (std::size_t hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }

        std::string where = "line " + std::to_string(line_no) + ": ";
        std::size_t first = line.find(',');
        std::size_t second = first == std::string::npos ? std::string::npos
                                                        : line.find(',', first + 1);
        if (second == std::string::npos) {
            throw RequirementError(RequirementError::Code::syntax,
                                   where + "expected <state>,<input>,{<out>|...}");
        }
        ElementaryRequirement item;
        item.state = line.substr(0, first);
        item.input = line.substr(first + 1, second - first - 1);
        std::string set = line.substr(second + 1);
        if (set.size() < 2 || set.front() != '{' || set.back() != '}') {
            throw RequirementError(RequirementError::Code::syntax,
                                   where + "allowed set must be brace-enclosed");
        }
        std::string body = set.substr(1, set.size() - 2);
        std::size_t start = 0;
        while (start <= body.size() && !body.empty()) {
            std::size_t bar = body.find('|', start);
            std::string name = body.substr(
                start, bar == std::string::npos ? body.size() - start : bar - start);
            if (name.empty()) {
                throw RequirementError(RequirementError::Code::syntax,
                                       where + "empty output name in allowed set");
            }
            item.allowed.push_back(std::move(name));
            if (bar == std::string::npos) {
                break;
            }
            start = bar + 1;
        }
        if (item.state.empty() || item.input.empty()) {
            throw RequirementError(RequirementError::Code::syntax,
                                   where + "empty state or input name");
        }
        r.items.push_back(std::move(item));
    }
    return r;
}

CompositeRequirement parse_requirement_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open requirement file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_requirement(buffer.str());
}

std::string serialize_requirement(const CompositeRequirement& r) {
    std::ostringstream out;
    for (const ElementaryRequirement& item : r.items) {
        out << item.state << ',' << item.input << ",{";
        for (std::size_t i = 0; i < item.allowed.size(); ++i) {
            if (i) {
                out << '|';
            }
            out << item.allowed[i];
        }
        out << "}\n";
    }
    return out.str();
}

} // namespace fsmreq
