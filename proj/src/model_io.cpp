#include "fsmreq/model_io.hpp"

#include <fstream>
#include <sstream>

namespace fsmreq {

namespace {

struct Cell {
    std::string target;
    std::string output;
    int column; // 1-based start of the cell
};

struct Row {
    std::string state;
    std::vector<Cell> cells;
    int line;
};

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

} // namespace

ParseError::ParseError(Code code_, int line_, int column_, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_) + ", column " +
                         std::to_string(column_) + ": " + what),
      code(code_),
      line(line_),
      column(column_) {}

Dfsm parse_model(std::string_view text) {
    std::vector<std::string> input_names;
    std::vector<Row> rows;

    int line_no = 0;
    bool header_seen = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        ++line_no;
        const bool last = eol == std::string_view::npos;
        pos = last ? text.size() + 1 : eol + 1;

        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields = split_line(line);
        if (!header_seen) {
            if (fields[0] != "state") {
                throw ParseError(ParseError::Code::syntax, line_no, 1,
                                 "header must start with 'state'");
            }
            if (fields.size() < 2) {
                throw ParseError(ParseError::Code::syntax, line_no, 1,
                                 "header declares no inputs");
            }
            for (std::size_t i = 1; i < fields.size(); ++i) {
                if (fields[i].empty()) {
                    throw ParseError(ParseError::Code::syntax, line_no, 1,
                                     "empty input name in header");
                }
                for (const std::string& seen : input_names) {
                    if (seen == fields[i]) {
                        throw ParseError(ParseError::Code::nondeterministic_cell, line_no, 1,
                                         "input '" + fields[i] +
                                             "' declared twice; cells for it would conflict");
                    }
                }
                input_names.push_back(fields[i]);
            }
            header_seen = true;
            continue;
        }

        Row row;
        row.line = line_no;
        row.state = fields[0];
        if (row.state.empty()) {
            throw ParseError(ParseError::Code::syntax, line_no, 1, "empty state name");
        }
        if (row.state.find('/') != std::string::npos) {
            throw ParseError(ParseError::Code::syntax, line_no, 1,
                             "state name must not contain '/': '" + row.state + "'");
        }
        if (fields.size() - 1 < input_names.size()) {
            throw ParseError(ParseError::Code::missing_cell, line_no,
                             static_cast<int>(line.size()) + 1,
                             "row for '" + row.state + "' has " +
                                 std::to_string(fields.size() - 1) + " cells, expected " +
                                 std::to_string(input_names.size()));
        }
        if (fields.size() - 1 > input_names.size()) {
            throw ParseError(ParseError::Code::syntax, line_no, 1,
                             "row for '" + row.state + "' has too many cells");
        }
        int column = static_cast<int>(row.state.size()) + 2;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            const std::string& field = fields[i];
            std::size_t slash = field.find('/');
            if (slash == std::string::npos || slash == 0 || slash + 1 == field.size() ||
                field.find('/', slash + 1) != std::string::npos) {
                throw ParseError(ParseError::Code::syntax, line_no, column,
                                 "cell must be <target>/<output>: '" + field + "'");
            }
            row.cells.push_back({field.substr(0, slash), field.substr(slash + 1), column});
            column += static_cast<int>(field.size()) + 1;
        }
        rows.push_back(std::move(row));
    }

    if (!header_seen) {
        throw ParseError(ParseError::Code::syntax, 1, 1, "missing header line");
    }
    if (rows.empty()) {
        throw ParseError(ParseError::Code::syntax, line_no, 1, "no state rows");
    }

    std::vector<std::string> state_names;
    std::unordered_map<std::string, StateId> state_index;
    for (const Row& row : rows) {
        if (!state_index.emplace(row.state, static_cast<StateId>(state_names.size())).second) {
            throw ParseError(ParseError::Code::duplicate_state_row, row.line, 1,
                             "state '" + row.state + "' defined twice");
        }
        state_names.push_back(row.state);
    }

    std::vector<std::string> output_names;
    std::unordered_map<std::string, SymbolId> output_index;
    std::vector<StateId> delta(rows.size() * input_names.size());
    std::vector<SymbolId> omega(rows.size() * input_names.size());
    for (StateId q = 0; q < rows.size(); ++q) {
        const Row& row = rows[q];
        for (std::size_t x = 0; x < row.cells.size(); ++x) {
            const Cell& cell = row.cells[x];
            auto target = state_index.find(cell.target);
            if (target == state_index.end()) {
                throw ParseError(ParseError::Code::unknown_target_state, row.line, cell.column,
                                 "unknown target state '" + cell.target + "'");
            }
            auto [it, inserted] =
                output_index.emplace(cell.output, static_cast<SymbolId>(output_names.size()));
            if (inserted) {
                output_names.push_back(cell.output);
            }
            delta[q * input_names.size() + x] = target->second;
            omega[q * input_names.size() + x] = it->second;
        }
    }

    return Dfsm(std::move(state_names), 0, Alphabet(std::move(input_names)),
                Alphabet(std::move(output_names)), std::move(delta), std::move(omega));
}

Dfsm parse_model_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open model file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str());
}

std::string serialize_model(const Dfsm& m) {
    std::ostringstream out;
    out << "state";
    for (const std::string& input : m.inputs().symbols()) {
        out << ',' << input;
    }
    out << '\n';
    std::vector<StateId> order;
    order.push_back(m.initial());
    for (StateId q = 0; q < m.state_count(); ++q) {
        if (q != m.initial()) {
            order.push_back(q);
        }
    }
    for (StateId q : order) {
        out << m.state_name(q);
        for (SymbolId x = 0; x < m.input_count(); ++x) {
            out << ',' << m.state_name(m.next(q, x)) << '/'
                << m.outputs().name(m.output(q, x));
        }
        out << '\n';
    }
    return out.str();
}

void write_model_file(const std::filesystem::path& path, const Dfsm& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write model file: " + path.string());
    }
    out << serialize_model(m);
}

} // namespace fsmreq
