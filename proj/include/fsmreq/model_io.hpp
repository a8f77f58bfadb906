#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fsmreq/fsm.hpp"

namespace fsmreq {

/// Model-file parse failure with a 1-based source position.
struct ParseError : std::runtime_error {
    enum class Code {
        syntax,
        unknown_target_state,
        duplicate_state_row,
        nondeterministic_cell,
        missing_cell,
    };

    ParseError(Code code, int line, int column, const std::string& what);

    Code code;
    int line;
    int column;
};

/// Parses the CSV-style model format:
///   state,<in1>,...,<inK>
///   <name>,<target1>/<output1>,...,<targetK>/<outputK>
/// The first data row names the initial state; the output alphabet is the set
/// of outputs in order of first appearance. LF and CRLF are both accepted.
Dfsm parse_model(std::string_view text);
Dfsm parse_model_file(const std::filesystem::path& path);

/// Inverse of parse_model, always LF-terminated; the initial state's row is
/// emitted first.
std::string serialize_model(const Dfsm& m);
void write_model_file(const std::filesystem::path& path, const Dfsm& m);

} // namespace fsmreq
