#pragma once

#include <filesystem>
#include <string>

#include "fsmreq/harness.hpp"
#include "fsmreq/model_io.hpp"

namespace testutil {

using namespace fsmreq;

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(FIXTURES_DIR) / name;
}

inline Dfsm load_model(const std::string& name) {
    return parse_model_file(fixture(name));
}

inline InputTrace trace_of(const Dfsm& m, const std::string& dotted) {
    InputTrace out;
    std::size_t start = 0;
    while (start <= dotted.size() && !dotted.empty()) {
        std::size_t dot = dotted.find('.', start);
        out.push_back(m.inputs().id(
            dotted.substr(start, dot == std::string::npos ? dotted.size() - start : dot - start)));
        if (dot == std::string::npos) {
            break;
        }
        start = dot + 1;
    }
    return out;
}

inline std::string outputs_of(const Dfsm& m, const OutputTrace& outputs) {
    std::string text;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        if (i) {
            text += '.';
        }
        text += m.outputs().name(outputs[i]);
    }
    return text;
}

inline Dfsm random_dfsm(SplitMix64& rng, std::uint32_t max_states, std::uint32_t max_inputs,
                        std::uint32_t max_outputs) {
    const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(max_states));
    const std::uint32_t ni = 1 + static_cast<std::uint32_t>(rng.below(max_inputs));
    const std::uint32_t no = 1 + static_cast<std::uint32_t>(rng.below(max_outputs));
    std::vector<std::string> states, inputs, outputs;
    for (std::uint32_t q = 0; q < n; ++q) {
        states.push_back("s" + std::to_string(q));
    }
    for (std::uint32_t x = 0; x < ni; ++x) {
        inputs.push_back("i" + std::to_string(x));
    }
    for (std::uint32_t y = 0; y < no; ++y) {
        outputs.push_back("o" + std::to_string(y));
    }
    std::vector<StateId> delta(n * ni);
    std::vector<SymbolId> omega(n * ni);
    for (std::size_t cell = 0; cell < delta.size(); ++cell) {
        delta[cell] = static_cast<StateId>(rng.below(n));
        omega[cell] = static_cast<SymbolId>(rng.below(no));
    }
    return Dfsm(std::move(states), 0, Alphabet(std::move(inputs)), Alphabet(std::move(outputs)),
                std::move(delta), std::move(omega));
}

inline InputTrace random_trace(SplitMix64& rng, const Dfsm& m, std::size_t max_len) {
    InputTrace out;
    std::size_t len = rng.below(max_len + 1);
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(static_cast<SymbolId>(rng.below(m.input_count())));
    }
    return out;
}

} // namespace testutil
