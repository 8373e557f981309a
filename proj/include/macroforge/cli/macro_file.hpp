#pragma once

#include <string>
#include <vector>

#include "macroforge/ga/ga.hpp"

namespace macroforge::cli {

/// Persisted best macro: self-describing via named actions plus the
/// generation parameters that produced it. Round-trips losslessly.
struct MacroFile {
    std::string environment;
    std::string method;
    std::vector<std::string> actions;
    double fitness = 0.0;
    ga::GAConfig ga;
};

std::string macro_file_to_json(const MacroFile& file);
MacroFile macro_file_from_json(const std::string& text);
MacroFile load_macro_file(const std::string& path);

} // namespace macroforge::cli
