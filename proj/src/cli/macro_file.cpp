#include "macroforge/cli/macro_file.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "macroforge/errors.hpp"

namespace macroforge::cli {

std::string macro_file_to_json(const MacroFile& file) {
    nlohmann::ordered_json j;
    j["environment"] = file.environment;
    j["method"] = file.method;
    j["actions"] = file.actions;
    j["fitness"] = file.fitness;
    j["ga"] = nlohmann::ordered_json{{"k", file.ga.k},
                                     {"q", file.ga.q},
                                     {"q_plus", file.ga.q_plus},
                                     {"q_star", file.ga.q_star},
                                     {"fitness_budget_steps", file.ga.fitness_budget_steps},
                                     {"fitness_floor", file.ga.fitness_floor},
                                     {"master_seed", file.ga.master_seed},
                                     {"jobs", file.ga.jobs}};
    return j.dump(2) + "\n";
}

MacroFile macro_file_from_json(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("macro file is not valid JSON: ") + e.what());
    }
    try {
        MacroFile file;
        file.environment = j.at("environment").get<std::string>();
        file.method = j.at("method").get<std::string>();
        file.actions = j.at("actions").get<std::vector<std::string>>();
        file.fitness = j.at("fitness").get<double>();
        const auto& g = j.at("ga");
        file.ga.k = g.at("k").get<int>();
        file.ga.q = g.at("q").get<int>();
        file.ga.q_plus = g.at("q_plus").get<int>();
        file.ga.q_star = g.at("q_star").get<int>();
        file.ga.fitness_budget_steps = g.at("fitness_budget_steps").get<std::int64_t>();
        file.ga.fitness_floor = g.at("fitness_floor").get<double>();
        file.ga.master_seed = g.at("master_seed").get<std::uint64_t>();
        file.ga.jobs = g.at("jobs").get<int>();
        return file;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("macro file misses a required field: ") + e.what());
    }
}

MacroFile load_macro_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open macro file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return macro_file_from_json(buffer.str());
}

} // namespace macroforge::cli
