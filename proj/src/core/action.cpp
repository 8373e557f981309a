#include "macroforge/core/action.hpp"

#include <sstream>

#include "macroforge/errors.hpp"

namespace macroforge::core {

MacroAction::MacroAction(std::vector<PrimitiveAction> actions)
    : actions_(std::move(actions)) {
    if (actions_.empty())
        throw InvalidArgumentError("macro action must contain at least one primitive");
    for (PrimitiveAction a : actions_)
        if (a < 0) throw InvalidArgumentError("macro action contains a negative primitive id");
}

std::string MacroAction::to_string(const std::vector<std::string>& names) const {
    std::ostringstream out;
    for (std::size_t i = 0; i < actions_.size(); ++i) {
        const auto id = static_cast<std::size_t>(actions_[i]);
        if (id >= names.size())
            throw InvalidArgumentError("macro primitive id " + std::to_string(actions_[i]) +
                                       " has no name in a space of " +
                                       std::to_string(names.size()));
        if (i > 0) out << ',';
        out << names[id];
    }
    return out.str();
}

MacroAction MacroAction::parse(const std::string& text,
                               const std::vector<std::string>& names) {
    std::vector<PrimitiveAction> actions;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        // trim surrounding whitespace
        const auto b = token.find_first_not_of(" \t");
        const auto e = token.find_last_not_of(" \t");
        if (b == std::string::npos)
            throw InvalidArgumentError("empty action name in macro '" + text + "'");
        token = token.substr(b, e - b + 1);
        int id = -1;
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == token) { id = static_cast<int>(i); break; }
        if (id < 0)
            throw InvalidArgumentError("unknown action name '" + token + "' in macro");
        actions.push_back(id);
    }
    return MacroAction(std::move(actions));
}

ActionSet::ActionSet(int primitive_count, std::optional<MacroAction> macro)
    : primitive_count_(primitive_count), macro_(std::move(macro)) {}

ActionSet ActionSet::primitives_only(int primitive_count) {
    if (primitive_count < 1)
        throw InvalidArgumentError("action set needs at least one primitive");
    return ActionSet(primitive_count, std::nullopt);
}

ActionSet ActionSet::with_macro(int primitive_count, MacroAction macro) {
    if (primitive_count < 1)
        throw InvalidArgumentError("action set needs at least one primitive");
    for (PrimitiveAction a : macro.actions())
        if (a >= primitive_count)
            throw InvalidArgumentError("macro references primitive " + std::to_string(a) +
                                       " outside an action space of size " +
                                       std::to_string(primitive_count));
    return ActionSet(primitive_count, std::move(macro));
}

ActionSet augment_action_space(int primitive_count,
                               const std::optional<MacroAction>& macro) {
    if (macro) return ActionSet::with_macro(primitive_count, *macro);
    return ActionSet::primitives_only(primitive_count);
}

} // namespace macroforge::core
