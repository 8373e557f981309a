#pragma once

#include <optional>
#include <string>
#include <vector>

namespace macroforge::core {

/// Index into an environment's primitive action space.
using PrimitiveAction = int;

/// An open-loop, fixed sequence of primitive actions, executed atomically.
class MacroAction {
public:
    MacroAction() = default;
    explicit MacroAction(std::vector<PrimitiveAction> actions);

    int length() const { return static_cast<int>(actions_.size()); }
    const std::vector<PrimitiveAction>& actions() const { return actions_; }
    PrimitiveAction at(int i) const { return actions_[static_cast<std::size_t>(i)]; }

    bool operator==(const MacroAction&) const = default;

    /// "NAME0,NAME1,..." using the given primitive names.
    std::string to_string(const std::vector<std::string>& names) const;
    /// Parses the inverse of to_string. Unknown names raise InvalidArgumentError.
    static MacroAction parse(const std::string& text,
                             const std::vector<std::string>& names);

private:
    std::vector<PrimitiveAction> actions_;
};

/// The agent's selectable set: every primitive of the environment plus at
/// most one macro, addressed by a flat index. Index i < primitive_count()
/// selects primitive i; index primitive_count() selects the macro.
class ActionSet {
public:
    static ActionSet primitives_only(int primitive_count);
    static ActionSet with_macro(int primitive_count, MacroAction macro);

    int primitive_count() const { return primitive_count_; }
    int size() const { return primitive_count_ + (macro_ ? 1 : 0); }
    bool has_macro() const { return macro_.has_value(); }
    const MacroAction& macro() const { return *macro_; }
    bool is_macro_index(int i) const { return macro_ && i == primitive_count_; }

private:
    ActionSet(int primitive_count, std::optional<MacroAction> macro);

    int primitive_count_ = 0;
    std::optional<MacroAction> macro_;
};

/// Forms M = A ∪ {m}. With no macro the set is just the primitives. Throws
/// InvalidArgumentError if the macro references an out-of-range primitive.
ActionSet augment_action_space(int primitive_count,
                               const std::optional<MacroAction>& macro);

} // namespace macroforge::core
