#pragma once

namespace macroforge {

inline constexpr const char* kVersion = "0.1.0";

} // namespace macroforge
