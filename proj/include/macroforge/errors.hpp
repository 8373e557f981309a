#pragma once

#include <stdexcept>
#include <string>

namespace macroforge {

/// Base class for all toolkit errors. The CLI maps ConfigError (and
/// subclasses) to exit code 2, everything else to 3.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad configuration: unparsable files, violated mode invariants, unknown tags.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Parse failure in a text input (config or map); message carries the line.
class ParseError : public ConfigError {
public:
    ParseError(const std::string& what, int line)
        : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Invalid runtime argument, e.g. a macro referencing an unknown primitive.
class InvalidArgumentError : public Error {
public:
    explicit InvalidArgumentError(const std::string& what) : Error(what) {}
};

/// Operation called in a state that forbids it (stepping a finished episode).
class IllegalCallError : public Error {
public:
    explicit IllegalCallError(const std::string& what) : Error(what) {}
};

/// Iterative solver failed to reach tolerance within its sweep budget.
class DivergenceError : public Error {
public:
    explicit DivergenceError(const std::string& what) : Error(what) {}
};

/// Enumeration or tabularization would exceed the configured cap.
class TooLargeError : public Error {
public:
    explicit TooLargeError(const std::string& what) : Error(what) {}
};

} // namespace macroforge
