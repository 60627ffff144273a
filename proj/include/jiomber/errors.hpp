#pragma once

#include <stdexcept>
#include <string>

namespace jiomber {

/// Invalid experiment or model parameters (bad dimensions, unsupported degree, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A malformed configuration file. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public ConfigError {
public:
    ParseError(std::size_t line, const std::string& what)
        : ConfigError(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Caller broke a function precondition (dimension mismatch, zero-norm filter, ...).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace detail {
inline void require(bool ok, const char* what) {
    if (!ok) throw ContractError(what);
}
}  // namespace detail

}  // namespace jiomber
