#pragma once

#include <stdexcept>
#include <string>

namespace tmsnn {

/// Invalid argument or configuration value.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed input file (unparseable token, inconsistent row counts, ...).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerically invalid runtime input (non-finite drive value, ...).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tmsnn
