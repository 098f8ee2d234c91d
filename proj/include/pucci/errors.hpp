#pragma once

#include <stdexcept>
#include <string>

namespace pucci {

/// Caller broke a documented precondition (bad arguments, wrong region, ...).
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// A run produced non-finite values or refused to start (CFL), with diagnostics
/// in the message. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Scenario file is malformed or inadmissible. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pucci
