#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace pucci {

/// One configuration value: bool, number, string, or a homogeneous array.
using ScenarioValue =
    std::variant<bool, double, std::string, std::vector<double>, std::vector<std::string>>;

/// Parsed scenario file. The format is a flat INI/TOML-like dialect:
///   # comment
///   key = value            (top level, section "")
///   [section]
///   key = value
/// Values: numbers (1, 2.5, 1e-3), booleans (true/false), quoted strings
/// ("..."), arrays of numbers or strings ([1, 2, 3] / ["a", "b"]).
/// Duplicate keys and malformed lines raise ConfigError with the line number.
struct Scenario {
    std::map<std::string, std::map<std::string, ScenarioValue>> sections;
    std::string source_text;  // canonical text, hashed into the report digest

    static Scenario parse_string(const std::string& text, const std::string& origin = "<string>");
    static Scenario parse_file(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;

    /// Typed getters; the *_or variants return the fallback when absent,
    /// the plain ones throw ConfigError naming section.key.
    double number(const std::string& section, const std::string& key) const;
    double number_or(const std::string& section, const std::string& key, double fallback) const;
    std::string str(const std::string& section, const std::string& key) const;
    std::string str_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    bool flag_or(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> numbers(const std::string& section, const std::string& key) const;
    std::vector<double> numbers_or(const std::string& section, const std::string& key,
                                   const std::vector<double>& fallback) const;
};

}  // namespace pucci
