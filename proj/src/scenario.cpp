#include "pucci/scenario.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pucci/errors.hpp"

namespace pucci {
namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Removes a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

ScenarioValue parse_value(const std::string& raw, const std::string& origin, int line) {
    const std::string v = strip(raw);
    if (v.empty()) fail(origin, line, "missing value");
    if (v == "true") return true;
    if (v == "false") return false;
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"') fail(origin, line, "unterminated string");
        return v.substr(1, v.size() - 2);
    }
    if (v.front() == '[') {
        if (v.back() != ']') fail(origin, line, "unterminated array");
        std::vector<std::string> items;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            const char c = v[i];
            if (c == '"') quoted = !quoted;
            if (c == ',' && !quoted) {
                items.push_back(strip(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!strip(cur).empty()) items.push_back(strip(cur));
        if (items.empty()) return std::vector<double>{};
        if (items.front().size() && items.front().front() == '"') {
            std::vector<std::string> out;
            for (const auto& it : items) {
                if (it.size() < 2 || it.front() != '"' || it.back() != '"')
                    fail(origin, line, "array mixes strings and non-strings");
                out.push_back(it.substr(1, it.size() - 2));
            }
            return out;
        }
        std::vector<double> out;
        for (const auto& it : items) {
            double d;
            if (!parse_number(it, d)) fail(origin, line, "bad number '" + it + "' in array");
            out.push_back(d);
        }
        return out;
    }
    double d;
    if (parse_number(v, d)) return d;
    fail(origin, line, "cannot parse value '" + v + "' (strings need quotes)");
}

}  // namespace

Scenario Scenario::parse_string(const std::string& text, const std::string& origin) {
    Scenario sc;
    sc.source_text = text;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = strip(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(origin, line, "unterminated section header");
            section = strip(s.substr(1, s.size() - 2));
            if (section.empty()) fail(origin, line, "empty section name");
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) fail(origin, line, "expected key = value");
        const std::string key = strip(s.substr(0, eq));
        if (key.empty()) fail(origin, line, "empty key");
        auto& sect = sc.sections[section];
        if (sect.count(key)) fail(origin, line, "duplicate key '" + key + "'");
        sect.emplace(key, parse_value(s.substr(eq + 1), origin, line));
    }
    return sc;
}

Scenario Scenario::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

bool Scenario::has(const std::string& section, const std::string& key) const {
    auto it = sections.find(section);
    return it != sections.end() && it->second.count(key) > 0;
}

namespace {

const ScenarioValue& lookup(const Scenario& sc, const std::string& section,
                            const std::string& key) {
    auto it = sc.sections.find(section);
    if (it == sc.sections.end() || !it->second.count(key))
        throw ConfigError("missing required key [" + section + "] " + key);
    return it->second.at(key);
}

[[noreturn]] void type_fail(const std::string& section, const std::string& key,
                            const char* want) {
    throw ConfigError("key [" + section + "] " + key + " must be a " + want);
}

}  // namespace

double Scenario::number(const std::string& section, const std::string& key) const {
    const auto& v = lookup(*this, section, key);
    if (const double* d = std::get_if<double>(&v)) return *d;
    type_fail(section, key, "number");
}

double Scenario::number_or(const std::string& section, const std::string& key,
                           double fallback) const {
    return has(section, key) ? number(section, key) : fallback;
}

std::string Scenario::str(const std::string& section, const std::string& key) const {
    const auto& v = lookup(*this, section, key);
    if (const std::string* s = std::get_if<std::string>(&v)) return *s;
    type_fail(section, key, "string");
}

std::string Scenario::str_or(const std::string& section, const std::string& key,
                             const std::string& fallback) const {
    return has(section, key) ? str(section, key) : fallback;
}

bool Scenario::flag_or(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    const auto& v = lookup(*this, section, key);
    if (const bool* b = std::get_if<bool>(&v)) return *b;
    type_fail(section, key, "boolean");
}

std::vector<double> Scenario::numbers(const std::string& section, const std::string& key) const {
    const auto& v = lookup(*this, section, key);
    if (const auto* a = std::get_if<std::vector<double>>(&v)) return *a;
    if (const double* d = std::get_if<double>(&v)) return {*d};
    type_fail(section, key, "number array");
}

std::vector<double> Scenario::numbers_or(const std::string& section, const std::string& key,
                                         const std::vector<double>& fallback) const {
    return has(section, key) ? numbers(section, key) : fallback;
}

}  // namespace pucci
