#include "pucci/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pucci/errors.hpp"

namespace pucci {

nlohmann::ordered_json report_to_json(const EstimateReport& rep) {
    nlohmann::ordered_json doc;
    doc["kind"] = rep.kind;
    doc["pass"] = rep.pass;
    doc["witness"] = rep.witness;
    nlohmann::ordered_json fitted = nlohmann::ordered_json::object();
    for (const auto& [k, v] : rep.fitted) fitted[k] = v;  // std::map: sorted keys
    doc["fitted"] = fitted;
    nlohmann::ordered_json assumed = nlohmann::ordered_json::object();
    for (const auto& [k, v] : rep.assumed) assumed[k] = v;
    doc["assumed"] = assumed;
    if (!rep.table.empty()) {
        nlohmann::ordered_json table = nlohmann::ordered_json::array();
        for (const auto& row : rep.table) table.push_back({row[0], row[1]});
        doc["table_name"] = rep.table_name;
        doc["table"] = table;
    }
    return doc;
}

std::string table_to_csv(const EstimateReport& rep) {
    if (rep.table.empty()) return {};
    std::ostringstream out;
    out << rep.table_name << ",value\n";
    char buf[64];
    for (const auto& row : rep.table) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", row[0], row[1]);
        out << buf;
    }
    return out.str();
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

void write_text_file(const std::string& dir, const std::string& name,
                     const std::string& content) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericalError("cannot write " + path.string());
    out << content;
    if (!out) throw NumericalError("short write to " + path.string());
}

}  // namespace pucci
