#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "pucci/estimators.hpp"

namespace pucci {

/// Deterministic JSON document for one estimate: insertion-ordered keys, no
/// timestamps or environment data, so identical inputs give identical bytes.
nlohmann::ordered_json report_to_json(const EstimateReport& rep);

/// CSV rendering of the report table (empty string when there is none).
/// Values use shortest-roundtrip formatting.
std::string table_to_csv(const EstimateReport& rep);

/// FNV-1a 64-bit digest, used to stamp the scenario text into its report.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

/// Writes content to dir/name, creating the directory first.
void write_text_file(const std::string& dir, const std::string& name,
                     const std::string& content);

}  // namespace pucci
