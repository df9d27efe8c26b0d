#pragma once

// JSON / CSV serialization of the verification reports.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "fracmap/commutator.hpp"
#include "fracmap/energy_flow.hpp"
#include "fracmap/kernel_verify.hpp"
#include "fracmap/localization.hpp"
#include "fracmap/sphere_frame.hpp"

namespace fracmap {

using Json = nlohmann::ordered_json;

/// Git blob id of `bytes`: SHA-1 over "blob <size>\0" followed by the bytes.
std::string content_hash(const std::string& bytes);

Json to_json(const SearchResult& r);
Json to_json(const FrameConstants& c, const ThetaReport& t);
Json to_json(const RatioReport& r, bool with_ratios = false);
Json to_json(const DecayTable& t);
Json to_json(const LocalizedCommutatorReport& r);
Json to_json(const CriticalPointReport& r);
Json to_json(const LocalizationReport& r);
Json to_json(const SubcriticalSweep& s);
Json to_json(const GrowthReport& g);
Json to_json(const HolderReport& h);

/// Pretty-printed with a trailing newline; parent directories are created.
void write_json(const std::filesystem::path& path, const Json& j);

/// Comma-separated table; numbers printed with 17 significant digits.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace fracmap
