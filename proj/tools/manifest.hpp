#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace bgap::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Provenance block embedded in every JSON report.
struct RunManifest {
  std::vector<std::string> command;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::vector<std::filesystem::path> inputs;

  nlohmann::json to_json() const;
};

/// argv without flags that cannot change a report (--threads, --out, --emit).
std::vector<std::string> recorded_command(int argc, const char* const* argv);

/// SOURCE_DATE_EPOCH when set, otherwise the current time; ISO-8601 UTC.
std::string timestamp();

}  // namespace bgap::cli
