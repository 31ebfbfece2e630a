#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace hopfdeg::cli {

inline constexpr int kSchemaVersion = 1;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

struct RunConfig {
  std::string command;
  nlohmann::json map;       // family spec, or null
  nlohmann::json section;   // options for the command (may be empty)
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir;      // empty: no files
  std::string format = "csv";
  bool plot = false;

  // The configuration after overrides, in schema form.
  nlohmann::json resolved() const;
};

const char* run_config_schema();

// Throws ConfigError listing the first schema violation.
void validate_against_schema(const nlohmann::json& doc);

RunConfig resolve_config(const nlohmann::json& doc, const Overrides& overrides = {});
RunConfig load_config(const std::string& path, const Overrides& overrides = {});

}  // namespace hopfdeg::cli
