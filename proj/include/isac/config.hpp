#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "isac/scenario.hpp"
#include "isac/sweep.hpp"

namespace isac {

/// Config file contents. `grid` is present when any sweep_* key was given;
/// missing sweep axes then fall back to the default grid.
struct ParsedConfig {
  ScenarioConfig scenario;
  std::optional<SweepGrid> grid;
};

struct ConfigKey {
  std::string_view name;
  /// True when the default is taken from the published case study rather than assumed.
  bool case_study_default;
  std::string_view description;
};

/// Every recognized key, in the order to_config_text writes them.
std::span<const ConfigKey> config_keys();

/// Parses `key = value` lines; `#` starts a comment. Absent keys keep their
/// defaults. Unknown or duplicate keys, malformed values and invariant
/// violations raise ConfigError with the field and line.
ParsedConfig parse_config_text(std::string_view text);
ParsedConfig parse_config(const std::filesystem::path& path);

/// Inverse of parse_config_text; values are written in shortest round-trip form.
std::string to_config_text(const ScenarioConfig& config, const std::optional<SweepGrid>& grid);

}  // namespace isac
