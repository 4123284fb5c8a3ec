#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

namespace isac {

enum class RunMode { Single, Sweep, Calibrate };

std::optional<RunMode> parse_run_mode(std::string_view text);

struct RunSpec {
  RunMode mode = RunMode::Single;
  std::optional<std::filesystem::path> config_path;  // defaults when absent
  std::filesystem::path output_dir = "out";
  std::optional<std::uint64_t> seed_override;
  std::optional<std::size_t> rounds_override;
  int parallelism = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

/// Sets the stderr log level from ISAC_SIM_LOG (error | info | debug; default info).
void configure_logging();

/// Executes one run and writes its outputs under spec.output_dir.
/// Returns kExitOk, kExitConfigError or kExitRuntimeError.
int main_run(const RunSpec& spec);

}  // namespace isac
