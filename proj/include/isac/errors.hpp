#pragma once

#include <stdexcept>
#include <string>

namespace isac {

/// Raised when a sampling region has no area left (hole covers the disk).
class DegenerateRegionError : public std::invalid_argument {
 public:
  DegenerateRegionError() : std::invalid_argument("degenerate region") {}
};

/// Invalid configuration value. `field` names the offending key, `line` is
/// 1-based when the error came from a config file and 0 otherwise.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message, int line = 0)
      : std::runtime_error(format(field, message, line)),
        field_(std::move(field)),
        message_(message),
        line_(line) {}

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }
  /// The message without the line and field prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  static std::string format(const std::string& field, const std::string& message, int line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += field + ": ";
    return out + message;
  }

  std::string field_;
  std::string message_;
  int line_;
};

}  // namespace isac
