#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace corticarc::cli {

/// Invalid configuration: unknown key, bad value, missing unit. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Unit { none, time_ms, time_s, distance_um, frequency_hz, potential_mv, bytes };

/// Parses "20ms", "1.5 s", "100um", "5Hz", "-65mV", "64MB" into the base
/// unit of `unit` (ms, s, um, Hz, mV, bytes). A physical quantity without
/// a suffix, or with one of the wrong dimension, is a ConfigError.
double parse_quantity(std::string_view text, Unit unit, std::string_view where);

/// INI-style file: [section] headers, `key = value` lines, `#` or `;`
/// comments. Keys before the first section are rejected.
class IniFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static IniFile parse(std::string_view text, std::string origin = "<config>");
  static IniFile load(const std::string& path);

  const std::map<std::string, std::map<std::string, Entry>>& sections() const { return sections_; }
  const std::string& origin() const { return origin_; }
  void set(const std::string& section, const std::string& key, std::string value);

 private:
  std::string origin_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

}  // namespace corticarc::cli
