#include "corticarc/cli/config_file.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace corticarc::cli {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

struct Suffix {
  std::string_view text;
  Unit unit;
  double scale;
};

constexpr Suffix kSuffixes[] = {
    {"ms", Unit::time_ms, 1.0},        {"us", Unit::time_ms, 1e-3},      {"s", Unit::time_ms, 1e3},
    {"ms", Unit::time_s, 1e-3},        {"s", Unit::time_s, 1.0},         {"um", Unit::distance_um, 1.0},
    {"mm", Unit::distance_um, 1e3},    {"Hz", Unit::frequency_hz, 1.0},  {"kHz", Unit::frequency_hz, 1e3},
    {"mV", Unit::potential_mv, 1.0},   {"V", Unit::potential_mv, 1e3},   {"B", Unit::bytes, 1.0},
    {"KB", Unit::bytes, 1024.0},       {"MB", Unit::bytes, 1048576.0},   {"GB", Unit::bytes, 1073741824.0},
};

std::string_view unit_name(Unit unit) {
  switch (unit) {
    case Unit::none: return "a plain number";
    case Unit::time_ms:
    case Unit::time_s: return "a time (ms, s)";
    case Unit::distance_um: return "a distance (um, mm)";
    case Unit::frequency_hz: return "a frequency (Hz, kHz)";
    case Unit::potential_mv: return "a potential (mV)";
    case Unit::bytes: return "a size (B, KB, MB, GB)";
  }
  return "?";
}

}  // namespace

double parse_quantity(std::string_view text, Unit unit, std::string_view where) {
  const std::string s = trim(text);
  std::size_t end = 0;
  while (end < s.size() && (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' || s[end] == '-' ||
                            s[end] == '+' || s[end] == 'e' || s[end] == 'E')) {
    // An 'e' only belongs to the number when a digit or sign follows.
    if ((s[end] == 'e' || s[end] == 'E') &&
        !(end + 1 < s.size() && (std::isdigit(static_cast<unsigned char>(s[end + 1])) || s[end + 1] == '-' ||
                                 s[end + 1] == '+'))) {
      break;
    }
    ++end;
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + end, value);
  if (end == 0 || ec != std::errc{} || ptr != s.data() + end) {
    throw ConfigError(std::string(where) + ": '" + s + "' is not a number");
  }
  const std::string suffix = trim(std::string_view(s).substr(end));
  if (unit == Unit::none) {
    if (!suffix.empty()) throw ConfigError(std::string(where) + ": '" + s + "' takes no unit");
    return value;
  }
  if (suffix.empty()) {
    throw ConfigError(std::string(where) + ": '" + s + "' needs a unit, expected " + std::string(unit_name(unit)));
  }
  for (const Suffix& x : kSuffixes) {
    if (x.unit == unit && x.text == suffix) return value * x.scale;
  }
  throw ConfigError(std::string(where) + ": unit '" + suffix + "' is not " + std::string(unit_name(unit)));
}

IniFile IniFile::parse(std::string_view text, std::string origin) {
  IniFile ini;
  ini.origin_ = std::move(origin);
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string s = trim(std::string_view(raw).substr(0, hash));
    if (s.empty()) continue;
    const std::string at = ini.origin_ + ":" + std::to_string(line);
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(at + ": malformed section header '" + s + "'");
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      if (section.empty()) throw ConfigError(at + ": empty section name");
      ini.sections_[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(at + ": expected 'key = value'");
    if (section.empty()) throw ConfigError(at + ": key outside any section");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) throw ConfigError(at + ": empty key");
    auto& entries = ini.sections_[section];
    if (entries.count(key)) throw ConfigError(at + ": duplicate key '" + key + "' in [" + section + "]");
    entries[key] = {value, line};
  }
  return ini;
}

IniFile IniFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void IniFile::set(const std::string& section, const std::string& key, std::string value) {
  sections_[section][key] = {std::move(value), 0};
}

}  // namespace corticarc::cli
