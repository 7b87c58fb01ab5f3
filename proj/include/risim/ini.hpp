#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>

namespace risim {

/// Sectioned key = value text, parsed into section -> key -> raw value.
/// Lines starting with '#' or ';' are comments; blank lines are skipped.
/// Keys before any [section] header land in the "" section.
using IniData = std::map<std::string, std::map<std::string, std::string>>;

IniData parse_ini(std::istream& in);
IniData load_ini(const std::string& path);

/// Typed lookups. Accessors throw std::invalid_argument on malformed values
/// and return fallback when the key is absent.
double ini_get_double(const IniData& data, const std::string& section, const std::string& key, double fallback);
std::int64_t ini_get_int(const IniData& data, const std::string& section, const std::string& key, std::int64_t fallback);
std::uint64_t ini_get_u64(const IniData& data, const std::string& section, const std::string& key, std::uint64_t fallback);
std::string ini_get_string(const IniData& data, const std::string& section, const std::string& key, const std::string& fallback);

/// Parses a whole string as a double/integer; throws std::invalid_argument on
/// trailing garbage. Locale independent.
double parse_double(const std::string& text);
std::int64_t parse_int(const std::string& text);
std::uint64_t parse_u64(const std::string& text);

}  // namespace risim
