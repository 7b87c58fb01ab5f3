#include "risim/ini.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace risim {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

IniData parse_ini(std::istream& in) {
  IniData data;
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) {
        throw std::invalid_argument("config line " + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(t.substr(1, t.size() - 2));
      data[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    }
    data[section][key] = value;
  }
  return data;
}

IniData load_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_ini(in);
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || ptr != e) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

std::int64_t parse_int(const std::string& text) {
  std::int64_t v = 0;
  const char* b = text.data();
  const char* e = b + text.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || ptr != e) throw std::invalid_argument("not an integer: '" + text + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& text) {
  std::uint64_t v = 0;
  const char* b = text.data();
  const char* e = b + text.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || ptr != e) throw std::invalid_argument("not an unsigned integer: '" + text + "'");
  return v;
}

namespace {

const std::string* find_value(const IniData& data, const std::string& section, const std::string& key) {
  const auto sec = data.find(section);
  if (sec == data.end()) return nullptr;
  const auto it = sec->second.find(key);
  if (it == sec->second.end()) return nullptr;
  return &it->second;
}

}  // namespace

double ini_get_double(const IniData& data, const std::string& section, const std::string& key, double fallback) {
  const std::string* v = find_value(data, section, key);
  return v ? parse_double(*v) : fallback;
}

std::int64_t ini_get_int(const IniData& data, const std::string& section, const std::string& key, std::int64_t fallback) {
  const std::string* v = find_value(data, section, key);
  return v ? parse_int(*v) : fallback;
}

std::uint64_t ini_get_u64(const IniData& data, const std::string& section, const std::string& key, std::uint64_t fallback) {
  const std::string* v = find_value(data, section, key);
  return v ? parse_u64(*v) : fallback;
}

std::string ini_get_string(const IniData& data, const std::string& section, const std::string& key, const std::string& fallback) {
  const std::string* v = find_value(data, section, key);
  return v ? *v : fallback;
}

}  // namespace risim
