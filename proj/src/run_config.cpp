#include "qwork/run_config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace qwork {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double_token(const std::string& token, const std::string& where) {
  double out = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(where + ": expected a real number, got '" + token + "'");
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> tokens;
  std::string cleaned = s;
  for (char& c : cleaned)
    if (c == ',') c = ' ';
  std::istringstream stream(cleaned);
  std::string tok;
  while (stream >> tok) tokens.push_back(tok);
  return tokens;
}

}  // namespace

ConfigMap ConfigMap::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

ConfigMap ConfigMap::parse_string(const std::string& text,
                                  const std::string& name) {
  ConfigMap cfg;
  cfg.name_ = name;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = name + ":" + std::to_string(line_no);
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(where + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (section.empty())
      throw ConfigError(where + ": key outside any [section]");
    const std::string full = section + "." + key;
    if (cfg.entries_.count(full))
      throw ConfigError(where + ": duplicate key '" + full + "'");
    cfg.entries_.emplace(full, Entry{value, line_no});
  }
  return cfg;
}

bool ConfigMap::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

void ConfigMap::fail(const std::string& key,
                     const std::string& message) const {
  const Entry* entry = find(key);
  if (entry)
    throw ConfigError(name_ + ":" + std::to_string(entry->line) + ": field '" +
                      key + "' " + message);
  throw ConfigError(name_ + ": field '" + key + "' " + message);
}

const ConfigMap::Entry* ConfigMap::find(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  it->second.consumed = true;
  return &it->second;
}

const ConfigMap::Entry& ConfigMap::require(const std::string& key) const {
  const Entry* entry = find(key);
  if (!entry) fail(key, "is required but missing");
  return *entry;
}

std::string ConfigMap::require_string(const std::string& key) const {
  return require(key).value;
}

std::string ConfigMap::get_string(const std::string& key,
                                  const std::string& fallback) const {
  const Entry* entry = find(key);
  return entry ? entry->value : fallback;
}

double ConfigMap::require_double(const std::string& key) const {
  const Entry& entry = require(key);
  try {
    return parse_double_token(entry.value, "");
  } catch (const ConfigError&) {
    fail(key, "must be a real number, got '" + entry.value + "'");
  }
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  return has(key) ? require_double(key) : fallback;
}

int ConfigMap::require_int(const std::string& key) const {
  const Entry& entry = require(key);
  int out = 0;
  const char* begin = entry.value.data();
  const char* end = begin + entry.value.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end)
    fail(key, "must be an integer, got '" + entry.value + "'");
  return out;
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
  return has(key) ? require_int(key) : fallback;
}

std::uint64_t ConfigMap::get_u64(const std::string& key,
                                 std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const Entry& entry = require(key);
  std::uint64_t out = 0;
  const char* begin = entry.value.data();
  const char* end = begin + entry.value.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end)
    fail(key, "must be an unsigned integer, got '" + entry.value + "'");
  return out;
}

std::vector<double> ConfigMap::require_doubles(const std::string& key) const {
  const Entry& entry = require(key);
  std::vector<double> out;
  for (const std::string& tok : split_ws(entry.value)) {
    try {
      out.push_back(parse_double_token(tok, ""));
    } catch (const ConfigError&) {
      fail(key, "must list real numbers, got '" + tok + "'");
    }
  }
  if (out.empty()) fail(key, "must list at least one number");
  return out;
}

std::vector<std::pair<double, double>> ConfigMap::require_pairs(
    const std::string& key) const {
  const Entry& entry = require(key);
  std::vector<std::pair<double, double>> out;
  for (const std::string& tok : split_ws(entry.value)) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos)
      fail(key, "expects 't:value' tokens, got '" + tok + "'");
    try {
      out.emplace_back(parse_double_token(tok.substr(0, colon), ""),
                       parse_double_token(tok.substr(colon + 1), ""));
    } catch (const ConfigError&) {
      fail(key, "expects 't:value' tokens, got '" + tok + "'");
    }
  }
  if (out.empty()) fail(key, "must list at least one pair");
  return out;
}

void ConfigMap::check_section_consumed(const std::string& section) const {
  const std::string prefix = section + ".";
  for (const auto& [key, entry] : entries_) {
    if (key.rfind(prefix, 0) == 0 && !entry.consumed)
      throw ConfigError(name_ + ":" + std::to_string(entry.line) +
                        ": unknown field '" + key + "'");
  }
}

}  // namespace qwork
