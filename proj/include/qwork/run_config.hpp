// Flat sectioned key=value run configuration. Every parse or lookup failure
// surfaces as a ConfigError carrying the file, line, or field involved.

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qwork {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parsed configuration. Keys are addressed as "section.key". Lookups mark
/// keys as consumed; check_section_consumed turns leftovers (typos, stale
/// keys) into errors for the sections a command actually read.
class ConfigMap {
 public:
  static ConfigMap parse_file(const std::string& path);
  static ConfigMap parse_string(const std::string& text,
                                const std::string& name);

  bool has(const std::string& key) const;

  std::string require_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double require_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int require_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;

  /// Whitespace- or comma-separated list of reals.
  std::vector<double> require_doubles(const std::string& key) const;

  /// Tokens "t:value", whitespace-separated.
  std::vector<std::pair<double, double>> require_pairs(
      const std::string& key) const;

  /// Rejects keys in the section that no lookup touched.
  void check_section_consumed(const std::string& section) const;

  const std::string& name() const { return name_; }

 private:
  struct Entry {
    std::string value;
    int line;
    mutable bool consumed = false;
  };

  [[noreturn]] void fail(const std::string& key,
                         const std::string& message) const;
  const Entry* find(const std::string& key) const;
  const Entry& require(const std::string& key) const;

  std::string name_;
  std::map<std::string, Entry> entries_;
};

}  // namespace qwork
