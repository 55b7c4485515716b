// Deterministic JSON and CSV emission. All reals are printed with 17
// significant digits so parsed values round-trip bit-exactly.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qwork/oscillator.hpp"
#include "qwork/work.hpp"

namespace qwork {

/// "%.17g" with non-finite values spelled inf/-inf/nan.
std::string fmt17(double v);

/// Insertion-ordered JSON tree, sufficient for the report shapes emitted
/// here. dump() is pure text assembly: same tree, same bytes.
class JsonValue {
 public:
  static JsonValue object();
  static JsonValue array();
  static JsonValue number(double v);
  static JsonValue integer(std::int64_t v);
  static JsonValue boolean(bool v);
  static JsonValue text(std::string v);

  JsonValue& add(const std::string& key, JsonValue v);  // object members
  JsonValue& push(JsonValue v);                         // array elements

  std::string dump(int indent = 2) const;

 private:
  enum class Kind { Object, Array, Number, Integer, Boolean, Text };
  JsonValue(Kind kind) : kind_(kind) {}

  void write(std::string& out, int indent, int depth) const;

  Kind kind_;
  double number_ = 0.0;
  std::int64_t integer_ = 0;
  bool boolean_ = false;
  std::string text_;
  std::vector<std::pair<std::string, JsonValue>> members_;
  std::vector<JsonValue> elements_;
};

/// Header `w,prob`, one atom per row.
std::string work_distribution_csv(const WorkDistribution& d);

/// Header `qstar,beta_w,beta_df,beta_df_plus_s`, one sweep row per line.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Report records with their canonical field names.
JsonValue json_of(const ModifiedJarzynskiReport& report);
JsonValue json_of(const BoundsReport& report);

/// Creates the directory if needed and writes content atomically enough for
/// our purposes (single writer); throws on I/O failure.
void write_text_file(const std::string& dir, const std::string& filename,
                     const std::string& content);

}  // namespace qwork
