#include "qwork/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace qwork {

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

JsonValue JsonValue::object() { return JsonValue(Kind::Object); }
JsonValue JsonValue::array() { return JsonValue(Kind::Array); }

JsonValue JsonValue::number(double v) {
  JsonValue j(Kind::Number);
  j.number_ = v;
  return j;
}

JsonValue JsonValue::integer(std::int64_t v) {
  JsonValue j(Kind::Integer);
  j.integer_ = v;
  return j;
}

JsonValue JsonValue::boolean(bool v) {
  JsonValue j(Kind::Boolean);
  j.boolean_ = v;
  return j;
}

JsonValue JsonValue::text(std::string v) {
  JsonValue j(Kind::Text);
  j.text_ = std::move(v);
  return j;
}

JsonValue& JsonValue::add(const std::string& key, JsonValue v) {
  if (kind_ != Kind::Object)
    throw std::logic_error("add() requires a JSON object");
  members_.emplace_back(key, std::move(v));
  return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
  if (kind_ != Kind::Array)
    throw std::logic_error("push() requires a JSON array");
  elements_.push_back(std::move(v));
  return *this;
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void append_newline_indent(std::string& out, int indent, int depth) {
  out += '\n';
  out.append(std::size_t(indent) * std::size_t(depth), ' ');
}

}  // namespace

void JsonValue::write(std::string& out, int indent, int depth) const {
  switch (kind_) {
    case Kind::Number: {
      // Non-finite reals are not representable as JSON numbers; they appear
      // quoted so the document stays parseable.
      const std::string s = fmt17(number_);
      if (std::isfinite(number_)) out += s;
      else append_escaped(out, s);
      return;
    }
    case Kind::Integer: out += std::to_string(integer_); return;
    case Kind::Boolean: out += boolean_ ? "true" : "false"; return;
    case Kind::Text: append_escaped(out, text_); return;
    case Kind::Object: {
      if (members_.empty()) { out += "{}"; return; }
      out += '{';
      for (std::size_t i = 0; i < members_.size(); ++i) {
        append_newline_indent(out, indent, depth + 1);
        append_escaped(out, members_[i].first);
        out += ": ";
        members_[i].second.write(out, indent, depth + 1);
        if (i + 1 < members_.size()) out += ',';
      }
      append_newline_indent(out, indent, depth);
      out += '}';
      return;
    }
    case Kind::Array: {
      if (elements_.empty()) { out += "[]"; return; }
      out += '[';
      for (std::size_t i = 0; i < elements_.size(); ++i) {
        append_newline_indent(out, indent, depth + 1);
        elements_[i].write(out, indent, depth + 1);
        if (i + 1 < elements_.size()) out += ',';
      }
      append_newline_indent(out, indent, depth);
      out += ']';
      return;
    }
  }
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += '\n';
  return out;
}

std::string work_distribution_csv(const WorkDistribution& d) {
  std::string out = "w,prob\n";
  for (const auto& atom : d.atoms) {
    out += fmt17(atom.w);
    out += ',';
    out += fmt17(atom.prob);
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "qstar,beta_w,beta_df,beta_df_plus_s\n";
  for (const auto& row : rows) {
    out += fmt17(row.q_star);
    out += ',';
    out += fmt17(row.beta_w);
    out += ',';
    out += fmt17(row.beta_df);
    out += ',';
    out += fmt17(row.beta_df_plus_s);
    out += '\n';
  }
  return out;
}

JsonValue json_of(const ModifiedJarzynskiReport& report) {
  JsonValue j = JsonValue::object();
  j.add("lhs", JsonValue::number(report.lhs));
  j.add("delta_f", JsonValue::number(report.delta_f));
  j.add("s_rel", JsonValue::number(report.s_rel));
  j.add("s_rel_matrix", JsonValue::number(report.s_rel_matrix));
  j.add("residual", JsonValue::number(report.residual));
  j.add("s_agreement", JsonValue::number(report.s_agreement));
  j.add("support_violation", JsonValue::boolean(report.support_violation));
  return j;
}

JsonValue json_of(const BoundsReport& report) {
  JsonValue j = JsonValue::object();
  j.add("beta_mean_work", JsonValue::number(report.beta_mean_work));
  j.add("beta_delta_f", JsonValue::number(report.beta_delta_f));
  j.add("s_rel", JsonValue::number(report.s_rel));
  j.add("beta_delta_f_tilde", JsonValue::number(report.beta_delta_f_tilde));
  j.add("slack19", JsonValue::number(report.slack19));
  j.add("slack21", JsonValue::number(report.slack21));
  return j;
}

void write_text_file(const std::string& dir, const std::string& filename,
                     const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path directory = dir.empty() ? fs::path(".") : fs::path(dir);
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec && !fs::is_directory(directory))
    throw std::runtime_error("cannot create output directory '" +
                             directory.string() + "': " + ec.message());
  const fs::path path = directory / filename;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace qwork
