#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace adiabatic::cli {

/// 15 significant digits in scientific notation, independent of locale.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.14e", v);
  return buf;
}

/// Comma-separated rows with LF endings. Summary records are written as
/// '# key=value' lines after the table.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out_ << ',';
      out_ << columns[i];
    }
    out_ << '\n';
  }

  CsvWriter& cell(double v) { return raw(format_real(v)); }
  CsvWriter& cell(long long v) { return raw(std::to_string(v)); }
  CsvWriter& cell(int v) { return raw(std::to_string(v)); }
  CsvWriter& cell(bool v) { return raw(v ? "1" : "0"); }
  CsvWriter& cell(std::string_view v) { return raw(v); }
  CsvWriter& cell(const char* v) { return raw(v); }

  void end_row() {
    out_ << '\n';
    first_ = true;
  }

  void summary(std::string_view key, double v) { summary_raw(key, format_real(v)); }
  void summary(std::string_view key, long long v) { summary_raw(key, std::to_string(v)); }
  void summary(std::string_view key, int v) { summary_raw(key, std::to_string(v)); }
  void summary(std::string_view key, bool v) { summary_raw(key, v ? "1" : "0"); }
  void summary(std::string_view key, std::string_view v) { summary_raw(key, v); }

 private:
  CsvWriter& raw(std::string_view text) {
    if (!first_) out_ << ',';
    out_ << text;
    first_ = false;
    return *this;
  }
  void summary_raw(std::string_view key, std::string_view v) {
    out_ << "# " << key << '=' << v << '\n';
  }

  std::ostream& out_;
  bool first_ = true;
};

}  // namespace adiabatic::cli
