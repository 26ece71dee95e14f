#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rydcrit::csv {

// Shortest round-trip decimal representation.
std::string format_double(double x);

// RFC 4180 writer: CRLF line endings, fields quoted only when required.
class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}

  void header(const std::vector<std::string>& names);
  Writer& field(std::string_view text);
  Writer& field(double x);
  Writer& field(long long x);
  void end_row();

 private:
  std::ostream& os_;
  bool row_started_ = false;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column, or npos.
  std::size_t column(std::string_view name) const;
  std::vector<double> numeric_column(std::size_t index) const;
};

Table parse(std::string_view text);
Table read_file(const std::string& path);

}  // namespace rydcrit::csv
