#include "rydcrit/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rydcrit/error.hpp"

namespace rydcrit::csv {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void Writer::header(const std::vector<std::string>& names) {
  for (const auto& n : names) field(n);
  end_row();
}

Writer& Writer::field(std::string_view text) {
  if (row_started_) os_ << ',';
  row_started_ = true;
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) {
    os_ << text;
    return *this;
  }
  os_ << '"';
  for (char c : text) {
    if (c == '"') os_ << '"';
    os_ << c;
  }
  os_ << '"';
  return *this;
}

Writer& Writer::field(double x) { return field(std::string_view(format_double(x))); }

Writer& Writer::field(long long x) { return field(std::string_view(std::to_string(x))); }

void Writer::end_row() {
  os_ << "\r\n";
  row_started_ = false;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  return std::string::npos;
}

std::vector<double> Table::numeric_column(std::size_t index) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (index >= r.size()) throw Error(Errc::Validation, "short CSV row");
    const std::string& s = r[index];
    if (s == "nan") { out.push_back(NAN); continue; }
    if (s == "inf") { out.push_back(INFINITY); continue; }
    if (s == "-inf") { out.push_back(-INFINITY); continue; }
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw Error(Errc::Validation, "non-numeric CSV field '" + s + "'");
    out.push_back(v);
  }
  return out;
}

Table parse(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string cur;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      rec.push_back(std::move(cur));
      cur.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !cur.empty()) {
        rec.push_back(std::move(cur));
        records.push_back(std::move(rec));
      }
      cur.clear();
      rec.clear();
      any = false;
    } else {
      cur += c;
      any = true;
    }
  }
  if (any || !cur.empty()) {
    rec.push_back(std::move(cur));
    records.push_back(std::move(rec));
  }
  Table t;
  if (records.empty()) return t;
  t.header = std::move(records.front());
  t.rows.assign(std::make_move_iterator(records.begin() + 1),
                std::make_move_iterator(records.end()));
  return t;
}

Table read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::EmptyInput, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace rydcrit::csv

#include <filesystem>

#include "rydcrit/io.hpp"

namespace rydcrit::io {

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw Error(Errc::Io, "cannot create " + target.parent_path().string());
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(Errc::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(Errc::Io, "cannot rename onto " + path);
  }
}

}  // namespace rydcrit::io
