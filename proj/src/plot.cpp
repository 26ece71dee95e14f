#include "rydcrit/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "rydcrit/error.hpp"
#include "rydcrit/io.hpp"

namespace rydcrit::plot {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = INFINITY;
  double hi = -INFINITY;
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (lo == hi) {
      const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
      lo -= pad;
      hi += pad;
    }
  }
};

}  // namespace

std::string render_svg(const csv::Table& table, const Style& style) {
  if (table.rows.size() < 2) throw Error(Errc::EmptyInput, "plot needs at least 2 data rows");
  if (style.x_column >= table.header.size())
    throw Error(Errc::InvalidArgument, "x column out of range");
  std::vector<std::size_t> ys = style.y_columns;
  if (ys.empty())
    for (std::size_t c = 0; c < table.header.size(); ++c)
      if (c != style.x_column) ys.push_back(c);
  if (ys.empty()) throw Error(Errc::EmptyInput, "no y columns to plot");

  const auto x = table.numeric_column(style.x_column);
  std::vector<std::vector<double>> series;
  for (std::size_t c : ys) series.push_back(table.numeric_column(c));

  Range xr, yr;
  for (double v : x) xr.add(v);
  for (const auto& s : series)
    for (double v : s) yr.add(v);
  xr.finish();
  yr.finish();

  const double w = style.width, h = style.height;
  const double left = 80, right = 20, top = 40, bottom = 60;
  const double pw = w - left - right, ph = h - top - bottom;
  auto px = [&](double v) { return left + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double v) { return top + (1.0 - (v - yr.lo) / (yr.hi - yr.lo)) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
     << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\"" << style.height
     << "\" fill=\"white\"/>\n";
  if (!style.title.empty())
    os << "<text x=\"" << fixed(w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
       << escape(style.title) << "</text>\n";
  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + ph) << "\" x2=\""
     << fixed(left + pw) << "\" y2=\"" << fixed(top + ph) << "\"/>\n";
  os << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left)
     << "\" y2=\"" << fixed(top + ph) << "\"/>\n";
  constexpr int kTicks = 5;
  for (int i = 0; i < kTicks; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / (kTicks - 1);
    const double fy = yr.lo + (yr.hi - yr.lo) * i / (kTicks - 1);
    os << "<line x1=\"" << fixed(px(fx)) << "\" y1=\"" << fixed(top + ph) << "\" x2=\""
       << fixed(px(fx)) << "\" y2=\"" << fixed(top + ph + 5) << "\"/>\n";
    os << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(py(fy)) << "\" x2=\""
       << fixed(left) << "\" y2=\"" << fixed(py(fy)) << "\"/>\n";
  }
  os << "</g>\n<g font-size=\"11\" font-family=\"sans-serif\">\n";
  for (int i = 0; i < kTicks; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / (kTicks - 1);
    const double fy = yr.lo + (yr.hi - yr.lo) * i / (kTicks - 1);
    os << "<text x=\"" << fixed(px(fx)) << "\" y=\"" << fixed(top + ph + 18)
       << "\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n";
    os << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(py(fy) + 4)
       << "\" text-anchor=\"end\">" << tick_label(fy) << "</text>\n";
  }
  os << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(h - 16)
     << "\" text-anchor=\"middle\">" << escape(table.header[style.x_column]) << "</text>\n";
  std::string ylabel;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    if (k) ylabel += ", ";
    ylabel += table.header.at(ys[k]);
  }
  os << "<text x=\"16\" y=\"" << fixed(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << fixed(top + ph / 2) << ")\">" << escape(ylabel) << "</text>\n</g>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    std::string d;
    bool pen = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(x[i]) || !std::isfinite(series[k][i])) {
        pen = false;
        continue;
      }
      d += pen ? " L" : (d.empty() ? "M" : " M");
      d += fixed(px(x[i])) + ' ' + fixed(py(series[k][i]));
      pen = true;
    }
    os << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << kPalette[k % 6]
       << "\" stroke-width=\"1.5\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_plot(const std::string& csv_path, const std::string& svg_path, const Style& style) {
  if (!std::filesystem::exists(csv_path)) throw Error(Errc::EmptyInput, "no such file " + csv_path);
  const auto table = csv::read_file(csv_path);
  io::write_file_atomic(svg_path, render_svg(table, style));
}

}  // namespace rydcrit::plot
