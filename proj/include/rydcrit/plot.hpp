#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rydcrit/csv.hpp"

namespace rydcrit::plot {

struct Style {
  std::string title;
  std::size_t x_column = 0;
  std::vector<std::size_t> y_columns;  // empty plots every other numeric column
  int width = 640;
  int height = 400;
};

// Deterministic SVG line chart. EmptyInput below two data rows.
std::string render_svg(const csv::Table& table, const Style& style = {});

void emit_plot(const std::string& csv_path, const std::string& svg_path, const Style& style = {});

}  // namespace rydcrit::plot
