#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <optional>
#include <iostream>
#include <string>
#include <vector>

#include "rydcrit/csv.hpp"
#include "rydcrit/error.hpp"
#include "rydcrit/plot.hpp"
#include "rydcrit/runner.hpp"
#include "rydcrit/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

int exit_code(const rydcrit::Error& e) {
  return e.code() == rydcrit::Errc::Validation ? kValidation : kRuntime;
}

int cmd_run(const std::vector<std::string>& configs, std::string out_dir, bool out_dir_given,
            std::optional<std::uint64_t> seed, bool parallel) {
  using namespace rydcrit;
  if (!out_dir_given)
    if (const char* env = std::getenv("RYDCRIT_OUT_DIR"); env && *env) out_dir = env;

  std::vector<scenario::Scenario> scenarios;
  bool invalid = false;
  for (const auto& arg : configs) {
    try {
      scenarios.push_back(scenario::load(scenario::resolve(arg)));
    } catch (const Error& e) {
      std::cerr << e.what() << '\n';
      invalid = true;
    }
  }
  if (invalid) return kValidation;

  runner::RunOptions opts;
  opts.out_dir = out_dir;
  opts.seed = seed;
  opts.parallel = parallel && scenarios.size() == 1;

  const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
  std::vector<std::string> lines(scenarios.size());
  std::vector<int> codes(scenarios.size(), kOk);
#pragma omp parallel for schedule(dynamic, 1) if (parallel && n > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      lines[i] = runner::run(scenarios[i], opts).summary();
    } catch (const Error& e) {
      lines[i] = scenarios[i].name + ": FAILED " + e.what();
      codes[i] = exit_code(e);
    } catch (const std::exception& e) {
      lines[i] = scenarios[i].name + ": FAILED " + e.what();
      codes[i] = kRuntime;
    }
  }
  int rc = kOk;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    (codes[i] == kOk ? std::cout : std::cerr) << lines[i] << '\n';
    rc = std::max(rc, codes[i]);
  }
  return rc;
}

int cmd_list() {
  using namespace rydcrit;
  try {
    const auto entries = scenario::bundled();
    std::size_t width = 4;
    for (const auto& e : entries) width = std::max(width, e.name.size());
    for (const auto& e : entries)
      std::cout << e.name << std::string(width - e.name.size() + 2, ' ') << e.description << '\n';
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code(e);
  }
  return kOk;
}

int cmd_plot(const std::string& csv_path, const std::string& svg_path, const std::string& title,
             const std::string& x, const std::vector<std::string>& ys) {
  using namespace rydcrit;
  try {
    plot::Style style;
    style.title = title;
    if (!x.empty() || !ys.empty()) {
      const auto table = csv::read_file(csv_path);
      auto col = [&](const std::string& name) {
        const auto c = table.column(name);
        if (c == std::string::npos) throw Error(Errc::Validation, "no column named '" + name + "'");
        return c;
      };
      if (!x.empty()) style.x_column = col(x);
      for (const auto& y : ys) style.y_columns.push_back(col(y));
    }
    plot::emit_plot(csv_path, svg_path, style);
    std::cout << svg_path << '\n';
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == Errc::EmptyInput ? kValidation : exit_code(e);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field critical-point metrology simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run scenario configs (paths or bundled names)");
  std::vector<std::string> configs;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool parallel = false;
  run->add_option("config", configs, "Scenario config file or bundled scenario name")->required();
  auto* seed_opt = run->add_option("--seed", seed, "Override every scenario's RNG seed");
  auto* out_opt = run->add_option("--out-dir", out_dir,
                                  "Output root (default out; RYDCRIT_OUT_DIR when not given)");
  run->add_flag("--parallel", parallel, "Run independent scenarios concurrently");

  auto* list = app.add_subcommand("list", "List bundled scenarios");

  auto* plot = app.add_subcommand("plot", "Render a CSV as an SVG line chart");
  std::string csv_path, svg_path, title, x;
  std::vector<std::string> ys;
  plot->add_option("csv", csv_path, "Input CSV")->required();
  plot->add_option("-o,--output", svg_path, "Output SVG")->required();
  plot->add_option("--title", title, "Chart title");
  plot->add_option("--x", x, "Column for the x axis (default: first)");
  plot->add_option("--y", ys, "Columns to draw (default: all others)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  if (*run)
    return cmd_run(configs, out_dir, out_opt->count() > 0,
                   seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt, parallel);
  if (*list) return cmd_list();
  if (*plot) return cmd_plot(csv_path, svg_path, title, x, ys);
  return kValidation;
}
