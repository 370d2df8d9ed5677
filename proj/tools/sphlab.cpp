// sphlab: run a named study from a flat key = value config.
//
//   sphlab run <study> [--config path] [--seed u64] [--out dir] [--format csv|json] [--plot]
//   sphlab list
//
// Exit status: 0 ok, 2 config error, 3 numerical invariant violated, 4 budget exceeded.

#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "sphlab/studies.hpp"
#include "sphlab/svg_plot.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kBudgetExceeded = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilinear spectral-projector estimates on spheres: numerical studies"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a study");
  std::string study;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format;
  bool plot = false;
  run->add_option("study", study, "study name (see `list`)")->required();
  run->add_option("--config", config_path, "flat key = value config file");
  run->add_option("--seed", seed, "seed, overrides the config");
  run->add_option("--out", out_dir, "output directory, overrides the config");
  run->add_option("--format", format, "csv or json, overrides the config")->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--plot", plot, "also write an SVG plot");

  auto* list = app.add_subcommand("list", "list study names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (list->parsed()) {
    for (const auto& name : sphlab::study_names()) std::cout << name << "\n";
    return 0;
  }

  sphlab::ExperimentConfig cfg;
  try {
    cfg = sphlab::default_config(study);
    if (!config_path.empty()) cfg = sphlab::load_config(config_path, cfg);
    if (cfg.study != study) {
      throw sphlab::ConfigError("study", 0, "config names '" + cfg.study + "' but '" + study + "' was requested");
    }
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!format.empty()) cfg.format = format;
    if (plot) cfg.plot = true;
    sphlab::validate(cfg);
  } catch (const sphlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    const sphlab::ReportDocument doc = sphlab::run_study(cfg);
    const auto path = sphlab::write_report(doc, cfg.output_dir, cfg.format);
    std::cout << sphlab::summary(doc) << "wrote " << path.string() << "\n";
    if (cfg.plot) {
      const auto svg = std::filesystem::path(cfg.output_dir) / (cfg.study + ".svg");
      sphlab::write_file(svg, sphlab::plot_svg(doc));
      std::cout << "wrote " << svg.string() << "\n";
    }
    const int status = sphlab::exit_status(doc);
    if (status != 0) std::cerr << "numerical invariant violated; see checks above\n";
    return status;
  } catch (const sphlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const sphlab::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
