// porosplit: fixed-stress Biot benchmark driver.

#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "porosplit/bench.hpp"
#include "porosplit/error.hpp"
#include "porosplit/scenario.hpp"

namespace {

constexpr int kUsageError = 2;

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("porosplit");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  // POROSPLIT_LOG uses the SPDLOG_LEVEL syntax, e.g. "debug" or "warn".
  if (const char* level = std::getenv("POROSPLIT_LOG")) spdlog::cfg::helpers::load_levels(level);
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Fixed-stress splitting for Biot poroelasticity: solves, tuning sweeps and convergence studies."};
  app.footer("Scenario file format (--config):\n\n" + porosplit::scenario_schema() +
             "\nEnvironment: POROSPLIT_LOG=trace|debug|info|warn|error|off\n"
             "Exit codes: 0 success, 1 a run did not converge, 2 usage or input error.");
  app.require_subcommand(1);

  std::string config;
  std::string out = "out";
  int jobs = 0;
  std::vector<double> omegas;

  auto* solve = app.add_subcommand("solve", "Run one scenario; writes report.csv, snapshots.csv and fields_<t>.svg");
  std::vector<double> plot_times;
  solve->add_option("--config", config, "Scenario file")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "Output directory")->capture_default_str();
  solve->add_option("--plot-times", plot_times, "Times to plot (default: quarter points)");

  auto* sweep = app.add_subcommand("sweep-omega", "Iteration counts over omega = L / L_opt; writes sweep.csv");
  sweep->add_option("--config", config, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "Output directory")->capture_default_str();
  sweep->add_option("--omega", omegas, "Omega values")->required()->delimiter(',');
  sweep->add_option("--jobs", jobs, "Parallel runs (0: all cores)")->check(CLI::NonNegativeNumber);

  auto* study = app.add_subcommand("study", "Iteration counts along one parameter axis; writes study.csv");
  std::string axis;
  std::vector<std::string> values;
  study->add_option("--config", config, "Scenario file")->required()->check(CLI::ExistingFile);
  study->add_option("--out", out, "Output directory")->capture_default_str();
  study->add_option("--vary", axis, "mesh-level | time-step | space-degree | time-scheme")
      ->required()
      ->check(CLI::IsMember({"mesh-level", "time-step", "space-degree", "time-scheme"}));
  study->add_option("--values", values, "Axis values, e.g. 1,2,3 or dG0,cGP1")->required()->delimiter(',');
  study->add_option("--omega", omegas, "Omega values (default: the scenario's tuning)")->delimiter(',');
  study->add_option("--jobs", jobs, "Parallel runs (0: all cores)")->check(CLI::NonNegativeNumber);

  auto* mms = app.add_subcommand("mms", "Manufactured-solution convergence rates; writes rates.csv");
  std::string scheme = "dG1";
  porosplit::MmsOptions mms_options;
  mms->add_option("--scheme", scheme, "Time scheme, e.g. dG0, dG1, cGP1, cGP2")->capture_default_str();
  mms->add_option("--space-degree", mms_options.space_degree, "Flow degree s")
      ->capture_default_str()
      ->check(CLI::Range(0, 3));
  mms->add_option("--refinements", mms_options.refinements, "Halvings after the coarsest level")
      ->capture_default_str()
      ->check(CLI::Range(1, 6));
  mms->add_option("--out", out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*solve) return porosplit::cmd_solve(config, out, {plot_times});
    if (*sweep) return porosplit::cmd_sweep_omega(config, omegas, out, jobs);
    if (*study) {
      return porosplit::cmd_study(config, porosplit::parse_study_axis(axis), values, omegas, out, jobs);
    }
    std::tie(mms_options.scheme, mms_options.time_degree) = porosplit::parse_scheme_label(scheme);
    return porosplit::cmd_mms(mms_options, out);
  } catch (const porosplit::Error& e) {
    spdlog::error("{}", e.what());
    return e.kind() == porosplit::ErrorKind::Divergence ? 1 : kUsageError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kUsageError;
  }
}
