#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "porosplit/manufactured.hpp"
#include "porosplit/scenario.hpp"
#include "porosplit/solver.hpp"

namespace porosplit {

struct SweepRow {
  double omega = 0.0;
  double tuning = 0.0;  // L
  long total_iterations = 0;
  int max_slab_iterations = 0;
  bool converged = false;
};

/// One full run per omega, up to `jobs` at a time. Divergence of a single
/// run is recorded in its row (iterations counted up to the failure).
/// Rows come back sorted by omega.
std::vector<SweepRow> sweep_omega(const ScenarioConfig& base, const std::vector<double>& omegas, int jobs);

enum class StudyAxis { MeshLevel, TimeStep, SpaceDegree, TimeScheme };
StudyAxis parse_study_axis(const std::string& name);
std::string_view to_string(StudyAxis axis);
/// Copy of `base` with one axis set to `value` (a number, or a scheme label
/// such as "dG1" for the time-scheme axis).
ScenarioConfig apply_study_value(const ScenarioConfig& base, StudyAxis axis, const std::string& value);

struct StudyRow {
  std::string value;
  SweepRow sweep;
};

/// Every (value, omega) pair; an empty omega list keeps each config's own tuning.
std::vector<StudyRow> run_study(const ScenarioConfig& base, StudyAxis axis, const std::vector<std::string>& values,
                                const std::vector<double>& omegas, int jobs);

// CSV writers: header row, fixed column order, shortest round-trip floats.
void write_report_csv(std::ostream& os, const RunResult& result);
void write_snapshots_csv(std::ostream& os, const BiotSolver& solver, const RunResult& result);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_study_csv(std::ostream& os, StudyAxis axis, const std::vector<StudyRow>& rows);
void write_rates_csv(std::ostream& os, const std::vector<RateRow>& rows);

/// Largest |p| over the cells' nodal values and largest nodal |u|.
double peak_pressure(const Eigen::VectorXd& p);
double peak_displacement(const Eigen::VectorXd& u);

// Command drivers. Each validates its inputs before touching `out`, writes
// files only after every run finished, and returns the process exit code:
// 0 success, 1 a run did not converge.

struct SolveOptions {
  /// Snapshot times to plot; the nearest end-of-slab snapshot is used.
  /// Empty: the quarter points of the time interval.
  std::vector<double> plot_times;
};

int cmd_solve(const std::string& config_path, const std::filesystem::path& out, const SolveOptions& options = {});
int cmd_sweep_omega(const std::string& config_path, const std::vector<double>& omegas, const std::filesystem::path& out,
                    int jobs);
int cmd_study(const std::string& config_path, StudyAxis axis, const std::vector<std::string>& values,
              const std::vector<double>& omegas, const std::filesystem::path& out, int jobs);
int cmd_mms(const MmsOptions& options, const std::filesystem::path& out);

}  // namespace porosplit
