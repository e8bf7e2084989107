#include "porosplit/bench.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "porosplit/error.hpp"
#include "porosplit/format.hpp"
#include "porosplit/svg.hpp"

namespace porosplit {

namespace {

// Runs task(i) for i in [0, n) on up to `jobs` threads. The first exception
// is rethrown after all workers stopped.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task) {
  std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs) : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

SweepRow run_row(const ScenarioConfig& config) {
  SweepRow row;
  row.omega = config.tuning.mode == Tuning::Mode::Omega ? config.tuning.value
                                                        : std::numeric_limits<double>::quiet_NaN();
  row.tuning = config.tuning_parameter();
  try {
    const RunResult result = run_simulation(config, SolveMode::Split);
    row.total_iterations = result.total_iterations();
    row.max_slab_iterations = result.max_slab_iterations();
    row.converged = true;
  } catch (const DivergenceError& e) {
    spdlog::warn("L = {}: slab {} {} after {} iterations", row.tuning, e.slab(), to_string(e.report().termination),
                 e.report().iterations);
    row.total_iterations = e.iterations_before() + e.report().iterations;
    row.max_slab_iterations = e.report().iterations;
    row.converged = false;
  }
  return row;
}

ScenarioConfig with_omega(ScenarioConfig config, double omega) {
  config.tuning = Tuning{Tuning::Mode::Omega, omega};
  config.validate();
  return config;
}

std::string optional_double(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  os << content;
  if (!os) throw Error(ErrorKind::Io, "cannot write " + path.string());
}

// Stages every file in memory so that a failure leaves `out` untouched.
class OutputSet {
 public:
  std::ostringstream& file(const std::string& name) { return files_[name]; }

  void commit(const std::filesystem::path& out) const {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + out.string() + ": " + ec.message());
    for (const auto& [name, content] : files_) write_file(out / name, content.str());
  }

 private:
  std::map<std::string, std::ostringstream> files_;
};

}  // namespace

std::vector<SweepRow> sweep_omega(const ScenarioConfig& base, const std::vector<double>& omegas, int jobs) {
  std::vector<ScenarioConfig> configs;
  for (double w : omegas) configs.push_back(with_omega(base, w));
  std::vector<SweepRow> rows(configs.size());
  parallel_for(configs.size(), jobs, [&](std::size_t i) { rows[i] = run_row(configs[i]); });
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.omega < b.omega; });
  return rows;
}

StudyAxis parse_study_axis(const std::string& name) {
  if (name == "mesh-level") return StudyAxis::MeshLevel;
  if (name == "time-step") return StudyAxis::TimeStep;
  if (name == "space-degree") return StudyAxis::SpaceDegree;
  if (name == "time-scheme") return StudyAxis::TimeScheme;
  throw Error(ErrorKind::InvalidInput,
              "unknown study axis '" + name + "' (mesh-level, time-step, space-degree, time-scheme)");
}

std::string_view to_string(StudyAxis axis) {
  switch (axis) {
    case StudyAxis::MeshLevel: return "mesh-level";
    case StudyAxis::TimeStep: return "time-step";
    case StudyAxis::SpaceDegree: return "space-degree";
    case StudyAxis::TimeScheme: return "time-scheme";
  }
  return "?";
}

ScenarioConfig apply_study_value(const ScenarioConfig& base, StudyAxis axis, const std::string& value) {
  ScenarioConfig config = base;
  try {
    switch (axis) {
      case StudyAxis::MeshLevel:
        if (config.mesh.kind != MeshKind::LShape) {
          throw Error(ErrorKind::InvalidInput, "mesh-level studies need an lshape mesh");
        }
        config.mesh.level = parse_int(value, "mesh level");
        break;
      case StudyAxis::TimeStep: config.time_step = parse_double(value, "time step"); break;
      case StudyAxis::SpaceDegree: config.space_degree = parse_int(value, "space degree"); break;
      case StudyAxis::TimeScheme: std::tie(config.scheme, config.time_degree) = parse_scheme_label(value); break;
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidInput) throw;
    throw Error(ErrorKind::InvalidInput, e.message());
  }
  config.validate();
  return config;
}

std::vector<StudyRow> run_study(const ScenarioConfig& base, StudyAxis axis, const std::vector<std::string>& values,
                                const std::vector<double>& omegas, int jobs) {
  std::vector<StudyRow> rows;
  std::vector<ScenarioConfig> configs;
  for (const std::string& v : values) {
    const ScenarioConfig config = apply_study_value(base, axis, v);
    if (omegas.empty()) {
      configs.push_back(config);
      rows.push_back({v, {}});
    }
    for (double w : omegas) {
      configs.push_back(with_omega(config, w));
      rows.push_back({v, {}});
    }
  }
  parallel_for(configs.size(), jobs, [&](std::size_t i) { rows[i].sweep = run_row(configs[i]); });
  return rows;
}

void write_report_csv(std::ostream& os, const RunResult& result) {
  os << "slab,iterations,increment_p,increment_q,increment_u,termination\n";
  for (const IterationReport& r : result.reports) {
    auto last = [](const std::vector<double>& v) { return v.empty() ? std::string() : format_double(v.back()); };
    os << r.slab << ',' << r.iterations << ',' << last(r.increment_p) << ',' << last(r.increment_q) << ','
       << last(r.increment_u) << ',' << to_string(r.termination) << '\n';
  }
}

double peak_pressure(const Eigen::VectorXd& p) { return p.size() == 0 ? 0.0 : p.lpNorm<Eigen::Infinity>(); }

double peak_displacement(const Eigen::VectorXd& u) {
  double peak = 0.0;
  for (Eigen::Index i = 0; i + 1 < u.size(); i += 2) peak = std::max(peak, std::hypot(u[i], u[i + 1]));
  return peak;
}

void write_snapshots_csv(std::ostream& os, const BiotSolver& solver, const RunResult& result) {
  const FieldNormOperators norms(solver.spaces());
  os << "time,p_l2,q_l2,u_l2,p_max,u_max\n";
  for (const FieldSnapshot& s : result.snapshots) {
    os << format_double(s.time) << ',' << format_double(norms.pressure(s.p)) << ','
       << format_double(norms.flux(s.q)) << ',' << format_double(norms.displacement(s.u)) << ','
       << format_double(peak_pressure(s.p)) << ',' << format_double(peak_displacement(s.u)) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "omega,L,total_iters,max_slab_iters,converged\n";
  for (const SweepRow& r : rows) {
    os << optional_double(r.omega) << ',' << format_double(r.tuning) << ',' << r.total_iterations << ','
       << r.max_slab_iterations << ',' << (r.converged ? "true" : "false") << '\n';
  }
}

void write_study_csv(std::ostream& os, StudyAxis axis, const std::vector<StudyRow>& rows) {
  os << "axis,value,omega,L,total_iters,max_slab_iters,converged\n";
  for (const StudyRow& r : rows) {
    os << to_string(axis) << ',' << r.value << ',' << optional_double(r.sweep.omega) << ','
       << format_double(r.sweep.tuning) << ',' << r.sweep.total_iterations << ',' << r.sweep.max_slab_iterations
       << ',' << (r.sweep.converged ? "true" : "false") << '\n';
  }
}

void write_rates_csv(std::ostream& os, const std::vector<RateRow>& rows) {
  os << "study,h,tau,err_p,err_q,err_u,order_p,order_q,order_u\n";
  for (const RateRow& r : rows) {
    os << r.study << ',' << format_double(r.h) << ',' << format_double(r.tau) << ',' << format_double(r.errors.p)
       << ',' << format_double(r.errors.q) << ',' << format_double(r.errors.u) << ',' << optional_double(r.orders.p)
       << ',' << optional_double(r.orders.q) << ',' << optional_double(r.orders.u) << '\n';
  }
}

int cmd_solve(const std::string& config_path, const std::filesystem::path& out, const SolveOptions& options) {
  const ScenarioConfig config = read_scenario(config_path);
  std::vector<double> plot_times = options.plot_times;
  if (plot_times.empty()) {
    for (int k = 1; k <= 4; ++k) plot_times.push_back(0.25 * k * config.end_time);
  }
  for (double t : plot_times) {
    if (!(t > 0.0 && t <= config.end_time * (1 + 1e-12))) {
      throw Error(ErrorKind::InvalidInput, "plot time " + format_double(t) + " outside (0, T]");
    }
  }

  const BiotSolver solver(config);
  RunResult result;
  try {
    result = solver.run(config.mode);
  } catch (const DivergenceError& e) {
    spdlog::error("{}", e.what());
    return 1;
  }

  OutputSet files;
  write_scenario(files.file("scenario.ini"), config);
  write_report_csv(files.file("report.csv"), result);
  write_snapshots_csv(files.file("snapshots.csv"), solver, result);
  for (double t : plot_times) {
    const auto nearest = std::min_element(result.snapshots.begin(), result.snapshots.end(),
                                          [t](const FieldSnapshot& a, const FieldSnapshot& b) {
                                            return std::abs(a.time - t) < std::abs(b.time - t);
                                          });
    const std::vector<FieldPanel> panels{
        {"pressure", cell_pressure(solver.spaces().pressure, nearest->p)},
        {"|displacement|", cell_displacement_magnitude(solver.spaces().displacement, nearest->u)}};
    write_field_svg(files.file("fields_" + format_double(nearest->time) + ".svg"), solver.mesh(), panels,
                    "t = " + format_double(nearest->time));
  }
  files.commit(out);
  spdlog::info("{} slabs, {} fixed-stress iterations", result.slabs.size(), result.total_iterations());
  return 0;
}

int cmd_sweep_omega(const std::string& config_path, const std::vector<double>& omegas,
                    const std::filesystem::path& out, int jobs) {
  if (omegas.empty()) throw Error(ErrorKind::InvalidInput, "sweep-omega needs at least one omega");
  const ScenarioConfig config = read_scenario(config_path);
  const std::vector<SweepRow> rows = sweep_omega(config, omegas, jobs);
  OutputSet files;
  write_sweep_csv(files.file("sweep.csv"), rows);
  files.commit(out);
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.converged; }) ? 0 : 1;
}

int cmd_study(const std::string& config_path, StudyAxis axis, const std::vector<std::string>& values,
              const std::vector<double>& omegas, const std::filesystem::path& out, int jobs) {
  if (values.empty()) throw Error(ErrorKind::InvalidInput, "study needs at least one value");
  const ScenarioConfig config = read_scenario(config_path);
  const std::vector<StudyRow> rows = run_study(config, axis, values, omegas, jobs);
  OutputSet files;
  write_study_csv(files.file("study.csv"), axis, rows);
  files.commit(out);
  return std::all_of(rows.begin(), rows.end(), [](const StudyRow& r) { return r.sweep.converged; }) ? 0 : 1;
}

int cmd_mms(const MmsOptions& options, const std::filesystem::path& out) {
  std::vector<RateRow> rows = run_space_study(options);
  const std::vector<RateRow> time_rows = run_time_study(options);
  rows.insert(rows.end(), time_rows.begin(), time_rows.end());
  if (options.time_degree >= 1) rows.push_back(run_exactness_check(options));
  OutputSet files;
  write_rates_csv(files.file("rates.csv"), rows);
  files.commit(out);
  return 0;
}

}  // namespace porosplit
