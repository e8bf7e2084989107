#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "porosplit/bench.hpp"
#include "porosplit/error.hpp"
#include "porosplit/svg.hpp"

using namespace porosplit;
namespace fs = std::filesystem;

namespace {

const std::string kConfig = POROSPLIT_SOURCE_DIR "/configs/lshape_dg0.ini";

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("porosplit_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string first_line(const fs::path& file) {
  std::ifstream in(file);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST(Sweep, RowsSortedAndDivergenceRecorded) {
  const ScenarioConfig base = benchmark_scenario(1, 0.01, TimeScheme::Discontinuous, 0, 0, 1.0);
  const auto rows = sweep_omega(base, {2.0, 0.25, 1.0}, 3);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].omega, 0.25);
  EXPECT_FALSE(rows[0].converged);
  EXPECT_GT(rows[0].total_iterations, 0);
  EXPECT_EQ(rows[1].omega, 1.0);
  EXPECT_TRUE(rows[1].converged);
  EXPECT_EQ(rows[1].total_iterations, 844);
  EXPECT_NEAR(rows[2].tuning, 2.0 * optimal_tuning(base.material), 1e-12);
  // thread count does not change results
  const auto serial = sweep_omega(base, {2.0, 0.25, 1.0}, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(serial[i].total_iterations, rows[i].total_iterations);
}

TEST(Study, AxisValues) {
  const ScenarioConfig base = benchmark_scenario(1, 0.01, TimeScheme::Discontinuous, 0, 0, 1.0);
  EXPECT_EQ(apply_study_value(base, StudyAxis::MeshLevel, "3").mesh.level, 3);
  EXPECT_EQ(apply_study_value(base, StudyAxis::TimeStep, "0.05").num_slabs(), 10);
  EXPECT_EQ(apply_study_value(base, StudyAxis::SpaceDegree, "2").space_degree, 2);
  const ScenarioConfig cgp = apply_study_value(base, StudyAxis::TimeScheme, "cGP2");
  EXPECT_EQ(cgp.scheme, TimeScheme::Continuous);
  EXPECT_EQ(cgp.time_degree, 2);
  EXPECT_THROW(apply_study_value(base, StudyAxis::TimeStep, "0.3"), Error);
  EXPECT_THROW(apply_study_value(base, StudyAxis::MeshLevel, "two"), Error);
  EXPECT_EQ(parse_study_axis("time-step"), StudyAxis::TimeStep);
  EXPECT_EQ(to_string(StudyAxis::SpaceDegree), "space-degree");
  EXPECT_THROW(parse_study_axis("level"), Error);

  const auto rows = run_study(base, StudyAxis::TimeStep, {"0.05", "0.1"}, {1.0, 2.0}, 2);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].value, "0.05");
  EXPECT_EQ(rows[1].sweep.omega, 2.0);
  std::ostringstream os;
  write_study_csv(os, StudyAxis::TimeStep, rows);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "axis,value,omega,L,total_iters,max_slab_iters,converged");
  EXPECT_NE(os.str().find("\ntime-step,0.1,2,"), std::string::npos);
}

TEST(Csv, SweepAndRatesFormat) {
  std::ostringstream sweep;
  write_sweep_csv(sweep, {{1.5, 3.0, 120, 7, true}});
  EXPECT_EQ(sweep.str(), "omega,L,total_iters,max_slab_iters,converged\n1.5,3,120,7,true\n");
  std::ostringstream rates;
  RateRow row{"time", 0.5, 0.25, {1e-3, 2e-3, 4e-3}, {std::nan(""), 2.0, 1.0}};
  write_rates_csv(rates, {row});
  EXPECT_EQ(rates.str(),
            "study,h,tau,err_p,err_q,err_u,order_p,order_q,order_u\ntime,0.5,0.25,0.001,0.002,0.004,,2,1\n");
}

TEST(Commands, SolveWritesAllOutputs) {
  const fs::path out = scratch_dir("solve");
  ASSERT_EQ(cmd_solve(kConfig, out, {{0.25, 0.5}}), 0);
  EXPECT_EQ(first_line(out / "report.csv"), "slab,iterations,increment_p,increment_q,increment_u,termination");
  EXPECT_EQ(first_line(out / "snapshots.csv"), "time,p_l2,q_l2,u_l2,p_max,u_max");
  EXPECT_TRUE(fs::exists(out / "fields_0.25.svg"));
  EXPECT_TRUE(fs::exists(out / "fields_0.5.svg"));
  EXPECT_EQ(first_line(out / "fields_0.25.svg").rfind("<svg", 0), 0u);
  // the echoed scenario reads back to the same run
  const ScenarioConfig echo = read_scenario((out / "scenario.ini").string());
  EXPECT_EQ(echo.num_slabs(), 50);
  fs::remove_all(out);
}

TEST(Commands, FailuresLeaveNoOutput) {
  const fs::path out = scratch_dir("fail");
  EXPECT_THROW(cmd_solve("/nonexistent.ini", out), Error);
  EXPECT_THROW(cmd_solve(kConfig, out, {{0.75}}), Error);
  EXPECT_THROW(cmd_sweep_omega(kConfig, {}, out, 1), Error);
  EXPECT_FALSE(fs::exists(out));

  // divergence: exit code 1 and no files
  const fs::path cfg = fs::temp_directory_path() / "porosplit_test_diverge.ini";
  {
    std::ofstream os(cfg);
    ScenarioConfig c = read_scenario(kConfig);
    c.tuning.value = 0.25;
    write_scenario(os, c);
  }
  EXPECT_EQ(cmd_solve(cfg.string(), out), 1);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_EQ(cmd_sweep_omega(cfg.string(), {0.25, 1.0}, out, 2), 1);
  EXPECT_TRUE(fs::exists(out / "sweep.csv"));
  fs::remove_all(out);
  fs::remove(cfg);
}

TEST(Svg, PanelsNeedOneValuePerCell) {
  const Mesh mesh = build_lshape_mesh(1);
  std::ostringstream os;
  write_field_svg(os, mesh, {{"p", std::vector<double>(mesh.num_cells(), 1.0)}}, "constant");
  EXPECT_NE(os.str().find("</svg>"), std::string::npos);
  EXPECT_THROW(write_field_svg(os, mesh, {{"p", {1.0}}}, ""), Error);
}

TEST(Peaks, NodalMaxima) {
  Eigen::VectorXd u(4);
  u << 3.0, 4.0, -1.0, 0.0;
  EXPECT_DOUBLE_EQ(peak_displacement(u), 5.0);
  EXPECT_DOUBLE_EQ(peak_pressure(Eigen::Vector3d(1.0, -7.0, 2.0)), 7.0);
}

TEST(Sweep, CsvIsDeterministicAcrossJobCounts) {
  const ScenarioConfig base = benchmark_scenario(1, 0.05, TimeScheme::Continuous, 2, 1, 1.0);
  std::ostringstream a, b;
  write_sweep_csv(a, sweep_omega(base, {1.5, 0.75, 1.0}, 3));
  write_sweep_csv(b, sweep_omega(base, {1.5, 0.75, 1.0}, 1));
  const std::string text = a.str();
  EXPECT_EQ(text, b.str());
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(Commands, SingleOmegaSweepHasOneRow) {
  const fs::path out = scratch_dir("single");
  ASSERT_EQ(cmd_sweep_omega(kConfig, {1.05}, out, 1), 0);
  std::ifstream in(out / "sweep.csv");
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(row.rfind("1.05,", 0), 0u);
  EXPECT_FALSE(std::getline(in, extra));
  fs::remove_all(out);
}
