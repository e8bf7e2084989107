#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "porosplit/error.hpp"
#include "porosplit/format.hpp"
#include "porosplit/scenario.hpp"

using namespace porosplit;

namespace {

ScenarioConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_scenario(is);
}

std::string dump(const ScenarioConfig& c) {
  std::ostringstream os;
  write_scenario(os, c);
  return os.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no exception";
  return ErrorKind::Io;
}

}  // namespace

TEST(Material, TuningAndContraction) {
  MaterialParams m;
  m.biot_modulus = 100.0;
  m.biot_coefficient = 100.0;
  m.lambda = 86.0;
  EXPECT_DOUBLE_EQ(optimal_tuning(m), 1e4 / 172.0);
  EXPECT_DOUBLE_EQ(contraction_factor(m, 0.01), 0.5);
  m.lambda = 0.0;
  EXPECT_EQ(kind_of([&] { m.validate(); }), ErrorKind::InvalidMaterial);
}

TEST(Material, LameFromEngineering) {
  const LameParameters l = lame_from_engineering(100.0, 0.35);
  EXPECT_NEAR(l.mu, 100.0 / 2.7, 1e-12);
  EXPECT_NEAR(l.lambda, 35.0 / (1.35 * 0.3), 1e-12);
  EXPECT_EQ(kind_of([] { lame_from_engineering(1.0, 0.5); }), ErrorKind::InvalidMaterial);
  EXPECT_EQ(kind_of([] { lame_from_engineering(-1.0, 0.3); }), ErrorKind::InvalidMaterial);
}

TEST(Scenario, BenchmarkTractionProfile) {
  EXPECT_DOUBLE_EQ(benchmark_traction(0.0), 0.0);
  EXPECT_DOUBLE_EQ(benchmark_traction(0.5), 0.0);
  EXPECT_NEAR(benchmark_traction(0.25), -2560.0 * std::pow(0.25, 4), 1e-12);
  EXPECT_LT(benchmark_traction(0.1), 0.0);  // compressive
}

TEST(Scenario, BenchmarkDefaults) {
  const ScenarioConfig c = benchmark_scenario(2, 0.01, TimeScheme::Discontinuous, 0, 0, 1.0);
  EXPECT_EQ(c.num_slabs(), 50);
  EXPECT_NEAR(c.tuning_parameter(), 1e4 / (2.0 * c.material.lambda), 1e-12);
  EXPECT_EQ(c.boundary, benchmark_boundary());
  EXPECT_EQ(c.mesh.build().num_cells(), 48u);
  const auto traction = c.traction();
  const auto g = traction({0.3, 1.0}, 0.25);
  EXPECT_DOUBLE_EQ(g[0], 0.0);
  EXPECT_DOUBLE_EQ(g[1], benchmark_traction(0.25));
}

TEST(Scenario, GoldenBenchmarkDump) {
  const ScenarioConfig c = benchmark_scenario(1, 0.01, TimeScheme::Discontinuous, 0, 0, 1.0);
  EXPECT_EQ(dump(c), slurp(POROSPLIT_SOURCE_DIR "/tests/data/benchmark_m1_dg0.ini"));
}

TEST(Scenario, RoundTripIsStable) {
  for (const char* name : {"lshape_dg0", "lshape_dg1", "lshape_cgp1", "lshape_cgp2"}) {
    const ScenarioConfig a = read_scenario(std::string(POROSPLIT_SOURCE_DIR "/configs/") + name + ".ini");
    const std::string first = dump(a);
    EXPECT_EQ(dump(parse(first)), first) << name;
  }
  // the E/nu form resolves to the same Lame pair as the benchmark
  const ScenarioConfig file = read_scenario(POROSPLIT_SOURCE_DIR "/configs/lshape_dg0.ini");
  const ScenarioConfig ref = benchmark_scenario(1, 0.01, TimeScheme::Discontinuous, 0, 0, 1.0);
  EXPECT_NEAR(file.material.mu, ref.material.mu, 1e-12);
  EXPECT_NEAR(file.material.lambda, ref.material.lambda, 1e-12);
}

TEST(Scenario, RectangleConfig) {
  const ScenarioConfig c = parse(R"(
# comment
[mesh]
kind = rectangle
nx = 3
ny = 2
top = TractionTop
[material]
M = 2
lambda = 3
[time]
T = 1
tau = 0.25
scheme = cGP
degree = 2
[boundary.TractionTop]
flow = open
traction = true
[boundary.Default]
fix_x = true
fix_y = true
[solver]
L = 0.5
)");
  EXPECT_EQ(c.mesh.kind, MeshKind::Rectangle);
  EXPECT_EQ(c.mesh.build().num_cells(), 6u);
  EXPECT_EQ(c.scheme, TimeScheme::Continuous);
  EXPECT_EQ(c.time_degree, 2);
  EXPECT_EQ(c.num_slabs(), 4);
  EXPECT_DOUBLE_EQ(c.tuning_parameter(), 0.5);
  EXPECT_EQ(c.boundary.at(tags::kTractionTop).flow, FlowCondition::Open);
  EXPECT_TRUE(c.boundary.at(tags::kDefault).fixed[1]);
}

TEST(Scenario, ConfigErrors) {
  EXPECT_EQ(kind_of([] { parse("[mesh]\nlevle = 2\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse("[meshes]\nlevel = 2\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse("level = 2\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse("[time]\ntau = fast\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse("[time]\nscheme = rk4\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse("[material]\nmu = 1\nE = 2\nnu = 0.3\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse("[material]\nE = 2\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse("[solver]\nomega = 1\nL = 2\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse("[time]\nT = 0.5\ntau = 0.3\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse("[time]\nscheme = cGP\ndegree = 0\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { read_scenario("/nonexistent/scenario.ini"); }), ErrorKind::Io);
}

TEST(Scenario, ValidateInvariants) {
  ScenarioConfig c = benchmark_scenario(1, 0.01, TimeScheme::Discontinuous, 0, 0, 1.0);
  c.validate();
  c.time_step = 0.03;
  EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::InvalidInput);
  c.time_step = 0.01;
  c.scheme = TimeScheme::Continuous;
  EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::InvalidOrder);
  c.scheme = TimeScheme::Discontinuous;
  c.tuning.value = 0.0;
  EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::InvalidInput);
}

TEST(Scenario, SchemeLabels) {
  EXPECT_EQ(scheme_label(TimeScheme::Continuous, 1), "cGP(1)");
  EXPECT_EQ(scheme_label(TimeScheme::Discontinuous, 0), "dG(0)");
  EXPECT_EQ(parse_scheme_label("dG0"), std::make_pair(TimeScheme::Discontinuous, 0));
  EXPECT_EQ(parse_scheme_label("dG(1)"), std::make_pair(TimeScheme::Discontinuous, 1));
  EXPECT_EQ(parse_scheme_label("cGP2"), std::make_pair(TimeScheme::Continuous, 2));
  EXPECT_THROW(parse_scheme_label("CN"), Error);
}

TEST(Format, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 86.41975308641973}) {
    EXPECT_EQ(parse_double(format_double(v), "v"), v);
  }
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(0.01), "0.01");
  EXPECT_EQ(parse_int("42", "n"), 42);
  EXPECT_THROW(parse_int("4.2", "n"), Error);
  EXPECT_THROW(parse_double("1.0x", "v"), Error);
  EXPECT_TRUE(parse_bool("true", "b"));
  EXPECT_FALSE(parse_bool("false", "b"));
  EXPECT_THROW(parse_bool("yes please", "b"), Error);
}
