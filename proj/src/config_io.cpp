#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "porosplit/error.hpp"
#include "porosplit/format.hpp"
#include "porosplit/scenario.hpp"

namespace porosplit {

namespace pt = boost::property_tree;

namespace {

constexpr const char* kBoundaryPrefix = "boundary.";

/// Key/value view of one section that remembers which keys were read, so
/// leftovers can be reported as unknown.
class Section {
 public:
  Section(std::string name, const pt::ptree& tree) : name_(std::move(name)) {
    for (const auto& [key, child] : tree) {
      if (!child.empty()) throw Error(ErrorKind::InvalidConfig, "[" + name_ + "] " + key + ": nested value");
      values_[key] = child.data();
    }
  }

  std::optional<std::string> take(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    std::string value = it->second;
    values_.erase(it);
    return value;
  }

  std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

  void number(const std::string& key, double& out) {
    if (auto v = take(key)) out = parse_double(*v, where(key));
  }
  void integer(const std::string& key, int& out) {
    if (auto v = take(key)) out = parse_int(*v, where(key));
  }
  void boolean(const std::string& key, bool& out) {
    if (auto v = take(key)) out = parse_bool(*v, where(key));
  }
  void tag(const std::string& key, BoundaryTag& out) {
    if (auto v = take(key)) {
      if (v->empty()) throw Error(ErrorKind::InvalidConfig, where(key) + ": empty tag");
      out = BoundaryTag{*v};
    }
  }

  void finish() const {
    if (!values_.empty()) {
      throw Error(ErrorKind::InvalidConfig, "unknown key " + where(values_.begin()->first));
    }
  }

 private:
  std::string name_;
  std::map<std::string, std::string> values_;
};

template <typename Enum>
Enum choose(const std::string& value, const std::string& where,
            std::initializer_list<std::pair<const char*, Enum>> options) {
  std::string allowed;
  for (const auto& [name, e] : options) {
    if (value == name) return e;
    allowed += allowed.empty() ? name : std::string("|") + name;
  }
  throw Error(ErrorKind::InvalidConfig, where + ": expected " + allowed + ", got '" + value + "'");
}

void read_mesh(Section& s, MeshSpec& mesh) {
  if (auto kind = s.take("kind")) {
    mesh.kind = choose<MeshKind>(*kind, s.where("kind"), {{"lshape", MeshKind::LShape}, {"rectangle", MeshKind::Rectangle}});
  }
  s.integer("level", mesh.level);
  s.number("x0", mesh.extent.x0);
  s.number("x1", mesh.extent.x1);
  s.number("y0", mesh.extent.y0);
  s.number("y1", mesh.extent.y1);
  s.integer("nx", mesh.nx);
  s.integer("ny", mesh.ny);
  s.tag("bottom", mesh.side_tags.bottom);
  s.tag("right", mesh.side_tags.right);
  s.tag("top", mesh.side_tags.top);
  s.tag("left", mesh.side_tags.left);
}

void read_material(Section& s, MaterialParams& m) {
  s.number("M", m.biot_modulus);
  s.number("b", m.biot_coefficient);
  const auto mu = s.take("mu");
  const auto lambda = s.take("lambda");
  const auto e = s.take("E");
  const auto nu = s.take("nu");
  if ((e || nu) && (mu || lambda)) {
    throw Error(ErrorKind::InvalidConfig, "[material] give either mu/lambda or E/nu, not both");
  }
  if (e || nu) {
    if (!e || !nu) throw Error(ErrorKind::InvalidConfig, "[material] E and nu must be given together");
    const LameParameters lame = lame_from_engineering(parse_double(*e, s.where("E")), parse_double(*nu, s.where("nu")));
    m.mu = lame.mu;
    m.lambda = lame.lambda;
  }
  if (mu) m.mu = parse_double(*mu, s.where("mu"));
  if (lambda) m.lambda = parse_double(*lambda, s.where("lambda"));
  s.number("K_xx", m.permeability(0, 0));
  if (auto kxy = s.take("K_xy")) {
    m.permeability(0, 1) = m.permeability(1, 0) = parse_double(*kxy, s.where("K_xy"));
  }
  s.number("K_yy", m.permeability(1, 1));
  s.number("rho_b", m.bulk_density);
}

void read_time(Section& s, ScenarioConfig& c) {
  s.number("T", c.end_time);
  s.number("tau", c.time_step);
  if (auto scheme = s.take("scheme")) {
    c.scheme = choose<TimeScheme>(*scheme, s.where("scheme"),
                                  {{"cGP", TimeScheme::Continuous}, {"dG", TimeScheme::Discontinuous}});
  }
  s.integer("degree", c.time_degree);
}

void read_loads(Section& s, LoadSpec& l) {
  s.number("source", l.source);
  s.number("gravity_x", l.gravity[0]);
  s.number("gravity_y", l.gravity[1]);
  if (auto traction = s.take("traction")) {
    l.traction = choose<TractionProfile>(
        *traction, s.where("traction"),
        {{"zero", TractionProfile::Zero}, {"benchmark", TractionProfile::Benchmark}, {"constant", TractionProfile::Constant}});
  }
  s.number("traction_x", l.traction_value[0]);
  s.number("traction_y", l.traction_value[1]);
  s.number("boundary_pressure", l.boundary_pressure);
}

void read_boundary(Section& s, BoundaryCondition& bc) {
  if (auto flow = s.take("flow")) {
    bc.flow = choose<FlowCondition>(*flow, s.where("flow"), {{"noflow", FlowCondition::NoFlow}, {"open", FlowCondition::Open}});
  }
  s.boolean("fix_x", bc.fixed[0]);
  s.boolean("fix_y", bc.fixed[1]);
  s.boolean("traction", bc.traction);
}

void read_solver(Section& s, ScenarioConfig& c) {
  if (auto mode = s.take("mode")) {
    c.mode = choose<SolveMode>(*mode, s.where("mode"), {{"split", SolveMode::Split}, {"monolithic", SolveMode::Monolithic}});
  }
  const auto omega = s.take("omega");
  const auto l = s.take("L");
  if (omega && l) throw Error(ErrorKind::InvalidConfig, "[solver] give either omega or L, not both");
  if (omega) c.tuning = {Tuning::Mode::Omega, parse_double(*omega, s.where("omega"))};
  if (l) c.tuning = {Tuning::Mode::Explicit, parse_double(*l, s.where("L"))};
  s.number("tol_fixed", c.tolerances.fixed);
  s.number("tol_flow", c.tolerances.flow);
  s.number("tol_mechanics", c.tolerances.mechanics);
  s.integer("max_fixed_iters", c.tolerances.max_fixed_iters);
}

std::string flow_name(FlowCondition f) { return f == FlowCondition::Open ? "open" : "noflow"; }
std::string bool_name(bool b) { return b ? "true" : "false"; }

}  // namespace

ScenarioConfig parse_scenario(std::istream& is) {
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(e.line()) + ": " + e.message());
  }

  ScenarioConfig config;
  config.boundary.clear();
  for (const auto& [name, child] : tree) {
    if (child.empty()) {  // read_ini drops empty sections, so this is a bare key
      throw Error(ErrorKind::InvalidConfig, "key '" + name + "' outside any section");
    }
    Section s(name, child);
    if (name == "mesh") {
      read_mesh(s, config.mesh);
    } else if (name == "material") {
      read_material(s, config.material);
    } else if (name == "time") {
      read_time(s, config);
    } else if (name == "space") {
      s.integer("degree", config.space_degree);
    } else if (name == "loads") {
      read_loads(s, config.loads);
    } else if (name.rfind(kBoundaryPrefix, 0) == 0 && name.size() > std::string(kBoundaryPrefix).size()) {
      read_boundary(s, config.boundary[BoundaryTag{name.substr(std::string(kBoundaryPrefix).size())}]);
    } else if (name == "solver") {
      read_solver(s, config);
    } else {
      throw Error(ErrorKind::InvalidConfig, "unknown section [" + name + "]");
    }
    s.finish();
  }
  try {
    config.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidConfig, e.message());
  }
  return config;
}

ScenarioConfig read_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open scenario file '" + path + "'");
  try {
    return parse_scenario(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.message());
  }
}

void write_scenario(std::ostream& os, const ScenarioConfig& c) {
  const auto num = [](double v) { return format_double(v); };
  os << "[mesh]\n";
  os << "kind = " << (c.mesh.kind == MeshKind::LShape ? "lshape" : "rectangle") << "\n";
  os << "level = " << c.mesh.level << "\n";
  os << "x0 = " << num(c.mesh.extent.x0) << "\n";
  os << "x1 = " << num(c.mesh.extent.x1) << "\n";
  os << "y0 = " << num(c.mesh.extent.y0) << "\n";
  os << "y1 = " << num(c.mesh.extent.y1) << "\n";
  os << "nx = " << c.mesh.nx << "\n";
  os << "ny = " << c.mesh.ny << "\n";
  os << "bottom = " << c.mesh.side_tags.bottom.label << "\n";
  os << "right = " << c.mesh.side_tags.right.label << "\n";
  os << "top = " << c.mesh.side_tags.top.label << "\n";
  os << "left = " << c.mesh.side_tags.left.label << "\n";

  const MaterialParams& m = c.material;
  os << "\n[material]\n";
  os << "M = " << num(m.biot_modulus) << "\n";
  os << "b = " << num(m.biot_coefficient) << "\n";
  os << "mu = " << num(m.mu) << "\n";
  os << "lambda = " << num(m.lambda) << "\n";
  os << "K_xx = " << num(m.permeability(0, 0)) << "\n";
  os << "K_xy = " << num(m.permeability(0, 1)) << "\n";
  os << "K_yy = " << num(m.permeability(1, 1)) << "\n";
  os << "rho_b = " << num(m.bulk_density) << "\n";

  os << "\n[time]\n";
  os << "T = " << num(c.end_time) << "\n";
  os << "tau = " << num(c.time_step) << "\n";
  os << "scheme = " << (c.scheme == TimeScheme::Continuous ? "cGP" : "dG") << "\n";
  os << "degree = " << c.time_degree << "\n";

  os << "\n[space]\n";
  os << "degree = " << c.space_degree << "\n";

  const LoadSpec& l = c.loads;
  os << "\n[loads]\n";
  os << "source = " << num(l.source) << "\n";
  os << "gravity_x = " << num(l.gravity[0]) << "\n";
  os << "gravity_y = " << num(l.gravity[1]) << "\n";
  os << "traction = "
     << (l.traction == TractionProfile::Benchmark ? "benchmark"
         : l.traction == TractionProfile::Constant ? "constant"
                                                   : "zero")
     << "\n";
  os << "traction_x = " << num(l.traction_value[0]) << "\n";
  os << "traction_y = " << num(l.traction_value[1]) << "\n";
  os << "boundary_pressure = " << num(l.boundary_pressure) << "\n";

  for (const auto& [tag, bc] : c.boundary) {
    os << "\n[" << kBoundaryPrefix << tag.label << "]\n";
    os << "flow = " << flow_name(bc.flow) << "\n";
    os << "fix_x = " << bool_name(bc.fixed[0]) << "\n";
    os << "fix_y = " << bool_name(bc.fixed[1]) << "\n";
    os << "traction = " << bool_name(bc.traction) << "\n";
  }

  os << "\n[solver]\n";
  os << "mode = " << (c.mode == SolveMode::Split ? "split" : "monolithic") << "\n";
  if (c.tuning.mode == Tuning::Mode::Omega) {
    os << "omega = " << num(c.tuning.value) << "\n";
  } else {
    os << "L = " << num(c.tuning.value) << "\n";
  }
  os << "tol_fixed = " << num(c.tolerances.fixed) << "\n";
  os << "tol_flow = " << num(c.tolerances.flow) << "\n";
  os << "tol_mechanics = " << num(c.tolerances.mechanics) << "\n";
  os << "max_fixed_iters = " << c.tolerances.max_fixed_iters << "\n";
}

std::string scenario_schema() {
  return R"(Scenario files are INI-style: [section] headers, key = value lines, '#' or ';' comments.
Unknown sections or keys are rejected. Omitted keys keep their defaults.

[mesh]
  kind      lshape | rectangle                 (lshape)
  level     refinement level of the L-shape    (1)
  x0 x1 y0 y1, nx ny                           rectangle extent and cell counts
  bottom right top left                        rectangle side tags (Default)
[material]
  M, b                                         Biot modulus, Biot coefficient
  mu, lambda   or   E, nu                      elasticity
  K_xx K_xy K_yy                               permeability over viscosity
  rho_b                                        bulk density (scales gravity)
[time]
  T, tau                                       end time, uniform step (T/tau integral)
  scheme    dG | cGP
  degree    time degree r (dG: r >= 0, cGP: r >= 1)
[space]
  degree    s: RT_s x Q_s flow, Q_{s+1} displacement
[loads]
  source                                       constant volumetric source f
  gravity_x gravity_y                          body force per unit rho_b
  traction  zero | benchmark | constant        benchmark: (0, -2560 t^2 (t-1/2)^2)
  traction_x traction_y                        value for traction = constant
  boundary_pressure                            pressure on open-flow facets
[boundary.<Tag>]                               one section per boundary tag
  flow      noflow | open                      zero normal flux or prescribed pressure
  fix_x fix_y                                  clamp a displacement component
  traction  true | false                       apply the traction load on this tag
[solver]
  mode      split | monolithic
  omega  or  L                                 L = omega b^2/(2 lambda), or L directly
  tol_fixed tol_flow tol_mechanics max_fixed_iters
)";
}

}  // namespace porosplit
