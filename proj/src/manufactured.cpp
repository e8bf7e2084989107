#include "porosplit/manufactured.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "porosplit/error.hpp"

namespace porosplit {

namespace {

constexpr double kPi = std::numbers::pi;

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

double order(double coarse, double fine, double ratio) {
  if (!(coarse > 0.0) || !(fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log(coarse / fine) / std::log(ratio);
}

FieldErrors orders_between(const FieldErrors& coarse, const FieldErrors& fine, double ratio) {
  return {order(coarse.p, fine.p, ratio), order(coarse.q, fine.q, ratio), order(coarse.u, fine.u, ratio)};
}

FieldErrors nan_errors() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {nan, nan, nan};
}

}  // namespace

double Factor1D::value(double x) const {
  switch (kind) {
    case Kind::Monomial:
      return ipow(x, k);
    case Kind::Sin:
      return std::sin(k * kPi * x);
    case Kind::Cos:
      return std::cos(k * kPi * x);
  }
  return 0.0;
}

double Factor1D::d1(double x) const {
  switch (kind) {
    case Kind::Monomial:
      return k == 0 ? 0.0 : k * ipow(x, k - 1);
    case Kind::Sin:
      return k * kPi * std::cos(k * kPi * x);
    case Kind::Cos:
      return -k * kPi * std::sin(k * kPi * x);
  }
  return 0.0;
}

double Factor1D::d2(double x) const {
  switch (kind) {
    case Kind::Monomial:
      return k < 2 ? 0.0 : k * (k - 1) * ipow(x, k - 2);
    case Kind::Sin:
    case Kind::Cos:
      return -(k * kPi) * (k * kPi) * value(x);
  }
  return 0.0;
}

double ScalarShape::value(const Point2& p) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.coefficient * t.x.value(p.x) * t.y.value(p.y);
  return v;
}

std::array<double, 2> ScalarShape::gradient(const Point2& p) const {
  std::array<double, 2> g{0.0, 0.0};
  for (const auto& t : terms_) {
    g[0] += t.coefficient * t.x.d1(p.x) * t.y.value(p.y);
    g[1] += t.coefficient * t.x.value(p.x) * t.y.d1(p.y);
  }
  return g;
}

std::array<double, 3> ScalarShape::hessian(const Point2& p) const {
  std::array<double, 3> h{0.0, 0.0, 0.0};
  for (const auto& t : terms_) {
    h[0] += t.coefficient * t.x.d2(p.x) * t.y.value(p.y);
    h[1] += t.coefficient * t.x.d1(p.x) * t.y.d1(p.y);
    h[2] += t.coefficient * t.x.value(p.x) * t.y.d2(p.y);
  }
  return h;
}

double TimeProfile::value(double t) const {
  double v = 0.0;
  for (std::size_t k = 0; k < coefficients.size(); ++k) v += coefficients[k] * ipow(t, static_cast<int>(k));
  return v;
}

double TimeProfile::derivative(double t) const {
  double v = 0.0;
  for (std::size_t k = 1; k < coefficients.size(); ++k) v += k * coefficients[k] * ipow(t, static_cast<int>(k) - 1);
  return v;
}

ScalarField ManufacturedSolution::exact_pressure() const {
  return [g = pressure, th = profile](const Point2& x, double t) { return th.value(t) * g.value(x); };
}

VectorField ManufacturedSolution::exact_flux(const MaterialParams& material) const {
  const Eigen::Matrix2d k = material.permeability;
  return [g = pressure, th = profile, k](const Point2& x, double t) {
    const auto grad = g.gradient(x);
    const double s = -th.value(t);
    return std::array<double, 2>{s * (k(0, 0) * grad[0] + k(0, 1) * grad[1]),
                                 s * (k(1, 0) * grad[0] + k(1, 1) * grad[1])};
  };
}

VectorField ManufacturedSolution::exact_displacement() const {
  return [w = displacement, th = profile](const Point2& x, double t) {
    const double s = th.value(t);
    return std::array<double, 2>{s * w[0].value(x), s * w[1].value(x)};
  };
}

ScenarioConfig ManufacturedSolution::scenario(const MaterialParams& material, int cells_per_side, double end_time,
                                              double time_step, TimeScheme scheme, int time_degree,
                                              int space_degree) const {
  ScenarioConfig c;
  c.mesh.kind = MeshKind::Rectangle;
  c.mesh.nx = c.mesh.ny = cells_per_side;
  c.material = material;
  c.end_time = end_time;
  c.time_step = time_step;
  c.scheme = scheme;
  c.time_degree = time_degree;
  c.space_degree = space_degree;
  c.boundary[tags::kDefault] = {FlowCondition::Open, {true, true}, false};
  c.mode = SolveMode::Monolithic;
  c.tolerances.flow = 1e-12;
  c.tolerances.mechanics = 1e-12;

  const double m_inv = 1.0 / material.biot_modulus;
  const double b = material.biot_coefficient;
  const double mu = material.mu;
  const double lambda = material.lambda;
  const Eigen::Matrix2d k = material.permeability;
  const ScalarShape g = pressure;
  const std::array<ScalarShape, 2> w = displacement;
  const TimeProfile th = profile;

  c.loads.source_fn = [=](const Point2& x, double t) {
    const auto h = g.hessian(x);
    const double div_w = w[0].gradient(x)[0] + w[1].gradient(x)[1];
    const double div_kgrad = k(0, 0) * h[0] + 2.0 * k(0, 1) * h[1] + k(1, 1) * h[2];
    return th.derivative(t) * (m_inv * g.value(x) + b * div_w) - th.value(t) * div_kgrad;
  };
  c.loads.body_force_fn = [=](const Point2& x, double t) {
    const auto h0 = w[0].hessian(x);
    const auto h1 = w[1].hessian(x);
    const auto gp = g.gradient(x);
    // -div(2 mu eps(w) + lambda div w I) + b grad g
    const double fx = -mu * (h0[0] + h0[2]) - (mu + lambda) * (h0[0] + h1[1]) + b * gp[0];
    const double fy = -mu * (h1[0] + h1[2]) - (mu + lambda) * (h0[1] + h1[2]) + b * gp[1];
    const double s = th.value(t);
    return std::array<double, 2>{s * fx, s * fy};
  };
  c.loads.boundary_pressure_fn = exact_pressure();
  return c;
}

ManufacturedSolution smooth_solution(TimeProfile profile) {
  using K = Factor1D::Kind;
  ManufacturedSolution m;
  m.pressure = ScalarShape({{1.0, {K::Cos, 1}, {K::Cos, 1}}, {0.5, {K::Sin, 1}, {K::Monomial, 1}}});
  m.displacement = {ScalarShape({{1.0, {K::Sin, 1}, {K::Sin, 1}}}), ScalarShape({{0.5, {K::Sin, 1}, {K::Sin, 2}}})};
  m.profile = std::move(profile);
  return m;
}

ManufacturedSolution polynomial_solution(int space_degree, TimeProfile profile) {
  using K = Factor1D::Kind;
  ManufacturedSolution m;
  m.profile = std::move(profile);
  if (space_degree == 0) {
    m.pressure = ScalarShape({{1.0, {K::Monomial, 0}, {K::Monomial, 0}}});
    return m;
  }
  m.pressure = ScalarShape({{1.0, {K::Monomial, 0}, {K::Monomial, 0}},
                            {1.0, {K::Monomial, 1}, {K::Monomial, 0}},
                            {2.0, {K::Monomial, 0}, {K::Monomial, 1}},
                            {3.0, {K::Monomial, 1}, {K::Monomial, 1}}});
  // x(1-x) y(1-y), a Q2 bubble.
  auto bubble = [](double scale) {
    return ScalarShape({{scale, {K::Monomial, 1}, {K::Monomial, 1}},
                        {-scale, {K::Monomial, 2}, {K::Monomial, 1}},
                        {-scale, {K::Monomial, 1}, {K::Monomial, 2}},
                        {scale, {K::Monomial, 2}, {K::Monomial, 2}}});
  };
  m.displacement = {bubble(1.0), bubble(-2.0)};
  return m;
}

MaterialParams manufactured_material() {
  MaterialParams m;
  m.biot_modulus = 1.0;
  m.biot_coefficient = 1.0;
  m.mu = 1.0;
  m.lambda = 1.0;
  m.permeability << 1.0, 0.25, 0.25, 0.5;
  return m;
}

FieldErrors snapshot_errors(const BiotSolver& solver, const FieldSnapshot& snapshot,
                            const ManufacturedSolution& exact) {
  const Spaces& spaces = solver.spaces();
  const Mesh& mesh = solver.mesh();
  const auto p = exact.exact_pressure();
  const auto q = exact.exact_flux(solver.config().material);
  const auto u = exact.exact_displacement();
  const double t = snapshot.time;
  const auto rule = tensor_gauss(spaces.displacement.degree() + 3);
  FieldErrors sq;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    for (const auto& pt : rule.points) {
      const auto map = mesh.map(c, pt.xi, pt.eta);
      const double w = pt.weight * map.det;
      const double ep = evaluate_pressure(spaces.pressure, snapshot.p, c, pt.xi, pt.eta) - p(map.x, t);
      const auto qh = evaluate_flux(spaces.flux, snapshot.q, c, pt.xi, pt.eta);
      const auto qe = q(map.x, t);
      const auto uh = evaluate_displacement(spaces.displacement, snapshot.u, c, pt.xi, pt.eta);
      const auto ue = u(map.x, t);
      sq.p += w * ep * ep;
      sq.q += w * ((qh[0] - qe[0]) * (qh[0] - qe[0]) + (qh[1] - qe[1]) * (qh[1] - qe[1]));
      sq.u += w * ((uh[0] - ue[0]) * (uh[0] - ue[0]) + (uh[1] - ue[1]) * (uh[1] - ue[1]));
    }
  }
  return {std::sqrt(sq.p), std::sqrt(sq.q), std::sqrt(sq.u)};
}

namespace {

FieldErrors final_errors(const ScenarioConfig& config, const ManufacturedSolution& exact) {
  const BiotSolver solver(config);
  const RunResult result = solver.run(config.mode);
  return snapshot_errors(solver, result.snapshots.back(), exact);
}

void validate_options(const MmsOptions& o) {
  if (o.space_degree < 0) throw Error(ErrorKind::InvalidOrder, "space degree must be >= 0");
  if (o.time_degree < 0 || (o.scheme == TimeScheme::Continuous && o.time_degree < 1)) {
    throw Error(ErrorKind::InvalidOrder, "invalid time degree");
  }
  if (o.refinements < 1) throw Error(ErrorKind::InvalidInput, "need at least one refinement");
}

}  // namespace

std::vector<RateRow> run_space_study(const MmsOptions& o) {
  validate_options(o);
  const ManufacturedSolution exact = smooth_solution(TimeProfile{{0.0, 1.0}});
  const MaterialParams material = manufactured_material();
  std::vector<RateRow> rows;
  for (int k = 0; k <= o.refinements; ++k) {
    const int n = 2 << k;
    const double h = 1.0 / n;
    // theta(t) = t is reproduced exactly in time for r >= 1; dG(0) gets a
    // step shrinking like the displacement error so it does not dominate.
    const double end = 0.25;
    const double tau = o.time_degree >= 1 ? end : end / std::pow(2.0, (o.space_degree + 2) * k);
    RateRow row{"space", h, tau, final_errors(exact.scenario(material, n, end, tau, o.scheme, o.time_degree,
                                                             o.space_degree),
                                              exact),
                nan_errors()};
    if (!rows.empty()) row.orders = orders_between(rows.back().errors, row.errors, 2.0);
    rows.push_back(row);
  }
  return rows;
}

std::vector<RateRow> run_time_study(const MmsOptions& o) {
  validate_options(o);
  TimeProfile profile;
  profile.coefficients.assign(o.time_degree + 4, 1.0);
  profile.coefficients[0] = 0.0;
  const ManufacturedSolution exact = polynomial_solution(o.space_degree, profile);
  const MaterialParams material = manufactured_material();
  std::vector<RateRow> rows;
  for (int k = 0; k <= o.refinements; ++k) {
    const double tau = 1.0 / (4 << k);
    RateRow row{"time", 0.5, tau,
                final_errors(exact.scenario(material, 2, 1.0, tau, o.scheme, o.time_degree, o.space_degree), exact),
                nan_errors()};
    if (!rows.empty()) row.orders = orders_between(rows.back().errors, row.errors, 2.0);
    rows.push_back(row);
  }
  return rows;
}

RateRow run_exactness_check(const MmsOptions& o) {
  validate_options(o);
  if (o.time_degree < 1) {
    throw Error(ErrorKind::InvalidOrder, "exactness needs time degree >= 1 (zero initial data and theta(t) = t)");
  }
  const ManufacturedSolution exact = polynomial_solution(o.space_degree, TimeProfile{{0.0, 1.0}});
  const ScenarioConfig config =
      exact.scenario(manufactured_material(), 3, 0.5, 0.25, o.scheme, o.time_degree, o.space_degree);
  return RateRow{"exactness", 1.0 / 3.0, 0.25, final_errors(config, exact), nan_errors()};
}

}  // namespace porosplit
