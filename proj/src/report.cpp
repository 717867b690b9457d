#include "zoll/report.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "zoll/adapted.hpp"
#include "zoll/cohomology.hpp"
#include "zoll/cpn_chart.hpp"
#include "zoll/degree.hpp"
#include "zoll/error.hpp"
#include "zoll/involution.hpp"
#include "zoll/model.hpp"
#include "zoll/pluripotential.hpp"

namespace zoll {

namespace {

using nlohmann::json;

double pick(double requested, double fallback) { return requested > 0.0 ? requested : fallback; }

int pick(int requested, int fallback) { return requested > 0 ? requested : fallback; }

double uniform(std::mt19937_64& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

double signed_height(std::mt19937_64& rng, double lo, double hi) {
  const double t = uniform(rng, lo, hi);
  return uniform(rng, 0.0, 1.0) < 0.5 ? -t : t;
}

json parameters_json(const SuiteOptions& o, int grid) {
  json p = {{"n", o.n}, {"grid", grid}, {"seed", o.seed}};
  p["tol"] = o.tolerance > 0.0 ? json(o.tolerance) : json("default");
  return p;
}

// Cauchy-Riemann residual of the leaf map in a fixed affine chart.
double leaf_cr_residual(const GeodesicFrame& frame, double sigma, double tau) {
  const double h = 1e-4;
  const ProductPoint centre = leaf_map(frame, {sigma, tau});
  const AffineChart chart = chart_for(centre);
  const auto at = [&](double s, double t) { return chart_coordinates(leaf_map(frame, {s, t}), chart); };
  const CVector ds = (at(sigma + h, tau) - at(sigma - h, tau)) / (2.0 * h);
  const CVector dt = (at(sigma, tau + h) - at(sigma, tau - h)) / (2.0 * h);
  return (dt - cd(0.0, 1.0) * ds).norm() / std::max(1.0, ds.norm());
}

}  // namespace

bool Report::passed() const {
  for (const auto& c : checks) {
    if (c.verdict == "fail") return false;
  }
  return true;
}

json Report::to_json() const {
  json out = {{"tool", tool_name},       {"version", tool_version}, {"schema_version", schema_version},
              {"command", command},      {"parameters", parameters}};
  out["checks"] = json::array();
  for (const auto& c : checks) out["checks"].push_back({{"name", c.name}, {"verdict", c.verdict}, {"metrics", c.metrics}});
  out["verdict"] = passed() ? "pass" : "fail";
  return out;
}

CheckResult make_check(const std::string& name, int n, int grid, double tolerance, double max_residual, bool pass) {
  const std::string verdict = pass ? "pass" : "fail";
  return {name, verdict,
          json{{"check", name},
               {"n", n},
               {"grid", grid},
               {"tolerance", tolerance},
               {"max_residual", std::isfinite(max_residual) ? json(max_residual) : json(nullptr)},
               {"verdict", verdict}}};
}

Report verify_model(const SuiteOptions& o) {
  if (o.n < 1 || o.n > 3) throw Error(ErrorCode::InvalidArgument, "verify-model supports 1 <= n <= 3");
  const int grid = pick(o.grid, 20);
  std::mt19937_64 rng(o.seed);
  Report r;
  r.command = "verify-model";
  r.parameters = parameters_json(o, grid);

  {  // u0 = |tau| and N(phi(i tau)) = cosh^2 tau along random leaves
    double worst = 0.0, worst_n = 0.0, worst_rho = 0.0;
    for (int k = 0; k < grid; ++k) {
      const GeodesicFrame f = random_frame(o.n, rng);
      const double sigma = uniform(rng, 0.0, 2.0 * M_PI);
      const double tau = uniform(rng, -5.0, 5.0);
      worst = std::max(worst, std::abs(u0(leaf_map(f, {sigma, tau})) - std::abs(tau)));
      const double c2 = std::cosh(tau) * std::cosh(tau);
      worst_n = std::max(worst_n, std::abs(exhaustion_N(leaf_map(f, {0.0, tau})) - c2) / c2);
      worst_rho = std::max(worst_rho,
                           std::abs(kahler_potential(leaf_map(f, {sigma, tau})) - std::log1p(std::cosh(2.0 * tau))));
    }
    const double tol = pick(o.tolerance, 1e-9);
    r.checks.push_back(make_check("exhaustion_u0", o.n, grid, tol, worst, worst < tol));
    r.checks.push_back(make_check("exhaustion_cosh2", o.n, grid, tol, worst_n, worst_n < tol));
    r.checks.push_back(make_check("kahler_potential_leaf", o.n, grid, tol, worst_rho, worst_rho < tol));
  }
  {  // Levi form of log(2N) is the product Fubini-Study metric
    double worst = 0.0;
    for (int k = 0; k < grid; ++k) {
      const GeodesicFrame f = random_frame(o.n, rng);
      const ProductPoint p = leaf_map(f, {uniform(rng, 0.0, 2.0 * M_PI), signed_height(rng, 0.2, 2.0)});
      const AffineChart chart = chart_for(p);
      const ChartField rho = [&](const CVector& c) { return kahler_potential(point_from_chart(c, chart, o.n)); };
      const CVector c = chart_coordinates(p, chart);
      worst = std::max(worst, (levi_form(rho, c).form - product_fs_metric(c)).cwiseAbs().maxCoeff());
    }
    const double tol = pick(o.tolerance, 1e-5);
    r.checks.push_back(make_check("potential_product_metric", o.n, grid, tol, worst, worst < tol));
  }
  {  // leaf endpoints on D, holomorphy, involution
    double endpoint = 0.0, cr = 0.0, inv = 0.0;
    for (int k = 0; k < grid; ++k) {
      const GeodesicFrame f = random_frame(o.n, rng);
      const double sigma = uniform(rng, 0.0, 2.0 * M_PI);
      endpoint = std::max({endpoint, std::abs(leaf_map(f, {sigma, 40.0}).pairing()),
                           std::abs(leaf_map(f, {sigma, -40.0}).pairing())});
      cr = std::max(cr, leaf_cr_residual(f, sigma, signed_height(rng, 0.1, 3.0)));
      const ProductPoint p = leaf_map(f, {sigma, uniform(rng, -3.0, 3.0)});
      const ProductPoint m = totally_real_embedding(geodesic_point(f, sigma));
      const double twice = involution_N(involution_N(p)).approx_equal(p, 1e-12) ? 0.0 : 1.0;
      const double fixes = involution_N(m).approx_equal(m, 1e-12) ? 0.0 : 1.0;
      const double swaps = involution_N(leaf_infinity(f)).approx_equal(leaf_zero(f), 1e-12) ? 0.0 : 1.0;
      inv = std::max({inv, twice, fixes, swaps});
    }
    r.checks.push_back(make_check("leaf_endpoints_on_divisor", o.n, grid, 1e-12, endpoint, endpoint < 1e-12));
    const double tol = pick(o.tolerance, 1e-6);
    r.checks.push_back(make_check("leaf_holomorphy", o.n, grid, tol, cr, cr < tol));
    r.checks.push_back(make_check("involution_N", o.n, grid, 0.0, inv, inv == 0.0));
  }
  {  // HCMA: rank 2n - 1 and vanishing determinant
    double worst = 0.0;
    int bad_rank = 0;
    for (int k = 0; k < grid; ++k) {
      const GeodesicFrame f = random_frame(o.n, rng);
      const ProductPoint p = leaf_map(f, {uniform(rng, 0.0, 2.0 * M_PI), signed_height(rng, 0.2, 3.0)});
      const HcmaResult h = hcma_check(p);
      worst = std::max(worst, h.residual);
      bad_rank += h.rank != 2 * o.n - 1;
    }
    const double tol = pick(o.tolerance, o.n == 1 ? 1e-4 : 1e-3);
    CheckResult c = make_check("hcma", o.n, grid, tol, worst, worst < tol && bad_rank == 0);
    c.metrics["rank"] = 2 * o.n - 1;
    c.metrics["rank_mismatches"] = bad_rank;
    r.checks.push_back(c);
  }
  {
    const double tol = pick(o.tolerance, 1e-5);
    HarmonicityOptions h;
    h.sigma_points = std::max(10, grid * 5);
    h.tau_points = std::max(5, grid * 5 / 2);
    const double residual = leaf_harmonicity(random_frame(o.n, rng), h);
    r.checks.push_back(make_check("leaf_harmonicity", o.n, h.sigma_points * h.tau_points, tol, residual, residual < tol));
  }
  {  // forward then inverse
    double worst = 0.0, constant_spread = 0.0;
    double constant = 0.0;
    for (int k = 0; k < grid; ++k) {
      const TangentVector v = random_tangent(o.n, uniform(rng, 0.05, 5.0), rng);
      const ProductPoint p = embed_tangent(v);
      const auto back = invert_embedding(p);
      const auto* t = std::get_if<TangentVector>(&back);
      worst = std::max(worst, t ? tangent_distance(*t, v) : Infinite);
      const double c = inverse_length_constant(p);
      if (k == 0) constant = c;
      constant_spread = std::max(constant_spread, std::abs(c - constant));
    }
    const double tol = pick(o.tolerance, 1e-9);
    CheckResult c = make_check("inverse_round_trip", o.n, grid, tol, worst, worst < tol && constant_spread < 1e-9);
    c.metrics["length_constant"] = constant;
    c.metrics["length_constant_spread"] = constant_spread;
    r.checks.push_back(c);
  }
  return r;
}

Report degrees(const SuiteOptions& o) {
  if (o.n < 1 || o.n > 2) throw Error(ErrorCode::InvalidArgument, "degrees supports n in {1, 2}");
  const int grid = pick(o.grid, 64);
  std::mt19937_64 rng(o.seed);
  Report r;
  r.command = "degrees";
  r.parameters = parameters_json(o, grid);
  const GeodesicFrame frame = random_frame(o.n, rng);
  DegreeOptions opt;
  opt.resolution = grid;
  opt.sigma_offset = uniform(rng, 0.0, 2.0 * M_PI);
  const double tol = pick(o.tolerance, degree_tolerance);

  const auto add = [&](const std::string& name, const WeightFactory& weight, int expected) {
    try {
      const DegreeResult d = restricted_degree(weight, frame, opt);
      CheckResult c = make_check(name, o.n, grid, tol, std::abs(d.value - expected),
                                 d.degree == expected && d.rounding_error < tol);
      c.metrics["degree"] = d.degree;
      c.metrics["expected"] = expected;
      c.metrics["value"] = d.value;
      c.metrics["quadrature_error"] = d.quadrature_error;
      r.checks.push_back(c);
    } catch (const Error& e) {
      CheckResult c = make_check(name, o.n, grid, tol, Infinite, false);
      c.metrics["error"] = e.what();
      r.checks.push_back(c);
    }
  };
  add("degree_O_D", divisor_weight(), 2);
  add("degree_anticanonical", anticanonical_weight(), 2 * o.n + 2);
  add("degree_det_normal", normal_determinant_weight(), 2 * o.n);
  add("degree_leaf_tangent", leaf_tangent_weight(), 2);

  const CpnChart chart = CpnChart::adapted_to(frame);
  const auto [x0, v0] = initial_data(chart, frame);
  constexpr int jacobi_steps = 1000;
  const GeodesicPath path = integrate_geodesic(chart.metric_chart(), x0, v0, 2.0 * M_PI, 2.0 * M_PI / jacobi_steps);
  {
    int index = -1;
    std::string error;
    try {
      index = morse_index(path, 2.0 * M_PI);
    } catch (const Error& e) {
      error = e.what();
    }
    CheckResult c = make_check("morse_index", o.n, jacobi_steps, 0.0, std::abs(index - 1), index == 1);
    c.metrics["index"] = index;
    if (!error.empty()) c.metrics["error"] = error;
    r.checks.push_back(c);
  }
  {
    int total = -1;
    std::string error;
    try {
      total = vanishing_order_total(path, 2.0 * M_PI).total;
    } catch (const Error& e) {
      error = e.what();
    }
    CheckResult c = make_check("vanishing_order_total", o.n, jacobi_steps, 0.0, std::abs(total - 2 * o.n), total == 2 * o.n);
    c.metrics["total"] = total;
    c.metrics["expected"] = 2 * o.n;
    if (!error.empty()) c.metrics["error"] = error;
    r.checks.push_back(c);
  }
  return r;
}

Report tube_probe(const TubeProbeRequest& q) {
  BlockModel model;
  double expected = Infinite;
  if (q.model == "cpn") {
    model = BlockModel::cpn(q.n);
  } else if (q.model == "sphere") {
    model = BlockModel::sphere(q.n);
  } else if (q.model == "block") {
    model = BlockModel::block(q.curvature);
    if (q.curvature < 0.0) expected = M_PI / (2.0 * std::sqrt(-q.curvature));
  } else {
    throw Error(ErrorCode::InvalidArgument, "model must be cpn, sphere or block");
  }
  if (!(q.tau_max > 0.0) || q.grid < 1) throw Error(ErrorCode::InvalidArgument, "tau-max and grid must be positive");
  TubeProbeOptions opt;
  opt.tau_max = q.tau_max;
  opt.sigma_points = q.grid;
  const TubeProbe probe = tube_radius_probe(model, opt);

  Report r;
  r.command = "tube-probe";
  r.parameters = {{"model", q.model}, {"n", q.n}, {"tau_max", q.tau_max}, {"grid", q.grid}};
  if (q.model == "block") r.parameters["curvature"] = q.curvature;
  // A radius beyond tau_max is reported as Entire by the probe.
  const bool expect_entire = !(expected < q.tau_max);
  const double residual = expect_entire ? (probe.entire ? 0.0 : Infinite) : std::abs(probe.radius - expected);
  const double tol = 0.01;
  CheckResult c = make_check("tube_radius", q.n, q.grid, tol, residual,
                             expect_entire ? probe.entire : (!probe.entire && residual < tol));
  c.metrics["entire"] = probe.entire;
  c.metrics["base_dimension"] = model.normal_dimension() + 1;
  c.metrics["radius"] = probe.entire ? json("Entire") : json(probe.radius);
  c.metrics["expected"] = expect_entire ? json("Entire") : json(expected);
  c.metrics["min_singular_value"] = probe.min_singular_value;
  c.metrics["model"] = model.name;
  r.checks.push_back(c);
  return r;
}

std::string cohomology_csv(int n) {
  const CohomologyReport rep = compute_cohomology(n);
  std::ostringstream out;
  out << "space,degree,group,rank,torsion,closed_form,match\n";
  const auto dump = [&](const char* name, const CohomologyTable& t, const CohomologyTable& closed) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      const FGAbelianGroup& c = j < closed.size() ? closed[j] : FGAbelianGroup();
      out << name << ',' << j << ',' << t[j].to_string() << ',' << t[j].rank() << ',' << t[j].torsion_string() << ','
          << c.to_string() << ',' << (t[j] == c ? "yes" : "no") << '\n';
    }
  };
  dump("UM", rep.UM, closed_form_UM(n));
  dump("D", rep.D, closed_form_D(n));
  dump("X", rep.X, closed_form_X(n));
  out << "# mismatches," << rep.mismatches << '\n';
  return out.str();
}

Report cohomology_report(int n) {
  const CohomologyReport rep = compute_cohomology(n);
  Report r;
  r.command = "cohomology";
  r.parameters = {{"n", n}};
  const auto table_json = [](const CohomologyTable& t) {
    json rows = json::array();
    for (std::size_t j = 0; j < t.size(); ++j) {
      json torsion = json::array();
      for (const auto& d : t[j].torsion()) torsion.push_back(d.str());
      rows.push_back({{"degree", j}, {"rank", t[j].rank()}, {"torsion", torsion}});
    }
    return rows;
  };
  CheckResult c = make_check("closed_forms", n, 0, 0.0, rep.mismatches, rep.mismatches == 0);
  c.metrics["mismatches"] = rep.mismatches;
  c.metrics["UM"] = table_json(rep.UM);
  c.metrics["D"] = table_json(rep.D);
  c.metrics["X"] = table_json(rep.X);
  r.checks.push_back(c);
  const int chi_x = euler_characteristic(rep.X), chi_d = euler_characteristic(rep.D);
  const int expect_x = (n + 1) * (n + 1), expect_d = n * (n + 1);
  r.checks.push_back(make_check("euler_X", n, 0, 0.0, std::abs(chi_x - expect_x), chi_x == expect_x));
  r.checks.push_back(make_check("euler_D", n, 0, 0.0, std::abs(chi_d - expect_d), chi_d == expect_d));
  return r;
}

Report classify_involution(const json& matrix, std::uint64_t seed, int samples) {
  if (matrix.contains("matrix")) return classify_involution(matrix.at("matrix"), seed, samples);
  if (!matrix.is_array() || matrix.empty()) throw Error(ErrorCode::InvalidArgument, "matrix must be a non-empty array of rows");
  const int size = static_cast<int>(matrix.size());
  CMatrix A(size, size);
  for (int i = 0; i < size; ++i) {
    const json& row = matrix[i];
    if (!row.is_array() || static_cast<int>(row.size()) != size) throw Error(ErrorCode::InvalidArgument, "matrix must be square");
    for (int j = 0; j < size; ++j) {
      const json& e = row[j];
      if (e.is_number()) {
        A(i, j) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        A(i, j) = cd(e[0].get<double>(), e[1].get<double>());
      } else {
        throw Error(ErrorCode::InvalidArgument, "entries must be numbers or [re, im] pairs");
      }
    }
  }
  const AntiholMap map(A);
  const InvolutionTest t = is_involution(map);
  Report r;
  r.command = "involution classify";
  r.parameters = {{"size", size}, {"seed", seed}, {"samples", samples}};
  CheckResult inv = make_check("is_involution", size - 1, 0, involution_tol, t.residual, t.involution);
  inv.metrics["c"] = {t.c.real(), t.c.imag()};
  inv.metrics["condition_number"] = map.condition_number();
  r.checks.push_back(inv);
  if (!t.involution) return r;

  std::string type;
  std::string error;
  try {
    type = to_string(involution_type(map));
  } catch (const Error& e) {
    error = e.what();
  }
  CheckResult ty = make_check("involution_type", size - 1, 0, 0.0, error.empty() ? 0.0 : Infinite, error.empty());
  ty.metrics["type"] = error.empty() ? json(type) : json(nullptr);
  if (!error.empty()) ty.metrics["error"] = error;
  r.checks.push_back(ty);
  if (!error.empty()) return r;

  std::mt19937_64 rng(seed);
  const FixedPointSample s = fixed_points_sample(map, samples, rng);
  const bool real = type == "real";
  const double residual = real ? s.max_fixed_residual : s.min_residual;
  CheckResult fx = make_check("fixed_points", size - 1, samples, fixed_point_accept, residual,
                              real ? s.count == samples : s.count == 0);
  fx.metrics["fixed_found"] = s.count;
  fx.metrics["min_residual"] = s.min_residual;
  json reps = json::array();
  for (std::size_t k = 0; k < std::min<std::size_t>(s.representatives.size(), 3); ++k) {
    reps.push_back(vector_to_json(s.representatives[k].canonical()));
  }
  fx.metrics["representatives"] = reps;
  r.checks.push_back(fx);
  return r;
}

}  // namespace zoll
