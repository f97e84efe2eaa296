// carnotmod: experiment runner over the carnot library. One subcommand per
// experiment; config via flags or --config JSON (explicit flags win); JSON
// reports carry a config echo and the library version, never timestamps.
// Exit codes: 0 success, 2 validation error, 3 numerical failure.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "carnot/crofton.hpp"
#include "carnot/graph_measure.hpp"
#include "carnot/measure.hpp"
#include "carnot/serialize.hpp"
#include "carnot/version.hpp"
#include "carnot/witness.hpp"

using namespace carnot;

namespace {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg, Json payload = {})
      : std::runtime_error(msg), payload(std::move(payload)) {}
  Json payload;
};

Json g_file_cfg;  // contents of --config, empty object when absent

// flags win: a value absent on the command line falls back to the config file
template <typename T>
void take(const CLI::Option* opt, const char* key, T& val) {
  if (opt != nullptr && opt->count() > 0) return;
  if (g_file_cfg.contains(key)) {
    try {
      val = g_file_cfg.at(key).get<T>();
    } catch (const Json::exception& err) {
      throw ValidationError(std::string("config key '") + key + "': " + err.what());
    }
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open output file: " + path);
  os << text;
}

// report goes to --out when given, stdout otherwise
void emit(const Json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text(out, text);
    std::printf("wrote %s\n", out.c_str());
  }
}

AlgebraPtr algebra_by_name(const std::string& name, int n) {
  if (n < 1) throw ValidationError("algebra size n must be >= 1");
  if (name == "hR") return make_real_heisenberg(n);
  if (name == "hC") return make_complex_heisenberg(n);
  if (name == "hQ") return make_quaternion_heisenberg(n);
  if (name == "abelian") return make_abelian(n);
  throw ValidationError("unknown algebra '" + name + "' (want hR|hC|hQ|abelian)");
}

Json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot read file: " + path);
  try {
    return Json::parse(is);
  } catch (const Json::exception& err) {
    throw ValidationError(path + ": " + err.what());
  }
}

// graph fixture: {split: {M_h, M_v}, grid: {lo, hi, step}, f, lip}
// f: "zero" | "linear:a,b;c,d" (rows ;-separated) | {table: {points, values}}
IntrinsicGraph graph_from_json(const AlgebraPtr& alg, const Json& j) {
  const Json& js = j.at("split");
  const auto mh = js.at("M_h").get<std::vector<int>>();
  const auto mv = js.at("M_v").get<std::vector<int>>();
  HomogeneousSplit split(alg, mh, mv);

  GridSpec grid;
  const Json& jg = j.at("grid");
  const auto lov = jg.at("lo").get<std::vector<double>>();
  const auto hiv = jg.at("hi").get<std::vector<double>>();
  const auto stv = jg.at("step").get<std::vector<double>>();
  grid.lo = Eigen::Map<const Eigen::VectorXd>(lov.data(), static_cast<long>(lov.size()));
  grid.hi = Eigen::Map<const Eigen::VectorXd>(hiv.data(), static_cast<long>(hiv.size()));
  grid.step = Eigen::Map<const Eigen::VectorXd>(stv.data(), static_cast<long>(stv.size()));

  IntrinsicGraph graph{split, grid, graph_f_zero(split.dim_h()), j.value("lip", 1.0)};
  const Json& jf = j.at("f");
  if (jf.is_string()) {
    const std::string s = jf.get<std::string>();
    if (s == "zero") {
      // keep the zero map
    } else if (s.rfind("linear:", 0) == 0) {
      std::vector<std::vector<double>> rows;
      std::stringstream ss(s.substr(7));
      std::string rowtext;
      while (std::getline(ss, rowtext, ';')) {
        std::vector<double> row;
        std::stringstream rs(rowtext);
        std::string cell;
        while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
      }
      Eigen::MatrixXd b(static_cast<long>(rows.size()),
                        rows.empty() ? 0 : static_cast<long>(rows[0].size()));
      for (long r = 0; r < b.rows(); ++r) {
        if (static_cast<long>(rows[static_cast<std::size_t>(r)].size()) != b.cols())
          throw ValidationError("linear f: ragged matrix rows");
        for (long c = 0; c < b.cols(); ++c)
          b(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      }
      if (b.rows() != split.dim_h() || b.cols() != split.dim_m())
        throw ValidationError("linear f: matrix must be dim_h x dim_m");
      graph.f = graph_f_linear(b);
    } else {
      throw ValidationError("unknown f kind '" + s + "'");
    }
  } else if (jf.is_object() && jf.contains("table")) {
    // nearest-neighbor interpolation of sampled values
    const Json& jt = jf.at("table");
    auto pts = jt.at("points").get<std::vector<std::vector<double>>>();
    auto vals = jt.at("values").get<std::vector<std::vector<double>>>();
    if (pts.empty() || pts.size() != vals.size())
      throw ValidationError("table f: points/values must be same nonempty length");
    const int dh = split.dim_h();
    graph.f = [pts = std::move(pts), vals = std::move(vals), dh](const Eigen::VectorXd& m) {
      std::size_t best = 0;
      double bestd = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        double d = 0.0;
        for (std::size_t c = 0; c < pts[i].size(); ++c) {
          const double dc = m[static_cast<long>(c)] - pts[i][c];
          d += dc * dc;
        }
        if (d < bestd) {
          bestd = d;
          best = i;
        }
      }
      Eigen::VectorXd h(dh);
      for (int c = 0; c < dh; ++c) h[c] = vals[best][static_cast<std::size_t>(c)];
      return h;
    };
  } else {
    throw ValidationError("f must be a string or {table: ...}");
  }
  return graph;
}

// wire format {cells: [[coords..., mass]...], measures: [[w per cell]...], p}
// or the library's own {p, mass, rows}
ModulusProblem problem_from_any_json(const Json& j) {
  if (j.contains("rows")) return problem_from_json(j);
  if (!j.contains("cells") || !j.contains("measures"))
    throw ValidationError("modulus input needs cells+measures (or mass+rows)");
  ModulusProblem prob;
  prob.p = j.value("p", 2.0);
  const Json& cells = j.at("cells");
  for (const auto& cell : cells) {
    if (!cell.is_array() || cell.empty())
      throw ValidationError("each cell must be [coords..., mass]");
    prob.mass.push_back(cell.back().get<double>());
  }
  for (const auto& meas : j.at("measures")) {
    if (meas.size() != prob.mass.size())
      throw ValidationError("each measure needs one weight per cell");
    std::vector<std::pair<int, double>> row;
    for (std::size_t i = 0; i < meas.size(); ++i) {
      const double w = meas.at(i).get<double>();
      if (w != 0.0) row.push_back({static_cast<int>(i), w});
    }
    prob.rows.push_back(std::move(row));
  }
  return prob;
}

using Profile = std::function<double(double)>;

Profile radial_profile(const std::string& kind, double radius, const std::string& file) {
  if (kind == "gauss") return [](double r) { return std::exp(-r * r); };
  if (kind == "annulus")
    return [](double r) {
      if (r < 1.0 || r > 2.0) return 0.0;
      const double s = std::sin(std::numbers::pi * (r - 1.0));
      return s * s;
    };
  if (kind == "bump") {
    const double cap = 0.95 * radius;
    return [cap](double r) {
      const double u = r / cap;
      if (u >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - u * u));
    };
  }
  if (kind == "file") {
    const Json j = load_json_file(file);
    auto radii = j.at("radii").get<std::vector<double>>();
    auto values = j.at("values").get<std::vector<double>>();
    if (radii.size() != values.size() || radii.size() < 2)
      throw ValidationError("profile file needs matching radii/values, length >= 2");
    return [radii = std::move(radii), values = std::move(values)](double r) {
      if (r <= radii.front()) return values.front();
      if (r >= radii.back()) return 0.0;
      auto it = std::upper_bound(radii.begin(), radii.end(), r);
      const std::size_t hi = static_cast<std::size_t>(it - radii.begin());
      const double t = (r - radii[hi - 1]) / (radii[hi] - radii[hi - 1]);
      return values[hi - 1] * (1.0 - t) + values[hi] * t;
    };
  }
  throw ValidationError("unknown integrand '" + kind + "' (want gauss|annulus|bump|file)");
}

double slope_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

// ---- subcommand runners -----------------------------------------------------

int run_group_selftest(const std::string& algebra, int n, int trials, std::uint64_t seed,
                       const std::string& out) {
  const auto alg = algebra_by_name(algebra, n);
  Json checks = Json::array();
  bool ok = true;
  auto push = [&](const std::string& name, double residual, double tol) {
    const bool pass = residual <= tol;
    ok = ok && pass;
    checks.push_back({{"name", name}, {"residual", residual}, {"tol", tol}, {"pass", pass}});
  };

  // bracket antisymmetry and table sanity on basis vectors
  double table = 0.0;
  const int m1 = alg->m1(), m2 = alg->m2();
  for (int i = 0; i < m1; ++i)
    for (int j = 0; j < m1; ++j) {
      Eigen::VectorXd u = Eigen::VectorXd::Zero(m1), v = Eigen::VectorXd::Zero(m1);
      u[i] = 1.0;
      v[j] = 1.0;
      const Eigen::VectorXd b = alg->bracket(u, v);
      table = std::max(table, (b + alg->bracket(v, u)).lpNorm<Eigen::Infinity>());
      if (i == j) table = std::max(table, b.lpNorm<Eigen::Infinity>());
    }
  push("bracket-antisymmetry", table, 0.0);

  Rng rng(seed);
  double ident = 0.0, axioms = 0.0, dila = 0.0;
  for (int s = 0; s < trials; ++s) {
    if (alg->is_htype()) {
      Eigen::VectorXd u(m1), v(m1), z(m2);
      for (int i = 0; i < m1; ++i) u[i] = rng.gaussian();
      for (int i = 0; i < m1; ++i) v[i] = rng.gaussian();
      for (int a = 0; a < m2; ++a) z[a] = rng.gaussian();
      const Eigen::MatrixXd jz = alg->j_of(z);
      ident = std::max(ident, std::abs((jz * u).dot(v) - z.dot(alg->bracket(u, v))));
      ident = std::max(ident,
                       (jz * jz + z.squaredNorm() * Eigen::MatrixXd::Identity(m1, m1))
                           .lpNorm<Eigen::Infinity>());
    }
    Eigen::VectorXd ca(alg->dim()), cb(alg->dim()), cc(alg->dim());
    for (int i = 0; i < alg->dim(); ++i) {
      ca[i] = rng.uniform(-1.0, 1.0);
      cb[i] = rng.uniform(-1.0, 1.0);
      cc[i] = rng.uniform(-1.0, 1.0);
    }
    const GroupPoint a{alg, ca}, b{alg, cb}, c{alg, cc};
    const auto assoc =
        (multiply(multiply(a, b), c).c - multiply(a, multiply(b, c)).c).lpNorm<Eigen::Infinity>();
    const auto inv = multiply(a, inverse(a)).c.lpNorm<Eigen::Infinity>();
    axioms = std::max({axioms, assoc, inv});
    const double lam = 1.7;
    const auto dil = (dilate(multiply(a, b), lam).c -
                      multiply(dilate(a, lam), dilate(b, lam)).c)
                         .lpNorm<Eigen::Infinity>();
    dila = std::max(dila, dil);
  }
  if (alg->is_htype()) push("h-type-identities", ident, 1e-12);
  push("group-axioms", axioms, 1e-12);
  push("dilation-automorphism", dila, 1e-12);

  Json j;
  j["version"] = kVersion;
  j["config"] = {{"experiment", "group-selftest"}, {"algebra", algebra}, {"n", n},
                 {"trials", trials},               {"seed", seed}};
  j["checks"] = checks;
  j["ok"] = ok;
  emit(j, out);
  if (!ok) throw NumericalError("selftest residuals above tolerance", j);
  return 0;
}

int run_haar_test(const std::string& algebra, int n, int kh, int kv, int count,
                  std::uint64_t seed, bool with_reflections, const std::string& out) {
  const auto alg = algebra_by_name(algebra, n);
  if (count < 1) throw ValidationError("--count must be >= 1");
  Rng rng(seed);

  double worst_compat = 0.0, worst_ortho = 0.0;
  double acc = 0.0, acc2 = 0.0;
  for (int s = 0; s < count; ++s) {
    const auto iso = sample_isometry(alg, rng, with_reflections);
    worst_compat = std::max(worst_compat, isometry_compatibility_residual(alg, iso));
    const int m1 = alg->m1();
    worst_ortho = std::max(
        worst_ortho,
        (iso.u.transpose() * iso.u - Eigen::MatrixXd::Identity(m1, m1)).lpNorm<Eigen::Infinity>());
    const double u = iso.u(0, 0);
    acc += u * u;
    acc2 += u * u * u * u;
  }
  const double mean = acc / count;
  const double se = std::sqrt(std::max(acc2 / count - mean * mean, 0.0) / count);

  double worst_closure = 0.0;
  Json first_basis;
  if (kh > 0 || kv > 0) {
    for (int s = 0; s < count; ++s) {
      const auto sub = sample_grassmannian(alg, kh, kv, rng, with_reflections);
      worst_closure = std::max(worst_closure, subalgebra_closure_residual(sub));
      if (s == 0) {
        Json bh = Json::array(), bv = Json::array();
        for (long r = 0; r < sub.basis_h.rows(); ++r) {
          Json row = Json::array();
          for (long c = 0; c < sub.basis_h.cols(); ++c) row.push_back(sub.basis_h(r, c));
          bh.push_back(row);
        }
        for (long r = 0; r < sub.basis_v.rows(); ++r) {
          Json row = Json::array();
          for (long c = 0; c < sub.basis_v.cols(); ++c) row.push_back(sub.basis_v(r, c));
          bv.push_back(row);
        }
        first_basis = {{"basis_h", bh}, {"basis_v", bv}};
      }
    }
  }

  const bool ok = worst_compat <= 1e-12 && worst_ortho <= 1e-12 &&
                  (count < 100 || std::abs(mean - 1.0 / alg->m1()) <= 4.0 * se) &&
                  worst_closure <= 1e-10;
  Json j;
  j["version"] = kVersion;
  j["config"] = {{"experiment", "haar-test"},
                 {"algebra", algebra},
                 {"n", n},
                 {"kh", kh},
                 {"kv", kv},
                 {"count", count},
                 {"seed", seed},
                 {"with_reflections", with_reflections}};
  j["compatibility_residual"] = worst_compat;
  j["orthogonality_residual"] = worst_ortho;
  j["closure_residual"] = worst_closure;
  j["moment_mean"] = mean;
  j["moment_expected"] = 1.0 / alg->m1();
  j["moment_se"] = se;
  if (!first_basis.is_null()) j["sample_subalgebra"] = first_basis;
  j["ok"] = ok;
  emit(j, out);
  if (!ok) throw NumericalError("haar statistics out of tolerance", j);
  return 0;
}

int run_ahlfors_check(const std::string& algebra, int n, std::vector<int> mh, std::vector<int> mv,
                      const std::string& graph_file, double lip, int rexp_lo, int rexp_hi,
                      int divisor, int c0_samples, std::uint64_t seed, const std::string& out,
                      const std::string& csv) {
  const auto alg = algebra_by_name(algebra, n);
  const Norm nrm = Norm::max_homog(1.0, 1.0);
  IntrinsicGraph graph = [&] {
    if (!graph_file.empty()) return graph_from_json(alg, load_json_file(graph_file));
    HomogeneousSplit split(alg, mh, mv);
    IntrinsicGraph g{split, GridSpec{}, graph_f_zero(split.dim_h()), lip};
    const int dm = split.dim_m();
    g.grid.lo = Eigen::VectorXd::Constant(dm, -0.6);
    g.grid.hi = Eigen::VectorXd::Constant(dm, 0.6);
    g.grid.step = Eigen::VectorXd::Constant(dm, 0.05);
    return g;
  }();
  if (rexp_lo < 0 || rexp_hi <= rexp_lo) throw ValidationError("need 0 <= rexp-lo < rexp-hi");

  const auto c0rep = c0_estimate(graph.split, nrm, c0_samples, seed);
  const double dm = static_cast<double>(graph.split.metric_dim_m());
  const double lipf = 1.0 + std::max(graph.lip_claim, 0.0);
  const GroupPoint e = identity_point(alg);

  Json levels = Json::array();
  std::vector<std::vector<double>> csv_rows;
  std::vector<double> lxs, lys;
  bool in_band = true;
  for (int jr = rexp_lo; jr <= rexp_hi; ++jr) {
    const double r = std::pow(2.0, -jr);
    const double est = ball_sigma_estimate(graph, e, r, divisor, nrm);
    const double delta = r / divisor;
    const double lob = std::pow(c0rep.c0 / lipf * r, dm);
    const double hib = std::pow(lipf * (4.0 * r + 2.0 * delta), dm);
    const double count = est / std::pow(2.0 * delta, dm);
    in_band = in_band && est >= lob && est <= hib;
    levels.push_back({{"radius", r},
                      {"estimate", est},
                      {"covering_balls", count},
                      {"band_lo", lob},
                      {"band_hi", hib}});
    csv_rows.push_back({r, count, est});
    lxs.push_back(std::log(r));
    lys.push_back(std::log(est));
  }
  const double slope = slope_fit(lxs, lys);

  Json j;
  j["version"] = kVersion;
  j["config"] = {{"experiment", "ahlfors-check"},
                 {"algebra", algebra},
                 {"n", n},
                 {"M_h", mh},
                 {"M_v", mv},
                 {"graph", graph_file},
                 {"lip", lip},
                 {"rexp_lo", rexp_lo},
                 {"rexp_hi", rexp_hi},
                 {"divisor", divisor},
                 {"c0_samples", c0_samples},
                 {"seed", seed}};
  j["metric_dim"] = dm;
  j["c0"] = c0rep.c0;
  j["slope"] = slope;
  j["in_band"] = in_band;
  j["levels"] = levels;
  emit(j, out);
  if (!csv.empty()) {
    std::ostringstream os;
    write_csv(os, {"scale", "count", "value"}, csv_rows);
    write_text(csv, os.str());
  }
  return 0;
}

int run_modulus_solve(const std::string& input, const std::string& fixture, double p,
                      bool p_given, double tolerance, int max_iter, int refinements,
                      double floor_mass, int shells, int sectors, double eps,
                      bool with_density, const std::string& out) {
  if (refinements < 1) throw ValidationError("--refinements must be >= 1");
  auto build = [&](int level) -> ModulusProblem {
    if (!input.empty()) {
      if (refinements > 1)
        throw ValidationError("refinement ladders are defined for fixtures, not file input");
      return problem_from_any_json(load_json_file(input));
    }
    if (fixture == "annulus") return annulus_radial_problem(shells << level, sectors, p);
    if (fixture == "disk") {
      double e = eps;
      for (int l = 0; l < level; ++l) e *= e;  // square the cutoff per level
      return disk_diameter_problem(shells << level, sectors, e, p);
    }
    if (fixture == "two-cells") {
      ModulusProblem prob;
      prob.p = p;
      prob.mass = {1.0, 1.0};
      prob.rows = {{{0, 1.0}}, {{1, 1.0}}};
      return prob;
    }
    throw ValidationError("unknown fixture '" + fixture + "' (want annulus|disk|two-cells)");
  };

  std::vector<ModulusProblem> ladder;
  for (int l = 0; l < refinements; ++l) {
    ModulusProblem prob = build(l);
    if (p_given) prob.p = p;
    if (floor_mass > 0.0)
      for (double& m : prob.mass)
        if (m < floor_mass) m = 0.0;
    ladder.push_back(std::move(prob));
  }

  Json j;
  j["version"] = kVersion;
  j["config"] = {{"experiment", "modulus-solve"},
                 {"input", input},
                 {"fixture", input.empty() ? fixture : ""},
                 {"p", ladder.front().p},
                 {"tolerance", tolerance},
                 {"max_iter", max_iter},
                 {"refinements", refinements},
                 {"floor", floor_mass},
                 {"shells", shells},
                 {"sectors", sectors},
                 {"eps", eps}};

  if (refinements == 1) {
    const auto sol = solve_modulus(ladder.front(), tolerance, max_iter);
    j["solution"] = to_json(sol, with_density);
    emit(j, out);
    if (!sol.converged && !sol.infinite)
      throw NumericalError("solver did not reach the requested tolerance", j);
    return 0;
  }
  const auto rep = fuglede_refinement_study(ladder, 0.7, 0.2, tolerance, max_iter);
  j["refinement"] = to_json(rep);
  emit(j, out);
  for (std::size_t l = 0; l < rep.values.size(); ++l)
    if (!rep.converged[l] && !rep.infinite[l])
      throw NumericalError("ladder level did not converge", j);
  return 0;
}

int run_exceptional_witness(const std::string& algebra, int n, const std::string& kind,
                            double dm, double alpha, double p, double box, double step,
                            double core, int levels, std::vector<int> mh, std::vector<int> mv,
                            const std::string& graph_file, int jlo, int jhi, int divisor,
                            const std::string& out) {
  const auto alg = algebra_by_name(algebra, n);
  const Norm nrm = Norm::max_homog(1.0, 1.0);
  const WitnessFunction w = [&] {
    if (kind == "radial-pow") return WitnessFunction::radial_pow(alg, dm, nrm);
    if (kind == "radial-log") return WitnessFunction::radial_log(alg, dm, alpha, nrm);
    throw ValidationError("unknown witness kind '" + kind + "' (want radial-pow|radial-log)");
  }();

  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(alg->dim(), -box);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(alg->dim(), box);
  const auto lp = lp_norm_estimate(w, p, lo, hi, step, core, levels);

  IntrinsicGraph graph = [&] {
    if (!graph_file.empty()) return graph_from_json(alg, load_json_file(graph_file));
    HomogeneousSplit split(alg, mh, mv);
    IntrinsicGraph g{split, GridSpec{}, graph_f_zero(split.dim_h()), 0.0};
    const int dmn = split.dim_m();
    g.grid.lo = Eigen::VectorXd::Constant(dmn, -1.0);
    g.grid.hi = Eigen::VectorXd::Constant(dmn, 1.0);
    g.grid.step = Eigen::VectorXd::Constant(dmn, 0.01);
    return g;
  }();
  const auto surf = surface_divergence_check(graph, w, jlo, jhi, divisor, nrm);

  Json j;
  j["version"] = kVersion;
  j["config"] = {{"experiment", "exceptional-witness"},
                 {"algebra", algebra},
                 {"n", n},
                 {"kind", kind},
                 {"dm", dm},
                 {"alpha", alpha},
                 {"p", p},
                 {"box", box},
                 {"step", step},
                 {"core", core},
                 {"levels", levels},
                 {"M_h", mh},
                 {"M_v", mv},
                 {"graph", graph_file},
                 {"jlo", jlo},
                 {"jhi", jhi},
                 {"divisor", divisor}};
  j["lp"] = to_json(lp);
  j["surface"] = to_json(surf);
  j["witness_evidence"] = lp.converging && surf.diverging;
  emit(j, out);
  return 0;
}

int run_crofton_verify(const std::string& space, int n, int k, int kh, int kv,
                       const std::string& integrand, const std::string& integrand_file,
                       int samples, std::uint64_t seed, double radius, double step, int cells,
                       const std::string& out) {
  const double use_radius = radius > 0.0 ? radius : (integrand == "annulus" ? 2.2 : 3.0);
  const Profile prof = radial_profile(integrand, use_radius, integrand_file);
  const auto f = [&prof](const Eigen::VectorXd& x) { return prof(x.norm()); };

  CroftonReport rep;
  if (space == "euclid") {
    rep = euclidean_crofton(n, k, f, use_radius, samples, seed, step, cells);
  } else {
    const auto alg = algebra_by_name(space, n);
    if (kv > 0) {
      rep = htype_crofton_vertical(alg, kh, kv, f, f, use_radius, samples, seed, step, cells);
    } else {
      rep = htype_crofton_horizontal(alg, k, f, use_radius, samples, seed, step, cells);
    }
  }

  Json j;
  j["version"] = kVersion;
  j["config"] = {{"experiment", "crofton-verify"},
                 {"space", space},
                 {"n", n},
                 {"k", k},
                 {"kh", kh},
                 {"kv", kv},
                 {"integrand", integrand},
                 {"integrand_file", integrand_file},
                 {"samples", samples},
                 {"seed", seed},
                 {"radius", use_radius},
                 {"step", step},
                 {"cells", cells}};
  j["report"] = to_json(rep);
  j["lhs"] = rep.mc_mean;
  j["rhs"] = rep.ambient;
  j["constant"] = rep.ratio;
  j["constant_se"] = rep.ratio_se;
  j["expected"] = rep.expected;
  emit(j, out);
  if (!std::isfinite(rep.ratio)) throw NumericalError("non-finite Crofton ratio", j);
  return 0;
}

int run_corollary_trend(const std::string& space, int n, int k, int kh, int kv, double p,
                        std::vector<int> resolutions, std::vector<int> planes,
                        std::uint64_t seed, double decay, double total_decay, double variation,
                        double tol, int max_iter, const std::string& out,
                        const std::string& csv) {
  CorollaryConfig cfg;
  if (space == "euclid") {
    cfg.shape = ShapeKind::Euclidean;
    cfg.n = n;
    cfg.k = k;
  } else {
    cfg.alg = algebra_by_name(space, n);
    if (kv > 0) {
      cfg.shape = ShapeKind::Vertical;
      cfg.k_h = kh;
      cfg.k_v = kv;
    } else {
      cfg.shape = ShapeKind::Horizontal;
      cfg.k = k;
    }
  }
  cfg.p = p;
  cfg.resolutions = resolutions;
  cfg.plane_counts = planes;
  cfg.seed = seed;
  cfg.decay_ratio = decay;
  cfg.total_decay = total_decay;
  cfg.variation = variation;
  cfg.tol = tol;
  cfg.max_sweeps = max_iter;
  const auto rep = corollary_experiment(cfg);

  Json j;
  j["version"] = kVersion;
  j["config"] = {{"experiment", "corollary-trend"},
                 {"space", space},
                 {"n", n},
                 {"k", k},
                 {"kh", kh},
                 {"kv", kv},
                 {"p", p},
                 {"resolutions", resolutions},
                 {"planes", planes},
                 {"seed", seed},
                 {"decay", decay},
                 {"total_decay", total_decay},
                 {"variation", variation},
                 {"tol", tol},
                 {"max_iter", max_iter}};
  j["report"] = to_json(rep);
  emit(j, out);
  if (!csv.empty()) {
    std::vector<std::vector<double>> rows;
    for (std::size_t l = 0; l < rep.values.size(); ++l)
      rows.push_back({static_cast<double>(l), static_cast<double>(resolutions[l]),
                      static_cast<double>(planes[l]), rep.values[l], rep.kkt[l]});
    std::ostringstream os;
    write_csv(os, {"level", "resolution", "planes", "value", "kkt"}, rows);
    write_text(csv, os.str());
  }
  for (std::size_t l = 0; l < rep.values.size(); ++l)
    if (!rep.converged[l]) throw NumericalError("corollary ladder level did not converge", j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerics for exceptional families of measures on step-2 Carnot groups"};
  app.require_subcommand(1);
  app.fallthrough();  // --config / --threads may come after the subcommand
  app.set_version_flag("--version", kVersion);

  std::string config_path;
  int threads = 1;
  app.add_option("--config", config_path, "JSON config file; explicit flags take precedence")
      ->expected(1);
  app.add_option("--threads", threads, "worker threads (default 1 for bit-stable runs)");

  // shared option storage
  std::string algebra = "hR", space = "euclid", out, csv, input, fixture = "annulus";
  std::string kind = "radial-pow", integrand = "gauss", integrand_file, graph_file;
  int n = 1, k = 1, trials = 1000, kh = 0, kv = 0, count = 100, samples = 1000, cells = 121;
  int rexp_lo = 1, rexp_hi = 5, divisor = 6, c0_samples = 200000, max_iter = 100000;
  int refinements = 1, shells = 128, sectors = 64, levels = 3, jlo = 1, jhi = 6;
  int surf_divisor = 4;
  std::uint64_t seed = 0;
  double p = 2.0, tolerance = 1e-8, floor_mass = 0.0, eps = 1e-2, dm = 1.0, alpha = 0.6;
  double box = 1.0, step = 0.02, core = 0.1, lip = 0.0, radius = 0.0, decay = 0.7;
  double total_decay = 0.49, variation = 0.2;
  std::vector<int> mh = {0}, mv, resolutions = {32, 64, 128}, planes = {64, 128, 256};
  bool with_reflections = false, with_density = false;

  auto* sc_self = app.add_subcommand("group-selftest", "bracket tables, identities, axioms");
  sc_self->add_option("--algebra", algebra, "hR|hC|hQ|abelian");
  sc_self->add_option("--n", n, "slots (abelian: dimension)");
  sc_self->add_option("--trials", trials, "random triples");
  sc_self->add_option("--seed", seed, "rng seed");
  sc_self->add_option("--out", out, "JSON report path");

  auto* sc_haar = app.add_subcommand("haar-test", "isometry and Grassmannian statistics");
  sc_haar->add_option("--algebra", algebra, "hR|hC|hQ");
  sc_haar->add_option("--n", n, "slots");
  sc_haar->add_option("--kh", kh, "horizontal signature (0 = skip subalgebras)");
  sc_haar->add_option("--kv", kv, "vertical signature");
  sc_haar->add_option("--count", count, "samples");
  sc_haar->add_option("--seed", seed, "rng seed");
  sc_haar->add_flag("--with-reflections", with_reflections, "sample both components");
  sc_haar->add_option("--out", out, "JSON report path");

  auto* sc_ahl = app.add_subcommand("ahlfors-check", "graph measure scaling band");
  sc_ahl->add_option("--algebra", algebra, "hR|hC|hQ");
  sc_ahl->add_option("--n", n, "slots");
  sc_ahl->add_option("--mh", mh, "M horizontal indices")->delimiter(',');
  sc_ahl->add_option("--mv", mv, "M vertical indices")->delimiter(',');
  sc_ahl->add_option("--graph", graph_file, "graph fixture JSON (overrides --mh/--mv)");
  sc_ahl->add_option("--lip", lip, "Lipschitz claim for the flag-built graph");
  sc_ahl->add_option("--rexp-lo", rexp_lo, "smallest scale exponent (R = 2^-e)");
  sc_ahl->add_option("--rexp-hi", rexp_hi, "largest scale exponent");
  sc_ahl->add_option("--divisor", divisor, "covering radius divisor");
  sc_ahl->add_option("--c0-samples", c0_samples, "splitting-constant samples");
  sc_ahl->add_option("--seed", seed, "rng seed");
  sc_ahl->add_option("--out", out, "JSON report path");
  sc_ahl->add_option("--csv", csv, "CSV (scale,count,value) path");

  auto* sc_mod = app.add_subcommand("modulus-solve", "discrete p-modulus programs");
  sc_mod->add_option("--input", input, "problem JSON: {cells,measures,p} or {p,mass,rows}");
  sc_mod->add_option("--fixture", fixture, "annulus|disk|two-cells (when no --input)");
  auto* popt = sc_mod->add_option("--p", p, "exponent override");
  sc_mod->add_option("--tolerance", tolerance, "KKT tolerance");
  sc_mod->add_option("--max-iter", max_iter, "solver sweep budget");
  sc_mod->add_option("--refinements", refinements, "fixture ladder levels");
  sc_mod->add_option("--floor", floor_mass, "treat cells below this mass as free");
  sc_mod->add_option("--shells", shells, "fixture shells");
  sc_mod->add_option("--sectors", sectors, "fixture sectors");
  sc_mod->add_option("--eps", eps, "disk fixture inner cutoff");
  sc_mod->add_flag("--density", with_density, "include the optimal density");
  sc_mod->add_option("--out", out, "JSON report path");

  auto* sc_wit = app.add_subcommand("exceptional-witness", "witness energy and surface sums");
  sc_wit->add_option("--algebra", algebra, "hR|hC|hQ");
  sc_wit->add_option("--n", n, "slots");
  sc_wit->add_option("--kind", kind, "radial-pow|radial-log");
  sc_wit->add_option("--dm", dm, "gauge exponent");
  sc_wit->add_option("--alpha", alpha, "log damping exponent");
  sc_wit->add_option("--p", p, "energy exponent");
  sc_wit->add_option("--box", box, "half-width of the energy box");
  sc_wit->add_option("--step", step, "base grid step")->default_val(0.1);
  sc_wit->add_option("--core", core, "base singular-core radius");
  sc_wit->add_option("--levels", levels, "refinement levels");
  sc_wit->add_option("--mh", mh, "surface M horizontal indices")->delimiter(',');
  sc_wit->add_option("--mv", mv, "surface M vertical indices")->delimiter(',');
  sc_wit->add_option("--graph", graph_file, "surface fixture JSON");
  sc_wit->add_option("--jlo", jlo, "first dyadic ring");
  sc_wit->add_option("--jhi", jhi, "last dyadic ring");
  sc_wit->add_option("--divisor", surf_divisor, "ring covering divisor");
  sc_wit->add_option("--out", out, "JSON report path");

  auto* sc_cro = app.add_subcommand("crofton-verify", "integral-geometric constants");
  sc_cro->add_option("--space", space, "euclid|hR|hC|hQ");
  sc_cro->add_option("--n", n, "ambient dimension (euclid) or slots");
  sc_cro->add_option("--k", k, "plane dimension (euclid / horizontal shape)");
  sc_cro->add_option("--kh", kh, "horizontal signature (vertical shape)");
  sc_cro->add_option("--kv", kv, "vertical signature (vertical shape)");
  sc_cro->add_option("--integrand", integrand, "gauss|annulus|bump|file");
  sc_cro->add_option("--integrand-file", integrand_file, "radial profile JSON");
  sc_cro->add_option("--samples", samples, "Monte Carlo subspace draws");
  sc_cro->add_option("--seed", seed, "rng seed");
  sc_cro->add_option("--radius", radius, "support radius (0 = per-integrand default)");
  sc_cro->add_option("--step", step, "subspace quadrature step");
  sc_cro->add_option("--cells", cells, "ambient cells per dimension");
  sc_cro->add_option("--out", out, "JSON report path");

  auto* sc_cor = app.add_subcommand("corollary-trend", "modulus refinement dichotomy");
  sc_cor->add_option("--space", space, "euclid|hR|hC|hQ");
  sc_cor->add_option("--n", n, "ambient dimension (euclid) or slots");
  sc_cor->add_option("--k", k, "plane dimension (euclid / horizontal shape)");
  sc_cor->add_option("--kh", kh, "horizontal signature (vertical shape)");
  sc_cor->add_option("--kv", kv, "vertical signature (vertical shape)");
  sc_cor->add_option("--p", p, "modulus exponent");
  sc_cor->add_option("--resolutions", resolutions, "cells per dim, one per level")
      ->delimiter(',');
  sc_cor->add_option("--planes", planes, "subspace draws per level")->delimiter(',');
  sc_cor->add_option("--seed", seed, "rng seed");
  sc_cor->add_option("--decay", decay, "per-step decay bound");
  sc_cor->add_option("--total-decay", total_decay, "first-to-last decay bound");
  sc_cor->add_option("--variation", variation, "bounded-trend spread");
  sc_cor->add_option("--tolerance", tolerance, "KKT tolerance");
  sc_cor->add_option("--max-iter", max_iter, "solver sweep budget");
  sc_cor->add_option("--out", out, "JSON report path");
  sc_cor->add_option("--csv", csv, "CSV trend table path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    Json err{{"error", e.what()}, {"kind", "validation"}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 2;
  }

  try {
    if (!config_path.empty()) g_file_cfg = load_json_file(config_path);
    set_threads(threads);
    // config-file fallback for every option the file may set
    CLI::App* sub = app.get_subcommands().front();
    auto opt = [&](const char* name) -> const CLI::Option* {
      return sub->get_option_no_throw(name);
    };
    take(opt("--algebra"), "algebra", algebra);
    take(opt("--space"), "space", space);
    take(opt("--n"), "n", n);
    take(opt("--k"), "k", k);
    take(opt("--trials"), "trials", trials);
    take(opt("--kh"), "kh", kh);
    take(opt("--kv"), "kv", kv);
    take(opt("--count"), "count", count);
    take(opt("--samples"), "samples", samples);
    take(opt("--cells"), "cells", cells);
    take(opt("--seed"), "seed", seed);
    take(opt("--with-reflections"), "with_reflections", with_reflections);
    take(opt("--mh"), "M_h", mh);
    take(opt("--mv"), "M_v", mv);
    take(opt("--graph"), "graph", graph_file);
    take(opt("--lip"), "lip", lip);
    take(opt("--rexp-lo"), "rexp_lo", rexp_lo);
    take(opt("--rexp-hi"), "rexp_hi", rexp_hi);
    take(opt("--divisor"), "divisor", divisor);
    take(opt("--c0-samples"), "c0_samples", c0_samples);
    take(opt("--input"), "input", input);
    take(opt("--fixture"), "fixture", fixture);
    take(opt("--p"), "p", p);
    take(opt("--tolerance"), "tolerance", tolerance);
    take(opt("--max-iter"), "max_iter", max_iter);
    take(opt("--refinements"), "refinements", refinements);
    take(opt("--floor"), "floor", floor_mass);
    take(opt("--shells"), "shells", shells);
    take(opt("--sectors"), "sectors", sectors);
    take(opt("--eps"), "eps", eps);
    take(opt("--density"), "density", with_density);
    take(opt("--kind"), "kind", kind);
    take(opt("--dm"), "dm", dm);
    take(opt("--alpha"), "alpha", alpha);
    take(opt("--box"), "box", box);
    take(opt("--step"), "step", step);
    take(opt("--core"), "core", core);
    take(opt("--levels"), "levels", levels);
    take(opt("--jlo"), "jlo", jlo);
    take(opt("--jhi"), "jhi", jhi);
    take(opt("--integrand"), "integrand", integrand);
    take(opt("--integrand-file"), "integrand_file", integrand_file);
    take(opt("--radius"), "radius", radius);
    take(opt("--resolutions"), "resolutions", resolutions);
    take(opt("--planes"), "planes", planes);
    take(opt("--decay"), "decay", decay);
    take(opt("--total-decay"), "total_decay", total_decay);
    take(opt("--variation"), "variation", variation);
    take(opt("--out"), "out", out);
    take(opt("--csv"), "csv", csv);

    // stochastic experiments refuse to run without an explicit seed
    const bool stochastic =
        sub == sc_self || sub == sc_haar || sub == sc_ahl || sub == sc_cro || sub == sc_cor;
    const CLI::Option* seed_opt = opt("--seed");
    if (stochastic && (seed_opt == nullptr || seed_opt->count() == 0) &&
        !g_file_cfg.contains("seed"))
      throw ValidationError("--seed is required (flag or config file)");

    if (sub == sc_self) return run_group_selftest(algebra, n, trials, seed, out);
    if (sub == sc_haar)
      return run_haar_test(algebra, n, kh, kv, count, seed, with_reflections, out);
    if (sub == sc_ahl)
      return run_ahlfors_check(algebra, n, mh, mv, graph_file, lip, rexp_lo, rexp_hi, divisor,
                               c0_samples, seed, out, csv);
    if (sub == sc_mod)
      return run_modulus_solve(input, fixture, p, popt->count() > 0 || g_file_cfg.contains("p"),
                               tolerance, max_iter, refinements, floor_mass, shells, sectors,
                               eps, with_density, out);
    if (sub == sc_wit)
      return run_exceptional_witness(algebra, n, kind, dm, alpha, p, box, step, core, levels,
                                     mh, mv, graph_file, jlo, jhi, surf_divisor, out);
    if (sub == sc_cro)
      return run_crofton_verify(space, n, k, kh, kv, integrand, integrand_file, samples, seed,
                                radius, step, cells, out);
    if (sub == sc_cor)
      return run_corollary_trend(space, n, k, kh, kv, p, resolutions, planes, seed, decay,
                                 total_decay, variation, tolerance, max_iter, out, csv);
    throw ValidationError("no subcommand selected");
  } catch (const ValidationError& err) {
    Json j{{"error", err.what()}, {"kind", "validation"}};
    std::fprintf(stderr, "%s\n", j.dump().c_str());
    return 2;
  } catch (const std::invalid_argument& err) {
    Json j{{"error", err.what()}, {"kind", "validation"}};
    std::fprintf(stderr, "%s\n", j.dump().c_str());
    return 2;
  } catch (const NumericalError& err) {
    Json j{{"error", err.what()}, {"kind", "numerical"}};
    if (!err.payload.is_null()) j["report"] = err.payload;
    std::fprintf(stderr, "%s\n", j.dump().c_str());
    return 3;
  } catch (const Json::exception& err) {
    // ill-typed input files surface as json access errors
    Json j{{"error", err.what()}, {"kind", "validation"}};
    std::fprintf(stderr, "%s\n", j.dump().c_str());
    return 2;
  } catch (const std::exception& err) {
    Json j{{"error", err.what()}, {"kind", "numerical"}};
    std::fprintf(stderr, "%s\n", j.dump().c_str());
    return 3;
  }
}
