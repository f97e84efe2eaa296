#include "carnot/modulus.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace carnot {

void ModulusProblem::validate() const {
  if (!(p >= 1.0))
    throw std::invalid_argument(
        "modulus: p must be >= 1 (vanishing families below p = 1 are certified by witnesses, "
        "not by the convex program)");
  const int n = static_cast<int>(mass.size());
  for (double m : mass)
    if (!(m >= 0.0) || !std::isfinite(m))
      throw std::invalid_argument("modulus: cell masses must be finite and nonnegative");
  for (const auto& row : rows)
    for (const auto& [i, w] : row) {
      if (i < 0 || i >= n) throw std::invalid_argument("modulus: row index out of range");
      if (!(w >= 0.0) || !std::isfinite(w))
        throw std::invalid_argument("modulus: row weights must be finite and nonnegative");
    }
}

AdmissibilityReport check_admissible(const ModulusProblem& prob, const std::vector<double>& f,
                                     double tol) {
  if (f.size() != prob.mass.size())
    throw std::invalid_argument("check_admissible: density length mismatch");
  AdmissibilityReport rep;
  rep.min_integral = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < prob.rows.size(); ++j) {
    double a = 0.0;
    for (const auto& [i, w] : prob.rows[j]) a += w * f[static_cast<std::size_t>(i)];
    if (a < rep.min_integral) {
      rep.min_integral = a;
      rep.worst_row = static_cast<int>(j);
    }
  }
  if (prob.rows.empty()) rep.min_integral = std::numeric_limits<double>::infinity();
  rep.admissible = rep.min_integral >= 1.0 - tol;
  return rep;
}

double modulus_energy(const ModulusProblem& prob, const std::vector<double>& f, Exec exec) {
  if (f.size() != prob.mass.size())
    throw std::invalid_argument("modulus_energy: density length mismatch");
  return reduce_sum(
      f.size(),
      [&](std::size_t i) {
        return f[i] > 0.0 ? prob.mass[i] * std::pow(f[i], prob.p) : 0.0;
      },
      exec);
}

namespace {

// compact row storage for the active (mass-positive) part of the program
struct Csr {
  std::vector<int> offset;  // size k+1
  std::vector<int> idx;
  std::vector<double> wgt;
  int k() const { return static_cast<int>(offset.size()) - 1; }
};

ModulusSolution solve_dual_ascent(const ModulusProblem& prob, const Csr& act, double tol,
                                  int max_sweeps, Exec exec) {
  const double p = prob.p;
  const double q = 1.0 / (p - 1.0);
  const int n = static_cast<int>(prob.mass.size());
  const int k = act.k();

  std::vector<double> lambda(static_cast<std::size_t>(k), 0.0);
  std::vector<double> s(static_cast<std::size_t>(n), 0.0);
  std::vector<double> f(static_cast<std::size_t>(n), 0.0);

  const auto f_of = [&](int i) {
    return s[static_cast<std::size_t>(i)] <= 0.0
               ? 0.0
               : std::pow(s[static_cast<std::size_t>(i)] / (p * prob.mass[static_cast<std::size_t>(i)]), q);
  };

  ModulusSolution sol;
  double primal = 0.0;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (int j = 0; j < k; ++j) {
      const int b = act.offset[static_cast<std::size_t>(j)];
      const int e = act.offset[static_cast<std::size_t>(j) + 1];
      if (b == e) continue;
      double delta;
      if (p == 2.0) {
        double a = 0.0, d = 0.0;
        for (int t = b; t < e; ++t) {
          const int i = act.idx[static_cast<std::size_t>(t)];
          const double w = act.wgt[static_cast<std::size_t>(t)];
          a += w * f[static_cast<std::size_t>(i)];
          d += w * w / (2.0 * prob.mass[static_cast<std::size_t>(i)]);
        }
        delta = std::max((1.0 - a) / d, -lambda[static_cast<std::size_t>(j)]);
      } else {
        // g(delta) = sum w ((s + delta w)/(p m))^q, increasing; solve g = 1
        const auto g_and_slope = [&](double x, double& slope) {
          double g = 0.0;
          slope = 0.0;
          for (int t = b; t < e; ++t) {
            const int i = act.idx[static_cast<std::size_t>(t)];
            const double w = act.wgt[static_cast<std::size_t>(t)];
            const double base =
                std::max(s[static_cast<std::size_t>(i)] + x * w, 0.0) /
                (p * prob.mass[static_cast<std::size_t>(i)]);
            const double bq = base > 0.0 ? std::pow(base, q) : 0.0;
            g += w * bq;
            if (base > 0.0)
              slope += w * w * q / (p * prob.mass[static_cast<std::size_t>(i)]) * bq / base;
          }
          return g;
        };
        double lo = -lambda[static_cast<std::size_t>(j)];
        double sl;
        double glo = g_and_slope(lo, sl);
        if (glo >= 1.0) {
          delta = lo;
        } else {
          double hi = std::max(1.0, -2.0 * lo);
          double ghi = g_and_slope(hi, sl);
          int guard = 0;
          while (ghi < 1.0 && guard++ < 200) {
            hi *= 2.0;
            ghi = g_and_slope(hi, sl);
          }
          double x = 0.0 > lo && 0.0 < hi ? 0.0 : 0.5 * (lo + hi);
          for (int it = 0; it < 80; ++it) {
            const double g = g_and_slope(x, sl);
            if (g < 1.0)
              lo = x;
            else
              hi = x;
            if (std::abs(g - 1.0) <= 1e-13) break;
            double step = sl > 0.0 ? (1.0 - g) / sl : 0.0;
            double xn = x + step;
            if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);
            if (hi - lo <= 1e-15 * (1.0 + std::abs(x))) break;
            x = xn;
          }
          delta = x;
        }
      }
      if (delta == 0.0) continue;
      lambda[static_cast<std::size_t>(j)] += delta;
      for (int t = b; t < e; ++t) {
        const int i = act.idx[static_cast<std::size_t>(t)];
        s[static_cast<std::size_t>(i)] += delta * act.wgt[static_cast<std::size_t>(t)];
        if (s[static_cast<std::size_t>(i)] < 0.0) s[static_cast<std::size_t>(i)] = 0.0;
        f[static_cast<std::size_t>(i)] = f_of(i);
      }
    }
    sol.sweeps = sweep;

    primal = reduce_sum(
        static_cast<std::size_t>(n),
        [&](std::size_t i) {
          return f[i] > 0.0 ? prob.mass[i] * std::pow(f[i], p) : 0.0;
        },
        exec);
    double dual = -(p - 1.0) * primal;
    for (int j = 0; j < k; ++j) dual += lambda[static_cast<std::size_t>(j)];
    double worst_feas = 0.0, worst_compl = 0.0;
    for (int j = 0; j < k; ++j) {
      double a = 0.0;
      for (int t = act.offset[static_cast<std::size_t>(j)];
           t < act.offset[static_cast<std::size_t>(j) + 1]; ++t)
        a += act.wgt[static_cast<std::size_t>(t)] *
             f[static_cast<std::size_t>(act.idx[static_cast<std::size_t>(t)])];
      worst_feas = std::max(worst_feas, 1.0 - a);
      worst_compl = std::max(worst_compl, lambda[static_cast<std::size_t>(j)] * std::abs(a - 1.0));
    }
    const double scale = std::max(1.0, std::abs(primal));
    sol.duality_gap = std::abs(primal - dual) / scale;
    sol.kkt_residual = std::max({worst_feas, worst_compl / scale, sol.duality_gap});
    if (sol.kkt_residual <= tol) {
      sol.converged = true;
      break;
    }
  }

  // scale up to exact admissibility before reporting the value
  double amin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j) {
    double a = 0.0;
    for (int t = act.offset[static_cast<std::size_t>(j)];
         t < act.offset[static_cast<std::size_t>(j) + 1]; ++t)
      a += act.wgt[static_cast<std::size_t>(t)] *
           f[static_cast<std::size_t>(act.idx[static_cast<std::size_t>(t)])];
    amin = std::min(amin, a);
  }
  if (k > 0 && amin > 0.0 && amin < 1.0)
    for (auto& v : f) v /= amin;
  sol.value = reduce_sum(
      static_cast<std::size_t>(n),
      [&](std::size_t i) { return f[i] > 0.0 ? prob.mass[i] * std::pow(f[i], p) : 0.0; }, exec);
  sol.density = std::move(f);
  sol.duals = std::move(lambda);
  return sol;
}

ModulusSolution solve_simplex(const ModulusProblem& prob, const Csr& act, double tol, Exec exec) {
  const int k = act.k();
  const int n = static_cast<int>(prob.mass.size());
  ModulusSolution sol;
  if (k == 0) {
    sol.density.assign(static_cast<std::size_t>(n), 0.0);
    sol.converged = true;
    return sol;
  }

  // column-major copy of the active rows
  std::vector<std::vector<std::pair<int, double>>> cols(static_cast<std::size_t>(n));
  for (int j = 0; j < k; ++j)
    for (int t = act.offset[static_cast<std::size_t>(j)];
         t < act.offset[static_cast<std::size_t>(j) + 1]; ++t)
      cols[static_cast<std::size_t>(act.idx[static_cast<std::size_t>(t)])].push_back(
          {j, act.wgt[static_cast<std::size_t>(t)]});

  // variables: [0, n) densities, [n, n + k) slacks, [n + k, n + 2k) artificials
  const int nslack = n + k;
  const int nart = n + 2 * k;
  std::vector<int> basis(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) basis[static_cast<std::size_t>(j)] = nslack + j;
  Eigen::MatrixXd binv = Eigen::MatrixXd::Identity(k, k);
  Eigen::VectorXd xb = Eigen::VectorXd::Ones(k);

  const auto col_dot = [&](int j, const Eigen::VectorXd& y) {
    if (j < n) {
      double v = 0.0;
      for (const auto& [r, w] : cols[static_cast<std::size_t>(j)]) v += y[r] * w;
      return v;
    }
    if (j < nslack) return -y[j - n];
    return y[j - nslack];
  };
  const auto col_vec = [&](int j) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(k);
    if (j < n) {
      for (const auto& [r, w] : cols[static_cast<std::size_t>(j)]) a[r] = w;
    } else if (j < nslack) {
      a[j - n] = -1.0;
    } else {
      a[j - nslack] = 1.0;
    }
    return a;
  };

  const auto run_phase = [&](const std::function<double(int)>& cost, int col_limit) {
    for (long long iter = 0;; ++iter) {
      if (iter > 200000LL) throw std::runtime_error("modulus p=1: simplex iteration cap hit");
      Eigen::VectorXd cb(k);
      for (int r = 0; r < k; ++r) cb[r] = cost(basis[static_cast<std::size_t>(r)]);
      const Eigen::VectorXd y = binv.transpose() * cb;
      int enter = -1;
      for (int j = 0; j < col_limit; ++j) {  // Bland: first improving column
        const double rc = cost(j) - col_dot(j, y);
        if (rc < -1e-10) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;
      const Eigen::VectorXd d = binv * col_vec(enter);
      int leave = -1;
      double best = 0.0;
      for (int r = 0; r < k; ++r) {
        if (d[r] > 1e-11) {
          const double ratio = xb[r] / d[r];
          if (leave < 0 || ratio < best - 1e-14 ||
              (ratio < best + 1e-14 &&
               basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
            leave = r;
            best = ratio;
          }
        }
      }
      if (leave < 0) throw std::runtime_error("modulus p=1: unbounded pivot");
      const double piv = d[leave];
      xb[leave] /= piv;
      binv.row(leave) /= piv;
      for (int r = 0; r < k; ++r) {
        if (r == leave) continue;
        const double dr = d[r];
        if (dr != 0.0) {
          xb[r] -= dr * xb[leave];
          binv.row(r) -= dr * binv.row(leave);
        }
      }
      basis[static_cast<std::size_t>(leave)] = enter;
    }
  };

  // phase 1: drive the artificial variables to zero
  run_phase([&](int j) { return j >= nslack && j < nart ? 1.0 : 0.0; }, nslack);
  double art = 0.0;
  for (int r = 0; r < k; ++r)
    if (basis[static_cast<std::size_t>(r)] >= nslack) art += xb[r];
  if (art > 1e-7) throw std::runtime_error("modulus p=1: phase-1 infeasibility");

  // swap any artificial still basic at level zero for a real column, so a
  // later pivot cannot push it positive; rows with no real column are
  // redundant and keep a harmless zero artificial
  for (int r = 0; r < k; ++r) {
    if (basis[static_cast<std::size_t>(r)] < nslack) continue;
    for (int j = 0; j < nslack; ++j) {
      bool basic = false;
      for (int rr = 0; rr < k; ++rr) basic = basic || basis[static_cast<std::size_t>(rr)] == j;
      if (basic) continue;
      const Eigen::VectorXd d = binv * col_vec(j);
      if (std::abs(d[r]) <= 1e-9) continue;
      const double piv = d[r];
      xb[r] /= piv;
      binv.row(r) /= piv;
      for (int rr = 0; rr < k; ++rr) {
        if (rr == r || d[rr] == 0.0) continue;
        xb[rr] -= d[rr] * xb[r];
        binv.row(rr) -= d[rr] * binv.row(r);
      }
      basis[static_cast<std::size_t>(r)] = j;
      break;
    }
  }

  // phase 2 on the true cost; artificials keep cost 0 but never enter
  run_phase([&](int j) { return j < n ? prob.mass[static_cast<std::size_t>(j)] : 0.0; }, nslack);

  sol.density.assign(static_cast<std::size_t>(n), 0.0);
  for (int r = 0; r < k; ++r)
    if (basis[static_cast<std::size_t>(r)] < n)
      sol.density[static_cast<std::size_t>(basis[static_cast<std::size_t>(r)])] =
          std::max(xb[r], 0.0);
  Eigen::VectorXd cb(k);
  for (int r = 0; r < k; ++r) {
    const int b = basis[static_cast<std::size_t>(r)];
    cb[r] = b < n ? prob.mass[static_cast<std::size_t>(b)] : 0.0;
  }
  const Eigen::VectorXd y = binv.transpose() * cb;
  sol.duals.assign(static_cast<std::size_t>(k), 0.0);
  for (int j = 0; j < k; ++j) sol.duals[static_cast<std::size_t>(j)] = std::max(y[j], 0.0);

  sol.value = modulus_energy(prob, sol.density, exec);
  double dualval = 0.0, worst_feas = 0.0, worst_compl = 0.0;
  for (int j = 0; j < k; ++j) {
    dualval += sol.duals[static_cast<std::size_t>(j)];
    double a = 0.0;
    for (int t = act.offset[static_cast<std::size_t>(j)];
         t < act.offset[static_cast<std::size_t>(j) + 1]; ++t)
      a += act.wgt[static_cast<std::size_t>(t)] *
           sol.density[static_cast<std::size_t>(act.idx[static_cast<std::size_t>(t)])];
    worst_feas = std::max(worst_feas, 1.0 - a);
    worst_compl =
        std::max(worst_compl, sol.duals[static_cast<std::size_t>(j)] * std::abs(a - 1.0));
  }
  const double scale = std::max(1.0, std::abs(sol.value));
  sol.duality_gap = std::abs(sol.value - dualval) / scale;
  sol.kkt_residual = std::max({worst_feas, worst_compl / scale, sol.duality_gap});
  sol.converged = sol.kkt_residual <= std::max(tol, 1e-9);
  sol.sweeps = 0;
  return sol;
}

}  // namespace

ModulusSolution solve_modulus(const ModulusProblem& prob, double tol, int max_sweeps, Exec exec) {
  prob.validate();
  const int n = static_cast<int>(prob.mass.size());

  // split rows into active parts (mass-positive cells), zero-cost satisfiable
  // rows (touch a zero-mass cell), and impossible rows (no weight at all)
  Csr act;
  act.offset.push_back(0);
  std::vector<std::pair<int, double>> free_fix;  // (cell, required density)
  for (const auto& row : prob.rows) {
    double free_w = 0.0;
    int free_i = -1;
    std::vector<std::pair<int, double>> live;
    for (const auto& [i, w] : row) {
      if (w <= 0.0) continue;
      if (prob.mass[static_cast<std::size_t>(i)] > 0.0) {
        live.push_back({i, w});
      } else if (w > free_w) {
        free_w = w;
        free_i = i;
      }
    }
    if (free_i >= 0) {
      free_fix.push_back({free_i, 1.0 / free_w});
      continue;  // satisfiable at zero cost through the mass-free cell
    }
    if (live.empty()) {
      ModulusSolution sol;
      sol.infinite = true;
      sol.value = std::numeric_limits<double>::infinity();
      sol.density.assign(static_cast<std::size_t>(n), 0.0);
      return sol;  // empty admissible set
    }
    for (const auto& [i, w] : live) {
      act.idx.push_back(i);
      act.wgt.push_back(w);
    }
    act.offset.push_back(static_cast<int>(act.idx.size()));
  }

  ModulusSolution sol = prob.p == 1.0 ? solve_simplex(prob, act, tol, exec)
                                      : solve_dual_ascent(prob, act, tol, max_sweeps, exec);
  for (const auto& [i, need] : free_fix)
    sol.density[static_cast<std::size_t>(i)] =
        std::max(sol.density[static_cast<std::size_t>(i)], need);
  return sol;
}

}  // namespace carnot
