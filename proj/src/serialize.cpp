#include "carnot/serialize.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace carnot {

namespace {

Json vec_to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vec_from_json(const Json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& x : j) v[i++] = x.get<double>();
  return v;
}

Json mat_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd mat_from_json(const Json& j) {
  const Eigen::Index nr = static_cast<Eigen::Index>(j.size());
  if (nr == 0) return Eigen::MatrixXd(0, 0);
  const Eigen::Index nc = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(nr, nc);
  for (Eigen::Index r = 0; r < nr; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != nc)
      throw std::invalid_argument("matrix json: ragged rows");
    for (Eigen::Index c = 0; c < nc; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

}  // namespace

Json to_json(const AlgebraPtr& alg) {
  if (!alg) throw std::invalid_argument("to_json: null algebra");
  Json j;
  switch (alg->kind()) {
    case AlgebraKind::RealHeis:
      j["kind"] = "real_heisenberg";
      j["n"] = alg->slots();
      break;
    case AlgebraKind::ComplexHeis:
      j["kind"] = "complex_heisenberg";
      j["n"] = alg->slots();
      break;
    case AlgebraKind::QuatHeis:
      j["kind"] = "quaternion_heisenberg";
      j["n"] = alg->slots();
      break;
    case AlgebraKind::GenericStep2:
      if (alg->m2() == 0) {
        j["kind"] = "abelian";
        j["m1"] = alg->m1();
      } else {
        j["kind"] = "generic_step2";
        Json mats = Json::array();
        for (int a = 0; a < alg->m2(); ++a) mats.push_back(mat_to_json(alg->j_matrix(a)));
        j["j"] = std::move(mats);
      }
      break;
  }
  return j;
}

AlgebraPtr algebra_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "real_heisenberg") return make_real_heisenberg(j.at("n").get<int>());
  if (kind == "complex_heisenberg") return make_complex_heisenberg(j.at("n").get<int>());
  if (kind == "quaternion_heisenberg") return make_quaternion_heisenberg(j.at("n").get<int>());
  if (kind == "abelian") return make_abelian(j.at("m1").get<int>());
  if (kind == "generic_step2") {
    std::vector<Eigen::MatrixXd> mats;
    for (const auto& m : j.at("j")) mats.push_back(mat_from_json(m));
    return std::make_shared<const HTypeAlgebra>(HTypeAlgebra::generic_step2(std::move(mats)));
  }
  throw std::invalid_argument("algebra_from_json: unknown kind '" + kind + "'");
}

Json to_json(const Norm& nrm) {
  Json j;
  j["kind"] = nrm.kind == NormKind::MaxHomog ? "max_homog" : "cygan";
  if (nrm.kind == NormKind::MaxHomog) {
    j["eps1"] = nrm.eps1;
    j["eps2"] = nrm.eps2;
  }
  return j;
}

Norm norm_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "cygan") return Norm::cygan();
  if (kind == "max_homog")
    return Norm::max_homog(j.value("eps1", 1.0), j.value("eps2", 1.0));
  throw std::invalid_argument("norm_from_json: unknown kind '" + kind + "'");
}

Json to_json(const HomogeneousSplit& split) {
  Json j;
  j["m_horizontal"] = split.m_horizontal();
  j["m_vertical"] = split.m_vertical();
  return j;
}

HomogeneousSplit split_from_json(const AlgebraPtr& alg, const Json& j) {
  return HomogeneousSplit(alg, j.at("m_horizontal").get<std::vector<int>>(),
                          j.at("m_vertical").get<std::vector<int>>());
}

Json to_json(const GridSpec& grid) {
  Json j;
  j["lo"] = vec_to_json(grid.lo);
  j["hi"] = vec_to_json(grid.hi);
  j["step"] = vec_to_json(grid.step);
  return j;
}

GridSpec grid_from_json(const Json& j) {
  GridSpec g;
  g.lo = vec_from_json(j.at("lo"));
  g.hi = vec_from_json(j.at("hi"));
  g.step = vec_from_json(j.at("step"));
  return g;
}

Json to_json(const ModulusProblem& prob) {
  Json j;
  j["p"] = prob.p;
  j["mass"] = prob.mass;
  Json rows = Json::array();
  for (const auto& row : prob.rows) {
    Json r = Json::array();
    for (const auto& [i, w] : row) r.push_back(Json::array({i, w}));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

ModulusProblem problem_from_json(const Json& j) {
  ModulusProblem prob;
  prob.p = j.at("p").get<double>();
  prob.mass = j.at("mass").get<std::vector<double>>();
  for (const auto& r : j.at("rows")) {
    std::vector<std::pair<int, double>> row;
    row.reserve(r.size());
    for (const auto& e : r) row.push_back({e.at(0).get<int>(), e.at(1).get<double>()});
    prob.rows.push_back(std::move(row));
  }
  return prob;
}

Json to_json(const ModulusSolution& sol, bool include_density) {
  Json j;
  j["value"] = sol.value;
  j["infinite"] = sol.infinite;
  j["kkt_residual"] = sol.kkt_residual;
  j["duality_gap"] = sol.duality_gap;
  j["sweeps"] = sol.sweeps;
  j["converged"] = sol.converged;
  if (include_density) {
    j["density"] = sol.density;
    j["duals"] = sol.duals;
  }
  return j;
}

Json to_json(const CroftonReport& rep) {
  Json j;
  j["mc_mean"] = rep.mc_mean;
  j["mc_se"] = rep.mc_se;
  j["ambient"] = rep.ambient;
  j["ratio"] = rep.ratio;
  j["ratio_se"] = rep.ratio_se;
  j["expected"] = rep.expected;
  j["samples"] = rep.samples;
  j["batches"] = rep.batches;
  return j;
}

Json to_json(const RefinementReport& rep) {
  Json j;
  j["values"] = rep.values;
  j["infinite"] = rep.infinite;
  j["converged"] = rep.converged;
  j["kkt"] = rep.kkt;
  j["verdict"] = verdict_name(rep.verdict);
  return j;
}

Json to_json(const CorollaryReport& rep) {
  Json j;
  j["values"] = rep.values;
  j["converged"] = rep.converged;
  j["kkt"] = rep.kkt;
  j["holder_finite"] = rep.holder_finite;
  j["trend"] = rep.trend;
  j["consistent"] = rep.consistent;
  return j;
}

Json to_json(const LpReport& rep) {
  Json j;
  j["values"] = rep.values;
  j["rel_changes"] = rep.rel_changes;
  j["slope"] = rep.slope;
  j["converging"] = rep.converging;
  return j;
}

Json to_json(const SurfaceReport& rep) {
  Json j;
  j["ring_sums"] = rep.ring_sums;
  j["beta"] = rep.beta;
  j["max_min_ratio"] = rep.max_min_ratio;
  j["diverging"] = rep.diverging;
  j["confident"] = rep.confident;
  return j;
}

Json to_json(const BoxDimensionReport& rep) {
  Json j;
  j["radii"] = rep.radii;
  j["counts"] = rep.counts;
  j["dimension"] = rep.dimension;
  return j;
}

Json to_json(const ScalingReport& rep) {
  Json j;
  j["ratio"] = rep.ratio;
  j["expected"] = rep.expected;
  return j;
}

Json to_json(const FubiniReport& rep) {
  Json j;
  j["lhs"] = rep.lhs;
  j["rhs"] = rep.rhs;
  j["rel_err"] = rep.rel_err;
  return j;
}

Json to_json(const IntegrateReport& rep) {
  Json j;
  j["lhs_sigma"] = rep.lhs_sigma;
  j["rhs_mu"] = rep.rhs_mu;
  j["band_lo"] = rep.band_lo;
  j["band_hi"] = rep.band_hi;
  j["inside_band"] = rep.inside_band;
  return j;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
  char buf[32];
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw std::invalid_argument("write_csv: ragged row");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::snprintf(buf, sizeof buf, "%.12g", row[i]);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace carnot
