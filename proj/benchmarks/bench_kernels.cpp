// serial vs parallel timing for the reduce-heavy kernels; the serial paths
// are the reference implementations the tests pin down, so this doubles as a
// sanity check that both executors agree bit-for-bit where we promise it.
#include <chrono>
#include <cstdio>
#include <vector>

#include "carnot/crofton.hpp"
#include "carnot/parallel.hpp"
#include "carnot/split.hpp"
#include "carnot/witness.hpp"

using namespace carnot;
using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

struct Row {
  const char* name;
  double serial, parallel;
  bool match;
};

template <typename Fn>
Row time_both(const char* name, Fn&& fn) {
  const auto t0 = Clock::now();
  const double vs = fn(Exec::Serial);
  const auto t1 = Clock::now();
  const double vp = fn(Exec::Parallel);
  const auto t2 = Clock::now();
  return {name, seconds(t0, t1), seconds(t1, t2), vs == vp};
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", max_threads());
  std::vector<Row> rows;

  rows.push_back(time_both("reduce_sum 3e7 terms", [](Exec exec) {
    return reduce_sum(
        30000000, [](std::size_t i) { return 1.0 / ((static_cast<double>(i) + 1.0) * 3.7); },
        exec);
  }));

  const auto alg = make_real_heisenberg(2);
  rows.push_back(time_both("euclidean crofton n=4 k=2", [](Exec exec) {
    const auto f = [](const Eigen::VectorXd& x) { return std::exp(-x.squaredNorm()); };
    return euclidean_crofton(4, 2, f, 3.0, 400, 7, 0.05, 41, exec).ratio;
  }));

  rows.push_back(time_both("horizontal crofton h2R k=2", [&](Exec exec) {
    const auto f = [](const Eigen::VectorXd& x) { return std::exp(-x.squaredNorm()); };
    return htype_crofton_horizontal(alg, 2, f, 3.0, 200, 11, 0.05, 41, exec).ratio;
  }));

  rows.push_back(time_both("witness L^p ladder", [&](Exec exec) {
    const auto w = WitnessFunction::radial_pow(alg, 1.0, Norm::max_homog(1.0, 1.0));
    const Eigen::VectorXd lo = Eigen::VectorXd::Constant(alg->dim(), -1.0);
    const Eigen::VectorXd hi = Eigen::VectorXd::Constant(alg->dim(), 1.0);
    return lp_norm_estimate(w, 2.0, lo, hi, 0.2, 0.2, 3, exec).values.back();
  }));

  rows.push_back(time_both("cone check 4e3 points", [&](Exec exec) {
    HomogeneousSplit split(alg, {0}, {});
    IntrinsicGraph graph{split, GridSpec{}, graph_f_zero(split.dim_h()), 0.0};
    graph.grid.lo = Eigen::VectorXd::Constant(1, -1.0);
    graph.grid.hi = Eigen::VectorXd::Constant(1, 1.0);
    graph.grid.step = Eigen::VectorXd::Constant(1, 5e-4);
    return verify_cone(graph, 1.0, Norm::max_homog(1.0, 1.0), exec, 4000).worst_margin;
  }));

  rows.push_back(time_both("annulus modulus 256x96 p=2.5", [](Exec exec) {
    const auto prob = annulus_radial_problem(256, 96, 2.5);
    return solve_modulus(prob, 1e-9, 40000, exec).value;
  }));

  std::printf("%-32s %10s %10s %9s %s\n", "kernel", "serial[s]", "parallel[s]", "speedup",
              "bit-identical");
  for (const auto& r : rows)
    std::printf("%-32s %10.3f %10.3f %8.2fx %s\n", r.name, r.serial, r.parallel,
                r.serial / r.parallel, r.match ? "yes" : "NO");
  return 0;
}
