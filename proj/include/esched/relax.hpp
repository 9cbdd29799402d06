// Convex relaxation of the assignment problem: integrality is dropped to
// 0 <= x_ij <= 1 and the resulting program is solved by exact per-task
// water-filling coordinate descent. Each move redistributes one task's mass
// so that the processors receiving any of it end at a common load (the water
// level), which is the unique minimizer of the move's subproblem. The
// returned solution carries two certificates: a Frank-Wolfe duality gap
// bounding the objective error and a stationarity residual (see
// stationarity_residual below).
#pragma once

#include <utility>

#include "esched/core.hpp"

namespace esched {

struct FractionalAssignment {
  // x[j][k] is the fraction of task j placed on inst.tasks[j].eligible[k];
  // pairs outside the eligibility lists are identically zero.
  std::vector<std::vector<double>> x;
  double tol = 1e-7;  // tolerance the solution was solved to
};

struct RelaxReport {
  double objective = 0.0;
  long long iterations = 0;  // elementary per-task moves performed
  double max_stationarity_residual = 0.0;
};

inline LoadVector fractional_loads(const Instance& inst,
                                   const FractionalAssignment& fx) {
  LoadVector load(inst.m, 0.0);
  for (int j = 0; j < inst.n(); ++j)
    for (size_t k = 0; k < inst.tasks[j].eligible.size(); ++k)
      load[inst.tasks[j].eligible[k]] += fx.x[j][k] * inst.tasks[j].work;
  return load;
}

inline double fractional_objective(const Instance& inst,
                                   const FractionalAssignment& fx) {
  return energy_of_loads(fractional_loads(inst, fx), inst.deadline, inst.alpha);
}

// Optimality certificate: at a fractional optimum each task's mass sits only
// on its minimum-load eligible processors, so the value below is ~0. Returns
// max over tasks j and eligible pairs (i,i') with x_ij > tol of
// max(0, load_i - load_i').
inline double stationarity_residual(const Instance& inst,
                                    const FractionalAssignment& fx) {
  LoadVector load = fractional_loads(inst, fx);
  double res = 0.0;
  for (int j = 0; j < inst.n(); ++j) {
    const Task& t = inst.tasks[j];
    double lo = std::numeric_limits<double>::infinity();
    for (int i : t.eligible) lo = std::min(lo, load[i]);
    for (size_t k = 0; k < t.eligible.size(); ++k)
      if (fx.x[j][k] > fx.tol) res = std::max(res, load[t.eligible[k]] - lo);
  }
  return std::max(res, 0.0);
}

namespace detail {

// Minimizes sum (base_k + y_k)^alpha over y >= 0 with sum y = w: pour w units
// of water over the bases; every processor that receives mass ends at the
// common level theta. Overwrites y.
inline void water_fill(const std::vector<double>& base, double w,
                       std::vector<double>& y) {
  const int d = static_cast<int>(base.size());
  std::vector<int> ord(d);
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(),
            [&](int a, int b) { return base[a] < base[b]; });
  double acc = 0.0, theta = 0.0;
  for (int t = 0; t < d; ++t) {
    acc += base[ord[t]];
    theta = (acc + w) / (t + 1);
    if (t + 1 == d || theta <= base[ord[t + 1]]) break;
  }
  y.assign(d, 0.0);
  for (int k = 0; k < d; ++k) y[k] = std::max(0.0, theta - base[k]);
  // Rounding in theta can leave the sum a few ulps off w; rescale so the
  // simplex constraint holds exactly.
  double s = std::accumulate(y.begin(), y.end(), 0.0);
  if (s > 0.0)
    for (double& v : y) v *= w / s;
}

}  // namespace detail

// Solves the relaxation to relative objective tolerance `tol`. Starts from
// the uniform spread x_ij = 1/|M_j|; because every water-filling move only
// levels loads downward from that start, the per-processor cap s_max*C is
// never exceeded once the start respects it, so instances are rejected up
// front when even the uniform spread does not fit. When `sweep_objectives`
// is given, the objective after each full sweep is appended to it.
inline std::pair<FractionalAssignment, RelaxReport> solve_relaxation(
    const Instance& inst, double tol = 1e-7,
    std::vector<double>* sweep_objectives = nullptr) {
  require_valid_instance(inst);
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");

  FractionalAssignment fx;
  fx.tol = tol;
  fx.x.resize(inst.n());
  for (int j = 0; j < inst.n(); ++j)
    fx.x[j].assign(inst.tasks[j].eligible.size(),
                   1.0 / static_cast<double>(inst.tasks[j].eligible.size()));

  const double cap = inst.s_max * inst.deadline;
  {
    LoadVector load = fractional_loads(inst, fx);
    double worst = *std::max_element(load.begin(), load.end());
    if (worst > cap + kFeasTol)
      throw InfeasibleError(
          "relaxation infeasible under s_max: uniform-spread load " +
          std::to_string(worst) + " already exceeds s_max*C = " +
          std::to_string(cap));
  }

  const long long kMaxMoves = 1'000'000;
  RelaxReport rep;
  std::vector<double> base, y;
  double gap = 0.0, residual = 0.0;
  for (;;) {
    // Recompute loads from scratch each sweep so incremental float error
    // cannot accumulate across sweeps.
    LoadVector load = fractional_loads(inst, fx);
    for (int j = 0; j < inst.n(); ++j) {
      const Task& t = inst.tasks[j];
      const int d = static_cast<int>(t.eligible.size());
      base.resize(d);
      for (int k = 0; k < d; ++k)
        base[k] = std::max(0.0, load[t.eligible[k]] - fx.x[j][k] * t.work);
      detail::water_fill(base, t.work, y);
      for (int k = 0; k < d; ++k) {
        fx.x[j][k] = y[k] / t.work;
        load[t.eligible[k]] = base[k] + y[k];
      }
      ++rep.iterations;
    }

    load = fractional_loads(inst, fx);
    rep.objective = energy_of_loads(load, inst.deadline, inst.alpha);
    if (sweep_objectives) sweep_objectives->push_back(rep.objective);
    residual = stationarity_residual(inst, fx);

    // Frank-Wolfe duality gap: grad . (x - s) with s the per-task vertex on
    // the cheapest eligible processor; bounds objective suboptimality.
    const double denom = std::pow(inst.deadline, inst.alpha - 1.0);
    gap = 0.0;
    for (int j = 0; j < inst.n(); ++j) {
      const Task& t = inst.tasks[j];
      double at = 0.0, best = std::numeric_limits<double>::infinity();
      for (size_t k = 0; k < t.eligible.size(); ++k) {
        double phi =
            inst.alpha * std::pow(load[t.eligible[k]], inst.alpha - 1.0) / denom;
        at += fx.x[j][k] * phi;
        best = std::min(best, phi);
      }
      gap += t.work * (at - best);
    }

    // Absolute residual target; the load-scaled floor keeps it reachable in
    // double precision on instances with very large loads.
    const double l_max = *std::max_element(load.begin(), load.end());
    const double res_target = std::max(1e-6, 1e-13 * l_max);
    if (gap <= tol * std::max(rep.objective, 1e-300) && residual <= res_target)
      break;
    if (rep.iterations >= kMaxMoves)
      throw std::runtime_error(
          "relaxation failed to converge within " + std::to_string(kMaxMoves) +
          " moves: duality gap " + std::to_string(gap) +
          ", stationarity residual " + std::to_string(residual));
  }
  rep.max_stationarity_residual = residual;
  return {std::move(fx), rep};
}

}  // namespace esched
