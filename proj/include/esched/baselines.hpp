// Greedy baselines and exhaustive oracles.
//
// lfj assigns the least flexible tasks first, lfm lets the least flexible
// processors pick tasks in round-robin turns. The brute-force oracles
// enumerate every eligible assignment and are the ground truth the other
// solvers are measured against at small scale.
#pragma once

#include <numeric>

#include "esched/core.hpp"
#include "esched/maxflow.hpp"

namespace esched {

struct OracleBudget {
  long long max_states = 5'000'000;  // cap on enumerated assignments
};

// Least flexible task first: tasks in ascending |eligible| (ties by index),
// each placed on its least loaded eligible processor (ties by index).
inline Assignment lfj(const Instance& inst) {
  require_valid_instance(inst);
  std::vector<int> order(inst.n());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return inst.tasks[a].eligible.size() < inst.tasks[b].eligible.size();
  });
  Assignment a;
  a.proc_of.assign(inst.n(), -1);
  LoadVector load(inst.m, 0.0);
  for (int j : order) {
    int best = -1;
    for (int i : inst.tasks[j].eligible)
      if (best < 0 || load[i] < load[best]) best = i;
    a.proc_of[j] = best;
    load[best] += inst.tasks[j].work;
  }
  return a;
}

// Least flexible machine first: processors in ascending eligible-task count
// (ties by index) take turns in that cyclic order; on its turn a processor
// grabs its largest-work unassigned eligible task (ties by index), skipping
// the turn when none remains.
inline Assignment lfm(const Instance& inst) {
  require_valid_instance(inst);
  std::vector<int> count(inst.m, 0);
  for (const Task& t : inst.tasks)
    for (int i : t.eligible) ++count[i];
  std::vector<int> order(inst.m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return count[a] < count[b]; });

  Assignment a;
  a.proc_of.assign(inst.n(), -1);
  int unassigned = inst.n();
  while (unassigned > 0) {
    for (int i : order) {
      int pick = -1;
      for (int j = 0; j < inst.n(); ++j)
        if (a.proc_of[j] < 0 && is_eligible(inst.tasks[j], i) &&
            (pick < 0 || inst.tasks[j].work > inst.tasks[pick].work))
          pick = j;
      if (pick >= 0) {
        a.proc_of[pick] = i;
        --unassigned;
      }
    }
  }
  return a;
}

// Number of eligible assignments, saturated at cap+1.
inline long long assignment_state_count(const Instance& inst, long long cap) {
  long long states = 1;
  for (const Task& t : inst.tasks) {
    states *= static_cast<long long>(t.eligible.size());
    if (states > cap) return cap + 1;
  }
  return states;
}

namespace detail {

// Depth-first enumeration over per-task eligibility lists; ascending
// processor choices make the visit order lexicographic in proc_of.
template <typename Leaf>
void enumerate_assignments(const Instance& inst, int j, std::vector<int>& proc_of,
                           LoadVector& load, Leaf&& leaf) {
  if (j == inst.n()) {
    leaf(proc_of, load);
    return;
  }
  for (int i : inst.tasks[j].eligible) {
    proc_of[j] = i;
    load[i] += inst.tasks[j].work;
    enumerate_assignments(inst, j + 1, proc_of, load, leaf);
    load[i] -= inst.tasks[j].work;
  }
  proc_of[j] = -1;
}

inline void require_budget(const Instance& inst, const OracleBudget& budget) {
  if (assignment_state_count(inst, budget.max_states) > budget.max_states)
    throw BudgetExceededError(
        "instance has more than " + std::to_string(budget.max_states) +
        " eligible assignments; use the fdr solver instead");
}

}  // namespace detail

// Exhaustive minimum-energy assignment; ties resolve to the
// lexicographically smallest proc_of.
inline Assignment brute_force_opt(const Instance& inst, const OracleBudget& budget = {}) {
  require_valid_instance(inst);
  detail::require_budget(inst, budget);
  std::vector<int> proc_of(inst.n(), -1), best;
  LoadVector load(inst.m, 0.0);
  double best_energy = std::numeric_limits<double>::infinity();
  detail::enumerate_assignments(
      inst, 0, proc_of, load, [&](const std::vector<int>& p, const LoadVector& l) {
        double e = energy_of_loads(l, inst.deadline, inst.alpha);
        if (e < best_energy) {
          best_energy = e;
          best = p;
        }
      });
  Assignment a;
  a.proc_of = std::move(best);
  return a;
}

// Exhaustive minimum over assignments of the maximum per-processor task
// count. Requires equal works.
inline int brute_force_minmax(const Instance& inst, const OracleBudget& budget = {}) {
  require_valid_instance(inst);
  require_uniform_works(inst);
  detail::require_budget(inst, budget);
  std::vector<int> proc_of(inst.n(), -1);
  LoadVector load(inst.m, 0.0);
  int best = inst.n() + 1;
  detail::enumerate_assignments(
      inst, 0, proc_of, load, [&](const std::vector<int>& p, const LoadVector&) {
        std::vector<int> count(inst.m, 0);
        int worst = 0;
        for (int q : p) worst = std::max(worst, ++count[q]);
        best = std::min(best, worst);
      });
  return best;
}

}  // namespace esched
