// Exact solver for instances whose tasks all have equal work.
//
// bs_algo finds the smallest achievable maximum per-processor task count L*
// by binary search on the shared source capacity of the bipartite network: a
// max-flow of value n at capacity c certifies L* <= c. ecsemrpp repeatedly
// runs bs_algo, rebalances the realizing assignment until no load-reducing
// alternating path remains (which makes the count vector minimize every
// symmetric convex cost over the sub-instance), commits the tasks of the
// lowest-indexed processor attaining the maximal load, deletes that
// processor, and re-solves the remainder; the resulting sorted load vector
// is strongly optimal, which makes the schedule energy-optimal for any
// convex power function.
#pragma once

#include <numeric>

#include "esched/maxflow.hpp"

namespace esched {

struct MinMaxResult {
  int l_star = 0;               // min over assignments of max tasks per processor
  int peel_processor = -1;      // lowest-index processor attaining the max
  std::vector<int> peel_tasks;  // its tasks in the realizing assignment
  Assignment assignment;        // a full assignment with max load l_star
  int flow_calls = 0;           // max-flow invocations performed
};

// One committed round of the peeling solver.
struct PeelStep {
  int processor = -1;
  std::vector<int> tasks;
};

namespace detail {

struct PeelChoice {
  int processor = -1;
  std::vector<int> tasks;
};

// Lowest-indexed processor attaining the maximal task count, with its tasks.
inline PeelChoice pick_max_load(const Instance& inst,
                                const std::vector<char>& proc_active,
                                const std::vector<char>& task_active,
                                const std::vector<int>& proc_of) {
  std::vector<int> count(inst.m, 0);
  for (int j = 0; j < inst.n(); ++j)
    if (task_active[j]) ++count[proc_of[j]];
  PeelChoice choice;
  for (int i = 0; i < inst.m; ++i)
    if (proc_active[i] &&
        (choice.processor < 0 || count[i] > count[choice.processor]))
      choice.processor = i;
  for (int j = 0; j < inst.n(); ++j)
    if (task_active[j] && proc_of[j] == choice.processor)
      choice.tasks.push_back(j);
  return choice;
}

// Cancels load-reducing alternating paths: shifting every task on the path
// one step forward moves one unit of load from processor u to a processor v
// with count[v] <= count[u] - 2, strictly decreasing the square sum of
// counts. A max-flow assignment only pins the maximum count, not the rest of
// the vector, so this refinement is what makes peeling safe: at the fixed
// point no single-unit exchange is feasible, the sorted count vector is
// therefore decreasingly minimal over the sub-instance, and removing a
// maximally loaded processor together with its tasks keeps the remainder
// optimal.
inline void equalize_counts(const Instance& inst,
                            const std::vector<char>& proc_active,
                            const std::vector<char>& task_active,
                            std::vector<int>& proc_of) {
  const int m = inst.m, n = inst.n();
  std::vector<int> count(m, 0);
  for (int j = 0; j < n; ++j)
    if (task_active[j]) ++count[proc_of[j]];

  std::vector<int> parent_proc(m), parent_task(m), queue, order(m);
  std::iota(order.begin(), order.end(), 0);
  for (bool improved = true; improved;) {
    improved = false;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return count[a] > count[b]; });
    for (int u : order) {
      if (!proc_active[u]) continue;
      std::fill(parent_proc.begin(), parent_proc.end(), -1);
      parent_proc[u] = u;
      queue.assign(1, u);
      int found = -1;
      for (std::size_t head = 0; head < queue.size() && found < 0; ++head) {
        const int p = queue[head];
        for (int j = 0; j < n && found < 0; ++j) {
          if (!task_active[j] || proc_of[j] != p) continue;
          for (int q : inst.tasks[j].eligible) {
            if (!proc_active[q] || parent_proc[q] >= 0) continue;
            parent_proc[q] = p;
            parent_task[q] = j;
            if (count[q] <= count[u] - 2) {
              found = q;
              break;
            }
            queue.push_back(q);
          }
        }
      }
      if (found < 0) continue;
      for (int v = found; v != u; v = parent_proc[v]) proc_of[parent_task[v]] = v;
      --count[u];
      ++count[found];
      improved = true;
      break;  // counts changed; rescan from the most loaded processor
    }
  }
}

// bs_algo restricted to the active processors/tasks. The returned assignment
// has -1 for inactive tasks.
inline MinMaxResult bs_algo_masked(const Instance& inst,
                                   const std::vector<char>& proc_active,
                                   const std::vector<char>& task_active) {
  const int n_active =
      static_cast<int>(std::count(task_active.begin(), task_active.end(), 1));
  if (n_active == 0) throw std::invalid_argument("bs_algo needs at least one task");

  FlowNetwork net(inst.m, inst.n());
  for (int i = 0; i < inst.m; ++i)
    if (proc_active[i]) net.add_source_edge(i, n_active);
  for (int j = 0; j < inst.n(); ++j) {
    if (!task_active[j]) continue;
    for (int i : inst.tasks[j].eligible)
      if (proc_active[i]) net.add_eligibility_edge(i, j);
    net.add_sink_edge(j);
  }

  MinMaxResult res;
  int lo = 1, hi = n_active;
  std::vector<int> kept;  // matching from the last feasible capacity (== hi)
  while (lo < hi) {
    const int c = (lo + hi) / 2;
    net.set_source_capacity(c);
    auto flow = net.max_flow();
    ++res.flow_calls;
    if (flow.value == n_active) {
      hi = c;
      kept = std::move(flow.task_to_proc);
    } else {
      lo = c + 1;
    }
  }
  if (kept.empty()) {
    // Every probed capacity failed (or n_active == 1); capacity hi is
    // feasible by construction, so one more flow recovers the assignment.
    net.set_source_capacity(hi);
    auto flow = net.max_flow();
    ++res.flow_calls;
    if (flow.value != n_active)
      throw std::logic_error("unroutable task in flow network");
    kept = std::move(flow.task_to_proc);
  }
  res.l_star = hi;
  res.assignment.proc_of = std::move(kept);

  PeelChoice choice =
      pick_max_load(inst, proc_active, task_active, res.assignment.proc_of);
  res.peel_processor = choice.processor;
  res.peel_tasks = std::move(choice.tasks);
  return res;
}

}  // namespace detail

// Minimum achievable maximum task count per processor, with a realizing
// assignment. Requires equal works.
inline MinMaxResult bs_algo(const Instance& inst) {
  require_valid_instance(inst);
  require_uniform_works(inst);
  std::vector<char> procs(inst.m, 1), tasks(inst.n(), 1);
  return detail::bs_algo_masked(inst, procs, tasks);
}

// Energy-optimal assignment for equal-work tasks. Throws InfeasibleError if
// even the optimal min-max load would exceed the speed cap.
inline Assignment ecsemrpp(const Instance& inst, std::vector<PeelStep>* peel_trace = nullptr) {
  require_valid_instance(inst);
  require_uniform_works(inst);

  std::vector<char> proc_active(inst.m, 1), task_active(inst.n(), 1);
  int remaining = inst.n();
  Assignment result;
  result.proc_of.assign(inst.n(), -1);

  while (remaining > 0) {
    auto round = detail::bs_algo_masked(inst, proc_active, task_active);
    detail::equalize_counts(inst, proc_active, task_active,
                            round.assignment.proc_of);
    detail::PeelChoice peel = detail::pick_max_load(
        inst, proc_active, task_active, round.assignment.proc_of);
    const int p = peel.processor;
    for (int j : peel.tasks) {
      result.proc_of[j] = p;
      task_active[j] = 0;
    }
    proc_active[p] = 0;
    remaining -= static_cast<int>(peel.tasks.size());
    if (peel_trace) peel_trace->push_back({p, std::move(peel.tasks)});
  }

  LoadVector load = load_vector(inst, result);
  const double cap = inst.s_max * inst.deadline;
  std::string bottleneck;
  for (int i = 0; i < inst.m; ++i)
    if (load[i] > cap + kFeasTol)
      bottleneck += (bottleneck.empty() ? "" : ", ") + std::to_string(i + 1);
  if (!bottleneck.empty())
    throw InfeasibleError(
        "no feasible uniform schedule: the optimal min-max load still exceeds "
        "s_max*C = " + std::to_string(cap) + " on processor(s) " + bottleneck);
  return result;
}

}  // namespace esched
