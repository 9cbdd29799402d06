// Dependent rounding of a fractional assignment. The support graph puts an
// edge (i,j) wherever x_ij > 0 with weight x_ij*w_j; cycle canceling shifts
// +-epsilon around each cycle (alternating edge classes) until the graph is a
// forest, preserving every per-processor and per-task weight total; forest
// rounding then fixes near-integral tasks and matches each remaining task to
// its least-loaded child processor. fdr chains relaxation -> support graph ->
// cycle breaking -> forest rounding.
#pragma once

#include <utility>

#include "esched/core.hpp"
#include "esched/relax.hpp"

namespace esched {

// Numerical clamps for fractional entries: below kWeightZeroTol is zero,
// above kNearOne is one.
inline constexpr double kWeightZeroTol = 1e-12;
inline constexpr double kNearOne = 1.0 - 1e-12;

struct SupportGraph {
  struct Edge {
    int proc = 0;
    int task = 0;
    double weight = 0.0;  // x_ij * w_j
  };
  int m = 0;
  int n = 0;
  std::vector<Edge> edges;
};

struct RoundingTrace {
  int cycles_broken = 0;
  std::vector<double> epsilon_sequence;
  int phase1_fixed = 0;                       // tasks fixed at x ~ 1
  std::vector<std::pair<int, int>> matched;   // (task, processor) pairs
  double max_fractional_w = 0.0;              // max w_j over phase-2 tasks
  LoadVector phase2_loads;                    // fractional loads at phase-2 start
};

inline SupportGraph build_support_graph(const Instance& inst,
                                        const FractionalAssignment& fx) {
  if (static_cast<int>(fx.x.size()) != inst.n())
    throw std::invalid_argument("fractional assignment does not match instance");
  SupportGraph g;
  g.m = inst.m;
  g.n = inst.n();
  for (int j = 0; j < inst.n(); ++j) {
    const Task& t = inst.tasks[j];
    for (size_t k = 0; k < t.eligible.size(); ++k)
      if (fx.x[j][k] > kWeightZeroTol)
        g.edges.push_back({t.eligible[k], j, fx.x[j][k] * t.work});
  }
  return g;
}

inline bool is_acyclic(const SupportGraph& g) {
  std::vector<int> root(g.m + g.n);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  for (const auto& e : g.edges) {
    int a = find(e.proc), b = find(g.m + e.task);
    if (a == b) return false;
    root[a] = b;
  }
  return true;
}

namespace detail {

// Finds one cycle by depth-first search from the lowest-index node. Returns
// edge indices in an order that walks the cycle (consecutive edges share a
// vertex); empty if the graph is a forest. Nodes: processors 0..m-1, task j
// at m+j.
inline std::vector<int> find_cycle(const SupportGraph& g) {
  const int nodes = g.m + g.n;
  std::vector<std::vector<int>> adj(nodes);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    adj[g.edges[e].proc].push_back(e);
    adj[g.m + g.edges[e].task].push_back(e);
  }
  std::vector<int> state(nodes, 0);  // 0 new, 1 on stack, 2 done
  std::vector<int> parent_edge(nodes, -1);
  auto other = [&](int e, int v) {
    return v == g.edges[e].proc ? g.m + g.edges[e].task : g.edges[e].proc;
  };
  for (int s = 0; s < nodes; ++s) {
    if (state[s] != 0) continue;
    std::vector<std::pair<int, size_t>> stack{{s, 0}};
    state[s] = 1;
    while (!stack.empty()) {
      auto& [u, it] = stack.back();
      if (it == adj[u].size()) {
        state[u] = 2;
        stack.pop_back();
        continue;
      }
      int e = adj[u][it++];
      if (e == parent_edge[u]) continue;
      int v = other(e, u);
      if (state[v] == 0) {
        state[v] = 1;
        parent_edge[v] = e;
        stack.emplace_back(v, 0);
      } else if (state[v] == 1) {
        // Cycle: walk the tree path u -> ... -> v, then close with e.
        std::vector<int> cyc;
        for (int cur = u; cur != v; cur = other(parent_edge[cur], cur))
          cyc.push_back(parent_edge[cur]);
        cyc.push_back(e);
        return cyc;
      }
    }
  }
  return {};
}

}  // namespace detail

// Cancels cycles one at a time: epsilon is the minimum weight over the whole
// cycle; the alternating edge class containing that minimum loses epsilon and
// the other class gains it, so every cycle vertex (one edge in each class)
// keeps its incident weight total. Zeroed edges are removed, guaranteeing
// progress. When `trace` is given, cycles_broken and epsilon_sequence are
// accumulated into it.
inline SupportGraph break_cycles(SupportGraph g, RoundingTrace* trace = nullptr) {
  for (;;) {
    std::vector<int> cyc = detail::find_cycle(g);
    if (cyc.empty()) break;
    size_t arg = 0;
    for (size_t p = 1; p < cyc.size(); ++p)
      if (g.edges[cyc[p]].weight < g.edges[cyc[arg]].weight) arg = p;
    const double eps = g.edges[cyc[arg]].weight;
    for (size_t p = 0; p < cyc.size(); ++p)
      g.edges[cyc[p]].weight += (p % 2 == arg % 2) ? -eps : eps;
    if (trace) {
      ++trace->cycles_broken;
      trace->epsilon_sequence.push_back(eps);
    }
    std::erase_if(g.edges,
                  [](const SupportGraph::Edge& e) { return e.weight <= kWeightZeroTol; });
  }
  return g;
}

// Rounds a forest-shaped fractional solution to an integral assignment.
// Phase 1 fixes every task with an edge at fraction >= 1-1e-12. Phase 2 roots
// each remaining tree at its lowest-index task node and matches every task to
// the child processor with the smallest running integral load (ties: lowest
// index). A processor node has exactly one parent task, so the matching adds
// at most one task per processor.
inline std::pair<Assignment, RoundingTrace> round_forest(
    const Instance& inst, const SupportGraph& g, const FractionalAssignment& fx) {
  require_valid_instance(inst);
  if (static_cast<int>(fx.x.size()) != inst.n())
    throw std::invalid_argument("fractional assignment does not match instance");
  const int m = inst.m, n = inst.n();

  std::vector<std::vector<int>> task_edges(n), proc_edges(m);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (!is_eligible(inst.tasks[g.edges[e].task], g.edges[e].proc))
      throw std::invalid_argument("support edge outside the eligibility set");
    task_edges[g.edges[e].task].push_back(e);
    proc_edges[g.edges[e].proc].push_back(e);
  }

  Assignment a;
  a.proc_of.assign(n, -1);
  RoundingTrace tr;
  LoadVector load(m, 0.0);  // running integral load
  std::vector<char> fixed(n, 0);
  for (int j = 0; j < n; ++j) {
    if (task_edges[j].empty())
      throw std::logic_error("task " + std::to_string(j + 1) +
                             " has no support edge left in the forest");
    for (int e : task_edges[j])
      if (g.edges[e].weight / inst.tasks[j].work >= kNearOne) {
        a.proc_of[j] = g.edges[e].proc;
        fixed[j] = 1;
        break;
      }
    if (fixed[j]) {
      load[a.proc_of[j]] += inst.tasks[j].work;
      ++tr.phase1_fixed;
    }
  }

  tr.phase2_loads = load;
  for (const auto& e : g.edges)
    if (!fixed[e.task]) tr.phase2_loads[e.proc] += e.weight;
  for (int j = 0; j < n; ++j)
    if (!fixed[j]) {
      if (task_edges[j].size() < 2)
        throw std::logic_error("fractional task " + std::to_string(j + 1) +
                               " has degree below 2 in the forest");
      tr.max_fractional_w = std::max(tr.max_fractional_w, inst.tasks[j].work);
    }

  // Parent pointers in each tree of the fractional subgraph; scanning tasks
  // in ascending index makes the first task seen in each component its root.
  std::vector<int> parent_proc(n, -1);
  std::vector<char> seen_task(n, 0), seen_proc(m, 0);
  std::vector<int> queue;
  for (int r = 0; r < n; ++r) {
    if (fixed[r] || seen_task[r]) continue;
    seen_task[r] = 1;
    queue.assign(1, r);
    while (!queue.empty()) {
      int j = queue.back();
      queue.pop_back();
      for (int e : task_edges[j]) {
        int i = g.edges[e].proc;
        if (i == parent_proc[j] || seen_proc[i]) continue;
        seen_proc[i] = 1;
        for (int e2 : proc_edges[i]) {
          int j2 = g.edges[e2].task;
          if (fixed[j2] || seen_task[j2]) continue;
          seen_task[j2] = 1;
          parent_proc[j2] = i;
          queue.push_back(j2);
        }
      }
    }
  }

  for (int j = 0; j < n; ++j) {
    if (fixed[j]) continue;
    int best = -1;
    for (int e : task_edges[j]) {
      int i = g.edges[e].proc;
      if (i == parent_proc[j]) continue;
      if (best < 0 || load[i] < load[best] || (load[i] == load[best] && i < best))
        best = i;
    }
    if (best < 0)
      throw std::logic_error("fractional task " + std::to_string(j + 1) +
                             " has no child processor to match");
    a.proc_of[j] = best;
    load[best] += inst.tasks[j].work;
    tr.matched.emplace_back(j, best);
  }
  return {std::move(a), std::move(tr)};
}

struct FdrResult {
  Assignment assignment;
  RoundingTrace trace;
  RelaxReport relax;
  FeasibilityReport feasibility;  // s_max violations are flagged, never hidden
};

// Full pipeline: relaxation, support graph, cycle breaking, forest rounding.
// The energy of the result is at most 2^{alpha-1} * (2 - 1/p^alpha) times the
// fractional objective with p = max_j |M_j|. Capacity violations (possible
// when s_max*C < smax_guarantee) are reported in `feasibility`.
inline FdrResult fdr(const Instance& inst, double tol = 1e-7) {
  FdrResult res;
  auto [fx, rep] = solve_relaxation(inst, tol);
  res.relax = rep;
  SupportGraph g = build_support_graph(inst, fx);
  RoundingTrace cyc;
  g = break_cycles(std::move(g), &cyc);
  auto [a, tr] = round_forest(inst, g, fx);
  res.assignment = std::move(a);
  res.trace = std::move(tr);
  res.trace.cycles_broken = cyc.cycles_broken;
  res.trace.epsilon_sequence = std::move(cyc.epsilon_sequence);
  res.feasibility = check_feasibility(inst, res.assignment);
  return res;
}

// Feasibility guarantee: if s_max*C is at least this value, fdr's output
// never violates the capacity constraint. The first term is the largest
// uniform-spread load max_i sum_{j: i in M_j} w_j/|M_j|.
inline double smax_guarantee(const Instance& inst) {
  require_valid_instance(inst);
  LoadVector l(inst.m, 0.0);
  double wmax = 0.0;
  for (const Task& t : inst.tasks) {
    wmax = std::max(wmax, t.work);
    for (int i : t.eligible)
      l[i] += t.work / static_cast<double>(t.eligible.size());
  }
  return *std::max_element(l.begin(), l.end()) + wmax;
}

}  // namespace esched
