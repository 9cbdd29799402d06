// Bipartite flow network used by the uniform-task solver. Nodes are
// source -> processors -> tasks -> sink; eligibility and sink edges carry
// unit capacity, source edges a shared adjustable capacity c. Max-flow is
// Dinic's algorithm; an integral flow of value n decodes to an assignment
// in which no processor holds more than c tasks.
#pragma once

#include <limits>
#include <queue>
#include <vector>

#include "esched/core.hpp"

namespace esched {

class FlowNetwork {
 public:
  // Node layout: 0 = source, 1..m = processors, m+1..m+n = tasks, m+n+1 = sink.
  FlowNetwork(int m, int n) : m_(m), n_(n), adj_(m + n + 2) {}

  int source() const { return 0; }
  int sink() const { return m_ + n_ + 1; }
  int proc_node(int i) const { return 1 + i; }
  int task_node(int j) const { return 1 + m_ + j; }

  void add_source_edge(int proc, long long cap) {
    source_edges_.push_back({proc, add_edge(source(), proc_node(proc), cap)});
  }
  void add_eligibility_edge(int proc, int task) {
    elig_edges_.push_back({proc, task, add_edge(proc_node(proc), task_node(task), 1)});
  }
  void add_sink_edge(int task) { add_edge(task_node(task), sink(), 1); }

  // Rewrites the capacity of every (source -> processor) edge.
  void set_source_capacity(long long c) {
    for (const auto& se : source_edges_) arcs_[se.arc].orig = c;
  }

  int edge_count() const { return static_cast<int>(arcs_.size() / 2); }

  struct Result {
    long long value = 0;
    std::vector<int> task_to_proc;  // -1 where unmatched
  };

  // Runs Dinic from a clean slate and decodes the matching carried on the
  // saturated eligibility edges.
  Result max_flow() {
    for (Arc& a : arcs_) a.cap = a.orig;
    const int s = source(), t = sink(), nodes = m_ + n_ + 2;
    std::vector<int> level(nodes), it(nodes);
    long long total = 0;
    while (bfs_levels(level)) {
      std::fill(it.begin(), it.end(), 0);
      while (long long pushed = dfs_push(s, t, std::numeric_limits<long long>::max(), level, it))
        total += pushed;
    }
    Result r;
    r.value = total;
    r.task_to_proc.assign(n_, -1);
    for (const auto& ee : elig_edges_)
      if (arcs_[ee.arc].cap == 0) r.task_to_proc[ee.task] = ee.proc;
    return r;
  }

 private:
  struct Arc {
    int to;
    long long cap;   // residual capacity during a run
    long long orig;  // capacity the next run starts from
    int rev;         // global index of the reverse arc
  };

  int add_edge(int u, int v, long long cap) {
    int id = static_cast<int>(arcs_.size());
    adj_[u].push_back(id);
    arcs_.push_back({v, cap, cap, id + 1});
    adj_[v].push_back(id + 1);
    arcs_.push_back({u, 0, 0, id});
    return id;
  }

  bool bfs_levels(std::vector<int>& level) {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[source()] = 0;
    q.push(source());
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int id : adj_[u]) {
        const Arc& a = arcs_[id];
        if (a.cap > 0 && level[a.to] < 0) {
          level[a.to] = level[u] + 1;
          q.push(a.to);
        }
      }
    }
    return level[sink()] >= 0;
  }

  long long dfs_push(int u, int t, long long f, const std::vector<int>& level,
                     std::vector<int>& it) {
    if (u == t) return f;
    for (int& i = it[u]; i < static_cast<int>(adj_[u].size()); ++i) {
      Arc& a = arcs_[adj_[u][i]];
      if (a.cap > 0 && level[a.to] == level[u] + 1) {
        long long pushed = dfs_push(a.to, t, std::min(f, a.cap), level, it);
        if (pushed > 0) {
          a.cap -= pushed;
          arcs_[a.rev].cap += pushed;
          return pushed;
        }
      }
    }
    return 0;
  }

  struct SourceEdge {
    int proc;
    int arc;
  };
  struct EligEdge {
    int proc;
    int task;
    int arc;
  };

  int m_, n_;
  std::vector<std::vector<int>> adj_;  // node -> arc ids
  std::vector<Arc> arcs_;
  std::vector<SourceEdge> source_edges_;
  std::vector<EligEdge> elig_edges_;
};

inline void require_uniform_works(const Instance& inst) {
  for (const Task& t : inst.tasks)
    if (t.work != inst.tasks[0].work)
      throw std::invalid_argument("uniform solver requires equal works");
}

// Builds the three-layer network over the whole instance with source
// capacity c on every (source -> processor) edge.
inline FlowNetwork build_network(const Instance& inst, long long c) {
  require_uniform_works(inst);
  if (c < 0) throw std::invalid_argument("source capacity must be nonnegative");
  FlowNetwork net(inst.m, inst.n());
  for (int i = 0; i < inst.m; ++i) net.add_source_edge(i, c);
  for (int j = 0; j < inst.n(); ++j)
    for (int i : inst.tasks[j].eligible) net.add_eligibility_edge(i, j);
  for (int j = 0; j < inst.n(); ++j) net.add_sink_edge(j);
  return net;
}

}  // namespace esched
