#include <catch2/catch_amalgamated.hpp>

#include "esched/baselines.hpp"
#include "esched/rounding.hpp"
#include "test_helpers.hpp"

using namespace esched;

namespace {

LoadVector proc_weight_totals(const SupportGraph& g) {
  LoadVector totals(g.m, 0.0);
  for (const auto& e : g.edges) totals[e.proc] += e.weight;
  return totals;
}

LoadVector task_weight_totals(const SupportGraph& g) {
  LoadVector totals(g.n, 0.0);
  for (const auto& e : g.edges) totals[e.task] += e.weight;
  return totals;
}

// A fractional solution spread uniformly, handy for making cycles.
FractionalAssignment uniform_x(const Instance& inst) {
  FractionalAssignment fx;
  for (const Task& t : inst.tasks)
    fx.x.emplace_back(t.eligible.size(), 1.0 / t.eligible.size());
  return fx;
}

}  // namespace

TEST_CASE("an integral x builds a perfect matching") {
  Instance inst = th::make(2, {{1.0, {0}}, {2.0, {1}}});
  FractionalAssignment fx;
  fx.x = {{1.0}, {1.0}};
  SupportGraph g = build_support_graph(inst, fx);
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0].weight == 1.0);
  CHECK(g.edges[1].weight == 2.0);
  CHECK(is_acyclic(g));
}

TEST_CASE("a split task contributes one weighted edge per share") {
  Instance inst = th::make(2, {{2.0, {0, 1}}});
  FractionalAssignment fx;
  fx.x = {{0.5, 0.5}};
  SupportGraph g = build_support_graph(inst, fx);
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0].weight == 1.0);
  CHECK(g.edges[1].weight == 1.0);
}

TEST_CASE("two tasks split over the same processors form a cycle") {
  Instance inst = th::make(2, {{1.0, {0, 1}}, {1.0, {0, 1}}});
  SupportGraph g = build_support_graph(inst, uniform_x(inst));
  CHECK(g.edges.size() == 4);
  CHECK_FALSE(is_acyclic(g));
}

TEST_CASE("tiny shares are treated as zero") {
  Instance inst = th::make(2, {{1.0, {0, 1}}});
  FractionalAssignment fx;
  fx.x = {{1.0 - 1e-13, 1e-13}};
  SupportGraph g = build_support_graph(inst, fx);
  CHECK(g.edges.size() == 1);
}

TEST_CASE("break_cycles turns an all-half 4-cycle into a matching") {
  Instance inst = th::make(2, {{1.0, {0, 1}}, {1.0, {0, 1}}});
  SupportGraph g = build_support_graph(inst, uniform_x(inst));
  LoadVector procs_before = proc_weight_totals(g);
  RoundingTrace tr;
  SupportGraph f = break_cycles(g, &tr);
  CHECK(is_acyclic(f));
  CHECK(f.edges.size() == 2);
  CHECK(tr.cycles_broken == 1);
  REQUIRE(tr.epsilon_sequence.size() == 1);
  CHECK(tr.epsilon_sequence[0] == 0.5);
  CHECK(proc_weight_totals(f) == procs_before);         // loads (1,1)
  CHECK(task_weight_totals(f) == LoadVector{1.0, 1.0});  // integral matching
}

TEST_CASE("break_cycles leaves a forest unchanged") {
  Instance inst = th::make(2, {{1.0, {0}}, {2.0, {1}}});
  FractionalAssignment fx;
  fx.x = {{1.0}, {1.0}};
  SupportGraph g = build_support_graph(inst, fx);
  SupportGraph f = break_cycles(g);
  REQUIRE(f.edges.size() == g.edges.size());
  for (size_t e = 0; e < g.edges.size(); ++e)
    CHECK(f.edges[e].weight == g.edges[e].weight);
}

TEST_CASE("break_cycles removes one edge from an uneven 4-cycle") {
  Instance inst = th::make(2, {{1.0, {0, 1}}, {1.0, {0, 1}}});
  FractionalAssignment fx;
  fx.x = {{0.75, 0.25}, {0.75, 0.25}};
  SupportGraph g = build_support_graph(inst, fx);
  LoadVector procs_before = proc_weight_totals(g);
  LoadVector tasks_before = task_weight_totals(g);
  RoundingTrace tr;
  SupportGraph f = break_cycles(g, &tr);
  CHECK(is_acyclic(f));
  CHECK(f.edges.size() == 3);
  CHECK(tr.cycles_broken == 1);
  REQUIRE(tr.epsilon_sequence.size() == 1);
  CHECK(tr.epsilon_sequence[0] == 0.25);
  CHECK(proc_weight_totals(f) == procs_before);
  CHECK(task_weight_totals(f) == tasks_before);
}

TEST_CASE("break_cycles conserves weight totals on random inputs") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 100; ++trial) {
    Instance inst = th::random_general_instance(rng, 2.0, 4, 8);
    SupportGraph g = build_support_graph(inst, uniform_x(inst));
    LoadVector procs_before = proc_weight_totals(g);
    LoadVector tasks_before = task_weight_totals(g);
    const size_t edges_before = g.edges.size();
    RoundingTrace tr;
    SupportGraph f = break_cycles(g, &tr);
    CHECK(is_acyclic(f));
    CHECK(f.edges.size() + tr.cycles_broken <= edges_before);
    LoadVector procs_after = proc_weight_totals(f);
    LoadVector tasks_after = task_weight_totals(f);
    for (int i = 0; i < inst.m; ++i)
      CHECK(procs_after[i] == Catch::Approx(procs_before[i]).margin(1e-9));
    for (int j = 0; j < inst.n(); ++j)
      CHECK(tasks_after[j] == Catch::Approx(tasks_before[j]).margin(1e-9));
    for (double eps : tr.epsilon_sequence) CHECK(eps > 0.0);
  }
}

TEST_CASE("round_forest matches a split task to its lighter processor") {
  // J1 (w=2) split over P1 and P2; P1 already carries 3, P2 carries 1.
  Instance inst = th::make(2, {{2.0, {0, 1}}, {3.0, {0}}, {1.0, {1}}});
  FractionalAssignment fx;
  fx.x = {{0.5, 0.5}, {1.0}, {1.0}};
  SupportGraph g = build_support_graph(inst, fx);
  auto [a, tr] = round_forest(inst, g, fx);
  CHECK(a.proc_of == std::vector<int>{1, 0, 1});
  CHECK(tr.phase1_fixed == 2);
  REQUIRE(tr.matched.size() == 1);
  CHECK(tr.matched[0] == std::pair<int, int>{0, 1});
  CHECK(tr.max_fractional_w == 2.0);
  CHECK(load_vector(inst, a)[1] == 3.0);
}

TEST_CASE("round_forest with an integral input is phase 1 only") {
  Instance inst = th::make(2, {{1.0, {0}}, {2.0, {1}}});
  FractionalAssignment fx;
  fx.x = {{1.0}, {1.0}};
  SupportGraph g = build_support_graph(inst, fx);
  auto [a, tr] = round_forest(inst, g, fx);
  CHECK(a.proc_of == std::vector<int>{0, 1});
  CHECK(tr.phase1_fixed == 2);
  CHECK(tr.matched.empty());
  CHECK(tr.max_fractional_w == 0.0);
}

TEST_CASE("round_forest breaks argmin ties toward the lowest index") {
  // One task fractional over three processors with phase-1 loads (5,2,2).
  Instance inst = th::make(3, {{1.0, {0, 1, 2}}, {5.0, {0}}, {2.0, {1}},
                               {2.0, {2}}});
  FractionalAssignment fx;
  fx.x = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0}, {1.0}, {1.0}};
  SupportGraph g = build_support_graph(inst, fx);
  auto [a, tr] = round_forest(inst, g, fx);
  CHECK(a.proc_of[0] == 1);  // ties at load 2 resolve to the lower index
}

TEST_CASE("round_forest rejects a fractional task with no edges") {
  Instance inst = th::make(2, {{1.0, {0, 1}}});
  FractionalAssignment fx;
  fx.x = {{0.5, 0.5}};
  SupportGraph g;  // empty graph: inconsistent with fx
  g.m = 2;
  g.n = 1;
  CHECK_THROWS_AS(round_forest(inst, g, fx), std::logic_error);
}

TEST_CASE("fdr solves the uniform chain optimally") {
  Instance inst = th::make(2, {{1.0, {0}}, {1.0, {0, 1}}, {1.0, {1}}});
  FdrResult res = fdr(inst);
  CHECK(energy(inst, res.assignment) == 5.0);
  CHECK(res.feasibility.ok());
}

TEST_CASE("fdr on a single processor is exact") {
  Instance inst = th::make(1, {{2.0, {0}}, {3.0, {0}}});
  FdrResult res = fdr(inst);
  CHECK(energy(inst, res.assignment) ==
        Catch::Approx(res.relax.objective).epsilon(1e-12));
}

TEST_CASE("fdr respects the approximation bound against brute force") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    for (double alpha : {1.5, 2.0, 3.0}) {
      Instance inst = th::random_general_instance(rng, alpha);
      FdrResult res = fdr(inst);
      require_valid_assignment(inst, res.assignment);
      int p = 0;
      for (const Task& t : inst.tasks)
        p = std::max(p, static_cast<int>(t.eligible.size()));
      const double bound =
          std::pow(2.0, alpha - 1.0) * (2.0 - std::pow(1.0 / p, alpha));
      CHECK(energy(inst, res.assignment) <=
            th::min_energy(inst) * bound * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("fdr load growth stays below the max fractional work") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 100; ++trial) {
    Instance inst = th::random_general_instance(rng, 2.0, 4, 8);
    FdrResult res = fdr(inst);
    LoadVector final_load = load_vector(inst, res.assignment);
    REQUIRE(res.trace.phase2_loads.size() == static_cast<size_t>(inst.m));
    for (int i = 0; i < inst.m; ++i)
      CHECK(final_load[i] <
            res.trace.phase2_loads[i] + res.trace.max_fractional_w + 1e-9);
  }
}

TEST_CASE("fdr flags capacity violations instead of hiding them") {
  // Cap below what any integral schedule needs: loads must exceed s_max*C.
  Instance inst = th::make(2, {{2.0, {0, 1}}, {2.0, {0, 1}}, {2.0, {0, 1}}},
                           1.0, 2.0, 3.2);
  FdrResult res = fdr(inst);
  REQUIRE_FALSE(res.feasibility.ok());
  CHECK(res.feasibility.violations[0].find("exceeds") != std::string::npos);
}

TEST_CASE("the 3.5 bound at alpha=2, p=2 holds on random full instances") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<double, std::vector<int>>> tasks;
    for (int j = 0; j < 5; ++j)
      tasks.emplace_back(1.0 + static_cast<double>(rng() % 10),
                         std::vector<int>{0, 1});
    Instance inst = th::make(2, std::move(tasks));
    FdrResult res = fdr(inst);
    CHECK(energy(inst, res.assignment) <=
          th::min_energy(inst) * 3.5 * (1.0 + 1e-9));
  }
}

TEST_CASE("smax_guarantee is max spread load plus max work") {
  Instance inst = th::make(2, {{2.0, {0}}, {2.0, {0, 1}}});
  CHECK(smax_guarantee(inst) == 5.0);  // L = (3,1), max w = 2

  Instance one = th::make(1, {{7.0, {0}}});
  CHECK(smax_guarantee(one) == 14.0);

  const int m = 4, n = 8;
  std::vector<std::pair<double, std::vector<int>>> tasks;
  for (int j = 0; j < n; ++j) tasks.emplace_back(1.0, std::vector<int>{0, 1, 2, 3});
  Instance full = th::make(m, std::move(tasks));
  CHECK(smax_guarantee(full) == Catch::Approx(n / double(m) + 1.0).epsilon(1e-12));
}
