#include <catch2/catch_amalgamated.hpp>

#include "esched/baselines.hpp"
#include "esched/rounding.hpp"
#include "esched/uniform.hpp"
#include "test_helpers.hpp"

using namespace esched;

TEST_CASE("lfj places constrained tasks first") {
  Instance inst = th::make(2, {{3.0, {0}}, {1.0, {0, 1}}});
  Assignment a = lfj(inst);
  CHECK(a.proc_of == std::vector<int>{0, 1});
  CHECK(load_vector(inst, a) == LoadVector{3.0, 1.0});
}

TEST_CASE("lfj is forced when every task names one processor") {
  Instance inst = th::make(3, {{1.0, {2}}, {2.0, {0}}, {3.0, {2}}});
  Assignment a = lfj(inst);
  CHECK(a.proc_of == std::vector<int>{2, 0, 2});
}

TEST_CASE("lfj balances equal works under full eligibility") {
  const double w = 4.0;
  Instance inst = th::make(
      2, {{w, {0, 1}}, {w, {0, 1}}, {w, {0, 1}}, {w, {0, 1}}});
  LoadVector load = load_vector(inst, lfj(inst));
  CHECK(load == LoadVector{2 * w, 2 * w});
}

TEST_CASE("lfj ignores labels of identical tasks") {
  Instance inst = th::make(3, {{2.0, {0, 1}}, {2.0, {0, 1}}, {5.0, {1, 2}},
                               {5.0, {1, 2}}});
  LoadVector base = load_vector(inst, lfj(inst));
  // Swap the two identical (w, M) pairs; the load profile must not change.
  Instance swapped = inst;
  std::swap(swapped.tasks[0], swapped.tasks[1]);
  std::swap(swapped.tasks[2], swapped.tasks[3]);
  CHECK(load_vector(swapped, lfj(swapped)) == base);
}

TEST_CASE("lfm lets the least flexible processor pick the largest task") {
  Instance inst = th::make(2, {{3.0, {0, 1}}, {1.0, {0, 1}}});
  Assignment a = lfm(inst);
  CHECK(a.proc_of == std::vector<int>{0, 1});
  CHECK(load_vector(inst, a) == LoadVector{3.0, 1.0});
}

TEST_CASE("lfm gives everything to a single processor") {
  Instance inst = th::make(1, {{1.0, {0}}, {2.0, {0}}, {3.0, {0}}});
  Assignment a = lfm(inst);
  CHECK(a.proc_of == std::vector<int>{0, 0, 0});
}

TEST_CASE("lfm orders processors by eligible-task count") {
  // P1 can run one task, P2 two; P1 moves first and grabs J2.
  Instance inst = th::make(2, {{1.0, {1}}, {1.0, {0, 1}}});
  Assignment a = lfm(inst);
  CHECK(a.proc_of == std::vector<int>{1, 0});
}

TEST_CASE("lfj and lfm always produce eligible complete assignments") {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 100; ++trial) {
    Instance inst = th::random_general_instance(rng);
    for (const Assignment& a : {lfj(inst), lfm(inst)}) {
      auto report = check_feasibility(inst, a);
      for (const std::string& v : report.violations)
        CHECK(v.find("exceeds") != std::string::npos);  // only capacity may trip
    }
  }
}

TEST_CASE("brute_force_opt solves the chain example") {
  Instance inst = th::make(2, {{1.0, {0}}, {1.0, {0, 1}}, {1.0, {1}}});
  Assignment a = brute_force_opt(inst);
  CHECK(energy(inst, a) == 5.0);
}

TEST_CASE("brute_force_opt returns the forced assignment") {
  Instance inst = th::make(3, {{1.0, {1}}, {2.0, {2}}});
  Assignment a = brute_force_opt(inst);
  CHECK(a.proc_of == std::vector<int>{1, 2});
}

TEST_CASE("brute_force_opt splits two unit tasks") {
  Instance inst = th::make(2, {{1.0, {0, 1}}, {1.0, {0, 1}}});
  Assignment a = brute_force_opt(inst);
  CHECK(energy(inst, a) == 2.0);
  CHECK(a.proc_of == std::vector<int>{0, 1});  // lexicographic tie-break
}

TEST_CASE("brute_force_opt respects its state budget") {
  std::vector<std::pair<double, std::vector<int>>> tasks;
  for (int j = 0; j < 10; ++j) tasks.emplace_back(1.0, std::vector<int>{0, 1});
  Instance inst = th::make(2, std::move(tasks));
  OracleBudget tiny{100};
  try {
    brute_force_opt(inst, tiny);
    FAIL("expected BudgetExceededError");
  } catch (const BudgetExceededError& e) {
    CHECK(std::string(e.what()).find("fdr") != std::string::npos);
  }
}

TEST_CASE("brute_force_minmax matches hand values") {
  CHECK(brute_force_minmax(
            th::make(2, {{1.0, {0}}, {1.0, {0, 1}}, {1.0, {1}}})) == 2);
  CHECK(brute_force_minmax(th::make(2, {{1.0, {0, 1}},
                                        {1.0, {0, 1}},
                                        {1.0, {0, 1}},
                                        {1.0, {0, 1}}})) == 2);
  CHECK(brute_force_minmax(th::make(2, {{1.0, {0}}, {1.0, {0}}, {1.0, {0}}})) ==
        3);
}

TEST_CASE("brute_force_minmax requires uniform works") {
  Instance inst = th::make(2, {{1.0, {0}}, {2.0, {1}}});
  CHECK_THROWS_AS(brute_force_minmax(inst), std::invalid_argument);
}

TEST_CASE("the oracle lower-bounds every heuristic") {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 60; ++trial) {
    Instance inst = th::random_general_instance(rng);
    const double opt = energy(inst, brute_force_opt(inst));
    CHECK(opt <= energy(inst, lfj(inst)) * (1.0 + 1e-12));
    CHECK(opt <= energy(inst, lfm(inst)) * (1.0 + 1e-12));
    CHECK(opt <= energy(inst, fdr(inst).assignment) * (1.0 + 1e-12));
  }
}

TEST_CASE("ecsemrpp agrees with the oracle on uniform instances") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    Instance inst = th::random_uniform_instance(rng);
    CHECK(th::close(energy(inst, ecsemrpp(inst)),
                    energy(inst, brute_force_opt(inst))));
  }
}
