// Core data model for energy-minimal scheduling on restricted parallel
// processors: instances, integral assignments, loads, energy, feasibility.
//
// A processor running at speed s draws power s^alpha (alpha > 1). Every task
// must finish by the common deadline C on one of its eligible processors and
// may not migrate. Executing each processor's tasks at the single speed
// load/C and finishing exactly at C is energy-optimal, so the energy of an
// assignment reduces to sum_i load_i^alpha / C^(alpha-1).
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace esched {

// Absolute tolerance for comparing loads against the capacity s_max * C.
inline constexpr double kFeasTol = 1e-9;

// A solve cannot satisfy the processor capacity s_max * C.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An exhaustive oracle would enumerate more states than its budget allows.
struct BudgetExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One task: an amount of CPU cycles and the processors it may run on.
struct Task {
  double work = 1.0;          // cycles
  std::vector<int> eligible;  // 0-based processor indices, ascending, unique
};

// A scheduling instance. Indices are 0-based in memory; file formats and
// human-readable messages use 1-based processor/task numbers.
struct Instance {
  int m = 1;                  // processor count
  std::vector<Task> tasks;
  double deadline = 1.0;      // common deadline C
  double s_max = 1.0;         // speed cap, cycles per time unit
  double alpha = 2.0;         // power exponent, > 1

  int n() const { return static_cast<int>(tasks.size()); }
};

// Integral assignment: proc_of[j] is the processor running task j.
struct Assignment {
  std::vector<int> proc_of;
};

// Per-processor cycle totals.
using LoadVector = std::vector<double>;

// Sorts and dedups every eligibility list in place.
inline void normalize_eligibility(Instance& inst) {
  for (Task& t : inst.tasks) {
    std::sort(t.eligible.begin(), t.eligible.end());
    t.eligible.erase(std::unique(t.eligible.begin(), t.eligible.end()),
                     t.eligible.end());
  }
}

// Returns every invariant violation; an empty list means the instance is
// valid. Indices in messages are 1-based.
inline std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> errors;
  if (inst.m < 1) errors.push_back("m must be at least 1");
  if (inst.tasks.empty()) errors.push_back("instance has no tasks");
  if (!(inst.deadline > 0.0)) errors.push_back("deadline C must be positive");
  if (!(inst.s_max > 0.0)) errors.push_back("s_max must be positive");
  if (!(inst.alpha > 1.0)) errors.push_back("alpha must exceed 1");
  for (int j = 0; j < inst.n(); ++j) {
    const Task& t = inst.tasks[j];
    const std::string tj = "task " + std::to_string(j + 1);
    if (!(t.work > 0.0)) errors.push_back(tj + " has nonpositive work");
    if (t.eligible.empty()) errors.push_back(tj + " has an empty eligibility set");
    int prev = -1;
    for (int i : t.eligible) {
      if (i < 0 || i >= inst.m)
        errors.push_back(tj + " names out-of-range processor " + std::to_string(i + 1));
      else if (i == prev)
        errors.push_back(tj + " repeats processor " + std::to_string(i + 1));
      else if (i < prev)
        errors.push_back(tj + " eligibility set is not sorted");
      prev = i;
    }
  }
  return errors;
}

// Throws std::invalid_argument if the instance itself is invalid.
inline void require_valid_instance(const Instance& inst) {
  auto errors = validate_instance(inst);
  if (!errors.empty()) {
    std::string msg = "invalid instance:";
    for (const auto& e : errors) msg += " " + e + ";";
    throw std::invalid_argument(msg);
  }
}

inline bool is_eligible(const Task& t, int proc) {
  return std::binary_search(t.eligible.begin(), t.eligible.end(), proc);
}

// Throws std::invalid_argument unless `a` maps every task to an eligible
// processor.
inline void require_valid_assignment(const Instance& inst, const Assignment& a) {
  if (static_cast<int>(a.proc_of.size()) != inst.n())
    throw std::invalid_argument("assignment covers " +
                                std::to_string(a.proc_of.size()) + " of " +
                                std::to_string(inst.n()) + " tasks");
  for (int j = 0; j < inst.n(); ++j) {
    int p = a.proc_of[j];
    if (p < 0 || p >= inst.m)
      throw std::invalid_argument("task " + std::to_string(j + 1) +
                                  " assigned to out-of-range processor " +
                                  std::to_string(p + 1));
    if (!is_eligible(inst.tasks[j], p))
      throw std::invalid_argument("task " + std::to_string(j + 1) +
                                  " assigned outside its eligibility set");
  }
}

// load[i] = sum of works of the tasks mapped to processor i.
inline LoadVector load_vector(const Instance& inst, const Assignment& a) {
  require_valid_assignment(inst, a);
  LoadVector load(inst.m, 0.0);
  for (int j = 0; j < inst.n(); ++j) load[a.proc_of[j]] += inst.tasks[j].work;
  return load;
}

// Energy of a load vector: sum_i load_i^alpha / C^(alpha-1).
inline double energy_of_loads(const LoadVector& load, double deadline, double alpha) {
  double sum = 0.0;
  for (double l : load) sum += std::pow(l, alpha);
  return sum / std::pow(deadline, alpha - 1.0);
}

inline double energy(const Instance& inst, const Assignment& a) {
  return energy_of_loads(load_vector(inst, a), inst.deadline, inst.alpha);
}

// speed[i] = load[i] / C; processor i runs all of its tasks at this one
// speed and finishes exactly at the deadline.
inline std::vector<double> speeds(const Instance& inst, const Assignment& a) {
  LoadVector load = load_vector(inst, a);
  for (double& l : load) l /= inst.deadline;
  return load;
}

// Outcome of check_feasibility: a list of violated constraints, each naming
// the offending task or processor (1-based).
struct FeasibilityReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Verifies completeness, eligibility, and load_i <= s_max*C (+kFeasTol) for
// every processor. Never throws; violations are the return value.
inline FeasibilityReport check_feasibility(const Instance& inst, const Assignment& a) {
  FeasibilityReport rep;
  if (static_cast<int>(a.proc_of.size()) != inst.n()) {
    rep.violations.push_back("assignment covers " + std::to_string(a.proc_of.size()) +
                             " of " + std::to_string(inst.n()) + " tasks");
    return rep;
  }
  LoadVector load(inst.m, 0.0);
  for (int j = 0; j < inst.n(); ++j) {
    int p = a.proc_of[j];
    if (p < 0 || p >= inst.m) {
      rep.violations.push_back("task " + std::to_string(j + 1) +
                               " assigned to out-of-range processor " +
                               std::to_string(p + 1));
      continue;
    }
    if (!is_eligible(inst.tasks[j], p))
      rep.violations.push_back("task " + std::to_string(j + 1) +
                               " assigned to processor " + std::to_string(p + 1) +
                               " outside its eligibility set");
    load[p] += inst.tasks[j].work;
  }
  const double cap = inst.s_max * inst.deadline;
  for (int i = 0; i < inst.m; ++i)
    if (load[i] > cap + kFeasTol)
      rep.violations.push_back("processor " + std::to_string(i + 1) + " load " +
                               std::to_string(load[i]) + " exceeds s_max*C = " +
                               std::to_string(cap));
  return rep;
}

}  // namespace esched
