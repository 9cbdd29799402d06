// JSON serialization. Instance files store processor indices 1-based; the
// in-memory representation is 0-based. All emitters use ordered_json so a
// given value always serializes to the same bytes.
#pragma once

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "esched/core.hpp"
#include "esched/relax.hpp"
#include "esched/rounding.hpp"

namespace esched {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline double get_number(const ordered_json& j, const std::string& field,
                         const std::string& where) {
  if (!j.contains(field))
    throw std::runtime_error(where + ": missing field '" + field + "'");
  if (!j[field].is_number())
    throw std::runtime_error(where + ": field '" + field + "' must be a number");
  return j[field].get<double>();
}

}  // namespace detail

inline Instance instance_from_json(const ordered_json& j,
                                   const std::string& where = "instance") {
  Instance inst;
  inst.m = static_cast<int>(detail::get_number(j, "m", where));
  inst.deadline = detail::get_number(j, "C", where);
  inst.s_max = detail::get_number(j, "s_max", where);
  inst.alpha = detail::get_number(j, "alpha", where);
  if (!j.contains("tasks") || !j["tasks"].is_array())
    throw std::runtime_error(where + ": missing field 'tasks' (array)");
  int line = 0;
  for (const auto& tj : j["tasks"]) {
    ++line;
    const std::string here = where + ": tasks[" + std::to_string(line) + "]";
    Task t;
    t.work = detail::get_number(tj, "w", here);
    if (!tj.contains("eligible") || !tj["eligible"].is_array())
      throw std::runtime_error(here + ": missing field 'eligible' (array)");
    for (const auto& e : tj["eligible"]) {
      if (!e.is_number_integer())
        throw std::runtime_error(here + ": field 'eligible' must hold integers");
      t.eligible.push_back(e.get<int>() - 1);  // 1-based on disk
    }
    inst.tasks.push_back(std::move(t));
  }
  normalize_eligibility(inst);
  auto errors = validate_instance(inst);
  if (!errors.empty())
    throw std::runtime_error(where + ": " + errors.front());
  return inst;
}

inline ordered_json instance_to_json(const Instance& inst) {
  ordered_json j;
  j["m"] = inst.m;
  j["C"] = inst.deadline;
  j["s_max"] = inst.s_max;
  j["alpha"] = inst.alpha;
  j["tasks"] = ordered_json::array();
  for (const Task& t : inst.tasks) {
    ordered_json tj;
    tj["w"] = t.work;
    auto el = ordered_json::array();
    for (int i : t.eligible) el.push_back(i + 1);
    tj["eligible"] = std::move(el);
    j["tasks"].push_back(std::move(tj));
  }
  return j;
}

inline Instance parse_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("instance file " + path + ": " + e.what());
  }
  return instance_from_json(j, "instance file " + path);
}

inline void write_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path);
  out << instance_to_json(inst).dump(2) << '\n';
}

// Integral solution: 1-based (task, processor) pairs plus derived quantities.
inline ordered_json assignment_to_json(const Instance& inst, const Assignment& a) {
  ordered_json j;
  auto pairs = ordered_json::array();
  for (int t = 0; t < inst.n(); ++t) {
    ordered_json p;
    p["task"] = t + 1;
    p["processor"] = a.proc_of[t] + 1;
    pairs.push_back(std::move(p));
  }
  j["assignment"] = std::move(pairs);
  LoadVector load = load_vector(inst, a);
  j["loads"] = load;
  j["speeds"] = speeds(inst, a);
  j["energy"] = energy_of_loads(load, inst.deadline, inst.alpha);
  return j;
}

// Fractional solution in the same shape with real-valued shares per task.
inline ordered_json fractional_to_json(const Instance& inst,
                                       const FractionalAssignment& fx) {
  ordered_json j;
  auto rows = ordered_json::array();
  for (int t = 0; t < inst.n(); ++t) {
    auto row = ordered_json::array();
    for (size_t k = 0; k < inst.tasks[t].eligible.size(); ++k) {
      ordered_json cell;
      cell["proc"] = inst.tasks[t].eligible[k] + 1;
      cell["value"] = fx.x[t][k];
      row.push_back(std::move(cell));
    }
    rows.push_back(std::move(row));
  }
  j["x"] = std::move(rows);
  j["loads"] = fractional_loads(inst, fx);
  j["objective"] = fractional_objective(inst, fx);
  return j;
}

inline ordered_json trace_to_json(const RoundingTrace& tr) {
  ordered_json j;
  j["cycles_broken"] = tr.cycles_broken;
  j["epsilon_sequence"] = tr.epsilon_sequence;
  j["phase1_fixed"] = tr.phase1_fixed;
  auto matched = ordered_json::array();
  for (auto [task, proc] : tr.matched) {
    ordered_json pair;
    pair["task"] = task + 1;
    pair["proc"] = proc + 1;
    matched.push_back(std::move(pair));
  }
  j["matched"] = std::move(matched);
  j["max_fractional_w"] = tr.max_fractional_w;
  j["phase2_loads"] = tr.phase2_loads;
  return j;
}

}  // namespace esched
