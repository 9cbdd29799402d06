// Command-line front end: generate writes seeded instances, solve runs one
// algorithm on an instance file, bench sweeps a parameter and emits a CSV.
// Exit codes: 0 success, 2 infeasibility, 1 any other error.
#include <iostream>

#include <CLI11.hpp>

#include "esched/bench.hpp"
#include "esched/io.hpp"

namespace {

void emit(const esched::ordered_json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

// Integral result envelope; returns 2 when the schedule breaks the speed cap.
int report_assignment(const esched::Instance& inst, const esched::Assignment& a,
                      const std::string& algo, esched::ordered_json extra = {}) {
  esched::ordered_json j;
  j["algo"] = algo;
  j["result"] = esched::assignment_to_json(inst, a);
  auto feas = esched::check_feasibility(inst, a);
  j["feasible"] = feas.ok();
  j["violations"] = feas.violations;
  for (auto& [k, v] : extra.items()) j[k] = v;
  std::cout << j.dump(2) << '\n';
  if (!feas.ok()) {
    std::cerr << "infeasible: schedule exceeds s_max*C; see violations\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"energy-minimal scheduling of non-migratory tasks on "
               "restricted parallel processors"};
  app.require_subcommand(1);

  // --- generate ---------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "write a seeded random instance");
  esched::GenParams gp;
  std::string gen_elig = "random", gen_out;
  gen->add_option("--m", gp.m, "processor count")->required();
  gen->add_option("--n", gp.n, "task count")->required();
  gen->add_option("--w-lo", gp.w_lo, "minimum work")->capture_default_str();
  gen->add_option("--w-hi", gp.w_hi, "maximum work")->capture_default_str();
  gen->add_option("--eligibility", gen_elig, "random|inclusive")
      ->check(CLI::IsMember({"random", "inclusive"}));
  gen->add_option("--seed", gp.seed, "RNG seed")->capture_default_str();
  gen->add_option("--alpha", gp.alpha, "power exponent")->capture_default_str();
  gen->add_option("--C", gp.C, "common deadline C")->capture_default_str();
  gen->add_option("--s-max", gp.s_max,
                  "speed cap (0 derives one that guarantees feasibility)")
      ->capture_default_str();
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // --- solve ------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "run one algorithm on an instance");
  std::string algo, solve_in, trace_path;
  double tol = 1e-7;
  long long solve_budget = esched::OracleBudget{}.max_states;
  solve->add_option("--algo", algo, "frac|opt|fdr|lfj|lfm|ecsemrpp")
      ->required()
      ->check(CLI::IsMember({"frac", "opt", "fdr", "lfj", "lfm", "ecsemrpp"}));
  solve->add_option("--in", solve_in, "instance file")->required();
  solve->add_option("--tol", tol, "relaxation tolerance")->capture_default_str();
  solve->add_option("--trace", trace_path, "write the rounding trace here (fdr)");
  solve->add_option("--budget", solve_budget, "oracle state budget (opt)")
      ->capture_default_str();

  // --- bench ------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "sweep a parameter, emit CSV");
  std::string sweep, out_csv, bench_elig = "random";
  std::string algos_csv = "frac,opt,fdr,lfj,lfm";
  esched::GenParams bp;
  bp.m = 10;
  bp.n = 27;
  int repeats = 3;
  long long bench_budget = esched::OracleBudget{}.max_states;
  std::vector<double> c_values{1.0, 2.0, 3.0};
  std::vector<double> eta_values{1.0, 2.0, 3.0};
  bool measure_runtime = false;
  double bench_tol = 1e-7;
  bench->add_option("--sweep", sweep, "C|eta|eligibility")
      ->required()
      ->check(CLI::IsMember({"C", "eta", "eligibility"}));
  bench->add_option("--repeats", repeats, "instances per cell")
      ->capture_default_str();
  bench->add_option("--budget", bench_budget, "oracle state budget")
      ->capture_default_str();
  bench->add_option("--out-csv", out_csv, "CSV output path")->required();
  bench->add_option("--m", bp.m, "processor count")->capture_default_str();
  bench->add_option("--n", bp.n, "task count")->capture_default_str();
  bench->add_option("--w-lo", bp.w_lo, "minimum work")->capture_default_str();
  bench->add_option("--w-hi", bp.w_hi, "maximum work")->capture_default_str();
  bench->add_option("--seed", bp.seed, "base RNG seed")->capture_default_str();
  bench->add_option("--alpha", bp.alpha, "power exponent")->capture_default_str();
  bench->add_option("--C", bp.C, "base deadline C")->capture_default_str();
  bench->add_option("--eligibility", bench_elig,
                    "eligibility kind for C/eta sweeps")
      ->check(CLI::IsMember({"random", "inclusive"}));
  bench->add_option("--algos", algos_csv, "comma-separated algorithm set")
      ->capture_default_str();
  bench->add_option("--c-values", c_values, "deadlines for the C sweep")
      ->delimiter(',');
  bench->add_option("--eta-values", eta_values, "n/m ratios for the eta sweep")
      ->delimiter(',');
  bench->add_flag("--measure-runtime", measure_runtime,
                  "fill runtime_ms with wall-clock times (not reproducible)");
  bench->add_option("--tol", bench_tol, "relaxation tolerance")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Collapse CLI11's exit-code family to the documented 0/1 contract
    // (help/version stay 0, every argument error becomes 1).
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      gp.eligibility = gen_elig == "random" ? esched::EligibilityKind::random_subset
                                            : esched::EligibilityKind::inclusive;
      esched::Instance inst = esched::generate(gp);
      if (gen_out.empty() || gen_out == "-")
        std::cout << esched::instance_to_json(inst).dump(2) << '\n';
      else
        esched::write_instance(inst, gen_out);
      return 0;
    }

    if (solve->parsed()) {
      esched::Instance inst = esched::parse_instance(solve_in);
      if (algo == "frac") {
        auto [fx, rep] = esched::solve_relaxation(inst, tol);
        esched::ordered_json j;
        j["algo"] = "frac";
        j["result"] = esched::fractional_to_json(inst, fx);
        j["iterations"] = rep.iterations;
        j["stationarity_residual"] = rep.max_stationarity_residual;
        std::cout << j.dump(2) << '\n';
        return 0;
      }
      if (algo == "opt")
        return report_assignment(
            inst, esched::brute_force_opt(inst, {solve_budget}), "opt");
      if (algo == "lfj") return report_assignment(inst, esched::lfj(inst), "lfj");
      if (algo == "lfm") return report_assignment(inst, esched::lfm(inst), "lfm");
      if (algo == "ecsemrpp")
        return report_assignment(inst, esched::ecsemrpp(inst), "ecsemrpp");
      // fdr
      esched::FdrResult res = esched::fdr(inst, tol);
      if (!trace_path.empty()) emit(esched::trace_to_json(res.trace), trace_path);
      esched::ordered_json extra;
      extra["relaxation_objective"] = res.relax.objective;
      extra["cycles_broken"] = res.trace.cycles_broken;
      extra["phase1_fixed"] = res.trace.phase1_fixed;
      return report_assignment(inst, res.assignment, "fdr", std::move(extra));
    }

    // bench
    bp.eligibility = bench_elig == "random"
                         ? esched::EligibilityKind::random_subset
                         : esched::EligibilityKind::inclusive;
    std::vector<std::string> algos;
    for (size_t pos = 0; pos < algos_csv.size();) {
      size_t comma = algos_csv.find(',', pos);
      if (comma == std::string::npos) comma = algos_csv.size();
      if (comma > pos) algos.push_back(algos_csv.substr(pos, comma - pos));
      pos = comma + 1;
    }

    struct Cell {
      std::string name;
      esched::GenParams params;
    };
    std::vector<Cell> cells;
    if (sweep == "C") {
      for (double v : c_values) {
        esched::GenParams q = bp;
        q.C = v;
        cells.push_back({"C=" + esched::detail::format_value(v), q});
      }
    } else if (sweep == "eta") {
      for (double v : eta_values) {
        esched::GenParams q = bp;
        q.n = std::max(1, static_cast<int>(std::lround(v * bp.m)));
        cells.push_back({"eta=" + esched::detail::format_value(v), q});
      }
    } else {
      for (auto kind : {esched::EligibilityKind::random_subset,
                        esched::EligibilityKind::inclusive}) {
        esched::GenParams q = bp;
        q.eligibility = kind;
        cells.push_back(
            {kind == esched::EligibilityKind::random_subset ? "elig=random"
                                                            : "elig=inclusive",
             q});
      }
    }

    esched::BenchReport all;
    for (size_t c = 0; c < cells.size(); ++c) {
      esched::BenchOptions opt;
      opt.budget.max_states = bench_budget;
      opt.tol = bench_tol;
      opt.measure_runtime = measure_runtime;
      opt.cell_name = cells[c].name;
      esched::GenParams q = cells[c].params;
      q.seed = esched::splitmix64(esched::splitmix64(bp.seed) +
                                  static_cast<std::uint64_t>(c));
      esched::BenchReport rep = esched::run_bench(q, algos, repeats, opt);
      if (rep.oracle_exceeded)
        std::cerr << "note: cell " << cells[c].name
                  << " exceeds the oracle budget; rows normalized by frac\n";
      double frac_sum = 0.0, fdr_sum = 0.0;
      int frac_n = 0, fdr_n = 0;
      for (const auto& row : rep.rows) {
        if (row.algo == "frac") frac_sum += row.energy, ++frac_n;
        if (row.algo == "fdr") fdr_sum += row.energy, ++fdr_n;
      }
      if (frac_n > 0 && fdr_n > 0 && fdr_sum / frac_sum > 1.10)
        std::cerr << "warning: cell " << cells[c].name
                  << " mean fdr/frac ratio "
                  << esched::detail::format_value(fdr_sum / frac_sum)
                  << " exceeds 1.10\n";
      for (const auto& s : rep.summary)
        std::cout << cells[c].name << " " << s.algo
                  << " mean_energy=" << esched::detail::format_value(s.mean_energy)
                  << " mean_ratio=" << esched::detail::format_value(s.mean_ratio)
                  << " base=" << rep.base << '\n';
      all.rows.insert(all.rows.end(), rep.rows.begin(), rep.rows.end());
    }
    esched::write_report(all, out_csv);
    return 0;
  } catch (const esched::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
