#include "oscc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "oscc/error.hpp"
#include "oscc/io.hpp"
#include "oscc/lower_bound.hpp"
#include "oscc/simulator.hpp"
#include "oscc/threshold_solver.hpp"

namespace oscc::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string config;
  std::string out;
  std::string summary_out;
  double tol = 1e-10;
  std::optional<int> k;
  std::uint64_t seed = 42;
  int samples = 1000;
  int T = 500;
  std::vector<int> T_list{400, 500, 1000};
  std::string type = "random";
  std::string scenario;
  std::optional<double> eps;
  double rho_min = 1.0;
  double rho_max = 16.0;
  int steps = 16;
  std::vector<double> rho_hat_grid;
};

struct Loaded {
  Setup setup;
  SolverConfig solver;
};

Loaded load(const Options& opt) {
  LoadedConfig cfg = load_config(opt.config);
  if (opt.k) cfg.setup.k = *opt.k;
  cfg.solver.bisection_tol = opt.tol;
  if (!(opt.tol > 0.0)) throw Error(ErrorCode::kValueOutOfRange, "--tol must be positive");
  cfg.solver.adversarial_eps = opt.eps;
  return {cfg.setup, cfg.solver};
}

void emit_json(const json& doc, const Options& opt, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (opt.out.empty()) {
    out << text;
  } else {
    write_text(text, opt.out);
  }
}

void emit_csv(const CsvTable& table, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << to_csv(table);
  } else {
    write_csv(table, path);
  }
}

InstanceKind kind_from(const std::string& name) {
  const auto kind = parse_kind(name);
  if (!kind) throw Error(ErrorCode::kValueOutOfRange, "unknown instance type '" + name + "'");
  return *kind;
}

int cmd_solve(const Options& opt, std::ostream& out) {
  const Loaded in = load(opt);
  const ValidatedSetup setup(in.setup);
  emit_json(design_to_json(solve_optimal(setup, in.solver)), opt, out);
  return 0;
}

int cmd_lower_bound(const Options& opt, std::ostream& out) {
  const Loaded in = load(opt);
  const ValidatedSetup setup(in.setup);
  emit_json(lower_bound_to_json(finite_k_lower_bound(setup)), opt, out);
  return 0;
}

int cmd_asymptotic(const Options& opt, std::ostream& out) {
  const Loaded in = load(opt);
  const ValidatedSetup setup(in.setup);
  BoundConfig bc;
  bc.keep_trace = true;
  emit_json(asymptotic_to_json(asymptotic_lower_bound(setup, bc)), opt, out);
  return 0;
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  const Loaded in = load(opt);
  const ValidatedSetup setup(in.setup);
  const InstanceKind kind = kind_from(opt.type);
  const OptimalDesign design = solve_optimal(setup, in.solver);
  const EmpiricalReport rep =
      empirical_report(setup, design.threshold, kind, opt.T, opt.samples, opt.seed, thread_cap());

  const std::string id = setup_id(in.setup);
  const std::string family(family_name(in.setup.cost.family()));
  const std::string type(kind_name(kind));
  CsvTable samples{{"setup_id", "cost_family", "rho", "k", "instance_type", "T", "seed", "sample", "er"}, {}};
  for (int n = 0; n < rep.samples; ++n) {
    samples.rows.push_back({id, family, setup.rho(), std::int64_t{setup.k()}, type, std::int64_t{opt.T},
                            std::to_string(rep.seeds[n]), std::int64_t{n}, rep.ers[n]});
  }
  CsvTable summary{{"setup_id", "instance_type", "T", "N", "aer", "p25", "p75", "min", "max", "excluded"}, {}};
  summary.rows.push_back({id, type, std::int64_t{opt.T}, std::int64_t{rep.samples}, rep.aer, rep.p25, rep.p75,
                          rep.min, rep.max, std::int64_t{rep.excluded}});

  emit_csv(samples, opt.out, out);
  std::string summary_target = opt.summary_out;
  if (summary_target.empty() && !opt.out.empty()) summary_target = summary_path(opt.out);
  emit_csv(summary, summary_target, out);
  return 0;
}

int cmd_adversarial(const Options& opt, std::ostream& out) {
  const Loaded in = load(opt);
  const ValidatedSetup setup(in.setup);
  const OptimalDesign design = solve_optimal(setup, in.solver);
  const double eps = in.solver.adversarial_eps.value_or(1e-6 * setup.p_min());
  const int tau = design.threshold.tau;
  const int last = setup.k_upper() - tau;

  std::vector<std::optional<int>> scenarios;
  if (opt.scenario.empty()) {
    for (int j = 1; j <= last; ++j) scenarios.emplace_back(j);
    scenarios.emplace_back(std::nullopt);
  } else if (opt.scenario == "final") {
    scenarios.emplace_back(std::nullopt);
  } else {
    int j = 0;
    try {
      std::size_t used = 0;
      j = std::stoi(opt.scenario, &used);
      if (used != opt.scenario.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw Error(ErrorCode::kScenarioOutOfRange, "--scenario must be an integer or 'final'");
    }
    scenarios.emplace_back(j);
  }

  json rows = json::array();
  double worst = 0.0;
  for (const auto& s : scenarios) {
    const ArrivalInstance inst = adversarial_instance(setup, design.threshold, s, eps);
    const double opt_profit = offline_optimal(setup, inst.prices);
    const double online = run_tos(setup, design.threshold, inst.prices).profit;
    const double ratio = online > 0.0 ? opt_profit / online : std::numeric_limits<double>::infinity();
    worst = std::max(worst, ratio);
    rows.push_back({{"scenario", s ? json(*s) : json("final")},
                    {"T", inst.prices.size()},
                    {"offline", opt_profit},
                    {"online", online},
                    {"ratio", ratio}});
  }
  emit_json(json{{"cr_star", design.cr_star}, {"tau", tau}, {"eps", eps}, {"max_ratio", worst}, {"scenarios", rows}},
            opt, out);
  return 0;
}

int cmd_sweep_rho(const Options& opt, std::ostream& out) {
  const Loaded in = load(opt);
  if (opt.steps < 1) throw Error(ErrorCode::kValueOutOfRange, "--steps must be >= 1");
  if (!(opt.rho_min >= 1.0) || !(opt.rho_max >= opt.rho_min)) {
    throw Error(ErrorCode::kValueOutOfRange, "need 1 <= --rho-min <= --rho-max");
  }
  CsvTable table{{"rho", "cr_star", "cr_lb", "cr_asym"}, {}};
  for (int i = 0; i < opt.steps; ++i) {
    const double rho = opt.steps == 1 ? opt.rho_min
                                      : opt.rho_min + (opt.rho_max - opt.rho_min) * i / (opt.steps - 1);
    Setup s = in.setup;
    s.p_max = rho * s.p_min;
    const ValidatedSetup setup(s);
    const double cr_star = solve_optimal(setup, in.solver).cr_star;
    const double cr_lb = finite_k_lower_bound(setup).cr_lb;
    const double cr_asym = s.cost.family() == CostFamily::kTable
                               ? std::numeric_limits<double>::quiet_NaN()
                               : asymptotic_lower_bound(setup).cr_asym;
    table.rows.push_back({rho, cr_star, cr_lb, cr_asym});
  }
  emit_csv(table, opt.out, out);
  return 0;
}

int cmd_misestimate(const Options& opt, std::ostream& out) {
  const Loaded in = load(opt);
  const ValidatedSetup setup(in.setup);
  std::vector<double> grid = opt.rho_hat_grid;
  if (grid.empty()) grid.push_back(setup.rho());
  const auto rows = misestimation_sweep(setup, grid, kind_from(opt.type), opt.T_list, opt.samples, opt.seed,
                                        in.solver, thread_cap());
  CsvTable table{{"rho_hat", "rho_ratio", "T", "aer", "excluded"}, {}};
  for (const auto& r : rows) {
    table.rows.push_back({r.rho_hat, r.rho_ratio, std::int64_t{r.T}, r.aer, std::int64_t{r.excluded}});
  }
  emit_csv(table, opt.out, out);
  return 0;
}

}  // namespace

std::string summary_path(const std::string& per_sample_path) {
  const std::string ext = ".csv";
  if (per_sample_path.size() >= ext.size() &&
      per_sample_path.compare(per_sample_path.size() - ext.size(), ext.size(), ext) == 0) {
    return per_sample_path.substr(0, per_sample_path.size() - ext.size()) + "_summary.csv";
  }
  return per_sample_path + "_summary.csv";
}

unsigned thread_cap() {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("OSCC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) cap = std::min<unsigned>(cap, static_cast<unsigned>(v));
  }
  return cap;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online selection with convex costs: thresholds, bounds, simulation"};
  app.name("oscc");
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "setup JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output path (stdout when omitted)");
    sub->add_option("--tol", opt.tol, "relative bisection tolerance");
    sub->add_option("--k", opt.k, "override capacity k");
  };
  auto sampling = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "base seed");
    sub->add_option("--samples", opt.samples, "number of instances");
    sub->add_option("--type", opt.type, "low2high|random|high2low")
        ->check(CLI::IsMember({"low2high", "random", "high2low"}));
  };

  auto* solve = app.add_subcommand("solve", "optimal admission threshold and CR*");
  common(solve);
  auto* lower = app.add_subcommand("lower-bound", "finite-k randomized lower bound");
  common(lower);
  auto* asym = app.add_subcommand("asymptotic", "asymptotic lower bound by shooting");
  common(asym);
  auto* sim = app.add_subcommand("simulate", "empirical ratios on generated instances");
  common(sim);
  sampling(sim);
  sim->add_option("--T", opt.T, "instance length");
  sim->add_option("--summary-out", opt.summary_out, "summary CSV path");
  auto* adv = app.add_subcommand("adversarial", "worst-case instances against the optimal threshold");
  common(adv);
  adv->add_option("--scenario", opt.scenario, "scenario index or 'final' (all when omitted)");
  adv->add_option("--eps", opt.eps, "price perturbation");
  auto* sweep = app.add_subcommand("sweep-rho", "CR*, CR_lb and asymptotic bound over a rho grid");
  common(sweep);
  sweep->add_option("--rho-min", opt.rho_min, "smallest rho (default 1)");
  sweep->add_option("--rho-max", opt.rho_max, "largest rho (default 16)");
  sweep->add_option("--steps", opt.steps, "grid points (default 16)");
  auto* mis = app.add_subcommand("misestimate", "AER when the design uses an estimated rho");
  common(mis);
  sampling(mis);
  mis->add_option("--rho-hat-grid", opt.rho_hat_grid, "comma-separated estimated rho values")->delimiter(',');
  mis->add_option("--T", opt.T_list, "comma-separated instance lengths")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) return cmd_solve(opt, out);
    if (*lower) return cmd_lower_bound(opt, out);
    if (*asym) return cmd_asymptotic(opt, out);
    if (*sim) return cmd_simulate(opt, out);
    if (*adv) return cmd_adversarial(opt, out);
    if (*sweep) return cmd_sweep_rho(opt, out);
    if (*mis) return cmd_misestimate(opt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_convergence_failure(e.code()) ? 3 : 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace oscc::cli
