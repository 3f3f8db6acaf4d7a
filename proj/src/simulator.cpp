#include "oscc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "oscc/error.hpp"

namespace oscc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 53 random bits mapped to [0, 1); mt19937_64 output is fixed by the standard,
// unlike the distribution classes.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const std::size_t j = std::min(i + 1, sorted.size() - 1);
  const double w = pos - static_cast<double>(i);
  return sorted[i] + w * (sorted[j] - sorted[i]);
}

}  // namespace

std::string_view kind_name(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kLow2High: return "low2high";
    case InstanceKind::kRandom: return "random";
    case InstanceKind::kHigh2Low: return "high2low";
    case InstanceKind::kAdversarial: return "adversarial";
  }
  return "unknown";
}

std::optional<InstanceKind> parse_kind(std::string_view name) {
  if (name == "low2high") return InstanceKind::kLow2High;
  if (name == "random") return InstanceKind::kRandom;
  if (name == "high2low") return InstanceKind::kHigh2Low;
  return std::nullopt;
}

RunTrace run_tos(const ValidatedSetup& setup, const AdmissionThreshold& lambda,
                 const std::vector<double>& prices) {
  const auto& v = lambda.values;
  if (v.empty()) throw Error(ErrorCode::kInvalidThreshold, "empty threshold");
  const int cap = static_cast<int>(v.size()) - 1;
  const double tol = setup.price_tol();
  RunTrace trace;
  trace.decisions.reserve(prices.size());
  double revenue = 0.0;
  for (double p : prices) {
    if (p < setup.p_min() - tol || p > setup.p_max() + tol) trace.price_outside_model = true;
    const bool accept = trace.accepted_count < cap && p >= v[trace.accepted_count];
    trace.decisions.push_back(accept);
    if (accept) {
      revenue += p;
      ++trace.accepted_count;
    }
  }
  trace.profit = revenue - setup.total_cost(trace.accepted_count);
  return trace;
}

double offline_optimal(const ValidatedSetup& setup, const std::vector<double>& prices) {
  std::vector<double> sorted = prices;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const int limit = std::min<int>(setup.k(), static_cast<int>(sorted.size()));
  double best = 0.0;
  double revenue = 0.0;
  for (int i = 1; i <= limit; ++i) {
    revenue += sorted[i - 1];
    best = std::max(best, revenue - setup.total_cost(i));
  }
  return best;
}

ArrivalInstance generate_instance(const ValidatedSetup& setup, InstanceKind kind, int T,
                                  std::uint64_t seed) {
  if (T < 0) throw Error(ErrorCode::kValueOutOfRange, "T must be >= 0");
  if (kind == InstanceKind::kAdversarial) {
    throw Error(ErrorCode::kValueOutOfRange, "adversarial instances come from adversarial_instance");
  }
  ArrivalInstance inst;
  inst.kind = kind;
  inst.seed = seed;
  inst.rho = setup.rho();
  inst.prices.resize(T);
  std::mt19937_64 rng(seed);
  const double lo = setup.p_min();
  const double hi = setup.p_max();
  const double mid = 0.5 * (lo + hi);
  const int half = T / 2;
  for (int t = 0; t < T; ++t) {
    double a = lo;
    double b = hi;
    if (kind == InstanceKind::kLow2High) {
      if (t < half) b = mid; else a = mid;
    } else if (kind == InstanceKind::kHigh2Low) {
      if (t < half) a = mid; else b = mid;
    }
    inst.prices[t] = a + unit_uniform(rng) * (b - a);
  }
  return inst;
}

ArrivalInstance adversarial_instance(const ValidatedSetup& setup, const AdmissionThreshold& lambda,
                                     std::optional<int> scenario, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kValueOutOfRange, "eps must be positive");
  const auto& v = lambda.values;
  const int n = static_cast<int>(v.size()) - 1;
  const int tau = lambda.tau;
  ArrivalInstance inst;
  inst.kind = InstanceKind::kAdversarial;
  inst.rho = setup.rho();
  inst.prices.assign(tau + 1, setup.p_min());
  const int k = setup.k();
  if (scenario) {
    const int j = *scenario;
    if (j < 1 || j > n - tau) {
      throw Error(ErrorCode::kScenarioOutOfRange,
                  "scenario " + std::to_string(j) + " outside [1, " + std::to_string(n - tau) + "]");
    }
    for (int i = tau + 1; i < tau + j; ++i) inst.prices.push_back(v[i]);
    inst.prices.insert(inst.prices.end(), k, v[tau + j] - eps);
  } else {
    for (int i = tau + 1; i < n; ++i) inst.prices.push_back(v[i]);
    inst.prices.insert(inst.prices.end(), k, setup.p_max());
  }
  return inst;
}

void summarize(EmpiricalReport& report) {
  std::vector<double> finite;
  finite.reserve(report.ers.size());
  for (double er : report.ers) {
    if (std::isfinite(er)) finite.push_back(er);
  }
  report.samples = static_cast<int>(report.ers.size());
  report.excluded = report.samples - static_cast<int>(finite.size());
  std::sort(finite.begin(), finite.end());
  if (finite.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    report.aer = report.p25 = report.p75 = report.min = report.max = nan;
    return;
  }
  double sum = 0.0;
  for (double er : finite) sum += er;
  report.aer = sum / static_cast<double>(finite.size());
  report.p25 = percentile(finite, 0.25);
  report.p75 = percentile(finite, 0.75);
  report.min = finite.front();
  report.max = finite.back();
}

EmpiricalReport empirical_report(const ValidatedSetup& setup, const AdmissionThreshold& lambda,
                                 InstanceKind kind, int T, int N, std::uint64_t base_seed,
                                 unsigned threads) {
  if (N < 1) throw Error(ErrorCode::kValueOutOfRange, "N must be >= 1");
  EmpiricalReport report;
  report.ers.assign(N, 0.0);
  report.seeds.resize(N);
  const double floor = 1e-12 * std::max(1.0, setup.p_max());

  auto run_range = [&](int begin, int end) {
    for (int n = begin; n < end; ++n) {
      const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(n);
      const ArrivalInstance inst = generate_instance(setup, kind, T, seed);
      const double online = run_tos(setup, lambda, inst.prices).profit;
      const double opt = offline_optimal(setup, inst.prices);
      double er;
      if (online > floor) {
        er = opt / online;
      } else {
        er = opt > floor ? kInf : 1.0;
      }
      report.seeds[n] = seed;
      report.ers[n] = er;
    }
  };

  const unsigned workers = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(N));
  if (workers == 1) {
    run_range(0, N);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (N + static_cast<int>(workers) - 1) / static_cast<int>(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const int begin = static_cast<int>(w) * chunk;
      const int end = std::min(N, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  summarize(report);
  return report;
}

std::vector<MisestimationRow> misestimation_sweep(const ValidatedSetup& setup_true,
                                                  const std::vector<double>& rho_hat_grid,
                                                  InstanceKind kind, const std::vector<int>& T_list,
                                                  int N, std::uint64_t seed,
                                                  const SolverConfig& config, unsigned threads) {
  std::vector<MisestimationRow> rows;
  for (double rho_hat : rho_hat_grid) {
    if (!(rho_hat >= 1.0)) {
      throw Error(ErrorCode::kValueOutOfRange, "estimated fluctuation ratio must be >= 1");
    }
    Setup design_setup = setup_true.setup();
    design_setup.p_max = rho_hat * setup_true.p_min();
    const ValidatedSetup design_validated(design_setup);
    const OptimalDesign design = solve_optimal(design_validated, config);
    for (int T : T_list) {
      const EmpiricalReport rep = empirical_report(setup_true, design.threshold, kind, T, N, seed, threads);
      rows.push_back({rho_hat, rho_hat / setup_true.rho(), T, rep.aer, rep.excluded});
    }
  }
  return rows;
}

}  // namespace oscc
