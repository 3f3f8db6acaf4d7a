// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oscc/core_model.hpp"
#include "oscc/error.hpp"
#include "oscc/lower_bound.hpp"
#include "oscc/simulator.hpp"
#include "oscc/threshold_solver.hpp"

namespace {

using namespace oscc;

Setup make_setup(CostModel cost, double p_min, double p_max, int k) {
  Setup s;
  s.cost = std::move(cost);
  s.p_min = p_min;
  s.p_max = p_max;
  s.k = k;
  return s;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Designs solved by criteria 4-6, re-checked by criterion 12.
struct Solved {
  Setup setup;
  OptimalDesign design;
};
std::vector<Solved> g_solved;

void record(const Setup& s, const OptimalDesign& d) { g_solved.push_back({s, d}); }

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

Outcome c1_linear_lower_bound() {
  Outcome o;
  double worst_cr = 0;
  double worst_gamma = 0;
  for (double a : {0.0, 40.0}) {
    for (double rho_a : {2.0, 4.0, 8.0}) {
      for (int k : {1, 10, 300}) {
        const double p_min = 50;
        const double p_max = a + rho_a * (p_min - a);
        const auto s = validate_setup(make_setup(CostModel::linear(a), p_min, p_max, k));
        const auto r = finite_k_lower_bound(s);
        const double expect = 1 + std::log(rho_a);
        worst_cr = std::max(worst_cr, std::abs(r.cr_lb - expect));
        worst_gamma = std::max(worst_gamma, std::abs(r.gamma.front() - k / expect));
      }
    }
  }
  o.pass = worst_cr <= 1e-8 && worst_gamma <= 1e-8;
  o.detail = fmt("max |CR_lb - (1+ln rho)| = %.3g, max |gamma1 - k/(1+ln rho)| = %.3g", worst_cr, worst_gamma);
  return o;
}

Outcome c2_asymptotic_linear() {
  Outcome o;
  double worst = 0;
  for (double a : {0.0, 40.0}) {
    for (double rho_a : {2.0, 4.0, 8.0, 16.0}) {
      const double p_max = a + rho_a * (50 - a);
      const auto s = validate_setup(make_setup(CostModel::linear(a), 50, p_max, 300));
      worst = std::max(worst, std::abs(asymptotic_lower_bound(s).cr_asym - (1 + std::log(rho_a))));
    }
  }
  o.pass = worst <= 1e-4;
  o.detail = fmt("max |CR_asym - (1+ln rho)| = %.3g", worst);
  return o;
}

Outcome c3_single_unit() {
  Outcome o;
  double worst = 0;
  for (double rho : {1.5, 2.0, 4.0, 8.0, 16.0}) {
    const double p_min = 50;
    const auto s = validate_setup(make_setup(CostModel::linear(0), p_min, rho * p_min, 1));
    const auto d = solve_optimal(s);
    worst = std::max(worst, std::abs(d.cr_star - rho));
    if (d.threshold.values.size() != 2) {
      o.pass = false;
      continue;
    }
    worst = std::max(worst, std::abs(d.threshold.values[0] - p_min));
    worst = std::max(worst, std::abs(d.threshold.values[1] - rho * p_min));
  }
  o.pass = o.pass && worst <= 1e-8;
  o.detail = fmt("max deviation %.3g", worst);
  return o;
}

Outcome c4_linear_agreement() {
  Outcome o;
  double worst = 0;
  for (double a : {0.0, 40.0}) {
    for (double rho : {2.0, 4.0, 8.0, 16.0}) {
      for (int k : {1, 5, 50, 300}) {
        const auto raw = make_setup(CostModel::linear(a), 50, rho * 50, k);
        const auto s = validate_setup(raw);
        const auto d = solve_optimal(s);
        const auto c = linear_closed_form(s);
        worst = std::max(worst, std::abs(d.cr_star - c.cr_star) / c.cr_star);
        record(raw, d);
      }
    }
  }
  o.pass = worst <= 1e-6;
  o.detail = fmt("max relative gap %.3g over 32 setups", worst);
  return o;
}

Outcome c5_sandwich() {
  Outcome o;
  double min_upper = 1e300;  // CR* - CR_lb
  double min_lower = 1e300;  // CR_lb - CR_asym
  std::string worst_case;
  for (const auto& cost : {CostModel::linear(40), CostModel::quadratic(0.2), CostModel::exponential()}) {
    for (double rho : {2.0, 4.0, 8.0, 16.0}) {
      const auto raw = make_setup(cost, 50, rho * 50, 300);
      const auto s = validate_setup(raw);
      const auto d = solve_optimal(s);
      record(raw, d);
      const double lb = finite_k_lower_bound(s).cr_lb;
      const double as = asymptotic_lower_bound(s).cr_asym;
      if (d.cr_star - lb < min_upper) min_upper = d.cr_star - lb;
      if (lb - as < min_lower) {
        min_lower = lb - as;
        worst_case = std::string(family_name(cost.family())) + fmt(" rho=%g: CR*=%.6f CR_lb=%.6f", rho, d.cr_star, lb) +
                     fmt(" CR_asym=%.6f", as);
      }
      if (!(d.cr_star >= lb && lb >= as - 1e-4)) o.pass = false;
    }
  }
  o.detail = fmt("min(CR*-CR_lb) = %.3g, min(CR_lb-CR_asym) = %.3g", min_upper, min_lower) + "; tightest " + worst_case;
  return o;
}

Outcome c6_convergence() {
  Outcome o;
  const double p_min = 50;
  const double p_max = 8 * p_min;
  // The asymptotic bound of the largest setup stands for the k -> infinity limit.
  const auto big = validate_setup(make_setup(CostModel::quadratic(0.2), p_min, p_max, 3200));
  const double limit = asymptotic_lower_bound(big).cr_asym;
  double prev = 1e300;
  std::string gaps;
  double last = 0;
  for (int k : {50, 100, 200, 400, 800, 1600, 3200}) {
    const auto raw = make_setup(CostModel::quadratic(0.2), p_min, p_max, k);
    const auto d = solve_optimal(validate_setup(raw));
    record(raw, d);
    const double gap = std::abs(d.cr_star - limit);
    if (gap > prev + 1e-9) o.pass = false;
    prev = gap;
    last = gap;
    gaps += fmt("%.4g ", gap);
  }
  o.pass = o.pass && last < 0.05;
  o.detail = fmt("CR_asym = %.6f; gaps ", limit) + gaps;
  return o;
}

Outcome c7_adversarial() {
  Outcome o;
  std::string detail;
  for (const auto& cost : {CostModel::linear(40), CostModel::quadratic(0.2), CostModel::exponential()}) {
    const auto s = validate_setup(make_setup(cost, 50, 400, 50));
    const auto d = solve_optimal(s);
    const double eps = 1e-6 * s.p_min();
    double worst = 0;
    std::vector<std::optional<int>> scenarios;
    for (int j = 1; j <= s.k_upper() - d.threshold.tau; ++j) scenarios.emplace_back(j);
    scenarios.emplace_back(std::nullopt);
    for (const auto& sc : scenarios) {
      const auto inst = adversarial_instance(s, d.threshold, sc, eps);
      const double online = run_tos(s, d.threshold, inst.prices).profit;
      worst = std::max(worst, offline_optimal(s, inst.prices) / online);
    }
    if (!(worst >= d.cr_star - 1e-3 && worst <= d.cr_star + 1e-9)) o.pass = false;
    detail += std::string(family_name(cost.family())) + fmt(" %.3g ", worst - d.cr_star);
  }
  o.detail = "max ratio - CR*: " + detail;
  return o;
}

Outcome c8_safety() {
  Outcome o;
  const auto s = validate_setup(make_setup(CostModel::quadratic(0.2), 50, 400, 300));
  const auto d = solve_optimal(s);
  const auto rep = empirical_report(s, d.threshold, InstanceKind::kRandom, 500, 1000, 42);
  double lo = 1e300;
  double hi = 0;
  for (double er : rep.ers) {
    lo = std::min(lo, er);
    hi = std::max(hi, er);
  }
  o.pass = rep.samples == 1000 && lo >= 1.0 && hi <= d.cr_star + 1e-9;
  o.detail = fmt("ER in [%.6f, %.6f], CR* = %.6f", lo, hi, d.cr_star) + fmt(", AER = %.6f", rep.aer);
  return o;
}

Outcome c9_ordering() {
  Outcome o;
  std::string detail;
  for (double rho : {4.0, 8.0, 16.0}) {
    const double lin = solve_optimal(validate_setup(make_setup(CostModel::linear(40), 50, rho * 50, 300))).cr_star;
    const double quad = solve_optimal(validate_setup(make_setup(CostModel::quadratic(0.2), 50, rho * 50, 300))).cr_star;
    const double expo =
        solve_optimal(validate_setup(make_setup(CostModel::exponential(145.5, 50), 50, rho * 50, 300))).cr_star;
    if (!(lin > quad && lin > expo)) o.pass = false;
    detail += fmt("rho=%g: lin %.4f ", rho, lin) + fmt("quad %.4f exp %.4f; ", quad, expo);
  }
  o.detail = detail;
  return o;
}

Outcome c10_upper_bounds() {
  Outcome o;
  std::string detail;
  const double a = 0.05;  // c_300 = 29.95 < p_min
  for (double rho : {2.0, 4.0, 8.0, 16.0}) {
    const auto s = validate_setup(make_setup(CostModel::quadratic(a), 50, rho * 50, 300));
    if (s.case_tag() != CaseTag::kHighValue) o.pass = false;
    const double cr = solve_optimal(s).cr_star;
    const auto rep = convexity_upper_bounds(s, cr, 2 * a);
    if (!(rep.convex_holds && rep.strong_holds)) o.pass = false;
    detail += fmt("rho=%g margins %.3g/%.3g; ", rho, rep.convex_margin, rep.strong_margin);
  }
  o.detail = detail;
  return o;
}

double brute_offline(const ValidatedSetup& s, const std::vector<double>& prices) {
  const int T = static_cast<int>(prices.size());
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << T); ++mask) {
    std::vector<double> chosen;
    for (int t = 0; t < T; ++t) {
      if (mask & (1u << t)) chosen.push_back(prices[t]);
    }
    if (static_cast<int>(chosen.size()) > s.k()) continue;
    std::sort(chosen.rbegin(), chosen.rend());
    double revenue = 0.0;
    for (double p : chosen) revenue += p;
    best = std::max(best, revenue - s.total_cost(static_cast<int>(chosen.size())));
  }
  return best;
}

Outcome c11_offline_oracle() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> td(0, 12);
  std::uniform_int_distribution<int> kd(1, 15);
  const CostModel costs[] = {CostModel::linear(40), CostModel::quadratic(0.2), CostModel::exponential(),
                             CostModel::quadratic(3.0)};
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto& cost = costs[trial % 4];
    const auto s = validate_setup(make_setup(cost, 50, 400, kd(rng)));
    const auto kind = static_cast<InstanceKind>(trial % 3);
    const auto inst = generate_instance(s, kind, td(rng), rng());
    if (offline_optimal(s, inst.prices) != brute_offline(s, inst.prices)) ++mismatches;
  }
  o.pass = mismatches == 0;
  o.detail = std::to_string(mismatches) + " mismatches in 200 instances";
  return o;
}

Outcome c12_residuals() {
  Outcome o;
  double worst = 0;
  int failures = 0;
  for (const auto& [raw, d] : g_solved) {
    const auto s = validate_setup(raw);
    worst = std::max(worst, d.residual_max());
    if (!verify_sufficient(s, d.threshold, d.cr_star).pass) ++failures;
  }
  o.pass = !g_solved.empty() && worst <= 1e-8 && failures == 0;
  o.detail = fmt("%g designs, max residual %.3g, ", static_cast<double>(g_solved.size()), worst) +
             std::to_string(failures) + " verify_sufficient failures";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds; 0 = none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "linear closed-form lower bound", 1.0, c1_linear_lower_bound},
      {2, "asymptotic linear bound", 5.0, c2_asymptotic_linear},
      {3, "k = 1, f = 0 exactness", 0.0, c3_single_unit},
      {4, "linear oracle agreement", 30.0, c4_linear_agreement},
      {5, "sandwich ordering", 60.0, c5_sandwich},
      {6, "convergence in k", 120.0, c6_convergence},
      {7, "adversarial tightness", 10.0, c7_adversarial},
      {8, "safety cap", 30.0, c8_safety},
      {9, "linear worst ordering", 30.0, c9_ordering},
      {10, "upper-bound validity", 5.0, c10_upper_bounds},
      {11, "offline oracle equivalence", 5.0, c11_offline_oracle},
      {12, "SoSE residuals", 0.0, c12_residuals},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass;
    if (c.time_limit > 0 && secs > c.time_limit) {
      pass = false;
      o.detail += fmt(" [over time limit %.0f s]", c.time_limit);
    }
    if (!pass) ++failed;
    std::printf("%s criterion %2d: %s (%.2f s) %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
