#include "oscc/threshold_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oscc/error.hpp"

namespace oscc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool degenerate(const ValidatedSetup& setup) {
  return setup.p_max() - setup.p_min() <= setup.price_tol();
}

OptimalDesign degenerate_design(const ValidatedSetup& setup) {
  OptimalDesign d;
  const int n = setup.k_upper();
  d.threshold.values.assign(n + 1, setup.p_min());
  d.threshold.tau = n - 1;
  d.cr_star = 1.0;
  d.residuals = {0.0};
  d.tau_candidates = {{n - 1, 1.0, 0}};
  return d;
}

void check_tau(const ValidatedSetup& setup, int tau) {
  if (tau < 0 || tau > setup.k_lower() - 1) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "tau = " + std::to_string(tau) + " outside [0, k_lower - 1]");
  }
}

// Checks the admission-threshold shape and returns tau.
int check_threshold(const ValidatedSetup& setup, const AdmissionThreshold& lambda) {
  const auto& v = lambda.values;
  const int n = setup.k_upper();
  const double tol = setup.price_tol() * 1e3;
  if (static_cast<int>(v.size()) != n + 1) {
    throw Error(ErrorCode::kInvalidThreshold, "threshold must have k_upper + 1 entries");
  }
  const int tau = lambda.tau;
  if (tau < 0 || tau >= n || (tau > setup.k_lower() - 1 && !degenerate(setup))) {
    throw Error(ErrorCode::kInvalidThreshold, "turning point outside [0, k_lower - 1]");
  }
  for (int i = 0; i <= n; ++i) {
    if (!std::isfinite(v[i]) || v[i] < setup.p_min() - tol || v[i] > setup.p_max() + tol) {
      throw Error(ErrorCode::kInvalidThreshold, "lambda_" + std::to_string(i) + " outside [p_min, p_max]");
    }
    if (i <= tau && std::abs(v[i] - setup.p_min()) > tol) {
      throw Error(ErrorCode::kInvalidThreshold, "lambda_" + std::to_string(i) + " must equal p_min");
    }
    if (i > 0 && v[i] < v[i - 1] - tol) {
      throw Error(ErrorCode::kInvalidThreshold, "threshold is not non-decreasing");
    }
  }
  return tau;
}

double theta_of(const ValidatedSetup& setup, const RecursionResult& r) {
  return r.chi.empty() ? setup.p_max() : r.chi.front();
}

}  // namespace

double OptimalDesign::residual_max() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, std::abs(r));
  return m;
}

RecursionResult backward_recursion(const ValidatedSetup& setup, double alpha, int tau) {
  check_tau(setup, tau);
  if (!(alpha > 0.0)) throw Error(ErrorCode::kValueOutOfRange, "alpha must be positive");
  const int n = setup.k_upper() - tau;
  RecursionResult out;
  if (n <= 1) return out;
  out.chi.assign(n - 1, 0.0);
  double next = setup.p_max();  // chi_i
  for (int i = n; i >= 2; --i) {
    const double target = setup.conjugate(next) + alpha * setup.marginal_cost(tau + i);
    const double prev = setup.invert_conjugate_affine(target, alpha);
    if (!std::isfinite(prev) || prev < 0.0 || prev > next + setup.price_tol()) {
      out.escaped = true;
      out.chi.erase(out.chi.begin(), out.chi.begin() + (i - 1));
      return out;
    }
    out.chi[i - 2] = prev;
    next = prev;
  }
  return out;
}

SoeSolution solve_soe_for_tau(const ValidatedSetup& setup, int tau, const SolverConfig& config) {
  check_tau(setup, tau);
  const double g1 = setup.min_profit(tau + 1);
  auto residual = [&](double alpha) {
    const RecursionResult r = backward_recursion(setup, alpha, tau);
    if (r.escaped) return -alpha;
    return setup.conjugate(std::max(0.0, theta_of(setup, r))) / g1 - alpha;
  };

  double lo = 1.0;
  double hi = 2.0;
  double h_lo = residual(lo);
  int expansions = 0;
  if (h_lo < 0.0) {
    hi = lo;
    while (h_lo < 0.0) {
      if (++expansions > config.max_iter) {
        throw Error(ErrorCode::kBracketingFailed, "no sign change below alpha = 1 for tau = " + std::to_string(tau));
      }
      hi = lo;
      lo *= 0.5;
      h_lo = residual(lo);
    }
  } else {
    while (residual(hi) > 0.0) {
      if (++expansions > config.max_iter) {
        throw Error(ErrorCode::kBracketingFailed, "no sign change up to alpha = " + std::to_string(hi));
      }
      lo = hi;
      hi *= 2.0;
    }
  }

  const double tol = config.bisection_tol;
  for (int it = 0; it < config.max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double h = residual(mid);
    const bool narrow = (hi - lo) <= tol * mid;
    if ((narrow && std::abs(h) <= tol * mid) || h == 0.0 || mid == lo || mid == hi) {
      if (std::abs(h) > tol * std::max(1.0, mid)) break;
      SoeSolution sol;
      sol.alpha = mid;
      sol.chi = backward_recursion(setup, mid, tau).chi;
      return sol;
    }
    if (h > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw Error(ErrorCode::kNoConvergence, "alpha bisection did not converge for tau = " + std::to_string(tau));
}

std::vector<double> sose_residuals(const ValidatedSetup& setup, const AdmissionThreshold& lambda,
                                   double alpha) {
  const auto& v = lambda.values;
  const int n = setup.k_upper();
  std::vector<double> out;
  double reserve = 0.0;
  for (int i = 0; i < n; ++i) {
    reserve += v[i] - setup.marginal_cost(i + 1);
    if (i < lambda.tau) continue;
    const double ratio = setup.conjugate(v[i + 1]) / reserve;
    out.push_back(reserve > 0.0 ? ratio / alpha - 1.0 : kInf);
  }
  return out;
}

OptimalDesign solve_optimal(const ValidatedSetup& setup, const SolverConfig& config) {
  if (degenerate(setup)) return degenerate_design(setup);

  const double fmin = setup.conjugate(setup.p_min());
  const double gtop = setup.min_profit(setup.k_lower());
  OptimalDesign design;
  std::vector<SoeSolution> solutions;
  for (int tau = 0; tau < setup.k_lower(); ++tau) {
    SoeSolution sol = solve_soe_for_tau(setup, tau, config);
    const double value = fmin / sol.alpha;
    int gap;
    if (value > gtop * (1.0 + 1e-12)) {
      gap = setup.k_lower() - tau;
    } else {
      gap = setup.min_production(std::min(value, gtop)) - 1 - tau;
    }
    design.tau_candidates.push_back({tau, sol.alpha, gap});
    solutions.push_back(std::move(sol));
  }

  int best = -1;
  int consistent = 0;
  for (std::size_t t = 0; t < solutions.size(); ++t) {
    if (design.tau_candidates[t].consistency_gap != 0) continue;
    ++consistent;
    if (best < 0 || solutions[t].alpha < solutions[best].alpha) best = static_cast<int>(t);
  }
  if (best < 0) {
    std::size_t nearest = 0;
    for (std::size_t t = 1; t < solutions.size(); ++t) {
      if (std::abs(design.tau_candidates[t].consistency_gap) <
          std::abs(design.tau_candidates[nearest].consistency_gap)) {
        nearest = t;
      }
    }
    throw Error(ErrorCode::kNoConsistentTau,
                "nearest candidate tau = " + std::to_string(nearest) + " with gap " +
                    std::to_string(design.tau_candidates[nearest].consistency_gap));
  }
  design.multiple_consistent_tau = consistent > 1;

  const int tau = best;
  const int n = setup.k_upper();
  design.cr_star = solutions[best].alpha;
  design.threshold.tau = tau;
  design.threshold.values.assign(n + 1, setup.p_min());
  const auto& chi = solutions[best].chi;
  for (std::size_t j = 0; j < chi.size(); ++j) design.threshold.values[tau + 1 + j] = chi[j];
  design.threshold.values[n] = setup.p_max();
  design.residuals = sose_residuals(setup, design.threshold, design.cr_star);
  return design;
}

double ratio_of_threshold(const ValidatedSetup& setup, const AdmissionThreshold& lambda) {
  const int tau = check_threshold(setup, lambda);
  const auto& v = lambda.values;
  const int n = setup.k_upper();
  double reserve = 0.0;
  double worst = 0.0;
  for (int m = 1; m <= n; ++m) {
    reserve += v[m - 1] - setup.marginal_cost(m);
    // Interior terms cover m = tau+1 .. n-1; the final term uses f*(p_max).
    if (m < tau + 1) continue;
    if (reserve <= 0.0) return kInf;
    const double top = (m == n) ? setup.conjugate(setup.p_max()) : setup.conjugate(v[m]);
    worst = std::max(worst, top / reserve);
  }
  return worst;
}

SufficiencyReport verify_sufficient(const ValidatedSetup& setup, const AdmissionThreshold& lambda,
                                    double alpha, double tol) {
  const int tau = check_threshold(setup, lambda);
  const auto& v = lambda.values;
  const int n = setup.k_upper();
  SufficiencyReport rep;

  const double value = setup.conjugate(setup.p_min()) / alpha;
  const double gtop = setup.min_profit(setup.k_lower());
  if (alpha >= 1.0 && value <= gtop * (1.0 + 1e-12)) {
    rep.tau_admissible =
        tau <= setup.k_lower() - 1 && tau >= setup.min_production(std::min(value, gtop)) - 1;
  }
  rep.terminal_ok = std::abs(v[n] - setup.p_max()) <= setup.price_tol() * 1e3;

  bool ok = true;
  double reserve = 0.0;
  for (int i = 0; i < n; ++i) {
    reserve += v[i] - setup.marginal_cost(i + 1);
    if (i < tau) continue;
    const double need = setup.conjugate(v[i + 1]) / alpha;
    const double slack = reserve - need;
    rep.slack.push_back(slack);
    if (slack < -tol * std::max(1.0, need)) {
      ok = false;
      if (!rep.first_failure) rep.first_failure = i;
    }
  }
  rep.pass = ok && rep.tau_admissible && rep.terminal_ok;
  return rep;
}

OptimalDesign linear_closed_form(const ValidatedSetup& setup, const SolverConfig& config) {
  if (setup.cost().family() != CostFamily::kLinear) {
    throw Error(ErrorCode::kNotLinearFamily, "closed form needs a linear cost");
  }
  const double a = setup.cost().a();
  const int k = setup.k();
  const double kd = k;
  const double rho_a = (setup.p_max() - a) / (setup.p_min() - a);
  if (degenerate(setup) || rho_a <= 1.0) return degenerate_design(setup);

  // Left side of the CR equation with ceil(k/alpha) frozen at m.
  auto lhs = [&](double alpha, int m) {
    return std::exp((kd - m) * std::log1p(alpha / kd)) * (alpha / kd) * m;
  };

  int m;
  double lo;
  double hi;
  if (lhs(kd, 1) <= rho_a) {
    m = 1;
    lo = kd;
    hi = 2.0 * kd;
    int expansions = 0;
    while (lhs(hi, 1) < rho_a) {
      if (++expansions > config.max_iter) throw Error(ErrorCode::kBracketingFailed, "alpha above k");
      lo = hi;
      hi *= 2.0;
    }
  } else {
    // lhs(k/m, m) decreases in m; find the smallest m with lhs(k/m, m) <= rho_a.
    int lo_m = 2;
    int hi_m = k;
    while (lo_m < hi_m) {
      const int mid = lo_m + (hi_m - lo_m) / 2;
      if (lhs(kd / mid, mid) <= rho_a) {
        hi_m = mid;
      } else {
        lo_m = mid + 1;
      }
    }
    m = lo_m;
    lo = kd / m;
    hi = kd / (m - 1);
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (lhs(mid, m) < rho_a) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double cr = 0.5 * (lo + hi);
  const int tau = m - 1;

  OptimalDesign d;
  d.cr_star = cr;
  d.threshold.tau = tau;
  d.threshold.values.assign(k + 1, setup.p_min());
  for (int i = tau + 1; i < k; ++i) {
    d.threshold.values[i] =
        cr * std::pow(1.0 + cr / kd, i - tau - 1) * ((tau + 1) / kd) * (setup.p_min() - a) + a;
  }
  d.threshold.values[k] = setup.p_max();
  d.residuals = sose_residuals(setup, d.threshold, cr);
  d.tau_candidates = {{tau, cr, 0}};
  return d;
}

UpperBoundReport convexity_upper_bounds(const ValidatedSetup& setup, double cr_star, double mu,
                                        std::optional<double> zeta) {
  const int k = setup.k();
  const double ck = setup.marginal_cost(k);
  if (!(setup.p_min() > ck)) {
    throw Error(ErrorCode::kCaseNotApplicable, "upper bounds need p_min > c_max");
  }
  if (!(mu >= 0.0)) throw Error(ErrorCode::kValueOutOfRange, "mu must be >= 0");
  const double kd = k;
  const double c = cr_star;

  UpperBoundReport rep;
  rep.rho_c = (setup.p_max() - ck) / (setup.p_min() - ck);
  rep.xi = mu > 0.0 ? (setup.p_min() - setup.cost().derivative(0.0)) / (mu * kd) : kInf;
  rep.zeta = zeta ? *zeta : std::max(rep.xi, 1.0);

  const double slack = 1.0 + 1e-12;
  rep.convex_lhs = std::pow(1.0 + c / kd, kd - std::ceil(kd / c));
  rep.convex_margin = rep.rho_c - rep.convex_lhs;
  rep.convex_holds = rep.convex_lhs <= rep.rho_c * slack;

  if (std::isinf(rep.xi)) {
    rep.strong_lhs = rep.convex_lhs;
  } else {
    const double xc = rep.xi * c;
    // (k/C)(xi C - sqrt((xi C - 1)^2 + C - 1)) without cancellation.
    const double inner = kd * (2.0 * rep.xi - 1.0) / (xc + std::sqrt((xc - 1.0) * (xc - 1.0) + c - 1.0));
    rep.strong_lhs = std::pow(1.0 + c / kd, kd - std::ceil(inner));
  }
  rep.strong_margin = rep.rho_c - rep.strong_lhs;
  rep.strong_holds = rep.strong_lhs <= rep.rho_c * slack;

  const double l = std::log(rep.rho_c);
  rep.convex_cap = 1.0 + l;
  if (std::isinf(rep.zeta)) {
    rep.strong_cap = rep.convex_cap;
  } else {
    const double z = rep.zeta;
    const double w = (z - 1.0) / (2.0 * z - 1.0);
    const double v = z * z / ((2.0 * z - 1.0) * (2.0 * z - 1.0));
    rep.strong_cap = 0.5 + w * l + std::sqrt(0.25 + w * l + v * l * l);
  }
  return rep;
}

}  // namespace oscc
