#pragma once

#include <optional>
#include <vector>

#include "oscc/core_model.hpp"

namespace oscc {

struct AdmissionThreshold {
  std::vector<double> values;  // lambda_0 .. lambda_{k_upper}
  int tau = 0;
};

struct SolverConfig {
  double bisection_tol = 1e-10;
  int max_iter = 200;
  std::optional<double> adversarial_eps;  // defaults to 1e-6 * p_min
};

struct TauCandidate {
  int tau = 0;
  double alpha = 0.0;
  // min_production(f*(p_min)/alpha) - 1 - tau; zero when consistent.
  int consistency_gap = 0;
};

struct OptimalDesign {
  AdmissionThreshold threshold;
  double cr_star = 1.0;
  std::vector<double> residuals;  // relative, one per SoSE equation
  std::vector<TauCandidate> tau_candidates;
  bool multiple_consistent_tau = false;

  double residual_max() const;
};

struct RecursionResult {
  std::vector<double> chi;  // chi_1 .. chi_{k_upper - tau - 1}
  bool escaped = false;
};

// Reverse transition of the difference equation from chi_{k_upper - tau} = p_max.
RecursionResult backward_recursion(const ValidatedSetup& setup, double alpha, int tau);

struct SoeSolution {
  double alpha = 1.0;
  std::vector<double> chi;
};

SoeSolution solve_soe_for_tau(const ValidatedSetup& setup, int tau, const SolverConfig& config = {});

OptimalDesign solve_optimal(const ValidatedSetup& setup, const SolverConfig& config = {});

// Competitive ratio guaranteed by an admission threshold; +inf when some reserve is non-positive.
double ratio_of_threshold(const ValidatedSetup& setup, const AdmissionThreshold& lambda);

struct SufficiencyReport {
  bool pass = false;
  bool tau_admissible = false;
  bool terminal_ok = false;
  // slack[i - tau] for i = tau .. k_upper - 1
  std::vector<double> slack;
  std::optional<int> first_failure;  // index i of the first failing inequality
};

SufficiencyReport verify_sufficient(const ValidatedSetup& setup, const AdmissionThreshold& lambda,
                                    double alpha, double tol = 1e-9);

// Relative residuals of each SoSE equation against alpha.
std::vector<double> sose_residuals(const ValidatedSetup& setup, const AdmissionThreshold& lambda,
                                   double alpha);

OptimalDesign linear_closed_form(const ValidatedSetup& setup, const SolverConfig& config = {});

struct UpperBoundReport {
  double xi = 0.0;
  double zeta = 0.0;
  double rho_c = 0.0;  // (p_max - c_k) / (p_min - c_k)
  double convex_lhs = 0.0;
  bool convex_holds = false;
  double convex_margin = 0.0;  // rho_c - convex_lhs
  double strong_lhs = 0.0;
  bool strong_holds = false;
  double strong_margin = 0.0;
  double convex_cap = 0.0;  // 1 + ln rho_c
  double strong_cap = 0.0;
};

// zeta defaults to max(xi, 1); mu = 0 means merely convex.
UpperBoundReport convexity_upper_bounds(const ValidatedSetup& setup, double cr_star, double mu,
                                        std::optional<double> zeta = std::nullopt);

}  // namespace oscc
