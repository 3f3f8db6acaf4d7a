#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "oscc/core_model.hpp"

namespace oscc {

struct BoundConfig {
  double quad_tol = 1e-11;
  int quad_max_depth = 40;
  double ode_tol = 1e-9;
  double bisection_tol = 1e-13;  // relative width of the outer bisections
  int max_iter = 200;
  bool keep_trace = false;
};

// Adaptive Simpson with |error| <= tol * (1 + |value|). The integrand may jump at
// the given breakpoints; pieces are integrated separately and evaluated just
// inside each jump.
double quad_integrate(const std::function<double(double)>& fn, double lo, double hi, double tol,
                      const std::vector<double>& breakpoints = {}, int max_depth = 40);

struct LowerBoundResult {
  double cr_lb = 1.0;
  std::vector<double> gamma;  // gamma^(1) .. gamma^(last), last = k_upper
  std::vector<double> q;      // q^(1) .. q^(last)
  double residual = 0.0;      // |computed gamma^(last) - k_upper|
};

struct ChainResult {
  std::vector<double> gamma;  // gamma^(1) .. as far as the chain got
  bool feasible = true;
  int failed_step = 0;  // 1-based step without a root below k_upper
};

// Price levels q^(1) .. q^(k_upper - k_lower + 2).
std::vector<double> chain_prices(const ValidatedSetup& setup);

// F(gamma1) = f*(p_min) / (p_min gamma1 - f(gamma1)), f on the continuous extension.
double chain_ratio(const ValidatedSetup& setup, double gamma1);

ChainResult gamma_chain(const ValidatedSetup& setup, double gamma1, double ratio,
                        const BoundConfig& config = {});

LowerBoundResult finite_k_lower_bound(const ValidatedSetup& setup, const BoundConfig& config = {});

// Cost rescaled to unit capacity: ft(i/k) = f(i). Prices on this scale are k times
// the per-unit price.
class NormalizedCost {
 public:
  explicit NormalizedCost(const ValidatedSetup& setup);

  double value(double y) const;
  double derivative(double y) const;
  // (ft')^{-1}(P) clamped to [0, 1]; also the derivative of the conjugate.
  double derivative_inverse(double price) const;
  // max_{y in [0,1]} P y - ft(y).
  double conjugate(double price) const;

 private:
  CostFamily family_;
  double a_;
  double s_;
  double k_;
};

struct ShootResult {
  double phi_end = 0.0;  // +inf on blow-up
  double y0 = 0.0;
  double theta = 1.0;
  bool blew_up = false;
  std::vector<std::pair<double, double>> trace;  // (y, phi) in per-unit prices
};

ShootResult shoot_phi(const ValidatedSetup& setup, double alpha, double ode_tol = 1e-9,
                      bool keep_trace = false);

struct AsymptoticResult {
  double cr_asym = 1.0;
  double theta = 1.0;
  std::vector<std::pair<double, double>> phi_trace;
};

AsymptoticResult asymptotic_lower_bound(const ValidatedSetup& setup, const BoundConfig& config = {});

}  // namespace oscc
