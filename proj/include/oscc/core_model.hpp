#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace oscc {

enum class CostFamily { kLinear, kQuadratic, kExponential, kTable };

std::string_view family_name(CostFamily family);

// Convex production cost with f(0) = 0.
//   linear       f(y) = a y
//   quadratic    f(y) = a y^2
//   exponential  f(y) = a (e^{y/s} - 1)
//   table        marginal costs c_1..c_k, f piecewise linear between integers
class CostModel {
 public:
  static CostModel linear(double a);
  static CostModel quadratic(double a);
  static CostModel exponential(double a = 145.5, double s = 50.0);
  static CostModel table(std::vector<double> marginals);

  CostFamily family() const { return family_; }
  double a() const { return a_; }
  double s() const { return s_; }
  const std::vector<double>& marginals() const { return table_; }

  // f(i) at an integer argument.
  double total(int i) const;
  // c_i = f(i) - f(i-1), i >= 1.
  double marginal(int i) const;
  // Continuous extension f(y), y >= 0.
  double value(double y) const;
  // f'(y); for tables the right-continuous step c_{ceil(y)} (c_1 at y = 0).
  double derivative(double y) const;

 private:
  CostFamily family_ = CostFamily::kLinear;
  double a_ = 0.0;
  double s_ = 1.0;
  std::vector<double> table_;
};

struct Setup {
  CostModel cost;
  double p_min = 0.0;
  double p_max = 0.0;
  int k = 0;
};

enum class CaseTag { kHighValue, kLowValue, kMixValue };

std::string_view case_name(CaseTag tag);

// Immutable setup enriched with the marginal-cost table and derived capacities.
class ValidatedSetup {
 public:
  explicit ValidatedSetup(Setup setup);

  const Setup& setup() const { return setup_; }
  const CostModel& cost() const { return setup_.cost; }
  double p_min() const { return setup_.p_min; }
  double p_max() const { return setup_.p_max; }
  int k() const { return setup_.k; }
  double rho() const { return setup_.p_max / setup_.p_min; }
  CaseTag case_tag() const { return case_tag_; }
  int k_lower() const { return k_lower_; }
  int k_upper() const { return k_upper_; }
  std::pair<int, int> capacity_bounds() const { return {k_lower_, k_upper_}; }
  // Absolute tolerance for price comparisons.
  double price_tol() const { return tol_; }

  double marginal_cost(int i) const;
  double total_cost(int i) const;
  int gamma(double p) const;
  double min_profit(int i) const;
  int min_production(double value) const;
  double conjugate(double p) const;
  double conjugate_inverse(double value) const;

  // Solves f*(x) + slope * x = value for x >= 0. The left side is strictly
  // increasing when slope > 0 (or x > c_1).
  double invert_conjugate_affine(double value, double slope) const;

 private:
  int count_at_most(double p) const;

  Setup setup_;
  std::vector<double> c_;  // c_[i] = c_i, c_[0] unused
  std::vector<double> f_;  // f_[i] = f(i)
  CaseTag case_tag_ = CaseTag::kHighValue;
  int k_lower_ = 0;
  int k_upper_ = 0;
  double tol_ = 0.0;
};

ValidatedSetup validate_setup(const Setup& setup);

// Same setup with the cost replaced by its marginal table.
Setup as_table_setup(const Setup& setup);

}  // namespace oscc
