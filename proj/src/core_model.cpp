#include "oscc/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oscc/error.hpp"

namespace oscc {

std::string_view family_name(CostFamily family) {
  switch (family) {
    case CostFamily::kLinear: return "linear";
    case CostFamily::kQuadratic: return "quadratic";
    case CostFamily::kExponential: return "exponential";
    case CostFamily::kTable: return "table";
  }
  return "unknown";
}

std::string_view case_name(CaseTag tag) {
  switch (tag) {
    case CaseTag::kHighValue: return "HighValue";
    case CaseTag::kLowValue: return "LowValue";
    case CaseTag::kMixValue: return "MixValue";
  }
  return "unknown";
}

namespace {

void require_coefficient(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw Error(ErrorCode::kInvalidCostModel,
                std::string(name) + " must be a finite non-negative number");
  }
}

}  // namespace

CostModel CostModel::linear(double a) {
  require_coefficient(a, "a");
  CostModel m;
  m.family_ = CostFamily::kLinear;
  m.a_ = a;
  return m;
}

CostModel CostModel::quadratic(double a) {
  require_coefficient(a, "a");
  CostModel m;
  m.family_ = CostFamily::kQuadratic;
  m.a_ = a;
  return m;
}

CostModel CostModel::exponential(double a, double s) {
  require_coefficient(a, "a");
  if (!std::isfinite(s) || s <= 0.0) {
    throw Error(ErrorCode::kInvalidCostModel, "s must be a finite positive number");
  }
  CostModel m;
  m.family_ = CostFamily::kExponential;
  m.a_ = a;
  m.s_ = s;
  return m;
}

CostModel CostModel::table(std::vector<double> marginals) {
  if (marginals.empty()) {
    throw Error(ErrorCode::kInvalidCostModel, "marginal table is empty");
  }
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    require_coefficient(marginals[i], "marginal cost");
    if (i > 0 && marginals[i] < marginals[i - 1]) {
      throw Error(ErrorCode::kNonMonotoneMarginals,
                  "c_" + std::to_string(i + 1) + " < c_" + std::to_string(i));
    }
  }
  CostModel m;
  m.family_ = CostFamily::kTable;
  m.table_ = std::move(marginals);
  return m;
}

double CostModel::total(int i) const {
  if (i < 0) throw Error(ErrorCode::kIndexOutOfRange, "negative unit count");
  switch (family_) {
    case CostFamily::kLinear: return a_ * i;
    case CostFamily::kQuadratic: return a_ * static_cast<double>(i) * i;
    case CostFamily::kExponential: return a_ * std::expm1(i / s_);
    case CostFamily::kTable: {
      if (i > static_cast<int>(table_.size())) {
        throw Error(ErrorCode::kIndexOutOfRange, "unit count beyond table");
      }
      double sum = 0.0;
      for (int j = 0; j < i; ++j) sum += table_[j];
      return sum;
    }
  }
  return 0.0;
}

double CostModel::marginal(int i) const {
  if (i < 1) throw Error(ErrorCode::kIndexOutOfRange, "marginal index must be >= 1");
  switch (family_) {
    case CostFamily::kLinear: return a_;
    case CostFamily::kQuadratic: return a_ * (2.0 * i - 1.0);
    case CostFamily::kExponential: return a_ * std::exp((i - 1) / s_) * std::expm1(1.0 / s_);
    case CostFamily::kTable:
      if (i > static_cast<int>(table_.size())) {
        throw Error(ErrorCode::kIndexOutOfRange, "marginal index beyond table");
      }
      return table_[i - 1];
  }
  return 0.0;
}

double CostModel::value(double y) const {
  switch (family_) {
    case CostFamily::kLinear: return a_ * y;
    case CostFamily::kQuadratic: return a_ * y * y;
    case CostFamily::kExponential: return a_ * std::expm1(y / s_);
    case CostFamily::kTable: {
      const int n = static_cast<int>(table_.size());
      const int whole = std::clamp(static_cast<int>(std::floor(y)), 0, n);
      double sum = 0.0;
      for (int j = 0; j < whole; ++j) sum += table_[j];
      const double frac = y - whole;
      if (frac > 0.0) sum += frac * table_[std::min(whole, n - 1)];
      return sum;
    }
  }
  return 0.0;
}

double CostModel::derivative(double y) const {
  switch (family_) {
    case CostFamily::kLinear: return a_;
    case CostFamily::kQuadratic: return 2.0 * a_ * y;
    case CostFamily::kExponential: return a_ / s_ * std::exp(y / s_);
    case CostFamily::kTable: {
      const int n = static_cast<int>(table_.size());
      const int idx = std::clamp(static_cast<int>(std::ceil(y)), 1, n);
      return table_[idx - 1];
    }
  }
  return 0.0;
}

ValidatedSetup::ValidatedSetup(Setup setup) : setup_(std::move(setup)) {
  const int k = setup_.k;
  if (k < 1) throw Error(ErrorCode::kNonPositiveCapacity, "k must be >= 1");
  if (setup_.cost.family() == CostFamily::kTable &&
      static_cast<int>(setup_.cost.marginals().size()) != k) {
    throw Error(ErrorCode::kInvalidCostModel,
                "table has " + std::to_string(setup_.cost.marginals().size()) +
                    " entries but k = " + std::to_string(k));
  }
  if (!std::isfinite(setup_.p_min) || !std::isfinite(setup_.p_max)) {
    throw Error(ErrorCode::kPriceBoundViolation, "prices must be finite");
  }

  c_.assign(k + 1, 0.0);
  f_.assign(k + 1, 0.0);
  for (int i = 1; i <= k; ++i) {
    c_[i] = setup_.cost.marginal(i);
    if (!std::isfinite(c_[i])) {
      throw Error(ErrorCode::kInvalidCostModel, "marginal cost c_" + std::to_string(i) + " is not finite");
    }
    if (i > 1 && c_[i] < c_[i - 1]) {
      throw Error(ErrorCode::kNonMonotoneMarginals, "c_" + std::to_string(i) + " < c_" + std::to_string(i - 1));
    }
  }
  if (setup_.cost.family() == CostFamily::kTable) {
    for (int i = 1; i <= k; ++i) f_[i] = f_[i - 1] + c_[i];
  } else {
    for (int i = 1; i <= k; ++i) f_[i] = setup_.cost.total(i);
  }

  if (setup_.p_min <= c_[1]) {
    throw Error(ErrorCode::kPriceBoundViolation, "p_min must exceed c_1");
  }
  if (setup_.p_max < setup_.p_min) {
    throw Error(ErrorCode::kPriceBoundViolation, "p_max must be >= p_min");
  }

  tol_ = 1e-12 * std::max(1.0, setup_.p_max);
  if (c_[k] < setup_.p_min) {
    case_tag_ = CaseTag::kHighValue;
  } else if (c_[k] >= setup_.p_max) {
    case_tag_ = CaseTag::kLowValue;
  } else {
    case_tag_ = CaseTag::kMixValue;
  }
  k_lower_ = gamma(setup_.p_min);
  k_upper_ = gamma(setup_.p_max);
}

ValidatedSetup validate_setup(const Setup& setup) { return ValidatedSetup(setup); }

Setup as_table_setup(const Setup& setup) {
  if (setup.k < 1) throw Error(ErrorCode::kNonPositiveCapacity, "k must be >= 1");
  std::vector<double> c(setup.k);
  for (int i = 1; i <= setup.k; ++i) c[i - 1] = setup.cost.marginal(i);
  Setup out = setup;
  out.cost = CostModel::table(std::move(c));
  return out;
}

double ValidatedSetup::marginal_cost(int i) const {
  if (i < 1 || i > k()) {
    throw Error(ErrorCode::kIndexOutOfRange, "marginal index " + std::to_string(i) + " outside [1, k]");
  }
  return c_[i];
}

double ValidatedSetup::total_cost(int i) const {
  if (i < 0 || i > k()) {
    throw Error(ErrorCode::kIndexOutOfRange, "unit count " + std::to_string(i) + " outside [0, k]");
  }
  return f_[i];
}

int ValidatedSetup::count_at_most(double p) const {
  return static_cast<int>(std::upper_bound(c_.begin() + 1, c_.end(), p) - (c_.begin() + 1));
}

int ValidatedSetup::gamma(double p) const {
  if (!(p >= p_min() - tol_ && p <= p_max() + tol_)) {
    throw Error(ErrorCode::kPriceOutOfRange, "price outside [p_min, p_max]");
  }
  return count_at_most(p + tol_);
}

double ValidatedSetup::min_profit(int i) const {
  if (i < 0 || i > k_lower_) {
    throw Error(ErrorCode::kIndexOutOfRange, "min_profit index outside [0, k_lower]");
  }
  return p_min() * i - f_[i];
}

int ValidatedSetup::min_production(double value) const {
  const double top = min_profit(k_lower_);
  const double vtol = 1e-12 * std::max(1.0, top);
  if (!(value >= -vtol && value <= top + vtol)) {
    throw Error(ErrorCode::kValueOutOfRange, "value outside [0, g(k_lower)]");
  }
  int lo = 0;
  int hi = k_lower_;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (min_profit(mid) >= value - vtol) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

double ValidatedSetup::conjugate(double p) const {
  if (!(p >= 0.0)) throw Error(ErrorCode::kPriceOutOfRange, "conjugate needs p >= 0");
  // Convexity puts the maximizer of p*i - f(i) at the count of marginals <= p,
  // so the sorted table replaces enumeration outside [p_min, p_max] as well.
  const int n = (p >= p_min() - tol_ && p <= p_max() + tol_) ? gamma(p) : count_at_most(p);
  return p * n - f_[n];
}

double ValidatedSetup::invert_conjugate_affine(double value, double slope) const {
  const int n = k();
  auto at_breakpoint = [&](int j) { return (j - 1) * c_[j] - f_[j - 1] + slope * c_[j]; };
  // Largest j with h(c_j) <= value.
  int lo = 0;
  int hi = n;
  while (lo < hi) {
    const int mid = lo + (hi - lo + 1) / 2;
    if (at_breakpoint(mid) <= value) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  if (lo == 0) {
    return slope > 0.0 ? std::max(0.0, value / slope) : c_[1];
  }
  const int j = lo;
  double x = (value + f_[j]) / (j + slope);
  x = std::max(x, c_[j]);
  if (j < n) x = std::min(x, c_[j + 1]);
  return x;
}

double ValidatedSetup::conjugate_inverse(double value) const {
  const double lo = conjugate(p_min());
  const double hi = conjugate(p_max());
  const double vtol = 1e-12 * std::max(1.0, hi);
  if (!(value >= lo - vtol && value <= hi + vtol)) {
    throw Error(ErrorCode::kValueOutOfRange, "value outside [f*(p_min), f*(p_max)]");
  }
  return std::clamp(invert_conjugate_affine(value, 0.0), p_min(), p_max());
}

}  // namespace oscc
