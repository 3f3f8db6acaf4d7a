#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "oscc/error.hpp"
#include "oscc/lower_bound.hpp"

namespace oscc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using State = std::array<double, 1>;

}  // namespace

NormalizedCost::NormalizedCost(const ValidatedSetup& setup)
    : family_(setup.cost().family()), a_(setup.cost().a()), s_(setup.cost().s()), k_(setup.k()) {
  if (family_ == CostFamily::kTable) {
    throw Error(ErrorCode::kUnsupportedForTable, "the asymptotic bound needs a closed-form cost");
  }
}

double NormalizedCost::value(double y) const {
  switch (family_) {
    case CostFamily::kLinear: return a_ * k_ * y;
    case CostFamily::kQuadratic: return a_ * k_ * k_ * y * y;
    case CostFamily::kExponential: return a_ * std::expm1(k_ * y / s_);
    case CostFamily::kTable: break;
  }
  return 0.0;
}

double NormalizedCost::derivative(double y) const {
  switch (family_) {
    case CostFamily::kLinear: return a_ * k_;
    case CostFamily::kQuadratic: return 2.0 * a_ * k_ * k_ * y;
    case CostFamily::kExponential: return a_ * k_ / s_ * std::exp(k_ * y / s_);
    case CostFamily::kTable: break;
  }
  return 0.0;
}

double NormalizedCost::derivative_inverse(double price) const {
  double y = 1.0;
  switch (family_) {
    case CostFamily::kLinear:
      y = price > a_ * k_ ? 1.0 : 0.0;
      break;
    case CostFamily::kQuadratic:
      y = a_ > 0.0 ? price / (2.0 * a_ * k_ * k_) : 1.0;
      break;
    case CostFamily::kExponential:
      if (a_ > 0.0) {
        const double ratio = price * s_ / (a_ * k_);
        y = ratio > 0.0 ? s_ / k_ * std::log(ratio) : 0.0;
      }
      break;
    case CostFamily::kTable: break;
  }
  return std::clamp(y, 0.0, 1.0);
}

double NormalizedCost::conjugate(double price) const {
  const double y = derivative_inverse(price);
  return std::max(0.0, price * y - value(y));
}

ShootResult shoot_phi(const ValidatedSetup& setup, double alpha, double ode_tol, bool keep_trace) {
  if (!(alpha >= 1.0)) throw Error(ErrorCode::kValueOutOfRange, "alpha must be >= 1");
  const NormalizedCost ft(setup);
  const double kd = setup.k();
  const double big_min = kd * setup.p_min();
  const double big_max = kd * setup.p_max();

  ShootResult out;
  // Start: g(y) = P_min y - ft(y) hits ft*(P_min)/alpha on the rising branch.
  const double peak = ft.derivative_inverse(big_min);
  const double target = ft.conjugate(big_min) / alpha;
  double lo = 0.0;
  double hi = peak;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (big_min * mid - ft.value(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.y0 = 0.5 * (lo + hi);
  out.theta = big_max < ft.derivative(1.0) ? ft.derivative_inverse(big_max) : 1.0;

  // phi in per-unit prices: phi' = alpha (phi - ft'(y)/k) / (ft')^{-1}(k phi).
  auto rhs = [&](const State& x, State& dxdt, double y) {
    const double denom = ft.derivative_inverse(kd * x[0]);
    dxdt[0] = alpha * (x[0] - ft.derivative(y) / kd) / denom;
  };

  State x{setup.p_min()};
  double y = out.y0;
  if (keep_trace) out.trace.emplace_back(y, x[0]);
  const double lo_guard = setup.p_min() * (1.0 - 1e-9);
  const double hi_guard = 10.0 * setup.p_max();
  auto stepper = boost::numeric::odeint::make_controlled(
      ode_tol, ode_tol, boost::numeric::odeint::runge_kutta_dopri5<State>());
  double dt = std::max((out.theta - out.y0) / 64.0, 1e-12);
  int rejected = 0;
  while (out.theta - y > 1e-15) {
    dt = std::min(dt, out.theta - y);
    const auto result = stepper.try_step(rhs, x, y, dt);
    if (result == boost::numeric::odeint::fail) {
      if (++rejected > 10000 || dt < 1e-14) {
        throw Error(ErrorCode::kStiffStep, "step size collapsed while shooting");
      }
      continue;
    }
    rejected = 0;
    if (!std::isfinite(x[0]) || x[0] < lo_guard || x[0] > hi_guard) {
      out.blew_up = true;
      out.phi_end = kInf;
      return out;
    }
    if (keep_trace) out.trace.emplace_back(y, x[0]);
  }
  out.phi_end = x[0];
  return out;
}

AsymptoticResult asymptotic_lower_bound(const ValidatedSetup& setup, const BoundConfig& config) {
  const NormalizedCost check(setup);
  (void)check;
  AsymptoticResult res;
  if (setup.p_max() - setup.p_min() <= setup.price_tol()) {
    res.theta = 1.0;
    return res;
  }
  auto residual = [&](double alpha) {
    return shoot_phi(setup, alpha, config.ode_tol).phi_end - setup.p_max();
  };

  double lo = 1.0;
  double hi = 2.0 + std::log(setup.rho());
  int expansions = 0;
  while (residual(hi) <= 0.0) {
    if (++expansions > config.max_iter) {
      throw Error(ErrorCode::kNoConvergence, "shooting residual never turned positive");
    }
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < config.max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi || hi - lo <= 1e-12 * mid) break;
    if (residual(mid) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  res.cr_asym = 0.5 * (lo + hi);
  const ShootResult last = shoot_phi(setup, res.cr_asym, config.ode_tol, config.keep_trace);
  res.theta = last.theta;
  res.phi_trace = last.trace;
  return res;
}

}  // namespace oscc
