#include "oscc/lower_bound.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

#include "oscc/error.hpp"

namespace oscc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Simpson {
  const std::function<double(double)>& fn;

  double run(double a, double b, double fa, double fm, double fb, double whole, double eps,
             int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = fn(lm);
    const double frm = fn(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps || std::abs(delta) <= 8.0 * DBL_EPSILON * std::abs(left + right)) {
      return left + right + delta / 15.0;
    }
    if (depth <= 0) {
      throw Error(ErrorCode::kMaxDepthExceeded, "adaptive Simpson hit its depth limit");
    }
    return run(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           run(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
  }
};

}  // namespace

double quad_integrate(const std::function<double(double)>& fn, double lo, double hi, double tol,
                      const std::vector<double>& breakpoints, int max_depth) {
  if (!(lo <= hi)) throw Error(ErrorCode::kValueOutOfRange, "quadrature needs lo <= hi");
  if (lo == hi) return 0.0;

  std::vector<double> cuts{lo};
  std::vector<double> inner;
  for (double b : breakpoints) {
    if (b > lo && b < hi) inner.push_back(b);
  }
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  cuts.insert(cuts.end(), inner.begin(), inner.end());
  cuts.push_back(hi);
  std::vector<double> sorted_jumps = breakpoints;
  std::sort(sorted_jumps.begin(), sorted_jumps.end());
  auto is_jump = [&](double x) { return std::binary_search(sorted_jumps.begin(), sorted_jumps.end(), x); };

  const Simpson simpson{fn};
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p];
    const double b = cuts[p + 1];
    const double nudge = 1e-13 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    const double fa = fn(is_jump(a) ? std::min(a + nudge, 0.5 * (a + b)) : a);
    const double fb = fn(is_jump(b) ? std::max(b - nudge, 0.5 * (a + b)) : b);
    const double fm = fn(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double eps = tol * (1.0 + std::abs(whole));
    total += simpson.run(a, b, fa, fm, fb, whole, eps, max_depth);
  }
  return total;
}

std::vector<double> chain_prices(const ValidatedSetup& setup) {
  const int lo = setup.k_lower();
  const int steps = setup.k_upper() - lo + 1;
  std::vector<double> q(steps + 1);
  q[0] = setup.p_min();
  for (int l = 1; l < steps; ++l) q[l] = setup.marginal_cost(lo + l);
  q[steps] = setup.p_max();
  return q;
}

double chain_ratio(const ValidatedSetup& setup, double gamma1) {
  const double reserve = setup.p_min() * gamma1 - setup.cost().value(gamma1);
  return setup.conjugate(setup.p_min()) / reserve;
}

ChainResult gamma_chain(const ValidatedSetup& setup, double gamma1, double ratio,
                        const BoundConfig& config) {
  const std::vector<double> q = chain_prices(setup);
  const int steps = static_cast<int>(q.size()) - 1;
  const double cap = setup.k_upper();
  const CostModel& cost = setup.cost();

  std::vector<double> jumps;
  if (cost.family() == CostFamily::kTable) {
    for (int i = 1; i < setup.k(); ++i) jumps.push_back(i);
  }

  ChainResult out;
  out.gamma.push_back(gamma1);
  for (int l = 1; l <= steps; ++l) {
    const double start = out.gamma.back();
    const double qa = q[l - 1];
    const double qb = q[l];
    const double n = setup.k_lower() + l - 1;
    const double rate = ratio / n;
    if (qb - qa <= 0.0) {
      out.gamma.push_back(start);
      continue;
    }
    auto weight = [&](double y) { return cost.derivative(y) * std::exp(-rate * (y - start)); };
    auto g = [&](double x) {
      const double integral = quad_integrate(weight, start, x, config.quad_tol, jumps, config.quad_max_depth);
      return qb * std::exp(-rate * (x - start)) - qa + rate * integral;
    };

    // G falls while f' < qb and rises afterwards; its minimum on [start, cap]
    // sits where f' first reaches qb.
    double turn = cap;
    if (start >= cap || cost.derivative(start) >= qb) {
      turn = start;
    } else if (cost.derivative(cap) >= qb) {
      double lo = start;
      double hi = cap;
      for (int it = 0; it < config.max_iter && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cost.derivative(mid) >= qb) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      turn = hi;
    }
    if (turn <= start || g(turn) > 0.0) {
      out.feasible = false;
      out.failed_step = l;
      return out;
    }

    double lo = start;
    double hi = turn;
    for (int it = 0; it < config.max_iter; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi || hi - lo <= 1e-15 * std::max(1.0, hi)) break;
      if (g(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.gamma.push_back(0.5 * (lo + hi));
  }
  return out;
}

LowerBoundResult finite_k_lower_bound(const ValidatedSetup& setup, const BoundConfig& config) {
  LowerBoundResult res;
  res.q = chain_prices(setup);
  const double top = setup.k_lower();
  const double cap = setup.k_upper();
  if (setup.p_max() - setup.p_min() <= setup.price_tol()) {
    res.cr_lb = 1.0;
    res.gamma.assign(res.q.size(), cap);
    res.gamma.front() = top;
    return res;
  }

  auto residual = [&](double gamma1, ChainResult* keep) {
    ChainResult chain = gamma_chain(setup, gamma1, chain_ratio(setup, gamma1), config);
    const double r = chain.feasible ? chain.gamma.back() - cap : kInf;
    if (keep) *keep = std::move(chain);
    return r;
  };

  double lo = 1e-9 * top;
  double hi = top;
  const double r_lo = residual(lo, nullptr);
  const double r_hi = residual(hi, nullptr);
  if (r_hi == 0.0) lo = hi;
  if (r_lo == 0.0) hi = lo;
  if (lo != hi && (r_lo > 0.0) == (r_hi > 0.0)) {
    throw Error(ErrorCode::kNoConvergence, "terminal residual has one sign over the whole gamma1 bracket");
  }
  // Orient so that the residual is non-positive at lo.
  const bool increasing = r_lo <= 0.0;
  for (int it = 0; it < config.max_iter && lo != hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi || hi - lo <= config.bisection_tol * hi) break;
    const double r = residual(mid, nullptr);
    if ((r <= 0.0) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  // Report the feasible end of the final bracket.
  ChainResult chain;
  double gamma1 = increasing ? lo : hi;
  double r = residual(gamma1, &chain);
  if (!std::isfinite(r)) {
    gamma1 = increasing ? hi : lo;
    r = residual(gamma1, &chain);
  }
  if (!std::isfinite(r)) {
    throw Error(ErrorCode::kNoConvergence, "gamma chain infeasible at the bisection root");
  }
  res.cr_lb = chain_ratio(setup, gamma1);
  res.residual = std::abs(r);
  res.gamma = chain.gamma;
  res.gamma.back() = cap;
  return res;
}

}  // namespace oscc
