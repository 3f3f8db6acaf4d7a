#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "oscc/core_model.hpp"

namespace oscc::testing {

inline Setup make_setup(CostModel cost, double p_min, double p_max, int k) {
  Setup s;
  s.cost = std::move(cost);
  s.p_min = p_min;
  s.p_max = p_max;
  s.k = k;
  return s;
}

// Independent oracles by direct enumeration.
inline double brute_total(const std::vector<double>& c, int i) {
  double sum = 0.0;
  for (int j = 0; j < i; ++j) sum += c[j];
  return sum;
}

inline double brute_conjugate(const std::vector<double>& c, double p) {
  double best = 0.0;
  for (int i = 1; i <= static_cast<int>(c.size()); ++i) best = std::max(best, p * i - brute_total(c, i));
  return best;
}

inline int brute_gamma(const std::vector<double>& c, double p) {
  int n = 0;
  for (double v : c) {
    if (v <= p) ++n;
  }
  return n;
}

// Random non-decreasing table with p_min above c_1; ties included now and then.
struct RandomTableCase {
  std::vector<double> c;
  double p_min;
  double p_max;
};

inline RandomTableCase random_table_case(std::mt19937_64& rng, int max_k = 30) {
  std::uniform_int_distribution<int> kd(1, max_k);
  std::uniform_real_distribution<double> step(0.0, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int k = kd(rng);
  RandomTableCase out;
  double v = 5.0 * unit(rng);
  for (int i = 0; i < k; ++i) {
    if (unit(rng) > 0.2) v += step(rng);
    out.c.push_back(v);
  }
  const double lo = out.c.front() + 0.1 + 5.0 * unit(rng);
  out.p_min = lo;
  out.p_max = lo * (1.0 + 8.0 * unit(rng));
  return out;
}

inline Setup table_setup(const RandomTableCase& rc) {
  return make_setup(CostModel::table(rc.c), rc.p_min, rc.p_max, static_cast<int>(rc.c.size()));
}

}  // namespace oscc::testing
