#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "oscc/core_model.hpp"
#include "oscc/threshold_solver.hpp"

namespace oscc {

enum class InstanceKind { kLow2High, kRandom, kHigh2Low, kAdversarial };

std::string_view kind_name(InstanceKind kind);
std::optional<InstanceKind> parse_kind(std::string_view name);

struct ArrivalInstance {
  std::vector<double> prices;
  InstanceKind kind = InstanceKind::kRandom;
  std::uint64_t seed = 0;
  double rho = 1.0;
};

struct RunTrace {
  std::vector<bool> decisions;
  int accepted_count = 0;
  double profit = 0.0;
  bool price_outside_model = false;
};

RunTrace run_tos(const ValidatedSetup& setup, const AdmissionThreshold& lambda,
                 const std::vector<double>& prices);

double offline_optimal(const ValidatedSetup& setup, const std::vector<double>& prices);

ArrivalInstance generate_instance(const ValidatedSetup& setup, InstanceKind kind, int T,
                                  std::uint64_t seed);

// Scenario j in 1..k_upper - tau builds the interior instance; std::nullopt builds
// the final one with the trailing p_max block.
ArrivalInstance adversarial_instance(const ValidatedSetup& setup, const AdmissionThreshold& lambda,
                                     std::optional<int> scenario, double eps);

struct EmpiricalReport {
  std::vector<double> ers;  // +inf for samples with non-positive online profit
  std::vector<std::uint64_t> seeds;
  double aer = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
  double min = 0.0;
  double max = 0.0;
  int samples = 0;
  int excluded = 0;
};

EmpiricalReport empirical_report(const ValidatedSetup& setup, const AdmissionThreshold& lambda,
                                 InstanceKind kind, int T, int N, std::uint64_t base_seed,
                                 unsigned threads = 1);

// Statistics over the finite entries of ers.
void summarize(EmpiricalReport& report);

struct MisestimationRow {
  double rho_hat = 0.0;
  double rho_ratio = 0.0;
  int T = 0;
  double aer = 0.0;
  int excluded = 0;
};

std::vector<MisestimationRow> misestimation_sweep(const ValidatedSetup& setup_true,
                                                  const std::vector<double>& rho_hat_grid,
                                                  InstanceKind kind, const std::vector<int>& T_list,
                                                  int N, std::uint64_t seed,
                                                  const SolverConfig& config = {},
                                                  unsigned threads = 1);

}  // namespace oscc
