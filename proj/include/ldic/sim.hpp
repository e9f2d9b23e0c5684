#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ldic/rational.hpp"
#include "ldic/scheme.hpp"

namespace ldic::sim {

// Aggregate of a seeded trial batch. wall_seconds is measured but kept out
// of the serializers so identical (config, seed, trials) stays
// byte-identical on disk.
struct SimResult {
  int trials = 0;
  int err1 = 0, err2 = 0;  // trials with any message error for that user
  int outage = 0;          // trials voided by a quantizer outage
  std::vector<int> block_err;  // per message block: trials where it failed
  double wall_seconds = 0.0;
};

// Seed plan: codebooks from derive_seed(master_seed, 0), trial i from
// derive_seed(master_seed, 1 + i). Trials are independent, so execution
// order and worker count cannot change the aggregate.
SimResult run_monte_carlo(const scheme::SchemeConfig& cfg, int trials, std::uint64_t master_seed);

// Wilson score interval for an error probability at the given confidence
// level (e.g. 95/100). The normal quantile comes from bisecting the erf
// integral, so no tables are involved.
std::pair<double, double> wilson_interval(int errors, int trials, const Rational& level);

std::string sim_result_to_json(const scheme::SchemeConfig& cfg, const SimResult& r);

// One header plus one row: trial_count, r1p, r1c, r2p, r2c, N, B, err1,
// err2, outage. Rates are exact rational strings.
std::string sim_result_to_csv(const scheme::SchemeConfig& cfg, const SimResult& r);

}  // namespace ldic::sim
