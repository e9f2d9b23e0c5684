#include "ldic/sim.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "ldic/rng.hpp"

namespace ldic::sim {

SimResult run_monte_carlo(const scheme::SchemeConfig& cfg, int trials,
                          std::uint64_t master_seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  auto t0 = std::chrono::steady_clock::now();

  scheme::CodebookSet books = scheme::generate_codebooks(cfg, derive_seed(master_seed, 0));
  std::size_t B = std::size_t(cfg.B);

  // Each trial fills its own slot; the reduction below is sequential, so
  // the aggregate cannot depend on scheduling.
  std::vector<scheme::TrialResult> slots(static_cast<std::size_t>(trials));
  scheme::TrialOptions opt;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < trials; ++i)
    slots[std::size_t(i)] =
        scheme::run_trial(cfg, books, derive_seed(master_seed, 1 + std::uint64_t(i)), opt);

  SimResult r;
  r.trials = trials;
  r.block_err.assign(B, 0);
  for (const auto& t : slots) {
    r.err1 += !t.ok1;
    r.err2 += !t.ok2;
    r.outage += t.outage;
    for (std::size_t b = 0; b < B; ++b)
      if (!t.outage && !t.block_ok[b]) ++r.block_err[b];
  }
  auto t1 = std::chrono::steady_clock::now();
  r.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  return r;
}

namespace {

// Inverse standard normal CDF by bisection on the erf form of Phi. The
// quantile is two-sided: level 95/100 asks for Phi^-1(0.975).
double normal_quantile(double target) {
  auto phi = [](double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); };
  double lo = 0.0, hi = 16.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (phi(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::pair<double, double> wilson_interval(int errors, int trials, const Rational& level) {
  if (errors < 0 || trials < 1 || errors > trials)
    throw std::invalid_argument("need 0 <= errors <= trials, trials >= 1");
  if (level.sign() <= 0 || level >= Rational(1))
    throw std::invalid_argument("confidence level must lie in (0,1)");
  double lv = level.to_double();
  double z = normal_quantile(1.0 - (1.0 - lv) / 2.0);
  double n = double(trials);
  double ph = double(errors) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (ph + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
  double lo = center - half, hi = center + half;
  if (lo < 0.0) lo = 0.0;
  if (hi > 1.0) hi = 1.0;
  return {lo, hi};
}

std::string sim_result_to_json(const scheme::SchemeConfig& cfg, const SimResult& r) {
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(scheme::scheme_config_to_json(cfg));
  nlohmann::ordered_json out;
  out["config"] = j;
  out["trials"] = r.trials;
  out["err1"] = r.err1;
  out["err2"] = r.err2;
  out["outage"] = r.outage;
  out["block_err"] = r.block_err;
  auto w1 = wilson_interval(r.err1, r.trials, Rational(95, 100));
  auto w2 = wilson_interval(r.err2, r.trials, Rational(95, 100));
  out["wilson95_err1"] = {w1.first, w1.second};
  out["wilson95_err2"] = {w2.first, w2.second};
  return out.dump(2) + "\n";
}

std::string sim_result_to_csv(const scheme::SchemeConfig& cfg, const SimResult& r) {
  std::string s = "trial_count,r1p,r1c,r2p,r2c,N,B,err1,err2,outage\n";
  s += std::to_string(r.trials) + ',' + cfg.R1p.str() + ',' + cfg.R1c.str() + ',' +
       cfg.R2p.str() + ',' + cfg.R2c.str() + ',' + std::to_string(cfg.N) + ',' +
       std::to_string(cfg.B) + ',' + std::to_string(r.err1) + ',' + std::to_string(r.err2) +
       ',' + std::to_string(r.outage) + '\n';
  return s;
}

}  // namespace ldic::sim
