// Runs the seven acceptance gates for this repository and prints one
// PASS/FAIL line each. Every check is exact rational or integer-count
// arithmetic; the only pinned numeric constants are the runtime budgets and
// the frozen regression bound, all named below. Exits nonzero when any
// gate fails.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "ldic/entropy.hpp"
#include "ldic/regions.hpp"
#include "ldic/scheme.hpp"
#include "ldic/sim.hpp"

using namespace ldic;

namespace {

constexpr int kMaxGain = 4;                 // per-link gain grid 0..4
constexpr double kGridBudgetSeconds = 120;  // criterion 1 wall-clock gate
constexpr double kSimBudgetSeconds = 300;   // criterion 6 wall-clock gate
constexpr int kPairedTrials = 500;          // criterion 6(c) and 6(d) batch size
// Frozen regression bound for the interior point at N=128, calibrated at
// first implementation: the always-on certified construction decodes every
// trial, so any error at all is a regression.
constexpr int kFrozenErrorBound = 0;

const Rational kProbGrid[] = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4),
                              Rational(1)};

struct Gate {
  std::string name;
  bool pass = false;
  long checks = 0;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// The symmetric weak-interference acceptance channel and its rate points.
scheme::SchemeConfig interior_config(int N) {
  scheme::SchemeConfig c;
  c.params = ChannelParams(2, 1, 1, 2);
  c.dist = FeedbackDist::independent(Rational(1), Rational(1));
  c.N = N;
  c.B = 4;
  c.R1p = c.R2p = Rational(13, 16);  // per-user total 11/8, 90%-ish of 3/2
  c.R1c = c.R2c = Rational(9, 16);
  c.r1 = c.r2 = Rational(3, 2);
  return c;
}

scheme::SchemeConfig exterior_config(int N) {
  scheme::SchemeConfig c = interior_config(N);
  c.R1p = c.R2p = Rational(1);  // per-user total 29/16, sum 120% of the bound 3
  c.R1c = c.R2c = Rational(13, 16);
  return c;
}

Gate criterion_region_grid() {
  Gate g;
  g.name = "theorem1-grid";
  auto t0 = std::chrono::steady_clock::now();
  long bad = 0;
  for (int n11 = 0; n11 <= kMaxGain; ++n11)
   for (int n12 = 0; n12 <= kMaxGain; ++n12)
    for (int n21 = 0; n21 <= kMaxGain; ++n21)
     for (int n22 = 0; n22 <= kMaxGain; ++n22) {
       ChannelParams p(n11, n12, n21, n22);
       for (const Rational& p1 : kProbGrid)
         for (const Rational& p2 : kProbGrid) {
           ++g.checks;
           if (!region_equal(inner_region(p, p1, p2), outer_region(p, p1, p2)).equal) ++bad;
         }
     }
  double el = seconds_since(t0);
  g.pass = bad == 0 && el < kGridBudgetSeconds;
  g.detail = std::to_string(g.checks) + " tuples, " + std::to_string(bad) +
             " mismatches, " + std::to_string(el).substr(0, 5) + "s";
  return g;
}

Gate criterion_closed_forms() {
  Gate g;
  g.name = "closed-forms";
  long bad = 0;
  const int n = 12;
  for (int m = 2; m <= 36; ++m) {  // alpha = m/12 from 1/6 to 3
    Rational alpha(m, 12);
    ChannelParams p(n, m, m, n);
    for (const Rational& prob : kProbGrid) {
      ++g.checks;
      if (sym_capacity(n, alpha, prob) != symmetric_max(outer_region(p, prob, prob))) ++bad;
    }
    ++g.checks;
    if (!(p_star(alpha) <= Rational(1, 2))) ++bad;
  }
  struct Pin {
    Rational alpha, want;
  };
  for (const Pin& pin : {Pin{Rational(1, 3), Rational(1, 2)}, Pin{Rational(2, 3), Rational(0)},
                         Pin{Rational(3), Rational(1, 4)}}) {
    ++g.checks;
    if (p_star(pin.alpha) != pin.want) ++bad;
  }
  g.pass = bad == 0;
  g.detail = std::to_string(g.checks) + " values, " + std::to_string(bad) + " off";
  return g;
}

Gate criterion_state_model() {
  Gate g;
  g.name = "appendix-a";
  const FeedbackDist joints[] = {
      FeedbackDist::independent(Rational(1, 2), Rational(1, 2)),
      FeedbackDist(Rational(1, 2), Rational(0), Rational(0), Rational(1, 2)),
      FeedbackDist(Rational(0), Rational(1, 2), Rational(1, 2), Rational(0)),
  };
  long bad = 0;
  for (int n11 = 0; n11 <= kMaxGain; ++n11)
   for (int n12 = 0; n12 <= kMaxGain; ++n12)
    for (int n21 = 0; n21 <= kMaxGain; ++n21)
     for (int n22 = 0; n22 <= kMaxGain; ++n22) {
       ChannelParams p(n11, n12, n21, n22);
       entropy::SchemeSystem sys = entropy::build_scheme_system(p, 12345);
       entropy::SchemeBoundReport reports[3];
       for (int j = 0; j < 3; ++j) {
         reports[j] = entropy::evaluate_scheme_bounds(sys, joints[j]);
         ++g.checks;
         if (!reports[j].all_match) ++bad;  // rank expectation vs closed form
       }
       ++g.checks;
       if (!entropy::dominance_report(sys).ok) ++bad;
       // Final constraint set: everything the dominance step keeps must be
       // blind to the state correlation. The dominated joint-decoding
       // threshold is the one row with an interaction term and never
       // reaches the region.
       for (int j = 1; j < 3; ++j) {
         ++g.checks;
         bool same = true;
         for (int u = 0; u < 6; ++u) {
           if (reports[0].user1[u].label == "joint") continue;
           same = same && reports[j].user1[u].computed == reports[0].user1[u].computed;
           same = same && reports[j].user2[u].computed == reports[0].user2[u].computed;
         }
         if (!same) ++bad;
       }
     }
  g.pass = bad == 0;
  g.detail = std::to_string(g.checks) + " checks, " + std::to_string(bad) + " failed";
  return g;
}

Gate criterion_rate_split_fact() {
  Gate g;
  g.name = "fact1";
  long bad = 0;
  for (int n11 = 0; n11 <= kMaxGain; ++n11)
   for (int n12 = 0; n12 <= kMaxGain; ++n12)
    for (int n21 = 0; n21 <= kMaxGain; ++n21)
     for (int n22 = 0; n22 <= kMaxGain; ++n22) {
       ChannelParams p(n11, n12, n21, n22);
       for (const Rational& p1 : kProbGrid)
         for (const Rational& p2 : kProbGrid) {
           ++g.checks;
           SchemeConstants k = scheme_constants(p, p1, p2);
           if (k.t1 > k.p1c + k.s2 || k.t2 > k.p2c + k.s1) ++bad;
         }
     }
  g.pass = bad == 0;
  g.detail = std::to_string(g.checks) + " tuples, " + std::to_string(bad) + " violations";
  return g;
}

Gate criterion_feedback_collapse() {
  Gate g;
  g.name = "feedback-collapse";
  long bad = 0;
  Rational one(1);
  for (int n11 = 0; n11 <= kMaxGain; ++n11)
   for (int n12 = 0; n12 <= kMaxGain; ++n12)
    for (int n21 = 0; n21 <= kMaxGain; ++n21)
     for (int n22 = 0; n22 <= kMaxGain; ++n22) {
       ChannelParams p(n11, n12, n21, n22);
       std::vector<OuterRow> rows = outer_region_rows(p, one, one);
       RateRegion base({"R1", "R2"});
       for (const OuterRow& row : rows)
         if (row.family <= 3) base.add(row.con);
       base = canonicalize(base);
       // redundancy certificate: each extra sum row cannot cut the region
       for (const OuterRow& row : rows) {
         if (row.family <= 3) continue;
         ++g.checks;
         LpResult best = maximize(base, row.con.coeffs);
         if (best.status != LpResult::Optimal || best.value > row.con.bound) ++bad;
       }
     }
  g.pass = bad == 0;
  g.detail = std::to_string(g.checks) + " rows certified, " + std::to_string(bad) + " active";
  return g;
}

Gate criterion_simulation() {
  Gate g;
  g.name = "simulation";
  auto t0 = std::chrono::steady_clock::now();
  std::string why;
  bool ok = true;

  // (a) zero-error regimes: no cross traffic at full private rate, and
  // zero rate on an interfering channel, 1000 trials each
  {
    scheme::SchemeConfig quiet;
    quiet.params = ChannelParams(3, 0, 0, 3);
    quiet.dist = FeedbackDist::independent(Rational(1, 2), Rational(1, 2));
    quiet.N = 16;
    quiet.B = 3;
    quiet.R1p = quiet.R2p = Rational(3);
    quiet.R1c = quiet.R2c = Rational(0);
    quiet.r1 = quiet.r2 = Rational(0);
    sim::SimResult r = sim::run_monte_carlo(quiet, 1000, 2024);
    ++g.checks;
    if (r.err1 + r.err2 + r.outage != 0) {
      ok = false;
      why += " no-interference errs;";
    }

    scheme::SchemeConfig zero = interior_config(16);
    zero.dist = FeedbackDist::independent(Rational(1, 2), Rational(1, 2));
    zero.R1p = zero.R1c = zero.R2p = zero.R2c = Rational(0);
    r = sim::run_monte_carlo(zero, 1000, 2025);
    ++g.checks;
    if (r.err1 + r.err2 != 0) {
      ok = false;
      why += " zero-rate errs;";
    }
  }

  // (b) paired seeds across N: interior error is non-increasing
  {
    int prev1 = -1, prev2 = -1;
    for (int N : {16, 32, 64, 128}) {
      sim::SimResult r = sim::run_monte_carlo(interior_config(N), 200, 555);
      ++g.checks;
      if (prev1 >= 0 && (r.err1 > prev1 || r.err2 > prev2)) {
        ok = false;
        why += " err grew at N=" + std::to_string(N) + ";";
      }
      prev1 = r.err1;
      prev2 = r.err2;
    }
  }

  // (c) interior vs exterior, paired masters, strict separation every run
  for (std::uint64_t master : {1, 2, 3}) {
    sim::SimResult in = sim::run_monte_carlo(interior_config(16), kPairedTrials, master);
    sim::SimResult ex = sim::run_monte_carlo(exterior_config(16), kPairedTrials, master);
    ++g.checks;
    if (!(ex.err1 > in.err1 && ex.err2 > in.err2)) {
      ok = false;
      why += " no separation at master " + std::to_string(master) + ";";
    }
  }

  // (d) frozen regression bound at N=128
  {
    sim::SimResult r = sim::run_monte_carlo(interior_config(128), kPairedTrials, 777);
    ++g.checks;
    if (r.err1 > kFrozenErrorBound || r.err2 > kFrozenErrorBound || r.outage > 0) {
      ok = false;
      why += " frozen bound broken (" + std::to_string(r.err1) + "," +
             std::to_string(r.err2) + "," + std::to_string(r.outage) + ");";
    }
  }

  double el = seconds_since(t0);
  if (el >= kSimBudgetSeconds) {
    ok = false;
    why += " over budget;";
  }
  g.pass = ok;
  g.detail = std::to_string(g.checks) + " checks, " + std::to_string(el).substr(0, 5) + "s" +
             (why.empty() ? "" : "," + why);
  return g;
}

Gate criterion_determinism() {
  Gate g;
  g.name = "determinism";
  bool ok = true;

  scheme::SchemeConfig cfg = interior_config(16);
  cfg.dist = FeedbackDist::independent(Rational(1, 2), Rational(1, 2));
  cfg.R1p = cfg.R2p = Rational(1, 2);
  cfg.R1c = cfg.R2c = Rational(1, 4);
  cfg.delta = Rational(1, 4);
  cfg.r1 = cfg.r2 = Rational(3, 4);
  sim::SimResult a = sim::run_monte_carlo(cfg, 100, 4242);
  sim::SimResult b = sim::run_monte_carlo(cfg, 100, 4242);
  ++g.checks;
  ok = ok && sim::sim_result_to_json(cfg, a) == sim::sim_result_to_json(cfg, b);
  ++g.checks;
  ok = ok && sim::sim_result_to_csv(cfg, a) == sim::sim_result_to_csv(cfg, b);

  ChannelParams p(3, 2, 2, 3);
  ++g.checks;
  ok = ok && region_to_json(outer_region(p, Rational(1, 4), Rational(3, 4))) ==
                 region_to_json(outer_region(p, Rational(1, 4), Rational(3, 4)));

  scheme::CodebookSet books = scheme::generate_codebooks(cfg, 9);
  scheme::TrialOptions opt;
  opt.keep_traces = true;
  scheme::TrialResult t1 = scheme::run_trial(cfg, books, 11, opt);
  scheme::TrialResult t2 = scheme::run_trial(cfg, books, 11, opt);
  ++g.checks;
  ok = ok && scheme::trial_trace_to_json(cfg, t1.traces) ==
                 scheme::trial_trace_to_json(cfg, t2.traces);

  g.pass = ok;
  g.detail = std::to_string(g.checks) + " byte comparisons";
  return g;
}

}  // namespace

int main() {
  Gate gates[] = {
      criterion_region_grid(),    criterion_closed_forms(),     criterion_state_model(),
      criterion_rate_split_fact(), criterion_feedback_collapse(), criterion_simulation(),
      criterion_determinism(),
  };
  int failed = 0;
  int idx = 0;
  for (const Gate& g : gates) {
    ++idx;
    std::printf("criterion %d %-18s %s (%s)\n", idx, g.name.c_str(),
                g.pass ? "PASS" : "FAIL", g.detail.c_str());
    failed += !g.pass;
  }
  std::printf("acceptance: %d/7 passed\n", 7 - failed);
  return failed == 0 ? 0 : 1;
}
