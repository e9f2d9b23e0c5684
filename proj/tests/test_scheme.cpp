#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "ldic/scheme.hpp"

using namespace ldic;
using namespace ldic::scheme;

namespace {

// Symmetric weak-interference channel, always-on feedback, rates at 90% of
// the symmetric corner 3/2. N must be a multiple of 16.
SchemeConfig interior(int N) {
  SchemeConfig c;
  c.params = ChannelParams(2, 1, 1, 2);
  c.dist = FeedbackDist::independent(Rational(1), Rational(1));
  c.N = N;
  c.B = 4;
  c.R1p = c.R2p = Rational(13, 16);
  c.R1c = c.R2c = Rational(9, 16);
  c.r1 = c.r2 = Rational(3, 2);
  return c;
}

// Same channel at half-on feedback, rates inside the p=1/2 region.
SchemeConfig half_feedback(int N) {
  SchemeConfig c;
  c.params = ChannelParams(2, 1, 1, 2);
  c.dist = FeedbackDist::independent(Rational(1, 2), Rational(1, 2));
  c.N = N;
  c.B = 4;
  c.R1p = c.R2p = Rational(1, 2);
  c.R1c = c.R2c = Rational(1, 4);
  c.delta = Rational(1, 4);
  c.r1 = c.r2 = Rational(3, 4);
  return c;
}

SchemeConfig no_interference() {
  SchemeConfig c;
  c.params = ChannelParams(3, 0, 0, 3);
  c.dist = FeedbackDist::independent(Rational(1, 2), Rational(1, 2));
  c.N = 16;
  c.B = 3;
  c.R1p = c.R2p = Rational(3);
  c.R1c = c.R2c = Rational(0);
  c.r1 = c.r2 = Rational(0);
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  SchemeConfig c = interior(16);
  CHECK_NOTHROW(c.validate());
  CHECK(c.bits(c.R1p) == 13);
  CHECK(c.bits(Rational(3, 2)) == 24);

  SchemeConfig frac = interior(16);
  frac.R1p = Rational(1, 3);  // 16/3 bits is not a whole count
  CHECK_THROWS_AS(frac.validate(), std::exception);

  SchemeConfig thin = interior(16);
  thin.r1 = Rational(1);  // below p2 * n21 + delta = 3/2
  CHECK_THROWS_AS(thin.validate(), std::exception);

  // no cross traffic waives the covering margin entirely
  CHECK_NOTHROW(no_interference().validate());
}

TEST_CASE("config json round trip") {
  SchemeConfig c = half_feedback(32);
  SchemeConfig back = parse_scheme_config(scheme_config_to_json(c));
  CHECK(back.params == c.params);
  CHECK(back.dist.q00 == c.dist.q00);
  CHECK(back.dist.q11 == c.dist.q11);
  CHECK(back.N == c.N);
  CHECK(back.B == c.B);
  CHECK(back.R1p == c.R1p);
  CHECK(back.R1c == c.R1c);
  CHECK(back.R2p == c.R2p);
  CHECK(back.R2c == c.R2c);
  CHECK(back.r1 == c.r1);
  CHECK(back.r2 == c.r2);
  CHECK(back.delta == c.delta);
}

TEST_CASE("codebooks are seed-deterministic") {
  SchemeConfig c = interior(16);
  CodebookSet a = generate_codebooks(c, 7);
  CodebookSet b = generate_codebooks(c, 7);
  CHECK(a.c1 == b.c1);
  CHECK(a.p1 == b.p1);
  CHECK(a.l1 == b.l1);
  CHECK(a.hash1 == b.hash1);
  CHECK(a.c2 == b.c2);
  CHECK(a.hash2 == b.hash2);
  CHECK(a.resamples == b.resamples);
  CHECK(a.decode_certified == b.decode_certified);

  CodebookSet other = generate_codebooks(c, 8);
  CHECK(!(other.c1 == a.c1));
}

TEST_CASE("interior rate points certify, exterior ones cannot") {
  CHECK(generate_codebooks(interior(16), 7).decode_certified);
  CHECK(generate_codebooks(interior(32), 7).decode_certified);

  // 29/16 per user: the per-block word volume exceeds the block length,
  // which forces a kernel no draw can avoid
  SchemeConfig ext = interior(16);
  ext.R1p = ext.R2p = Rational(1);
  ext.R1c = ext.R2c = Rational(13, 16);
  CodebookSet books = generate_codebooks(ext, 7);
  CHECK_FALSE(books.decode_certified);
  CHECK(books.resamples >= 1);
}

TEST_CASE("both transmitters reconstruct the same shared quantities") {
  for (SchemeConfig c : {interior(16), half_feedback(16)}) {
    for (std::uint64_t seed : {100, 101, 102}) {
      CodebookSet books = generate_codebooks(c, 7);
      TrialOptions opt;
      opt.keep_traces = true;
      TrialResult t = run_trial(c, books, seed, opt);
      REQUIRE(t.traces.size() == std::size_t(c.B + 1));
      for (const BlockTrace& blk : t.traces) CHECK(blk.agree);
    }
  }
}

TEST_CASE("helper removal cuts the dependence on older blocks") {
  SchemeConfig c = half_feedback(16);
  CodebookSet books = generate_codebooks(c, 7);
  StateSeq states = sample_states(c.dist, std::size_t(c.N) * (c.B + 1), 31);
  Messages msgs = sample_messages(c, 55);

  Messages tweaked = msgs;  // change every block-1 word
  tweaked.w1c[0].flip(0);
  tweaked.w1p[0].flip(1);
  tweaked.w2c[0].flip(2);
  tweaked.w2p[0].flip(0);

  Transmission base = encode_all(c, books, msgs, states);
  Transmission moved = encode_all(c, books, tweaked, states);

  CHECK(!(moved.blocks[0].x1 == base.blocks[0].x1));  // the change is real

  // block 2 carries a different helper payload, but its fresh cross parts
  // and bin indices only see block-2 words
  CHECK(moved.blocks[1].vb1 == base.blocks[1].vb1);
  CHECK(moved.blocks[1].vb2 == base.blocks[1].vb2);
  CHECK(moved.blocks[1].q1 == base.blocks[1].q1);
  CHECK(moved.blocks[1].q2 == base.blocks[1].q2);

  // from block 3 on nothing remembers block 1 at all
  for (std::size_t b = 2; b < base.blocks.size(); ++b) {
    CHECK(moved.blocks[b].x1 == base.blocks[b].x1);
    CHECK(moved.blocks[b].x2 == base.blocks[b].x2);
    CHECK(moved.blocks[b].y1 == base.blocks[b].y1);
    CHECK(moved.blocks[b].y2 == base.blocks[b].y2);
  }
}

TEST_CASE("true bin indices can only improve decoding") {
  SchemeConfig c = half_feedback(16);
  CodebookSet books = generate_codebooks(c, 7);
  TrialOptions opt;
  opt.genie = true;
  int chained_fail = 0, genie_rescue = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    TrialResult t = run_trial(c, books, seed, opt);
    CHECK((!t.ok1 || t.genie_ok1));
    CHECK((!t.ok2 || t.genie_ok2));
    chained_fail += !t.ok1;
    genie_rescue += (!t.ok1 && t.genie_ok1);
  }
  CHECK(chained_fail >= genie_rescue);
}

TEST_CASE("no interference decodes exactly at full rate") {
  SchemeConfig c = no_interference();
  CodebookSet books = generate_codebooks(c, 7);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    TrialResult t = run_trial(c, books, seed, {});
    CHECK(t.ok1);
    CHECK(t.ok2);
    CHECK_FALSE(t.outage);
  }
}

TEST_CASE("zero rate decodes exactly under any states") {
  SchemeConfig c = half_feedback(16);
  c.R1p = c.R1c = c.R2p = c.R2c = Rational(0);
  CodebookSet books = generate_codebooks(c, 7);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    TrialResult t = run_trial(c, books, seed, {});
    CHECK(t.ok1);
    CHECK(t.ok2);
  }
}

TEST_CASE("certified interior point decodes every always-on trial") {
  SchemeConfig c = interior(16);
  CodebookSet books = generate_codebooks(c, 7);
  REQUIRE(books.decode_certified);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    TrialResult t = run_trial(c, books, seed, {});
    CHECK(t.ok1);
    CHECK(t.ok2);
    for (bool b : t.block_ok) CHECK(b);
  }
}

TEST_CASE("trials are deterministic including traces") {
  SchemeConfig c = half_feedback(16);
  CodebookSet books = generate_codebooks(c, 7);
  TrialOptions opt;
  opt.keep_traces = true;
  TrialResult a = run_trial(c, books, 42, opt);
  TrialResult b = run_trial(c, books, 42, opt);
  CHECK(a.ok1 == b.ok1);
  CHECK(a.ok2 == b.ok2);
  CHECK(a.outage == b.outage);
  CHECK(a.block_ok == b.block_ok);
  std::string ja = trial_trace_to_json(c, a.traces);
  std::string jb = trial_trace_to_json(c, b.traces);
  CHECK(ja == jb);
  CHECK_NOTHROW(nlohmann::json::parse(ja));
}
