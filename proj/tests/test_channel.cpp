#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <stdexcept>

#include "ldic/channel.hpp"

using namespace ldic;
using gf2::Mat;
using gf2::Vec;

TEST_CASE("gains and shift matrices") {
  ChannelParams p(3, 2, 2, 3);
  CHECK(p.q() == 3);
  CHECK(p.h11().rank() == 3);
  CHECK(p.h12().rank() == 2);
  CHECK(p.h21().rank() == 2);
  CHECK(p.h22().rank() == 3);
  CHECK(p.h11().rows() == 3);
  CHECK(p.h11().cols() == 3);
  CHECK_THROWS_AS(ChannelParams(-1, 0, 0, 0), std::invalid_argument);
  CHECK(ChannelParams(0, 4, 1, 2).q() == 4);
}

TEST_CASE("transmit is pure and linear") {
  ChannelParams p(3, 1, 2, 2);
  std::mt19937_64 rng(3);
  Vec x1 = Vec::random(3, rng), x2 = Vec::random(3, rng);
  ChannelOutput a = transmit(p, x1, x2);
  ChannelOutput b = transmit(p, x1, x2);
  CHECK(a.y1 == b.y1);
  CHECK(a.y2 == b.y2);
  CHECK(a.v1 == b.v1);
  CHECK(a.v2 == b.v2);

  // superposition: output of the sum is the xor of outputs (zero other input)
  Vec z(3);
  Vec d = Vec::random(3, rng);
  ChannelOutput base = transmit(p, x1, x2);
  ChannelOutput delta = transmit(p, d, z);
  ChannelOutput moved = transmit(p, x1 ^ d, x2);
  CHECK(moved.y1 == (base.y1 ^ delta.y1));
  CHECK(moved.y2 == (base.y2 ^ delta.y2));

  CHECK(a.y1 == (p.h11().apply(x1) ^ p.h12().apply(x2)));
  CHECK(a.v1 == p.h21().apply(x1));
  CHECK_THROWS_AS(transmit(p, Vec(2), Vec(3)), std::invalid_argument);
}

TEST_CASE("levels above the gain never reach the output") {
  // perturbing input bits at index >= n_ij leaves component H_ij x_j alone
  for (int n11 : {0, 1, 2, 3}) {
    for (int n21 : {0, 1, 2, 3}) {
      ChannelParams p(n11, 0, n21, 3);
      std::size_t q = std::size_t(p.q());
      std::mt19937_64 rng(17);
      Vec x1 = Vec::random(q, rng), x2 = Vec::random(q, rng);
      ChannelOutput base = transmit(p, x1, x2);
      for (std::size_t lvl = std::size_t(std::max(n11, n21)); lvl < q; ++lvl) {
        Vec x1p = x1;
        x1p.flip(lvl);
        ChannelOutput got = transmit(p, x1p, x2);
        CHECK(got.y1 == base.y1);
        CHECK(got.v1 == base.v1);
      }
    }
  }
}

TEST_CASE("feedback distribution") {
  FeedbackDist d = FeedbackDist::independent(Rational(1, 4), Rational(2, 3));
  CHECK(d.p1() == Rational(1, 4));
  CHECK(d.p2() == Rational(2, 3));
  CHECK(d.q11 == Rational(1, 4) * Rational(2, 3));
  CHECK(d.q00 + d.q01 + d.q10 + d.q11 == Rational(1));
  CHECK(d.weight(0, 0) == d.q00);
  CHECK(d.weight(0, 1) == d.q01);
  CHECK(d.weight(1, 0) == d.q10);
  CHECK(d.weight(1, 1) == d.q11);

  CHECK_THROWS_AS(FeedbackDist(Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(-1, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(FeedbackDist(Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)),
                  std::invalid_argument);

  FeedbackDist def;
  CHECK(def.p1() == Rational(0));
  CHECK(def.p2() == Rational(0));
}

TEST_CASE("state sampling honors the distribution support") {
  FeedbackDist on = FeedbackDist::independent(Rational(1), Rational(1));
  StateSeq s = sample_states(on, 64, 9);
  REQUIRE(s.size() == 64);
  for (std::size_t t = 0; t < s.size(); ++t) {
    CHECK(s.s1[t] == 1);
    CHECK(s.s2[t] == 1);
  }

  FeedbackDist off = FeedbackDist::independent(Rational(0), Rational(0));
  s = sample_states(off, 64, 9);
  for (std::size_t t = 0; t < s.size(); ++t) {
    CHECK(s.s1[t] == 0);
    CHECK(s.s2[t] == 0);
  }

  // fully correlated: the two links always agree
  FeedbackDist cor(Rational(1, 2), Rational(0), Rational(0), Rational(1, 2));
  s = sample_states(cor, 256, 10);
  bool saw_on = false, saw_off = false;
  for (std::size_t t = 0; t < s.size(); ++t) {
    CHECK(s.s1[t] == s.s2[t]);
    (s.s1[t] ? saw_on : saw_off) = true;
  }
  CHECK(saw_on);
  CHECK(saw_off);

  // anti-correlated: they always disagree
  FeedbackDist anti(Rational(0), Rational(1, 2), Rational(1, 2), Rational(0));
  s = sample_states(anti, 256, 11);
  for (std::size_t t = 0; t < s.size(); ++t) CHECK(s.s1[t] != s.s2[t]);
}

TEST_CASE("state sampling is seed-deterministic") {
  FeedbackDist d = FeedbackDist::independent(Rational(1, 3), Rational(3, 4));
  StateSeq a = sample_states(d, 500, 12345);
  StateSeq b = sample_states(d, 500, 12345);
  CHECK(a.s1 == b.s1);
  CHECK(a.s2 == b.s2);
  StateSeq c = sample_states(d, 500, 12346);
  CHECK((a.s1 != c.s1 || a.s2 != c.s2));
}

TEST_CASE("feedback symbol distinguishes erased from zero") {
  Vec y(3);
  y.set(1, true);
  FeedbackSymbol on = feedback(y, true);
  CHECK(on.present);
  CHECK(on.y == y);
  FeedbackSymbol off = feedback(y, false);
  CHECK_FALSE(off.present);
  // an erased all-zero signal is still erased, not a zero observation
  FeedbackSymbol off0 = feedback(Vec(3), false);
  CHECK_FALSE(off0.present);
}

TEST_CASE("spec json round trip") {
  ChannelSpec spec;
  spec.params = ChannelParams(2, 1, 1, 2);
  spec.dist = FeedbackDist(Rational(1, 6), Rational(1, 3), Rational(1, 4), Rational(1, 4));
  ChannelSpec back = parse_channel_spec(channel_spec_to_json(spec));
  CHECK(back.params == spec.params);
  CHECK(back.dist.q00 == spec.dist.q00);
  CHECK(back.dist.q01 == spec.dist.q01);
  CHECK(back.dist.q10 == spec.dist.q10);
  CHECK(back.dist.q11 == spec.dist.q11);
}

TEST_CASE("spec json accepts marginals and exact strings only") {
  ChannelSpec s = parse_channel_spec(
      R"({"n11":3,"n12":2,"n21":2,"n22":3,"p1":"1/2","p2":"0.75"})");
  CHECK(s.dist.p1() == Rational(1, 2));
  CHECK(s.dist.p2() == Rational(3, 4));
  CHECK(s.dist.q11 == Rational(3, 8));  // marginals build the independent joint

  // binary floating point is rejected, integers pass
  CHECK_THROWS_AS(parse_channel_spec(R"({"n11":1,"n12":0,"n21":0,"n22":1,"p1":0.1,"p2":"0"})"),
                  std::invalid_argument);
  ChannelSpec one = parse_channel_spec(R"({"n11":1,"n12":0,"n21":0,"n22":1,"p1":1,"p2":0})");
  CHECK(one.dist.p1() == Rational(1));

  CHECK_THROWS_AS(parse_channel_spec(R"({"n11":1,"n12":0,"n21":0,"n22":1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_channel_spec(R"({"n12":0,"n21":0,"n22":1,"p1":"1","p2":"0"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(load_channel_spec("/nonexistent/path.json"), std::runtime_error);
}
