#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ldic/gf2.hpp"
#include "ldic/rational.hpp"

namespace ldic {

// Gains of the two-user deterministic interference channel. n_ij is the
// number of input levels of transmitter j visible at receiver i; all
// signals live in GF(2)^q with q = max gain.
struct ChannelParams {
  int n11 = 0, n12 = 0, n21 = 0, n22 = 0;

  ChannelParams() = default;
  ChannelParams(int a11, int a12, int a21, int a22);

  int q() const;
  gf2::Mat h11() const;
  gf2::Mat h12() const;
  gf2::Mat h21() const;
  gf2::Mat h22() const;

  bool operator==(const ChannelParams& o) const {
    return n11 == o.n11 && n12 == o.n12 && n21 == o.n21 && n22 == o.n22;
  }
};

// Joint distribution of the two feedback-state bits (S1, S2) per symbol.
// q_ab = P(S1=a, S2=b), exact rationals summing to one. Marginal p_i is the
// probability that receiver i's feedback link is on.
struct FeedbackDist {
  Rational q00, q01, q10, q11;

  FeedbackDist() : q00(1), q01(0), q10(0), q11(0) {}
  FeedbackDist(Rational a, Rational b, Rational c, Rational d);

  static FeedbackDist independent(const Rational& p1, const Rational& p2);

  Rational p1() const { return q10 + q11; }
  Rational p2() const { return q01 + q11; }

  Rational weight(int s1, int s2) const;
};

struct ChannelOutput {
  gf2::Vec y1, y2;  // receiver signals
  gf2::Vec v1, v2;  // cross images: what each transmitter contributes at the other receiver
};

// One channel use. Inputs must have length q.
ChannelOutput transmit(const ChannelParams& p, const gf2::Vec& x1, const gf2::Vec& x2);

// Per-symbol feedback states for a whole block (or several).
struct StateSeq {
  std::vector<std::uint8_t> s1, s2;
  std::size_t size() const { return s1.size(); }
};

StateSeq sample_states(const FeedbackDist& d, std::size_t count, std::uint64_t seed);

// What a transmitter sees on its feedback link for one symbol. An erased
// symbol is absent, which is not the same thing as receiving the all-zero
// signal; consumers must check `present`.
struct FeedbackSymbol {
  bool present = false;
  gf2::Vec y;
};

FeedbackSymbol feedback(const gf2::Vec& y, bool state_on);

// JSON parameter file: integer gains plus the four joint state
// probabilities as exact strings ("1/2" or "0.5"). Binary floating point
// is rejected so 0.1 can never silently become 0x1.999...p-4.
struct ChannelSpec {
  ChannelParams params;
  FeedbackDist dist;
};

ChannelSpec load_channel_spec(const std::string& path);
std::string channel_spec_to_json(const ChannelSpec& spec);
ChannelSpec parse_channel_spec(const std::string& json_text);

}  // namespace ldic
