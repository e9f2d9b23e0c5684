#include "ldic/channel.hpp"

#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "ldic/rng.hpp"

namespace ldic {

ChannelParams::ChannelParams(int a11, int a12, int a21, int a22)
    : n11(a11), n12(a12), n21(a21), n22(a22) {
  if (n11 < 0 || n12 < 0 || n21 < 0 || n22 < 0)
    throw std::invalid_argument("channel gains must be nonnegative");
}

int ChannelParams::q() const { return std::max(std::max(n11, n12), std::max(n21, n22)); }

gf2::Mat ChannelParams::h11() const { return gf2::Mat::shift_power(q(), n11); }
gf2::Mat ChannelParams::h12() const { return gf2::Mat::shift_power(q(), n12); }
gf2::Mat ChannelParams::h21() const { return gf2::Mat::shift_power(q(), n21); }
gf2::Mat ChannelParams::h22() const { return gf2::Mat::shift_power(q(), n22); }

FeedbackDist::FeedbackDist(Rational a, Rational b, Rational c, Rational d)
    : q00(a), q01(b), q10(c), q11(d) {
  for (const Rational* r : {&q00, &q01, &q10, &q11})
    if (r->sign() < 0 || *r > Rational(1))
      throw std::invalid_argument("state probabilities must lie in [0,1]");
  if (q00 + q01 + q10 + q11 != Rational(1))
    throw std::invalid_argument("state probabilities must sum to 1");
}

FeedbackDist FeedbackDist::independent(const Rational& p1, const Rational& p2) {
  Rational one(1);
  return FeedbackDist((one - p1) * (one - p2), (one - p1) * p2, p1 * (one - p2), p1 * p2);
}

Rational FeedbackDist::weight(int s1, int s2) const {
  if (s1 == 0) return s2 == 0 ? q00 : q01;
  return s2 == 0 ? q10 : q11;
}

ChannelOutput transmit(const ChannelParams& p, const gf2::Vec& x1, const gf2::Vec& x2) {
  std::size_t q = std::size_t(p.q());
  if (x1.size() != q || x2.size() != q)
    throw std::invalid_argument("channel inputs must have length q");
  ChannelOutput out;
  out.v1 = p.h21().apply(x1);
  out.v2 = p.h12().apply(x2);
  out.y1 = p.h11().apply(x1) ^ out.v2;
  out.y2 = p.h22().apply(x2) ^ out.v1;
  return out;
}

StateSeq sample_states(const FeedbackDist& d, std::size_t count, std::uint64_t seed) {
  // Exact categorical sampling: draw uniformly below the common denominator
  // and bucket by cumulative numerators. No floating point involved.
  std::int64_t den = 1;
  for (const Rational* r : {&d.q00, &d.q01, &d.q10, &d.q11})
    den = std::lcm(den, r->den());
  std::uint64_t c0 = std::uint64_t(d.q00.num() * (den / d.q00.den()));
  std::uint64_t c1 = c0 + std::uint64_t(d.q01.num() * (den / d.q01.den()));
  std::uint64_t c2 = c1 + std::uint64_t(d.q10.num() * (den / d.q10.den()));

  std::mt19937_64 rng(seed);
  StateSeq s;
  s.s1.resize(count);
  s.s2.resize(count);
  for (std::size_t t = 0; t < count; ++t) {
    std::uint64_t u = uniform_below(rng, std::uint64_t(den));
    int s1 = 0, s2 = 0;
    if (u < c0) {
      // (0,0)
    } else if (u < c1) {
      s2 = 1;
    } else if (u < c2) {
      s1 = 1;
    } else {
      s1 = s2 = 1;
    }
    s.s1[t] = std::uint8_t(s1);
    s.s2[t] = std::uint8_t(s2);
  }
  return s;
}

FeedbackSymbol feedback(const gf2::Vec& y, bool state_on) {
  FeedbackSymbol f;
  if (state_on) {
    f.present = true;
    f.y = y;
  }
  return f;
}

namespace {

Rational prob_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing key: ") + key);
  const auto& v = j.at(key);
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  throw std::invalid_argument(std::string(key) +
                              ": probabilities must be exact strings like \"1/2\" or \"0.5\"; "
                              "binary floating point is not accepted");
}

int gain_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing key: ") + key);
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw std::invalid_argument(std::string(key) + " must be an integer");
  return v.get<int>();
}

}  // namespace

ChannelSpec parse_channel_spec(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  ChannelSpec spec;
  spec.params = ChannelParams(gain_from_json(j, "n11"), gain_from_json(j, "n12"),
                              gain_from_json(j, "n21"), gain_from_json(j, "n22"));
  if (j.contains("q00") || j.contains("q01") || j.contains("q10") || j.contains("q11")) {
    spec.dist = FeedbackDist(prob_from_json(j, "q00"), prob_from_json(j, "q01"),
                             prob_from_json(j, "q10"), prob_from_json(j, "q11"));
  } else if (j.contains("p1") || j.contains("p2")) {
    spec.dist = FeedbackDist::independent(prob_from_json(j, "p1"), prob_from_json(j, "p2"));
  } else {
    throw std::invalid_argument("channel spec needs q00..q11 or p1/p2");
  }
  return spec;
}

ChannelSpec load_channel_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_channel_spec(ss.str());
}

std::string channel_spec_to_json(const ChannelSpec& spec) {
  nlohmann::ordered_json j;
  j["n11"] = spec.params.n11;
  j["n12"] = spec.params.n12;
  j["n21"] = spec.params.n21;
  j["n22"] = spec.params.n22;
  j["q00"] = spec.dist.q00.str();
  j["q01"] = spec.dist.q01.str();
  j["q10"] = spec.dist.q10.str();
  j["q11"] = spec.dist.q11.str();
  return j.dump(2);
}

}  // namespace ldic
