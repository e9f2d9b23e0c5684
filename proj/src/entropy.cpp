#include "ldic/entropy.hpp"

#include <stdexcept>

#include "ldic/rng.hpp"

namespace ldic::entropy {

std::size_t SignalSystem::add_source(const std::string& name, std::size_t bits) {
  sources_.push_back({name, bits});
  return sources_.size() - 1;
}

void SignalSystem::add_signal(Signal s) {
  for (const auto& t : s.terms) {
    if (t.source >= sources_.size()) throw std::invalid_argument("term source out of range");
    if (t.map.rows() != s.bits || t.map.cols() != sources_[t.source].bits)
      throw std::invalid_argument("term map shape mismatch in signal " + s.name);
  }
  signals_.push_back(std::move(s));
}

std::size_t SignalSystem::source_index(const std::string& name) const {
  for (std::size_t i = 0; i < sources_.size(); ++i)
    if (sources_[i].name == name) return i;
  throw std::invalid_argument("unknown source: " + name);
}

std::size_t SignalSystem::signal_index(const std::string& name) const {
  for (std::size_t i = 0; i < signals_.size(); ++i)
    if (signals_[i].name == name) return i;
  throw std::invalid_argument("unknown signal: " + name);
}

std::size_t SignalSystem::total_source_bits() const {
  std::size_t n = 0;
  for (const auto& s : sources_) n += s.bits;
  return n;
}

gf2::Mat SignalSystem::stack(const std::vector<std::string>& names, int pattern) const {
  bool s1 = pattern_s1(pattern), s2 = pattern_s2(pattern);
  std::vector<std::size_t> col_off(sources_.size(), 0);
  for (std::size_t i = 1; i < sources_.size(); ++i)
    col_off[i] = col_off[i - 1] + sources_[i - 1].bits;

  std::size_t rows = 0;
  for (const auto& n : names) rows += signals_[signal_index(n)].bits;

  gf2::Mat m(rows, total_source_bits());
  std::size_t row_off = 0;
  for (const auto& n : names) {
    const Signal& sig = signals_[signal_index(n)];
    for (const auto& t : sig.terms) {
      if (t.needs_s1 && !s1) continue;
      if (t.needs_s2 && !s2) continue;
      // xor into place: a source can appear in several terms of one signal
      for (std::size_t r = 0; r < t.map.rows(); ++r)
        for (std::size_t c = 0; c < t.map.cols(); ++c)
          if (t.map.get(r, c))
            m.set(row_off + r, col_off[t.source] + c,
                  !m.get(row_off + r, col_off[t.source] + c));
    }
    row_off += sig.bits;
  }
  return m;
}

std::size_t SignalSystem::rank_of(const std::vector<std::string>& names, int pattern) const {
  return stack(names, pattern).rank();
}

std::array<std::int64_t, kPatterns> SignalSystem::cond_entropy_profile(
    const std::vector<std::string>& a, const std::vector<std::string>& b) const {
  std::vector<std::string> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  std::array<std::int64_t, kPatterns> out{};
  for (int p = 0; p < kPatterns; ++p)
    out[p] = std::int64_t(rank_of(ab, p)) - std::int64_t(rank_of(b, p));
  return out;
}

Rational SignalSystem::cond_entropy(const std::vector<std::string>& a,
                                    const std::vector<std::string>& b,
                                    const FeedbackDist& d) const {
  auto prof = cond_entropy_profile(a, b);
  Rational total(0);
  for (int p = 0; p < kPatterns; ++p) {
    Rational w = d.weight(pattern_s1(p), pattern_s2(p));
    if (w.is_zero()) continue;
    total += w * Rational(prof[p]);
  }
  return total;
}

std::array<std::int64_t, kPatterns> SignalSystem::mutual_information_profile(
    const std::vector<std::string>& a, const std::vector<std::string>& y,
    const std::vector<std::string>& c) const {
  std::vector<std::string> ac = a;
  ac.insert(ac.end(), c.begin(), c.end());
  auto h_y_c = cond_entropy_profile(y, c);
  auto h_y_ac = cond_entropy_profile(y, ac);
  std::array<std::int64_t, kPatterns> out{};
  for (int p = 0; p < kPatterns; ++p) out[p] = h_y_c[p] - h_y_ac[p];
  return out;
}

Rational SignalSystem::mutual_information(const std::vector<std::string>& a,
                                          const std::vector<std::string>& y,
                                          const std::vector<std::string>& c,
                                          const FeedbackDist& d) const {
  auto prof = mutual_information_profile(a, y, c);
  Rational total(0);
  for (int p = 0; p < kPatterns; ++p) {
    Rational w = d.weight(pattern_s1(p), pattern_s2(p));
    if (w.is_zero()) continue;
    total += w * Rational(prof[p]);
  }
  return total;
}

namespace {

// Identity embedding of `bits` input levels starting at vector level `at`.
gf2::Mat embed(std::size_t q, std::size_t at, std::size_t bits) {
  gf2::Mat m(q, bits);
  for (std::size_t k = 0; k < bits; ++k) m.set(at + k, k, true);
  return m;
}

gf2::Mat col_slice(const gf2::Mat& m, std::size_t c0, std::size_t n) {
  gf2::Mat out(m.rows(), n);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (m.get(r, c0 + c)) out.set(r, c, true);
  return out;
}

SignalSystem make_system(const ChannelParams& cp, const gf2::Mat& l1, const gf2::Mat& l2) {
  const std::size_t q = std::size_t(cp.q());
  const std::size_t n11 = cp.n11, n12 = cp.n12, n21 = cp.n21, n22 = cp.n22;
  const std::size_t d1b = n11 > n21 ? n11 - n21 : 0;
  const std::size_t d2b = n22 > n12 ? n22 - n12 : 0;

  SignalSystem sys;
  std::size_t c1 = sys.add_source("c1", n21);
  std::size_t d1 = sys.add_source("d1", d1b);
  std::size_t c2 = sys.add_source("c2", n12);
  std::size_t d2 = sys.add_source("d2", d2b);
  std::size_t c1p = sys.add_source("c1p", n21);
  std::size_t c2p = sys.add_source("c2p", n12);

  gf2::Mat h11 = cp.h11(), h12 = cp.h12(), h21 = cp.h21(), h22 = cp.h22();
  gf2::Mat supp1 = embed(q, 0, std::max(n11, n21));
  gf2::Mat supp2 = embed(q, 0, std::max(n22, n12));
  gf2::Mat top1 = embed(q, 0, n21);   // common word of user 1
  gf2::Mat top2 = embed(q, 0, n12);   // common word of user 2
  gf2::Mat priv1 = embed(q, n21, d1b);
  gf2::Mat priv2 = embed(q, n12, d2b);

  // Previous-block words enter through the relay maps; c1p rides on state
  // s2 (its feedback link), c2p on s1. The same gated pair feeds both
  // transmitters: what one relays, the other learned too.
  auto relay_terms = [&](const gf2::Mat& supp, const gf2::Mat& l) {
    std::vector<Term> ts;
    ts.push_back({c1p, supp * col_slice(l, 0, n21), false, true});
    ts.push_back({c2p, supp * col_slice(l, n21, n12), true, false});
    return ts;
  };

  auto with_term = [](std::vector<Term> ts, Term t) {
    ts.push_back(std::move(t));
    return ts;
  };

  std::vector<Term> x1e = relay_terms(supp1, l1);
  std::vector<Term> x1c = with_term(x1e, {c1, top1, false, false});
  std::vector<Term> x1 = with_term(x1c, {d1, priv1, false, false});
  std::vector<Term> x2e = relay_terms(supp2, l2);
  std::vector<Term> x2c = with_term(x2e, {c2, top2, false, false});
  std::vector<Term> x2 = with_term(x2c, {d2, priv2, false, false});

  auto through = [](const gf2::Mat& h, const std::vector<Term>& ts) {
    std::vector<Term> out;
    for (const auto& t : ts) out.push_back({t.source, h * t.map, t.needs_s1, t.needs_s2});
    return out;
  };

  std::vector<Term> y1 = through(h11, x1);
  for (auto& t : through(h12, x2)) y1.push_back(t);
  std::vector<Term> y2 = through(h22, x2);
  for (auto& t : through(h21, x1)) y2.push_back(t);

  // Fresh words as seen across the cross links when the feedback state is
  // on; the relay parts cancel, leaving only this block's contribution.
  std::vector<Term> u1{{c1, h21 * top1, false, true}, {d1, h21 * priv1, false, true}};
  std::vector<Term> u2{{c2, h12 * top2, true, false}, {d2, h12 * priv2, true, false}};
  std::vector<Term> u1p{{c1p, h21 * top1, false, true}};
  std::vector<Term> u2p{{c2p, h12 * top2, true, false}};

  sys.add_signal({"X1e", q, x1e});
  sys.add_signal({"X1c", q, x1c});
  sys.add_signal({"X1", q, x1});
  sys.add_signal({"X2e", q, x2e});
  sys.add_signal({"X2c", q, x2c});
  sys.add_signal({"X2", q, x2});
  sys.add_signal({"Y1", q, y1});
  sys.add_signal({"Y2", q, y2});
  sys.add_signal({"U1", q, u1});
  sys.add_signal({"U2", q, u2});
  sys.add_signal({"U1p", q, u1p});
  sys.add_signal({"U2p", q, u2p});
  return sys;
}

bool certificate_holds(const SignalSystem& sys, const ChannelParams& cp) {
  std::int64_t cap1 = std::max(cp.n11, cp.n12);
  std::int64_t cap2 = std::max(cp.n22, cp.n21);
  auto y1 = sys.cond_entropy_profile({"Y1"}, {"U1", "U2"});
  auto y2 = sys.cond_entropy_profile({"Y2"}, {"U1", "U2"});
  for (int p = 0; p < kPatterns; ++p)
    if (y1[p] != cap1 || y2[p] != cap2) return false;
  return true;
}

}  // namespace

SchemeSystem build_scheme_system(const ChannelParams& cp, std::uint64_t seed) {
  const std::size_t in = std::size_t(cp.n21) + std::size_t(cp.n12);
  const std::size_t r1 = std::max<std::size_t>(cp.n11, cp.n21);
  const std::size_t r2 = std::max<std::size_t>(cp.n22, cp.n12);

  constexpr int kMaxDraws = 64;
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    std::mt19937_64 rng(derive_seed(seed, std::uint64_t(attempt)));
    gf2::Mat l1 = gf2::Mat::random(r1, in, rng);
    gf2::Mat l2 = gf2::Mat::random(r2, in, rng);
    SchemeSystem s{make_system(cp, l1, l2), cp, attempt};
    if (certificate_holds(s.sys, cp)) return s;
  }
  throw std::runtime_error("no relay map draw passed the rank certificate");
}

std::array<Rational, 6> closed_form_bounds_user1(const ChannelParams& cp,
                                                 const FeedbackDist& d) {
  Rational n11(cp.n11), n12(cp.n12), n21(cp.n21), n22(cp.n22);
  Rational a1 = pos(n11 - n21);
  Rational p1 = d.p1(), p2 = d.p2();
  std::array<Rational, 6> b;
  b[0] = a1;
  b[1] = max(a1, n12) + p1 * min(a1, n12);
  b[2] = n11 + p2 * pos(n21 - n11);
  b[3] = d.q00 * max(n11, n12) + d.q01 * max(n11, n12 + n21) + d.q10 * (n11 + n12) +
         d.q11 * (max(n11, n21) + n12);
  b[4] = max(n11, n12) + p2 * n21 + p1 * n12;
  b[5] = p2 * n21;
  return b;
}

std::array<Rational, 6> closed_form_bounds_user2(const ChannelParams& cp,
                                                 const FeedbackDist& d) {
  Rational n11(cp.n11), n12(cp.n12), n21(cp.n21), n22(cp.n22);
  Rational a2 = pos(n22 - n12);
  Rational p1 = d.p1(), p2 = d.p2();
  std::array<Rational, 6> b;
  b[0] = a2;
  b[1] = max(a2, n21) + p2 * min(a2, n21);
  b[2] = n22 + p1 * pos(n12 - n22);
  b[3] = d.q00 * max(n22, n21) + d.q10 * max(n22, n21 + n12) + d.q01 * (n22 + n21) +
         d.q11 * (max(n22, n12) + n21);
  b[4] = max(n22, n21) + p1 * n12 + p2 * n21;
  b[5] = p1 * n12;
  return b;
}

namespace {

Rational weigh(const std::array<std::int64_t, kPatterns>& prof, const FeedbackDist& d) {
  Rational total(0);
  for (int p = 0; p < kPatterns; ++p) {
    Rational w = d.weight(pattern_s1(p), pattern_s2(p));
    if (w.is_zero()) continue;
    total += w * Rational(prof[p]);
  }
  return total;
}

BoundEval make_eval(std::string label, const std::array<std::int64_t, kPatterns>& prof,
                    const FeedbackDist& d, const Rational& closed) {
  BoundEval e;
  e.label = std::move(label);
  e.per_pattern = prof;
  e.computed = weigh(prof, d);
  e.closed_form = closed;
  e.match = e.computed == e.closed_form;
  return e;
}

std::array<BoundEval, 6> eval_user(const SignalSystem& sys, const FeedbackDist& d,
                                   const std::array<Rational, 6>& closed, bool first) {
  // Role swap: user 2's bounds condition on the mirrored signals.
  std::string X = first ? "X1" : "X2";
  std::string Xc = first ? "X1c" : "X2c";
  std::string Xoc = first ? "X2c" : "X1c";  // cross common word
  std::string Y = first ? "Y1" : "Y2";
  std::string U = first ? "U1" : "U2";
  std::vector<std::string> yu{Y, "U1", "U2"};
  std::vector<std::string> helpers{"U1p", "U2p"};

  auto cat = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };

  std::array<BoundEval, 6> out;
  out[0] = make_eval("private", sys.mutual_information_profile({X}, yu, cat({Xc, Xoc}, helpers)),
                     d, closed[0]);
  out[1] = make_eval("private_plus_cross",
                     sys.mutual_information_profile({Xoc, X}, yu, cat({Xc}, helpers)), d,
                     closed[1]);
  out[2] = make_eval("single_user", sys.mutual_information_profile({X}, yu, cat({Xoc}, helpers)),
                     d, closed[2]);
  out[3] = make_eval("joint", sys.mutual_information_profile({Xoc, X}, yu, helpers), d,
                     closed[3]);
  out[4] = make_eval("everything",
                     sys.mutual_information_profile(cat(helpers, {Xoc, X}), yu, {}), d,
                     closed[4]);
  out[5] = make_eval("feedback_residual", sys.cond_entropy_profile({U}, {}), d, closed[5]);
  return out;
}

}  // namespace

SchemeBoundReport evaluate_scheme_bounds(const SchemeSystem& s, const FeedbackDist& d) {
  SchemeBoundReport r;
  r.user1 = eval_user(s.sys, d, closed_form_bounds_user1(s.params, d), true);
  r.user2 = eval_user(s.sys, d, closed_form_bounds_user2(s.params, d), false);
  r.all_match = true;
  for (const auto& e : r.user1) r.all_match = r.all_match && e.match;
  for (const auto& e : r.user2) r.all_match = r.all_match && e.match;
  return r;
}

SchemeBoundReport evaluate_scheme_bounds(const ChannelParams& p, const FeedbackDist& d) {
  return evaluate_scheme_bounds(build_scheme_system(p, 0x5eed), d);
}

DominanceReport dominance_report(const SchemeSystem& s) {
  DominanceReport r;
  r.b4_user1 = s.sys.mutual_information_profile({"X2c", "X1"}, {"Y1", "U1", "U2"},
                                                {"U1p", "U2p"});
  r.b4_user2 = s.sys.mutual_information_profile({"X1c", "X2"}, {"Y2", "U1", "U2"},
                                                {"U1p", "U2p"});
  r.cap1 = Rational(std::max(s.params.n11, s.params.n12));
  r.cap2 = Rational(std::max(s.params.n22, s.params.n21));
  r.ok = true;
  for (int p = 0; p < kPatterns; ++p) {
    if (Rational(r.b4_user1[p]) < r.cap1) r.ok = false;
    if (Rational(r.b4_user2[p]) < r.cap2) r.ok = false;
  }
  return r;
}

}  // namespace ldic::entropy
