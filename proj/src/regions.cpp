#include "ldic/regions.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace ldic {

std::size_t RateRegion::var_index(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return i;
  throw std::invalid_argument("unknown variable: " + name);
}

void RateRegion::add(const LinearConstraint& c) {
  if (c.coeffs.size() != vars_.size())
    throw std::invalid_argument("constraint arity does not match region variables");
  cons_.push_back(c);
}

void RateRegion::add(const std::map<std::string, Rational>& coeffs, const Rational& bound) {
  LinearConstraint c;
  c.coeffs.assign(vars_.size(), Rational(0));
  for (const auto& [name, val] : coeffs) c.coeffs[var_index(name)] = val;
  c.bound = bound;
  cons_.push_back(c);
}

bool RateRegion::contains(const std::vector<Rational>& point) const {
  if (point.size() != vars_.size())
    throw std::invalid_argument("point arity does not match region variables");
  for (const auto& x : point)
    if (x.sign() < 0) return false;
  for (const auto& c : cons_) {
    Rational lhs(0);
    for (std::size_t i = 0; i < point.size(); ++i) lhs += c.coeffs[i] * point[i];
    if (lhs > c.bound) return false;
  }
  return true;
}

namespace {

// Scale by a positive rational so coefficients are coprime integers; the
// canonical representative of the half-space under positive scaling.
LinearConstraint normalize(const LinearConstraint& in) {
  LinearConstraint c = in;
  if (c.degenerate()) return c;
  std::int64_t lcm = 1;
  for (const auto& x : c.coeffs)
    if (!x.is_zero()) lcm = std::lcm(lcm, x.den());
  Rational scale(lcm);
  std::int64_t g = 0;
  for (const auto& x : c.coeffs)
    if (!x.is_zero()) g = std::gcd(g, (x * scale).num());
  if (g > 1) scale = scale / Rational(g);
  for (auto& x : c.coeffs) x *= scale;
  c.bound *= scale;
  return c;
}

bool coeffs_less(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

}  // namespace

LpResult maximize(const RateRegion& region, const std::vector<Rational>& objective) {
  const auto& cons = region.constraints();
  const std::size_t n = region.vars().size();
  const std::size_t m = cons.size();
  if (objective.size() != n) throw std::invalid_argument("objective arity mismatch");

  // Dense simplex tableau over [structural | slack | rhs]; the origin is
  // feasible for every region here (all bounds nonnegative), so no phase 1.
  const std::size_t w = n + m + 1;
  std::vector<std::vector<Rational>> t(m + 1, std::vector<Rational>(w, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    if (cons[i].bound.sign() < 0)
      throw std::domain_error("region does not contain the origin");
    for (std::size_t j = 0; j < n; ++j) t[i][j] = cons[i].coeffs[j];
    t[i][n + i] = Rational(1);
    t[i][w - 1] = cons[i].bound;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -objective[j];

  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  for (;;) {
    // Bland's rule: smallest improving column, smallest leaving basis var.
    std::size_t enter = w - 1;
    for (std::size_t j = 0; j + 1 < w; ++j)
      if (t[m][j].sign() < 0) {
        enter = j;
        break;
      }
    if (enter == w - 1) break;

    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter].sign() <= 0) continue;
      Rational ratio = t[i][w - 1] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave == m) {
      LpResult r;
      r.status = LpResult::Unbounded;
      return r;
    }

    Rational piv = t[leave][enter];
    for (auto& x : t[leave]) x /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t[i][enter].is_zero()) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j < w; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  LpResult r;
  r.status = LpResult::Optimal;
  r.value = t[m][w - 1];
  r.point.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) r.point[basis[i]] = t[i][w - 1];
  return r;
}

RateRegion canonicalize(const RateRegion& region) {
  const std::size_t n = region.vars().size();

  // Normalize, drop trivial rows, dedupe keeping the tightest bound.
  std::vector<LinearConstraint> rows;
  for (const auto& raw : region.constraints()) {
    LinearConstraint c = normalize(raw);
    if (c.degenerate()) {
      if (c.bound.sign() < 0) throw std::domain_error("region is empty");
      continue;
    }
    bool merged = false;
    for (auto& r : rows)
      if (r.coeffs == c.coeffs) {
        r.bound = min(r.bound, c.bound);
        merged = true;
        break;
      }
    if (!merged) rows.push_back(std::move(c));
  }

  // Cheap pass: with x >= 0, a row is implied by any row with pointwise
  // larger coefficients and a smaller bound. Kills most elimination debris
  // before the LPs run.
  std::vector<bool> dead(rows.size(), false);
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t i = 0; i < rows.size() && !dead[j]; ++i) {
      if (i == j || dead[i]) continue;
      bool dom = true;
      for (std::size_t k = 0; k < n && dom; ++k)
        if (rows[i].coeffs[k] < rows[j].coeffs[k]) dom = false;
      if (dom && rows[i].bound <= rows[j].bound) dead[j] = true;
    }
  std::vector<LinearConstraint> kept;
  for (std::size_t j = 0; j < rows.size(); ++j)
    if (!dead[j]) kept.push_back(rows[j]);

  // Exact certificate for the rest: a row is redundant iff its LP maximum
  // over the other kept rows stays within its bound. Ties (touching
  // hyperplanes) are redundant: removal leaves the same set.
  for (std::size_t j = 0; j < kept.size();) {
    RateRegion others(region.vars());
    for (std::size_t i = 0; i < kept.size(); ++i)
      if (i != j) others.add(kept[i]);
    LpResult lp = maximize(others, kept[j].coeffs);
    if (lp.status == LpResult::Optimal && lp.value <= kept[j].bound)
      kept.erase(kept.begin() + j);
    else
      ++j;
  }

  std::sort(kept.begin(), kept.end(), [](const LinearConstraint& a, const LinearConstraint& b) {
    if (coeffs_less(a.coeffs, b.coeffs)) return true;
    if (coeffs_less(b.coeffs, a.coeffs)) return false;
    return a.bound < b.bound;
  });

  RateRegion out(region.vars());
  for (auto& c : kept) out.add(c);
  return out;
}

RateRegion eliminate_variable(const RateRegion& region, const std::string& var) {
  const std::size_t vi = region.var_index(var);
  const std::size_t n = region.vars().size();

  std::vector<std::string> new_vars;
  for (std::size_t i = 0; i < n; ++i)
    if (i != vi) new_vars.push_back(region.vars()[i]);
  RateRegion out(new_vars);

  auto drop_var = [&](const LinearConstraint& c) {
    LinearConstraint d;
    for (std::size_t i = 0; i < n; ++i)
      if (i != vi) d.coeffs.push_back(c.coeffs[i]);
    d.bound = c.bound;
    return d;
  };

  std::vector<LinearConstraint> uppers, lowers;
  for (const auto& c : region.constraints()) {
    int s = c.coeffs[vi].sign();
    if (s == 0)
      out.add(drop_var(c));
    else if (s > 0)
      uppers.push_back(c);
    else
      lowers.push_back(c);
  }

  // Implicit var >= 0 is one of the lower bounds: combined with an upper it
  // just deletes the variable from that row.
  for (const auto& u : uppers) out.add(drop_var(u));

  for (const auto& l : lowers)
    for (const auto& u : uppers) {
      Rational a_l = -l.coeffs[vi];  // positive
      Rational a_u = u.coeffs[vi];   // positive
      LinearConstraint c;
      c.coeffs.reserve(n - 1);
      for (std::size_t i = 0; i < n; ++i) {
        if (i == vi) continue;
        c.coeffs.push_back(a_u * l.coeffs[i] + a_l * u.coeffs[i]);
      }
      c.bound = a_u * l.bound + a_l * u.bound;
      out.add(c);
    }

  return canonicalize(out);
}

RateRegion eliminate_variables(const RateRegion& region, const std::vector<std::string>& order) {
  RateRegion r = region;
  for (const auto& v : order) r = eliminate_variable(r, v);
  return r;
}

namespace {

// Reorders b's constraint columns to a's variable order; throws when the
// variable sets differ.
LinearConstraint align_to(const std::vector<std::string>& vars, const RateRegion& owner,
                          const LinearConstraint& c) {
  LinearConstraint out;
  out.coeffs.assign(vars.size(), Rational(0));
  out.bound = c.bound;
  for (std::size_t i = 0; i < owner.vars().size(); ++i) {
    const std::string& name = owner.vars()[i];
    auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end()) throw std::invalid_argument("regions have different variables");
    out.coeffs[std::size_t(it - vars.begin())] = c.coeffs[i];
  }
  return out;
}

}  // namespace

InclusionResult region_includes(const RateRegion& outer, const RateRegion& inner) {
  if (outer.vars().size() != inner.vars().size())
    throw std::invalid_argument("regions have different variables");
  InclusionResult res;
  for (const auto& raw : outer.constraints()) {
    LinearConstraint c = align_to(inner.vars(), outer, raw);
    LpResult lp = maximize(inner, c.coeffs);
    if (lp.status == LpResult::Unbounded || lp.value > c.bound) {
      if (lp.status == LpResult::Unbounded)
        throw std::invalid_argument("inclusion check requires bounded regions");
      res.included = false;
      res.witness = lp.point;  // a point of inner beyond outer's face
      return res;
    }
  }
  res.included = true;
  return res;
}

RegionComparison region_equal(const RateRegion& a, const RateRegion& b) {
  RegionComparison cmp;
  InclusionResult ab = region_includes(b, a);  // a subset of b?
  if (!ab.included) {
    cmp.equal = false;
    cmp.witness = ab.witness;
    cmp.witness_in_first = true;
    return cmp;
  }
  InclusionResult ba = region_includes(a, b);
  if (!ba.included) {
    cmp.equal = false;
    cmp.witness = ba.witness;
    cmp.witness_in_first = false;
    return cmp;
  }
  cmp.equal = true;
  return cmp;
}

std::vector<std::vector<Rational>> vertices(const RateRegion& region) {
  if (region.vars().size() != 2)
    throw std::invalid_argument("vertex enumeration requires exactly two variables");
  for (std::size_t axis = 0; axis < 2; ++axis) {
    std::vector<Rational> obj{Rational(axis == 0 ? 1 : 0), Rational(axis == 0 ? 0 : 1)};
    if (maximize(region, obj).status == LpResult::Unbounded)
      throw std::invalid_argument("vertex enumeration requires a bounded region");
  }

  // Boundary lines: every constraint plus the two nonnegativity walls.
  struct Line {
    Rational a1, a2, b;
  };
  std::vector<Line> lines;
  for (const auto& c : region.constraints()) lines.push_back({c.coeffs[0], c.coeffs[1], c.bound});
  lines.push_back({Rational(1), Rational(0), Rational(0)});
  lines.push_back({Rational(0), Rational(1), Rational(0)});

  std::vector<std::vector<Rational>> pts;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      Rational det = lines[i].a1 * lines[j].a2 - lines[j].a1 * lines[i].a2;
      if (det.is_zero()) continue;
      Rational x = (lines[i].b * lines[j].a2 - lines[j].b * lines[i].a2) / det;
      Rational y = (lines[i].a1 * lines[j].b - lines[j].a1 * lines[i].b) / det;
      std::vector<Rational> p{x, y};
      if (!region.contains(p)) continue;
      if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(std::move(p));
    }

  if (pts.size() <= 1) return pts;

  // Exact counterclockwise order around the centroid.
  Rational cx(0), cy(0);
  for (const auto& p : pts) {
    cx += p[0];
    cy += p[1];
  }
  Rational cnt(std::int64_t(pts.size()));
  cx /= cnt;
  cy /= cnt;
  auto half = [&](const std::vector<Rational>& p) {
    Rational dx = p[0] - cx, dy = p[1] - cy;
    return (dy < Rational(0) || (dy.is_zero() && dx < Rational(0))) ? 1 : 0;
  };
  std::sort(pts.begin(), pts.end(),
            [&](const std::vector<Rational>& p, const std::vector<Rational>& q) {
              int hp = half(p), hq = half(q);
              if (hp != hq) return hp < hq;
              Rational cross =
                  (p[0] - cx) * (q[1] - cy) - (q[0] - cx) * (p[1] - cy);
              return cross.sign() > 0;
            });

  // Start the cycle at the lexicographically smallest vertex.
  std::size_t start = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i][0] < pts[start][0] ||
        (pts[i][0] == pts[start][0] && pts[i][1] < pts[start][1]))
      start = i;
  }
  std::rotate(pts.begin(), pts.begin() + start, pts.end());
  return pts;
}

Rational symmetric_max(const RateRegion& region) {
  bool capped = false;
  Rational best;
  for (const auto& c : region.constraints()) {
    Rational sum(0);
    for (const auto& x : c.coeffs) {
      if (x.sign() < 0)
        throw std::invalid_argument("symmetric_max requires nonnegative coefficients");
      sum += x;
    }
    if (sum.is_zero()) continue;
    Rational t = c.bound / sum;
    if (!capped || t < best) {
      best = t;
      capped = true;
    }
  }
  if (!capped) throw std::invalid_argument("symmetric_max requires a bounded region");
  return best;
}

namespace {

void check_probability(const Rational& p, const char* name) {
  if (p.sign() < 0 || p > Rational(1))
    throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
}

}  // namespace

std::vector<OuterRow> outer_region_rows(const ChannelParams& cp, const Rational& p1,
                                        const Rational& p2) {
  check_probability(p1, "p1");
  check_probability(p2, "p2");
  Rational n11(cp.n11), n12(cp.n12), n21(cp.n21), n22(cp.n22);
  Rational a1 = pos(n11 - n21);  // levels of user 1 invisible at receiver 2
  Rational a2 = pos(n22 - n12);
  Rational one(1), two(2), zero(0);

  std::vector<OuterRow> rows;
  auto push = [&rows](int family, Rational c1, Rational c2, Rational bound) {
    rows.push_back({family, {{std::move(c1), std::move(c2)}, std::move(bound)}});
  };
  push(1, one, zero, max(n11, n12));
  push(1, one, zero, n11 + p2 * pos(n21 - n11));
  push(2, zero, one, max(n22, n21));
  push(2, zero, one, n22 + p1 * pos(n12 - n22));
  push(3, one, one, max(n11, n12) + a2);
  push(3, one, one, max(n22, n21) + a1);
  push(4, one, one, max(n12, a1) + max(n21, a2) + p1 * min(n12, a1) + p2 * min(n21, a2));
  push(5, two, one, max(n11, n12) + max(n21, a2) + a1 + p2 * min(n21, a2));
  push(6, one, two, max(n22, n21) + max(n12, a1) + a2 + p1 * min(n12, a1));
  return rows;
}

RateRegion outer_region(const ChannelParams& cp, const Rational& p1, const Rational& p2) {
  RateRegion r({"R1", "R2"});
  for (const auto& row : outer_region_rows(cp, p1, p2)) r.add(row.con);
  return canonicalize(r);
}

SchemeConstants scheme_constants(const ChannelParams& cp, const Rational& p1,
                                 const Rational& p2) {
  check_probability(p1, "p1");
  check_probability(p2, "p2");
  Rational n11(cp.n11), n12(cp.n12), n21(cp.n21), n22(cp.n22);
  SchemeConstants k;
  k.p1c = pos(n11 - n21);
  k.s1 = max(k.p1c, n12) + p1 * min(k.p1c, n12);
  k.t1 = n11 + p2 * pos(n21 - n11);
  k.n1 = max(n11, n12);
  k.p2c = pos(n22 - n12);
  k.s2 = max(k.p2c, n21) + p2 * min(k.p2c, n21);
  k.t2 = n22 + p1 * pos(n12 - n22);
  k.n2 = max(n22, n21);
  return k;
}

RateRegion inner_region(const SchemeConstants& k) {
  RateRegion r({"R1", "R2", "R1p", "R1c", "R2p", "R2c"});
  Rational one(1), mone(-1);
  r.add({{"R1p", one}}, k.p1c);
  r.add({{"R1p", one}, {"R2c", one}}, k.s1);
  r.add({{"R1", one}}, k.t1);
  r.add({{"R1", one}, {"R2c", one}}, k.n1);
  r.add({{"R2p", one}}, k.p2c);
  r.add({{"R2p", one}, {"R1c", one}}, k.s2);
  r.add({{"R2", one}}, k.t2);
  r.add({{"R2", one}, {"R1c", one}}, k.n2);
  // R1 = R1p + R1c and R2 = R2p + R2c as opposing inequality pairs.
  r.add({{"R1", one}, {"R1p", mone}, {"R1c", mone}}, Rational(0));
  r.add({{"R1", mone}, {"R1p", one}, {"R1c", one}}, Rational(0));
  r.add({{"R2", one}, {"R2p", mone}, {"R2c", mone}}, Rational(0));
  r.add({{"R2", mone}, {"R2p", one}, {"R2c", one}}, Rational(0));
  return eliminate_variables(r, {"R1p", "R2p", "R1c", "R2c"});
}

RateRegion inner_region(const ChannelParams& cp, const Rational& p1, const Rational& p2) {
  if (cp.q() == 0) {
    // Degenerate all-zero channel: nothing can be sent.
    RateRegion r({"R1", "R2"});
    r.add({{"R1", Rational(1)}}, Rational(0));
    r.add({{"R2", Rational(1)}}, Rational(0));
    return canonicalize(r);
  }
  return inner_region(scheme_constants(cp, p1, p2));
}

RateRegion inner_region_closed_form(const SchemeConstants& k) {
  RateRegion r({"R1", "R2"});
  Rational one(1);
  r.add({{"R1", one}}, k.t1);
  r.add({{"R1", one}}, k.n1);
  r.add({{"R1", one}}, k.p1c + k.s2);
  r.add({{"R2", one}}, k.t2);
  r.add({{"R2", one}}, k.n2);
  r.add({{"R2", one}}, k.p2c + k.s1);
  r.add({{"R1", one}, {"R2", one}}, k.p1c + k.n2);
  r.add({{"R1", one}, {"R2", one}}, k.p2c + k.n1);
  r.add({{"R1", one}, {"R2", one}}, k.s1 + k.s2);
  r.add({{"R1", Rational(2)}, {"R2", one}}, k.p1c + k.n1 + k.s2);
  r.add({{"R1", one}, {"R2", Rational(2)}}, k.p2c + k.n2 + k.s1);
  return canonicalize(r);
}

Rational sym_capacity(int n, const Rational& alpha, const Rational& p) {
  if (n <= 0) throw std::invalid_argument("direct gain must be positive");
  if (alpha.sign() < 0) throw std::invalid_argument("alpha must be nonnegative");
  check_probability(p, "p");
  if (!(alpha * Rational(n)).is_integer())
    throw std::invalid_argument("alpha * n must be an integer");
  Rational one(1), half(1, 2);
  Rational v;
  if (alpha <= half) {
    v = min(one - alpha * half, one - (one - p) * alpha);
  } else if (alpha <= one) {
    v = min(one - alpha * half, p + (one - p) * alpha);
  } else {
    v = min(alpha * half, (one - p) + p * alpha);
  }
  return Rational(n) * v;
}

Rational p_star(const Rational& alpha) {
  if (alpha.sign() < 0) throw std::invalid_argument("alpha must be nonnegative");
  Rational one(1), two(2), half(1, 2);
  if (alpha <= half) return half;
  if (alpha <= one) {
    Rational num = pos(two - Rational(3) * alpha);
    if (num.is_zero()) return Rational(0);
    return num / (two - two * alpha);
  }
  Rational num = pos(alpha - two);
  if (num.is_zero()) return Rational(0);
  return num / (two * alpha - two);
}

std::string region_to_json(const RateRegion& region) {
  nlohmann::ordered_json j;
  j["variables"] = region.vars();
  j["constraints"] = nlohmann::ordered_json::array();
  for (const auto& c : region.constraints()) {
    nlohmann::ordered_json jc;
    nlohmann::ordered_json coeffs;
    for (std::size_t i = 0; i < region.vars().size(); ++i)
      coeffs[region.vars()[i]] = c.coeffs[i].str();
    jc["coeffs"] = coeffs;
    jc["bound"] = c.bound.str();
    j["constraints"].push_back(jc);
  }
  if (region.vars().size() == 2) {
    try {
      auto vs = vertices(region);
      auto arr = nlohmann::ordered_json::array();
      for (const auto& v : vs) arr.push_back({v[0].str(), v[1].str()});
      j["vertices"] = arr;
    } catch (const std::invalid_argument&) {
      // unbounded: no vertex list
    }
  }
  return j.dump(2);
}

}  // namespace ldic
