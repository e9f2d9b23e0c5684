#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ldic/channel.hpp"
#include "ldic/rational.hpp"

namespace ldic {

// One inequality sum_i coeffs[i] * x[i] <= bound, coefficients aligned with
// the owning region's variable list.
struct LinearConstraint {
  std::vector<Rational> coeffs;
  Rational bound;

  bool degenerate() const {  // no nonzero coefficient
    for (const auto& c : coeffs)
      if (!c.is_zero()) return false;
    return true;
  }
};

// Intersection of half-spaces over named nonnegative variables. Every
// variable carries an implicit x >= 0 that is not stored in the constraint
// list but participates in elimination, vertex enumeration, and the LPs.
class RateRegion {
public:
  RateRegion() = default;
  explicit RateRegion(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<LinearConstraint>& constraints() const { return cons_; }

  std::size_t var_index(const std::string& name) const;

  void add(const LinearConstraint& c);
  void add(const std::map<std::string, Rational>& coeffs, const Rational& bound);

  bool contains(const std::vector<Rational>& point) const;

private:
  std::vector<std::string> vars_;
  std::vector<LinearConstraint> cons_;
};

struct LpResult {
  enum Status { Optimal, Unbounded } status = Optimal;
  Rational value;
  std::vector<Rational> point;
};

// maximize objective . x over the region (x >= 0 implicit). The region must
// contain the origin, which every region in this library does.
LpResult maximize(const RateRegion& region, const std::vector<Rational>& objective);

// Scale-normalize, deduplicate, drop dominated rows, then remove every
// constraint whose LP maximum over the remaining ones stays within its
// bound (a supporting hyperplane that only touches the region counts as
// redundant). Output constraint order is canonical (sorted), so equal
// full-dimensional regions serialize identically; lower-dimensional ones
// can keep different (still correct) representatives and need region_equal
// for comparison.
RateRegion canonicalize(const RateRegion& region);

// Fourier-Motzkin elimination of one variable, honoring its implicit
// nonnegativity as a lower bound. Canonicalizes the result.
RateRegion eliminate_variable(const RateRegion& region, const std::string& var);

// Eliminates the listed variables in exactly the given order.
RateRegion eliminate_variables(const RateRegion& region, const std::vector<std::string>& order);

// Exact equality decision. On inequality, `witness` holds a point of one
// region outside the other, with `witness_in_first` saying which side.
struct RegionComparison {
  bool equal = false;
  std::optional<std::vector<Rational>> witness;
  bool witness_in_first = false;
};

RegionComparison region_equal(const RateRegion& a, const RateRegion& b);

// Is every point of `inner` inside `outer`? On failure returns a witness
// point of `inner` violating `outer`.
struct InclusionResult {
  bool included = false;
  std::optional<std::vector<Rational>> witness;
};

InclusionResult region_includes(const RateRegion& outer, const RateRegion& inner);

// Vertices of a 2-variable region in counterclockwise order, starting at
// the lexicographically smallest vertex (the origin for these regions).
// Axis intercepts appear because the implicit nonnegativity walls are part
// of the boundary. Throws for regions that are not 2-dimensional or not
// bounded.
std::vector<std::vector<Rational>> vertices(const RateRegion& region);

// Largest t with (t, t) in the region; requires all constraint
// coefficients nonnegative (true for every region built here).
Rational symmetric_max(const RateRegion& region);

// One raw bound of the outer region before canonicalization, tagged with
// the family (1..6) of its defining line over (R1, R2). Families 1 and 2
// cap the single rates, 3 and 4 the sum, 5 and 6 the weighted sums; a
// min-of-two family contributes each alternative as its own row.
struct OuterRow {
  int family = 0;
  LinearConstraint con;  // coefficients ordered (R1, R2)
};

std::vector<OuterRow> outer_region_rows(const ChannelParams& p, const Rational& p1,
                                        const Rational& p2);

// Capacity outer bound over (R1, R2): the raw rows, canonicalized.
RateRegion outer_region(const ChannelParams& p, const Rational& p1, const Rational& p2);

// The eight per-user caps that define the achievable region: private-rate
// cap, common+private mix cap, direct cap, and joint cap, per user.
struct SchemeConstants {
  Rational p1c, s1, t1, n1;
  Rational p2c, s2, t2, n2;
};

SchemeConstants scheme_constants(const ChannelParams& p, const Rational& p1, const Rational& p2);

// Achievable region: the four-split-rate system projected onto (R1, R2) by
// eliminating (R1p, R2p, R1c, R2c) in that fixed order. The all-zero
// channel short-circuits to the origin region.
RateRegion inner_region(const SchemeConstants& k);
RateRegion inner_region(const ChannelParams& p, const Rational& p1, const Rational& p2);

// The same region written directly from the six closed-form lines; used to
// cross-check the elimination.
RateRegion inner_region_closed_form(const SchemeConstants& k);

// Symmetric-channel capacity, alpha = interference/direct gain ratio;
// alpha * n must be an integer. Closed form, piecewise in alpha.
Rational sym_capacity(int n, const Rational& alpha, const Rational& p);

// Smallest feedback probability whose symmetric capacity equals the
// perfect-feedback value; never exceeds 1/2.
Rational p_star(const Rational& alpha);

std::string region_to_json(const RateRegion& region);

}  // namespace ldic
