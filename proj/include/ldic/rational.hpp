#pragma once

#include <cstdint>
#include <string>
#include <iosfwd>
#include <functional>

namespace ldic {

// Exact rational on int64 with overflow-checked arithmetic.
// Always normalized: den > 0, gcd(|num|, den) == 1. Operations that would
// leave int64 range throw std::overflow_error instead of wrapping; the
// quantities this library manipulates (channel gains, grid probabilities,
// elimination combinations) stay far below that.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d);

  // Accepts "a", "-a/b", and exact decimal strings like "0.25".
  // Decimal parsing is exact (scaled by a power of ten), so "0.1" means
  // 1/10, never the nearest binary double.
  static Rational parse(const std::string& s);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

  Rational operator-() const;
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;  // throws on division by zero
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator<=(const Rational& o) const { return !(o < *this); }
  bool operator>=(const Rational& o) const { return !(*this < o); }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

  // "a" when integral, "a/b" otherwise.
  std::string str() const;
  double to_double() const { return double(num_) / double(den_); }

private:
  std::int64_t num_;
  std::int64_t den_;
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// max(x, 0), the clamp that shows up all over the rate formulas.
inline Rational pos(const Rational& x) { return x.sign() > 0 ? x : Rational(0); }

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace ldic

template <>
struct std::hash<ldic::Rational> {
  size_t operator()(const ldic::Rational& r) const {
    return std::hash<std::int64_t>()(r.num()) * 1000003u ^ std::hash<std::int64_t>()(r.den());
  }
};
