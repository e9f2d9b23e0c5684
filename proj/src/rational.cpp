#include "ldic/rational.hpp"

#include <cstdlib>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace ldic {

namespace {

using i128 = __int128;

std::int64_t checked_narrow(i128 v) {
  if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
    throw std::overflow_error("rational arithmetic overflow");
  return std::int64_t(v);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  if (d < 0) {
    if (n == INT64_MIN || d == INT64_MIN) throw std::overflow_error("rational overflow");
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = n;
  den_ = d;
}

Rational Rational::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    size_t pn = 0, pd = 0;
    long long n = std::stoll(s.substr(0, slash), &pn);
    long long d = std::stoll(s.substr(slash + 1), &pd);
    if (pn != slash || pd != s.size() - slash - 1)
      throw std::invalid_argument("malformed rational literal: " + s);
    return Rational(n, d);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    size_t p = 0;
    long long n = std::stoll(s, &p);
    if (p != s.size()) throw std::invalid_argument("malformed rational literal: " + s);
    return Rational(n);
  }
  // Exact decimal: sign applies to the whole literal.
  bool neg = !s.empty() && s[0] == '-';
  std::string ip = s.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
  std::string fp = s.substr(dot + 1);
  if (fp.empty() || fp.size() > 18) throw std::invalid_argument("malformed rational literal: " + s);
  for (char c : ip)
    if (!isdigit((unsigned char)c)) throw std::invalid_argument("malformed rational literal: " + s);
  for (char c : fp)
    if (!isdigit((unsigned char)c)) throw std::invalid_argument("malformed rational literal: " + s);
  i128 den = 1;
  for (size_t i = 0; i < fp.size(); ++i) den *= 10;
  i128 num = 0;
  for (char c : ip.empty() ? std::string("0") : ip) num = num * 10 + (c - '0');
  num *= den;
  i128 frac = 0;
  for (char c : fp) frac = frac * 10 + (c - '0');
  num += frac;
  if (neg) num = -num;
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(checked_narrow(num), checked_narrow(den));
}

Rational Rational::operator-() const {
  if (num_ == INT64_MIN) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rational Rational::operator+(const Rational& o) const {
  i128 n = i128(num_) * o.den_ + i128(o.num_) * den_;
  i128 d = i128(den_) * o.den_;
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num_ = checked_narrow(n);
  r.den_ = checked_narrow(d);
  return r;
}

Rational Rational::operator-(const Rational& o) const {
  i128 n = i128(num_) * o.den_ - i128(o.num_) * den_;
  i128 d = i128(den_) * o.den_;
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num_ = checked_narrow(n);
  r.den_ = checked_narrow(d);
  return r;
}

Rational Rational::operator*(const Rational& o) const {
  i128 n = i128(num_) * o.num_;
  i128 d = i128(den_) * o.den_;
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num_ = checked_narrow(n);
  r.den_ = checked_narrow(d);
  return r;
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  i128 n = i128(num_) * o.den_;
  i128 d = i128(den_) * o.num_;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num_ = checked_narrow(n);
  r.den_ = checked_narrow(d);
  return r;
}

bool Rational::operator<(const Rational& o) const {
  return i128(num_) * o.den_ < i128(o.num_) * den_;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace ldic
