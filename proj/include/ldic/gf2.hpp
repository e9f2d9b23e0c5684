#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace ldic::gf2 {

// Bit vector over GF(2), packed 64 per word.
class Vec {
public:
  Vec() : len_(0) {}
  explicit Vec(std::size_t len) : len_(len), w_((len + 63) / 64, 0) {}

  std::size_t size() const { return len_; }
  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v) {
    std::uint64_t m = std::uint64_t(1) << (i & 63);
    if (v)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

  Vec& operator^=(const Vec& o);
  Vec operator^(const Vec& o) const {
    Vec r = *this;
    r ^= o;
    return r;
  }
  bool operator==(const Vec& o) const { return len_ == o.len_ && w_ == o.w_; }
  bool operator!=(const Vec& o) const { return !(*this == o); }
  bool is_zero() const;

  const std::vector<std::uint64_t>& words() const { return w_; }

  static Vec random(std::size_t len, std::mt19937_64& rng);

private:
  std::size_t len_;
  std::vector<std::uint64_t> w_;
  friend class Mat;
};

// Full solution set of A x = b: empty when inconsistent, otherwise one
// particular solution plus a kernel basis spanning everything else.
struct Solution {
  bool consistent = false;
  Vec particular;
  std::vector<Vec> kernel;
};

// Dense GF(2) matrix, rows packed 64 columns per word.
class Mat {
public:
  Mat() : rows_(0), cols_(0), wpr_(0) {}
  Mat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), w_(rows * wpr_, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    return (w_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    std::uint64_t m = std::uint64_t(1) << (c & 63);
    if (v)
      w_[r * wpr_ + (c >> 6)] |= m;
    else
      w_[r * wpr_ + (c >> 6)] &= ~m;
  }

  static Mat identity(std::size_t n);
  static Mat random(std::size_t rows, std::size_t cols, std::mt19937_64& rng);
  // Down-shift power: q x q matrix keeping the top n input levels,
  // (S^(q-n) x)[q-n+k] = x[k]. Rank is exactly n.
  static Mat shift_power(std::size_t q, std::size_t n);

  Mat operator+(const Mat& o) const;  // entrywise xor
  Mat operator*(const Mat& o) const;
  Vec apply(const Vec& x) const;

  // Rows of a on top of rows of b; column counts must match.
  static Mat vstack(const Mat& a, const Mat& b);
  // Columns of a then columns of b; row counts must match.
  static Mat hstack(const Mat& a, const Mat& b);

  // Writes o into this at (r0, c0). Bounds are the caller's problem.
  void emplace(std::size_t r0, std::size_t c0, const Mat& o);

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && w_ == o.w_;
  }

  std::size_t rank() const;

  bool is_zero() const;

private:
  std::size_t rows_, cols_, wpr_;
  std::vector<std::uint64_t> w_;

  void row_xor(std::size_t dst, std::size_t src);
  friend Solution solve_all(const Mat& a, const Vec& b);
};

Solution solve_all(const Mat& a, const Vec& b);

// Slow reference implementations with byte-per-entry storage, kept for
// differential tests against the packed versions (and as the benchmark
// baseline).
namespace ref {
std::size_t rank(const Mat& m);
Mat mul(const Mat& a, const Mat& b);
}  // namespace ref

}  // namespace ldic::gf2
