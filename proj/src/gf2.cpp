#include "ldic/gf2.hpp"

#include <cassert>
#include <stdexcept>

namespace ldic::gf2 {

Vec& Vec::operator^=(const Vec& o) {
  if (len_ != o.len_) throw std::invalid_argument("gf2: vector length mismatch");
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
  return *this;
}

bool Vec::is_zero() const {
  for (auto w : w_)
    if (w) return false;
  return true;
}

Vec Vec::random(std::size_t len, std::mt19937_64& rng) {
  Vec v(len);
  for (auto& w : v.w_) w = rng();
  if (len & 63) v.w_.back() &= (std::uint64_t(1) << (len & 63)) - 1;
  return v;
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

Mat Mat::random(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  Mat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t w = 0; w < m.wpr_; ++w) m.w_[r * m.wpr_ + w] = rng();
    if (cols & 63) m.w_[r * m.wpr_ + m.wpr_ - 1] &= (std::uint64_t(1) << (cols & 63)) - 1;
  }
  return m;
}

Mat Mat::shift_power(std::size_t q, std::size_t n) {
  assert(n <= q);
  Mat m(q, q);
  for (std::size_t k = 0; k < n; ++k) m.set(q - n + k, k, true);
  return m;
}

Mat Mat::operator+(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("gf2: shape mismatch");
  Mat r = *this;
  for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] ^= o.w_[i];
  return r;
}

Mat Mat::operator*(const Mat& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("gf2: shape mismatch");
  Mat r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t* out = &r.w_[i * r.wpr_];
    for (std::size_t k = 0; k < cols_; ++k) {
      if (get(i, k)) {
        const std::uint64_t* src = &o.w_[k * o.wpr_];
        for (std::size_t w = 0; w < o.wpr_; ++w) out[w] ^= src[w];
      }
    }
  }
  return r;
}

Vec Mat::apply(const Vec& x) const {
  if (cols_ != x.size()) throw std::invalid_argument("gf2: shape mismatch");
  Vec y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < wpr_; ++w) acc ^= w_[i * wpr_ + w] & x.w_[w];
    y.set(i, __builtin_parityll(acc));
  }
  return y;
}

Mat Mat::vstack(const Mat& a, const Mat& b) {
  if (a.cols_ != b.cols_) throw std::invalid_argument("gf2: vstack column mismatch");
  Mat r(a.rows_ + b.rows_, a.cols_);
  r.emplace(0, 0, a);
  r.emplace(a.rows_, 0, b);
  return r;
}

Mat Mat::hstack(const Mat& a, const Mat& b) {
  if (a.rows_ != b.rows_) throw std::invalid_argument("gf2: hstack row mismatch");
  Mat r(a.rows_, a.cols_ + b.cols_);
  r.emplace(0, 0, a);
  r.emplace(0, a.cols_, b);
  return r;
}

void Mat::emplace(std::size_t r0, std::size_t c0, const Mat& o) {
  for (std::size_t r = 0; r < o.rows_; ++r)
    for (std::size_t c = 0; c < o.cols_; ++c)
      if (o.get(r, c)) set(r0 + r, c0 + c, true);
}

void Mat::row_xor(std::size_t dst, std::size_t src) {
  for (std::size_t w = 0; w < wpr_; ++w) w_[dst * wpr_ + w] ^= w_[src * wpr_ + w];
}

bool Mat::is_zero() const {
  for (auto w : w_)
    if (w) return false;
  return true;
}

std::size_t Mat::rank() const {
  Mat m = *this;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols_ && rank < m.rows_; ++c) {
    std::size_t piv = rank;
    while (piv < m.rows_ && !m.get(piv, c)) ++piv;
    if (piv == m.rows_) continue;
    std::swap_ranges(m.w_.begin() + piv * m.wpr_, m.w_.begin() + (piv + 1) * m.wpr_,
                     m.w_.begin() + rank * m.wpr_);
    for (std::size_t r = 0; r < m.rows_; ++r)
      if (r != rank && m.get(r, c)) m.row_xor(r, rank);
    ++rank;
  }
  return rank;
}

Solution solve_all(const Mat& a, const Vec& b) {
  if (a.rows() != b.size()) throw std::invalid_argument("gf2: solve shape mismatch");
  const std::size_t n = a.cols();
  // Augmented elimination; track pivot column per pivot row.
  Mat m = Mat::hstack(a, Mat(a.rows(), 1));
  for (std::size_t r = 0; r < a.rows(); ++r)
    if (b.get(r)) m.set(r, n, true);

  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < n && rank < m.rows(); ++c) {
    std::size_t piv = rank;
    while (piv < m.rows() && !m.get(piv, c)) ++piv;
    if (piv == m.rows()) continue;
    std::swap_ranges(m.w_.begin() + piv * m.wpr_, m.w_.begin() + (piv + 1) * m.wpr_,
                     m.w_.begin() + rank * m.wpr_);
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (r != rank && m.get(r, c)) m.row_xor(r, rank);
    pivot_col.push_back(c);
    ++rank;
  }

  Solution s;
  for (std::size_t r = rank; r < m.rows(); ++r)
    if (m.get(r, n)) return s;  // 0 = 1 row: inconsistent
  s.consistent = true;

  s.particular = Vec(n);
  for (std::size_t r = 0; r < rank; ++r)
    if (m.get(r, n)) s.particular.set(pivot_col[r], true);

  std::vector<bool> is_pivot(n, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  for (std::size_t c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    Vec k(n);
    k.set(c, true);
    for (std::size_t r = 0; r < rank; ++r)
      if (m.get(r, c)) k.set(pivot_col[r], true);
    s.kernel.push_back(std::move(k));
  }
  return s;
}

}  // namespace ldic::gf2
