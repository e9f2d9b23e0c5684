#include "ldic/gf2.hpp"

namespace ldic::gf2::ref {

// Textbook Gaussian elimination on byte-per-entry storage. Deliberately
// naive; exists so the packed implementation has something independent to
// disagree with.
std::size_t rank(const Mat& m) {
  std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::vector<unsigned char>> a(rows, std::vector<unsigned char>(cols, 0));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) a[r][c] = m.get(r, c);

  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && !a[piv][c]) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || !a[r][c]) continue;
      for (std::size_t k = 0; k < cols; ++k) a[r][k] ^= a[rank][k];
    }
    ++rank;
  }
  return rank;
}

Mat mul(const Mat& a, const Mat& b) {
  Mat r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      unsigned char acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc ^= a.get(i, k) & b.get(k, j);
      r.set(i, j, acc);
    }
  return r;
}

}  // namespace ldic::gf2::ref
