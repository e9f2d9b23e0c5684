#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ldic/gf2.hpp"

using namespace ldic::gf2;

TEST_CASE("vector bit ops") {
  Vec v(70);  // crosses the 64-bit word boundary
  CHECK(v.is_zero());
  v.set(0, true);
  v.set(69, true);
  CHECK(v.get(0));
  CHECK(v.get(69));
  CHECK_FALSE(v.get(35));
  v.flip(35);
  CHECK(v.get(35));
  v.flip(35);
  CHECK_FALSE(v.get(35));

  Vec w(70);
  w.set(0, true);
  Vec x = v ^ w;
  CHECK_FALSE(x.get(0));
  CHECK(x.get(69));
  CHECK(x != v);
  CHECK((x ^ w) == v);
}

TEST_CASE("random vectors are reproducible per generator state") {
  std::mt19937_64 a(11), b(11);
  Vec va = Vec::random(100, a);
  Vec vb = Vec::random(100, b);
  CHECK(va == vb);
  CHECK(va.size() == 100);
}

TEST_CASE("identity and multiplication") {
  std::mt19937_64 rng(5);
  Mat a = Mat::random(9, 13, rng);
  Mat i9 = Mat::identity(9);
  Mat i13 = Mat::identity(13);
  CHECK(i9 * a == a);
  CHECK(a * i13 == a);

  // associativity on random triples
  Mat b = Mat::random(13, 7, rng);
  Mat c = Mat::random(7, 6, rng);
  CHECK((a * b) * c == a * (b * c));

  // apply is multiplication by a column vector
  Vec x = Vec::random(13, rng);
  Vec y = a.apply(x);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    bool dot = false;
    for (std::size_t cc = 0; cc < a.cols(); ++cc)
      if (a.get(r, cc) && x.get(cc)) dot = !dot;
    CHECK(y.get(r) == dot);
  }

  // apply is linear
  Vec x2 = Vec::random(13, rng);
  CHECK(a.apply(x ^ x2) == (a.apply(x) ^ a.apply(x2)));
}

TEST_CASE("entrywise addition is xor") {
  std::mt19937_64 rng(6);
  Mat a = Mat::random(5, 5, rng);
  Mat b = Mat::random(5, 5, rng);
  Mat s = a + b;
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < 5; ++c) CHECK(s.get(r, c) == (a.get(r, c) != b.get(r, c)));
  CHECK((a + a).is_zero());
}

TEST_CASE("shift matrix keeps the top levels, rank n") {
  for (std::size_t q = 0; q <= 8; ++q) {
    for (std::size_t n = 0; n <= q; ++n) {
      Mat s = Mat::shift_power(q, n);
      CHECK(s.rows() == q);
      CHECK(s.cols() == q);
      CHECK(s.rank() == n);
      // basis vectors: input level k < n lands on output row q-n+k
      for (std::size_t k = 0; k < q; ++k) {
        Vec e(q);
        e.set(k, true);
        Vec img = s.apply(e);
        for (std::size_t r = 0; r < q; ++r)
          CHECK(img.get(r) == (k < n && r == q - n + k));
      }
    }
  }
}

TEST_CASE("rank plus kernel dimension equals columns") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 40; ++it) {
    std::size_t rows = 1 + it % 12, cols = 1 + (it * 7) % 12;
    Mat a = Mat::random(rows, cols, rng);
    Solution s = solve_all(a, Vec(rows));
    REQUIRE(s.consistent);  // homogeneous systems always are
    CHECK(a.rank() + s.kernel.size() == cols);
  }
}

TEST_CASE("stacked rank is between max and sum") {
  std::mt19937_64 rng(8);
  for (int it = 0; it < 40; ++it) {
    std::size_t cols = 1 + it % 12;
    Mat a = Mat::random(1 + it % 12, cols, rng);
    Mat b = Mat::random(1 + (it * 5) % 12, cols, rng);
    std::size_t ra = a.rank(), rb = b.rank(), rs = Mat::vstack(a, b).rank();
    CHECK(rs >= (ra > rb ? ra : rb));
    CHECK(rs <= ra + rb);
  }
}

TEST_CASE("solve_all returns the full solution set") {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 25; ++it) {
    Mat a = Mat::random(6 + it % 5, 4 + it % 7, rng);
    Vec x0 = Vec::random(a.cols(), rng);
    Vec b = a.apply(x0);
    Solution s = solve_all(a, b);
    REQUIRE(s.consistent);
    CHECK(a.apply(s.particular) == b);
    for (const Vec& k : s.kernel) {
      CHECK_FALSE(k.is_zero());
      CHECK(a.apply(k).is_zero());
      CHECK(a.apply(s.particular ^ k) == b);
    }
    CHECK(s.kernel.size() == a.cols() - a.rank());
  }
}

TEST_CASE("solve_all detects inconsistency") {
  // two copies of the same row cannot produce different right-hand sides
  Mat a(2, 1);
  a.set(0, 0, true);
  a.set(1, 0, true);
  Vec b(2);
  b.set(0, true);
  Solution s = solve_all(a, b);
  CHECK_FALSE(s.consistent);
}

TEST_CASE("stacking geometry") {
  std::mt19937_64 rng(10);
  Mat a = Mat::random(3, 5, rng);
  Mat b = Mat::random(2, 5, rng);
  Mat v = Mat::vstack(a, b);
  CHECK(v.rows() == 5);
  CHECK(v.cols() == 5);
  for (std::size_t c = 0; c < 5; ++c) {
    for (std::size_t r = 0; r < 3; ++r) CHECK(v.get(r, c) == a.get(r, c));
    for (std::size_t r = 0; r < 2; ++r) CHECK(v.get(3 + r, c) == b.get(r, c));
  }

  Mat c = Mat::random(3, 4, rng);
  Mat h = Mat::hstack(a, c);
  CHECK(h.rows() == 3);
  CHECK(h.cols() == 9);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t cc = 0; cc < 5; ++cc) CHECK(h.get(r, cc) == a.get(r, cc));
    for (std::size_t cc = 0; cc < 4; ++cc) CHECK(h.get(r, 5 + cc) == c.get(r, cc));
  }
}

TEST_CASE("emplace writes a block in place") {
  std::mt19937_64 rng(11);
  Mat dst(7, 9);
  Mat blk = Mat::random(3, 4, rng);
  dst.emplace(2, 3, blk);
  for (std::size_t r = 0; r < 7; ++r)
    for (std::size_t c = 0; c < 9; ++c) {
      bool inside = r >= 2 && r < 5 && c >= 3 && c < 7;
      CHECK(dst.get(r, c) == (inside && blk.get(r - 2, c - 3)));
    }
}

TEST_CASE("packed rank and mul agree with the byte-per-entry reference") {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 20; ++it) {
    // include sizes past one 64-bit word per row
    std::size_t r = 1 + (it * 13) % 70;
    std::size_t k = 1 + (it * 29) % 70;
    std::size_t c = 1 + (it * 17) % 70;
    Mat a = Mat::random(r, k, rng);
    Mat b = Mat::random(k, c, rng);
    CHECK(a.rank() == ref::rank(a));
    CHECK(a * b == ref::mul(a, b));
  }
}
