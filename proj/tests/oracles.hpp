#pragma once

// Slow, independent oracles the fast implementations are tested against.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <utility>
#include <vector>

#include "holoform/bieberbach.hpp"
#include "holoform/numeric.hpp"

namespace oracles {

using holoform::Int;
using holoform::Rat;

// Squarefree part by naive division of squares.
inline Int brute_squarefree(Int x) {
  Int sign = x < 0 ? -1 : 1;
  x = abs(x);
  for (Int d = 2; d * d <= x; ++d)
    while (x % (d * d) == 0) x /= d * d;
  return sign * x;
}

inline std::int64_t pow_i(std::int64_t p, int k) {
  std::int64_t r = 1;
  while (k-- > 0) r *= p;
  return r;
}

// Hilbert symbol by brute solvability of a x^2 + b y^2 = z^2 with a primitive
// triple modulo p^k. Square factors p^2 are first divided out of a and b
// (definitional: a p^2 x^2 = a (px)^2), after which k = 2*maxval + 2 (3 for
// p = 2) suffices for the Hensel lift.
class BruteHilbert {
 public:
  BruteHilbert(std::int64_t p) : p_(p) {}

  int symbol(std::int64_t a, std::int64_t b) {
    while (a % (p_ * p_) == 0) a /= p_ * p_;
    while (b % (p_ * p_) == 0) b /= p_ * p_;
    int maxval = std::max(a % p_ == 0 ? 1 : 0, b % p_ == 0 ? 1 : 0);
    int k = 2 * maxval + (p_ == 2 ? 3 : 2);
    std::int64_t m = pow_i(p_, k);
    const std::vector<std::int8_t>& tb = table(b, m);
    for (std::int64_t x = 0; x < m; ++x) {
      std::int64_t t = static_cast<std::int64_t>(((__int128)a * x % m) * x % m);
      if (t < 0) t += m;
      std::int8_t need = (x % p_ != 0) ? 1 : 2;  // non-unit x needs a unit y or z
      if (tb[t] >= need) return 1;
    }
    return -1;
  }

 private:
  // table(b, m)[t]: 0 if z^2 - b y^2 = t has no solution mod m, 1 if only
  // with y, z both divisible by p, 2 if with y or z a unit.
  const std::vector<std::int8_t>& table(std::int64_t b, std::int64_t m) {
    auto key = std::make_pair(((b % m) + m) % m, m);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<std::int8_t> tb(m, 0);
    for (std::int64_t y = 0; y < m; ++y)
      for (std::int64_t z = 0; z < m; ++z) {
        std::int64_t t = static_cast<std::int64_t>(
            (((__int128)z * z - (__int128)b * y % m * y) % m + m) % m);
        std::int8_t level = (y % p_ != 0 || z % p_ != 0) ? 2 : 1;
        if (level > tb[t]) tb[t] = level;
      }
    return cache_.emplace(key, std::move(tb)).first->second;
  }

  std::int64_t p_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::int8_t>> cache_;
};

inline bool rational_solvable(const holoform::RatMat& M, const holoform::RatVec& rhs) {
  using holoform::Rat;
  holoform::RatMat A(M.rows(), M.cols() + 1);
  A.leftCols(M.cols()) = M;
  A.col(M.cols()) = rhs;
  int row = 0;
  for (int col = 0; col < A.cols() && row < A.rows(); ++col) {
    int piv = -1;
    for (int i = row; i < A.rows(); ++i)
      if (A(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    A.row(piv).swap(A.row(row));
    for (int i = 0; i < A.rows(); ++i) {
      if (i == row || A(i, col) == 0) continue;
      Rat f = A(i, col) / A(row, col);
      A.row(i) -= f * A.row(row);
    }
    if (col == A.cols() - 1) return false;  // pivot in the constant column
    ++row;
  }
  return true;
}

// Fixed-point oracle: (A, t) fixes a torus point iff (A - I) x = k - t has a
// rational solution for some integer vector k; any rational solution reduces
// mod 1 into [0,1)^n with k shifted by (A - I) * integer. Scans k over a box
// large enough to contain the image of [0,1)^n shifted by t.
inline bool brute_has_fixed_point(const holoform::AffineTorusIsometry& iso) {
  using holoform::Rat;
  const int n = iso.dim();
  holoform::RatMat B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = Rat(iso.linear(i, j)) - Rat(i == j ? 1 : 0);
  std::vector<std::int64_t> radius(n);
  for (int i = 0; i < n; ++i) {
    std::int64_t r = 2;
    for (int j = 0; j < n; ++j) r += std::abs(iso.linear(i, j) - (i == j ? 1 : 0));
    radius[i] = r;
  }
  std::vector<std::int64_t> k(n);
  for (int i = 0; i < n; ++i) k[i] = -radius[i];
  while (true) {
    holoform::RatVec rhs(n);
    for (int i = 0; i < n; ++i) rhs(i) = Rat(k[i]) - iso.translation(i);
    if (rational_solvable(B, rhs)) return true;
    int i = 0;
    while (i < n) {
      if (++k[i] <= radius[i]) break;
      k[i] = -radius[i];
      ++i;
    }
    if (i == n) return false;
  }
}

}  // namespace oracles
