#include "holoform/lattice.hpp"

namespace holoform {

namespace {

// Index of an entry with minimal nonzero absolute value in D(t.., t..),
// or nullopt if that block is zero.
std::optional<std::pair<Eigen::Index, Eigen::Index>> min_nonzero(const ZMat& D, Eigen::Index t) {
  std::optional<std::pair<Eigen::Index, Eigen::Index>> best;
  Int best_abs = 0;
  for (Eigen::Index i = t; i < D.rows(); ++i)
    for (Eigen::Index j = t; j < D.cols(); ++j) {
      if (D(i, j) == 0) continue;
      Int a = abs(D(i, j));
      if (!best || a < best_abs) {
        best = {{i, j}};
        best_abs = a;
      }
    }
  return best;
}

}  // namespace

SmithResult smith_normal_form(const ZMat& M) {
  const Eigen::Index r = M.rows(), c = M.cols();
  SmithResult res;
  res.U = ZMat::Identity(r, r);
  res.V = ZMat::Identity(c, c);
  res.D = M;
  ZMat& U = res.U;
  ZMat& V = res.V;
  ZMat& D = res.D;

  for (Eigen::Index t = 0; t < std::min(r, c); ++t) {
    while (true) {
      auto piv = min_nonzero(D, t);
      if (!piv) return res;  // remaining block zero, done
      auto [pi, pj] = *piv;
      if (pi != t) {
        D.row(pi).swap(D.row(t));
        U.row(pi).swap(U.row(t));
      }
      if (pj != t) {
        D.col(pj).swap(D.col(t));
        V.col(pj).swap(V.col(t));
      }
      // Reduce column t then row t by the pivot.
      bool clean = true;
      for (Eigen::Index i = t + 1; i < r; ++i) {
        if (D(i, t) == 0) continue;
        Int q = D(i, t) / D(t, t);
        if (q != 0) {
          D.row(i) -= (D.row(t) * q).eval();
          U.row(i) -= (U.row(t) * q).eval();
        }
        if (D(i, t) != 0) clean = false;
      }
      for (Eigen::Index j = t + 1; j < c; ++j) {
        if (D(t, j) == 0) continue;
        Int q = D(t, j) / D(t, t);
        if (q != 0) {
          D.col(j) -= (D.col(t) * q).eval();
          V.col(j) -= (V.col(t) * q).eval();
        }
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) continue;  // pivot shrank, repeat
      // Divisibility: pivot must divide the rest of the block.
      bool divides = true;
      for (Eigen::Index i = t + 1; i < r && divides; ++i)
        for (Eigen::Index j = t + 1; j < c && divides; ++j)
          if (D(i, j) % D(t, t) != 0) {
            D.row(t) += D.row(i).eval();
            U.row(t) += U.row(i).eval();
            divides = false;
          }
      if (divides) break;
    }
    if (D(t, t) < 0) {
      D.row(t) = -D.row(t).eval();
      U.row(t) = -U.row(t).eval();
    }
  }
  return res;
}

std::optional<ZVec> lattice_solve(const ZMat& M, const RatVec& w) {
  const Eigen::Index r = M.rows(), c = M.cols();
  SmithResult snf = smith_normal_form(M);
  RatVec y(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    Rat s = 0;
    for (Eigen::Index j = 0; j < r; ++j) s += Rat(snf.U(i, j)) * w(j);
    y(i) = s;
  }
  ZVec z = ZVec::Zero(c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (i < c && snf.D(i, i) != 0) {
      Rat q = y(i) / Rat(snf.D(i, i));
      if (denominator(q) != 1) return std::nullopt;
      z(i) = Int(numerator(q));
    } else if (y(i) != 0) {
      return std::nullopt;
    }
  }
  ZVec k = snf.V * z;
  // M*k = w must hold exactly.
  for (Eigen::Index i = 0; i < r; ++i) {
    Rat s = 0;
    for (Eigen::Index j = 0; j < c; ++j) s += Rat(M(i, j)) * Rat(k(j));
    if (s != w(i)) return std::nullopt;
  }
  return k;
}

RatMat rational_kernel(const RatMat& A) {
  RatMat R = A;
  const Eigen::Index rows = R.rows(), cols = R.cols();
  std::vector<Eigen::Index> pivot_col;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < cols && row < rows; ++col) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = row; i < rows; ++i)
      if (R(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != row) R.row(piv).swap(R.row(row));
    Rat inv = Rat(1) / R(row, col);
    for (Eigen::Index j = col; j < cols; ++j) R(row, j) *= inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == row || R(i, col) == 0) continue;
      Rat f = R(i, col);
      for (Eigen::Index j = col; j < cols; ++j) R(i, j) -= f * R(row, j);
    }
    pivot_col.push_back(col);
    ++row;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  Eigen::Index nullity = cols - static_cast<Eigen::Index>(pivot_col.size());
  RatMat K = RatMat::Zero(cols, nullity);
  Eigen::Index k = 0;
  for (Eigen::Index free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    K(free, k) = 1;
    for (Eigen::Index pr = 0; pr < static_cast<Eigen::Index>(pivot_col.size()); ++pr)
      K(pivot_col[pr], k) = -R(pr, free);
    ++k;
  }
  return K;
}

RatMat left_kernel(const RatMat& A) {
  RatMat K = rational_kernel(A.transpose());  // columns span kernel of A^T
  return K.transpose();                       // rows w with w*A = 0
}

Rat rational_det(const RatMat& A) {
  if (A.rows() != A.cols()) throw NumericError("rational_det: non-square");
  RatMat R = A;
  const Eigen::Index n = R.rows();
  Rat det = 1;
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = col; i < n; ++i)
      if (R(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return Rat(0);
    if (piv != col) {
      R.row(piv).swap(R.row(col));
      det = -det;
    }
    det *= R(col, col);
    Rat inv = Rat(1) / R(col, col);
    for (Eigen::Index i = col + 1; i < n; ++i) {
      if (R(i, col) == 0) continue;
      Rat f = R(i, col) * inv;
      for (Eigen::Index j = col; j < n; ++j) R(i, j) -= f * R(col, j);
    }
  }
  return det;
}

RatMat to_rat(const ZMat& M) {
  RatMat R(M.rows(), M.cols());
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) R(i, j) = Rat(M(i, j));
  return R;
}

RatMat to_rat(const IMat& M) {
  RatMat R(M.rows(), M.cols());
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) R(i, j) = Rat(M(i, j));
  return R;
}

ZMat to_z(const IMat& M) {
  ZMat R(M.rows(), M.cols());
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) R(i, j) = Int(M(i, j));
  return R;
}

ZMat integerize_rows(const RatMat& A) {
  ZMat R(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    Int l = 1;
    for (Eigen::Index j = 0; j < A.cols(); ++j) l = lcm(l, Int(denominator(A(i, j))));
    Int g = 0;
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      R(i, j) = Int(numerator(A(i, j))) * (l / Int(denominator(A(i, j))));
      g = gcd(g, R(i, j));
    }
    if (g > 1)
      for (Eigen::Index j = 0; j < A.cols(); ++j) R(i, j) /= g;
  }
  return R;
}

}  // namespace holoform
