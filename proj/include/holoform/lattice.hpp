#pragma once

// Integer lattice normal forms and exact rational kernels.

#include <optional>

#include "holoform/numeric.hpp"

namespace holoform {

struct SmithResult {
  ZMat U, D, V;  // U*M*V = D, U and V unimodular, D diagonal with d1 | d2 | ...
};

SmithResult smith_normal_form(const ZMat& M);

/// Integer solution k of M*k = w, if one exists.
std::optional<ZVec> lattice_solve(const ZMat& M, const RatVec& w);

/// Basis of the right nullspace of A over Q, one kernel vector per column.
RatMat rational_kernel(const RatMat& A);

/// Rows spanning {w : w*A = 0} over Q.
RatMat left_kernel(const RatMat& A);

/// Determinant by exact Gaussian elimination.
Rat rational_det(const RatMat& A);

RatMat to_rat(const ZMat& M);
RatMat to_rat(const IMat& M);
ZMat to_z(const IMat& M);

/// Scale each row by a positive rational so entries become coprime integers.
ZMat integerize_rows(const RatMat& A);

}  // namespace holoform
