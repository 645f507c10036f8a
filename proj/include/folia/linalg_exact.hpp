#pragma once

#include <vector>

#include "folia/rational.hpp"

namespace folia {

/// Dense exact matrix as a row list. All routines are deterministic (first-nonzero pivoting).
using RatMat = std::vector<RatVec>;

RatMat rat_mat(int rows, int cols);
RatMat rat_identity(int n);
RatMat rat_mat_mul(const RatMat& a, const RatMat& b);
RatMat rat_mat_add(const RatMat& a, const RatMat& b);
RatMat rat_mat_sub(const RatMat& a, const RatMat& b);
RatMat rat_mat_scale(const RatMat& a, const Rat& c);
RatMat rat_commutator(const RatMat& a, const RatMat& b);  // ab - ba
bool rat_mat_is_zero(const RatMat& a);
RatVec rat_mat_apply(const RatMat& a, const RatVec& v);

int rank(RatMat m);

/// Basis of the right kernel {v : m v = 0}.
std::vector<RatVec> kernel_basis(RatMat m);

/// Reduced row echelon form in place; returns pivot column indices.
std::vector<int> rref(RatMat& m);

/// One solution x of m x = b, if any.
bool solve(const RatMat& m, const RatVec& b, RatVec& x);

/// Expands v in the given spanning vectors: v = sum_i coeffs[i] span[i]. False if v is outside.
bool expand_in_span(const std::vector<RatVec>& span, const RatVec& v, RatVec& coeffs);

/// True iff v lies in the row span of m.
bool in_row_span(const RatMat& m, const RatVec& v);

}  // namespace folia
