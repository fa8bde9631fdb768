#pragma once

#include <stdexcept>
#include <vector>

#include "disent/rng.hpp"
#include "disent/tensor.hpp"

namespace disent {

/// Thrown when an iterative or divide-and-conquer factorization fails to
/// converge. Callers never receive a partially-computed result.
class SvdError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Thin SVD m = u * s.asDiagonal() * v.adjoint(), singular values sorted
/// descending. Each singular-vector pair is phase-normalized: the
/// largest-magnitude component of the left vector is real non-negative, and
/// the right vector carries the same phase factor so the product is
/// unchanged. Ties on magnitude resolve to the lowest index.
struct SvdResult {
    Mat u;  // rows x min(rows, cols)
    RVec s; // min(rows, cols), descending, >= 0
    Mat v;  // cols x min(rows, cols)
};

SvdResult svd_full(const Mat& m);
SvdResult svd_full(const MatrixView& m);

/// Top-k slice of svd_full. Requires 1 <= k <= min(rows, cols).
SvdResult svd_truncated(const Mat& m, long k);
SvdResult svd_truncated(const MatrixView& m, long k);

/// Singular values only, descending.
RVec singular_values(const Mat& m);

/// Right singular vectors only (cols x min(rows, cols), descending value
/// order); the left factor is never formed. Column phases are whatever the
/// backend produces, which any caller contracting them against the matrix is
/// insensitive to.
Mat svd_right_vectors(const Mat& m);

struct DominantPair {
    Vec left;
    Vec right;
    double sigma;
    // m * right == sigma * left to within 1e-8 * sigma.
};

/// Dominant singular triple of a nonzero matrix. Small matrices go through
/// the dense SVD; larger ones use Golub-Kahan-Lanczos bidiagonalization with
/// full reorthogonalization, falling back to the dense path if the iteration
/// stalls. Phase convention matches svd_full.
DominantPair dominant_singular_pair(const Mat& m);
DominantPair dominant_singular_pair(const MatrixView& m);

/// Ordered Gram-Schmidt over the rows of the square matrix `b`: rows are
/// processed in the sequence given by `order` (a permutation of 0..n-1), and
/// each output row is the normalized residual of the matching input row
/// against the rows produced before it. An input row whose residual norm
/// falls below 1e-12 * ||b||_F / sqrt(n) is linearly dependent on its
/// predecessors; such slots are deferred and filled at the end with random
/// vectors orthonormalized against every other output row, so the result is
/// always unitary.
Mat gram_schmidt_rows(const Mat& b, const std::vector<long>& order, Rng& rng);

/// Haar-distributed n x n unitary: QR of a complex Ginibre matrix with the
/// R-diagonal phases absorbed into Q.
Mat random_unitary(long n, Rng& rng);

/// Haar-distributed isometry (rows >= cols) with orthonormal columns.
Mat random_isometry(long rows, long cols, Rng& rng);

} // namespace disent
