#pragma once

#include <string>

#include "disent/disentangle.hpp"
#include "disent/rng.hpp"
#include "disent/tensor.hpp"

namespace disent {

/// Test-tensor families understood by the benchmark driver.
enum class TensorKind {
    gaussian,    // iid complex Gaussian entries
    lambda_inv,  // planted cut spectrum lambda_i = 1/i
    lambda_pow2, // planted cut spectrum lambda_i = 2^-i
    mu_inv,      // sum of product tensors with weights mu_i = 1/i
    ansatz,      // rank-1 inner factor, exactly disentanglable
};

TensorKind parse_kind(const std::string& name);
std::string kind_name(TensorKind kind);

/// Tensor of shape (chi1*chi2, chi3, chi4) with iid standard complex
/// Gaussian entries.
Tensor3 gaussian_tensor(const Dims& d, Rng& rng);

/// Tensor with a planted cut spectrum (requires chi1 = chi2, chi3 = chi4):
/// A_{(k1 k2), a b} = sum_i lambda_i W_{(k1 a), i} V_{(k2 b), i} with W, V
/// independent Haar isometries of shape (chi1*chi3) x chi1^2. Reinterpreted
/// across its construction cut, the tensor's singular values are exactly
/// `lambda` (given descending non-negative entries). Requires
/// len(lambda) = chi1^2 <= chi1*chi3.
Tensor3 spectrum_tensor(const Dims& d, const RVec& lambda, Rng& rng);

/// Weighted sum of product tensors (requires chi1 = chi2, chi3 = chi4):
/// A = sum_i mu_i v1_i (x) v2_i (x) v3_i (x) v4_i with fresh normalized
/// complex Gaussian vectors drawn independently for every term. Requires
/// len(mu) = chi1^2.
Tensor3 outer_product_tensor(const Dims& d, const RVec& mu, Rng& rng);

/// Structured tensor A_{(k1 k2), (a1 a2), (b1 b2)} = M1_{k1 a1} M2_{k2 b2}
/// M3_{a2 b1}, the form the single-pass algorithm disentangles exactly. Leg
/// sizes follow from the factors: (rows(m1)*rows(m2), cols(m1)*rows(m3),
/// cols(m3)*cols(m2)).
Tensor3 ansatz_tensor(const Mat& m1, const Mat& m2, const Mat& m3);

/// Convenience: Gaussian m1 (chi1 x chi1), m2 (chi2 x chi2) and a rank-1
/// inner factor m3 of shape (chi3/chi1) x (chi4/chi2). Requires chi1 | chi3
/// and chi2 | chi4. The minimal cut entropy of the result is zero.
Tensor3 ansatz_rank1_tensor(const Dims& d, Rng& rng);

/// Builds the tensor family `kind` at the given dims. For the planted kinds
/// the spectrum length is chi1^2.
Tensor3 make_tensor(TensorKind kind, const Dims& d, Rng& rng);

/// Throws invalid_argument when make_tensor(kind, d, ...) would reject the
/// dims, without constructing anything.
void check_kind_dims(TensorKind kind, const Dims& d);

/// Normalized state vector of n qubits (length 2^n), 2 <= n <= 24.
Vec random_state(int n, Rng& rng);

} // namespace disent
