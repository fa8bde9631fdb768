#pragma once

#include <optional>
#include <vector>

#include "disent/linalg.hpp"
#include "disent/rng.hpp"
#include "disent/tensor.hpp"

namespace disent {

/// Leg dimensions of the disentangling problem. The order-3 tensor
/// A_{k,ab} carries a grouped first leg k = (k1, k2) of size chi1*chi2
/// (row-major: k = k1*chi2 + k2), a second leg of size chi3 and a third of
/// size chi4.
struct Dims {
    long chi1 = 1;
    long chi2 = 1;
    long chi3 = 1;
    long chi4 = 1;

    long k() const { return chi1 * chi2; }

    void validate() const;
    /// Checks that `a` has shape (chi1*chi2, chi3, chi4).
    void validate_tensor(const Tensor3& a) const;
};

/// Unitary U_{ij,k} acting on the grouped leg of a Tensor3, with the output
/// leg split into (i, j) of sizes (chi1, chi2). Stored as a
/// (chi1*chi2) x (chi1*chi2) matrix: row (i*chi2 + j), column k.
struct Disentangler {
    long chi1 = 1;
    long chi2 = 1;
    Mat u;

    cplx operator()(long i, long j, long k) const { return u(i * chi2 + j, k); }

    /// max(||U U^dag - I||_max, ||U^dag U - I||_max)
    double unitarity_error() const;

    static Disentangler identity(long chi1, long chi2);
};

/// Which algorithm variant a set of dims routes to.
enum class Regime { base, extended, swapped };

struct DisentangleOptions {
    long trials = 1;
    bool try_both_orderings = false;
    /// When set, trial streams derive from this seed instead of drawing a
    /// root from the caller's rng, making the whole call a pure function of
    /// (tensor, options).
    std::optional<std::uint64_t> seed;
};

struct DisentangleResult {
    Disentangler u;
    double entropy = 0.0; // Von Neumann entropy of U.A across the (i,a)|(j,b) cut, in nats
    Regime regime = Regime::base;
    std::vector<double> trial_entropies; // one per trial; entropy == min of these
    // Wall time spent constructing candidate unitaries, summed over trials;
    // the entropy evaluations used to rank them are excluded.
    double construct_seconds = 0.0;
};

/// One pass of the randomized disentangling algorithm. Requires the base
/// regime chi1 <= chi3 and chi2 <= chi4, and a nonzero tensor.
///
/// Steps: contract a random Gaussian vector against the grouped leg, take
/// the dominant singular pair of the resulting chi3 x chi4 matrix, use it to
/// project out rank-chi1 / rank-chi2 factors on the two free legs, compress
/// the tensor to B_{k,ij}, and orthonormalize the rows of B^dag in an order
/// keyed by chi2*i + j (chi1 <= chi2) or chi1*j + i (otherwise). The
/// resulting unitary makes U.B triangular in that ordering, which forces a
/// block of exact zeros into the cut spectrum of U.A.
Disentangler fast_disentangle(const Tensor3& a, const Dims& d, Rng& rng);

/// Variant for chi1 > chi3. Folds the third leg: with fold = ceil(chi1/chi3)
/// and chi4' = ceil(chi4/fold), the right singular vectors of A viewed as a
/// (chi1*chi2*chi3) x chi4 matrix are zero-padded to fold*chi4' columns and
/// the column index split as i = a'*chi4' + b'. Contracting them into A
/// yields an equivalent problem with legs (chi3*fold, chi4') on which the
/// base algorithm runs (ordering forced to the chi2*i + j key). Requires
/// chi2 <= chi4', else throws.
Disentangler extended_disentangle(const Tensor3& a, const Dims& d, Rng& rng);

/// Dispatches on dims: base regime, extended (chi1 > chi3), or the mirrored
/// extended regime (chi2 > chi4, handled by swapping the roles of the two
/// free legs and the two halves of the grouped leg). Throws when no regime
/// applies. Runs opts.trials independent attempts, each on its own derived
/// rng stream, and returns the lowest-entropy unitary (ties: lowest trial
/// index). With try_both_orderings set, base-regime attempts also evaluate
/// the opposite row ordering of the final orthonormalization.
DisentangleResult disentangle_auto(const Tensor3& a, const Dims& d, const DisentangleOptions& opts,
                                   Rng& rng);

/// Guaranteed number of zero singular values in the cut spectrum after one
/// pass, for chi1 <= chi2 (callers swap the roles otherwise):
/// max(0, chi1*(chi1-1)/2 - max(chi1*chi3, chi2*chi4) + chi2^2).
long zero_singular_lower_bound(const Dims& d);

namespace detail {

enum class Step6Ordering { by_dims, row_major, col_major };

/// fast_disentangle with the final-step row ordering pinned. by_dims applies
/// the chi1 <= chi2 rule.
Disentangler fast_disentangle_ordered(const Tensor3& a, const Dims& d, Rng& rng,
                                      Step6Ordering ordering);

/// Steps 1-5 only: the compressed (chi1*chi2) x (chi1*chi2) matrix B with
/// column index (i*chi2 + j). Exposed for the triangularity property tests.
Mat compress(const Tensor3& a, const Dims& d, Rng& rng);

/// Step 6: ordered Gram-Schmidt of B^dag rows.
Disentangler orthonormalize(const Mat& b, const Dims& d, Rng& rng, Step6Ordering ordering);

std::optional<Regime> pick_regime(const Dims& d);

} // namespace detail

} // namespace disent
