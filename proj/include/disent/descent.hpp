#pragma once

#include <optional>
#include <vector>

#include "disent/disentangle.hpp"
#include "disent/rng.hpp"
#include "disent/tensor.hpp"

namespace disent {

/// Settings for Riemannian steepest descent on the unitary group.
struct DescentConfig {
    double initial_step = 1.0;
    double backtrack = 0.5;   // line-search shrink factor, in (0, 1)
    double armijo_c = 1e-4;   // sufficient-decrease constant
    double min_step = 1e-8;   // line search below this step halts the run
    double entropy_tol = 1e-12; // halt once an accepted step improves less than this
    long max_iters = 2000;
    long restarts = 8;
    /// Optional early stop: halt as soon as the entropy reaches this value.
    /// Used for timing how long descent takes to match a given target.
    std::optional<double> stop_below;

    void validate() const;
};

struct EntropyGradient {
    double entropy;
    Mat grad; // dS = Re tr(grad^dag dM) for an unconstrained perturbation dM
};

/// Entanglement entropy of M.A across the (i,a)|(j,b) cut together with its
/// Euclidean matrix gradient. Defined for any matrix M (the spectrum weights
/// are normalized), which is what makes finite-difference checks in the
/// ambient space meaningful. Inside the gradient the weights are smoothed,
/// p ln p -> p ln(p + 1e-12), so exact zeros in the spectrum cannot produce
/// NaN; the returned entropy value is unsmoothed.
EntropyGradient entropy_and_gradient(const Mat& m, const Tensor3& a, const Dims& d);

/// Entropy only, for line searches.
double cut_entropy_of(const Mat& m, const Tensor3& a, const Dims& d);

struct DescentTrace {
    std::vector<double> entropies;  // accepted iterates, entropies[0] is the start
    std::vector<double> step_sizes; // accepted step length per iteration
    std::vector<double> grad_norms; // Riemannian gradient norm before each accepted step
    Mat final_u;
    double final_entropy = 0.0;
    long iterations = 0; // accepted steps
    double seconds = 0.0;
};

/// Armijo-backtracking steepest descent on U(chi1*chi2): the Euclidean
/// gradient is projected onto the tangent space (U skew(U^dag G)) and steps
/// retract through the polar decomposition, so iterates stay unitary to
/// machine precision. The entropy sequence is non-increasing; the run halts
/// on max_iters, a step below min_step, an improvement below entropy_tol, a
/// vanishing gradient, or stop_below.
DescentTrace riemannian_descent(const Tensor3& a, const Dims& d, const Mat& u0,
                                const DescentConfig& cfg);

struct MinEntropySearch {
    double entropy = 0.0;
    Mat u;
    std::vector<double> restart_entropies;
};

/// Best-of-restarts descent. When the dims admit a single-pass disentangler
/// the first restart starts from it; the remaining restarts start from Haar
/// random unitaries. Never worse than the seeding pass.
MinEntropySearch min_entropy_search(const Tensor3& a, const Dims& d, const DescentConfig& cfg,
                                    Rng& rng);

/// Entropy of the best restart only.
double estimate_min_entropy(const Tensor3& a, const Dims& d, const DescentConfig& cfg, Rng& rng);

/// Entropy of U.A for a fresh Haar-random unitary: the no-effort baseline.
double random_unitary_entropy(const Tensor3& a, const Dims& d, Rng& rng);

} // namespace disent
