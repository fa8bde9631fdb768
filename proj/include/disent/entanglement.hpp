#pragma once

#include "disent/disentangle.hpp"
#include "disent/tensor.hpp"

namespace disent {

/// Singular values of a cut, descending, with the derived probability
/// weights p_i = s_i^2 / sum_j s_j^2. For an all-zero value list the weights
/// are left at zero; entropy of such a spectrum is undefined and throws.
struct SingularSpectrum {
    RVec values;
    RVec probs;

    static SingularSpectrum from_values(RVec values);

    long count() const { return values.size(); }

    /// Number of values at or below rel_cutoff * max value. By convention a
    /// singular value counts as zero below 1e-10 relative.
    long zero_count(double rel_cutoff = 1e-10) const;
};

/// Contracts U_{ij,k} with A_{k,ab}, splitting the grouped leg:
/// T_{ij,ab} = sum_k U_{ij,k} A_{k,ab}.
Tensor4 apply_disentangler(const Disentangler& u, const Tensor3& a);

/// Singular values of T regrouped as a matrix with rows (i, a) and columns
/// (j, b): the spectrum of the cut separating (i, a) from (j, b).
SingularSpectrum cut_spectrum(const Tensor4& t);

/// Von Neumann entropy -sum p_i ln p_i in nats, with 0 ln 0 = 0.
double von_neumann_entropy(const SingularSpectrum& s);

/// Renyi entropy (1-alpha)^-1 ln sum p_i^alpha. Requires alpha > 0,
/// alpha != 1.
double renyi_entropy(const SingularSpectrum& s, double alpha);

/// Weight lost when keeping only the chi largest values: sum_{i > chi} p_i,
/// the discarded share of the squared-singular-value mass. Requires
/// 0 <= chi <= count.
double truncation_error(const SingularSpectrum& s, long chi);

} // namespace disent
