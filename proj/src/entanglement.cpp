#include "disent/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "disent/linalg.hpp"

namespace disent {

SingularSpectrum SingularSpectrum::from_values(RVec values) {
    if (values.size() < 1)
        throw std::invalid_argument("spectrum must contain at least one value");
    if (!values.allFinite() || values.minCoeff() < 0.0)
        throw std::invalid_argument("singular values must be finite and non-negative");
    std::sort(values.data(), values.data() + values.size(), std::greater<double>());

    SingularSpectrum s;
    s.values = std::move(values);
    s.probs = RVec::Zero(s.values.size());
    double total = s.values.squaredNorm();
    if (total > 0.0)
        s.probs = s.values.array().square() / total;
    return s;
}

long SingularSpectrum::zero_count(double rel_cutoff) const {
    double cutoff = rel_cutoff * values(0);
    return std::count_if(values.data(), values.data() + values.size(),
                         [cutoff](double v) { return v <= cutoff; });
}

Tensor4 apply_disentangler(const Disentangler& u, const Tensor3& a) {
    const long k = u.chi1 * u.chi2;
    if (a.dim0() != k)
        throw std::invalid_argument(fmt::format(
            "disentangler acts on a leg of size {}, tensor has {}", k, a.dim0()));

    // Row-major (ij) x (ab) result of U * A is exactly the (i,j,a,b) layout.
    RowMat prod = u.u * a.as_k_by_ab();
    Tensor4 t(u.chi1, u.chi2, a.dim1(), a.dim2());
    t.data() = Eigen::Map<const Vec>(prod.data(), prod.size());
    return t;
}

SingularSpectrum cut_spectrum(const Tensor4& t) {
    const long chi1 = t.dim0(), chi2 = t.dim1(), chi3 = t.dim2(), chi4 = t.dim3();
    Mat m(chi1 * chi3, chi2 * chi4);
    for (long i = 0; i < chi1; ++i)
        for (long j = 0; j < chi2; ++j)
            for (long a = 0; a < chi3; ++a)
                for (long b = 0; b < chi4; ++b)
                    m(i * chi3 + a, j * chi4 + b) = t(i, j, a, b);
    return SingularSpectrum::from_values(singular_values(m));
}

double von_neumann_entropy(const SingularSpectrum& s) {
    if (s.values(0) <= 0.0)
        throw std::domain_error("entropy of an all-zero spectrum is undefined");
    double entropy = 0.0;
    for (long i = 0; i < s.probs.size(); ++i) {
        double p = s.probs(i);
        if (p > 0.0)
            entropy -= p * std::log(p);
    }
    return entropy;
}

double renyi_entropy(const SingularSpectrum& s, double alpha) {
    if (alpha <= 0.0 || alpha == 1.0)
        throw std::invalid_argument(fmt::format("Renyi order must be positive and != 1, got {}",
                                                alpha));
    if (s.values(0) <= 0.0)
        throw std::domain_error("entropy of an all-zero spectrum is undefined");
    double sum = 0.0;
    for (long i = 0; i < s.probs.size(); ++i) {
        double p = s.probs(i);
        if (p > 0.0)
            sum += std::pow(p, alpha);
    }
    return std::log(sum) / (1.0 - alpha);
}

double truncation_error(const SingularSpectrum& s, long chi) {
    if (chi < 0 || chi > s.count())
        throw std::invalid_argument(fmt::format("keep count {} out of range for spectrum of {}",
                                                chi, s.count()));
    double err = 0.0;
    for (long i = chi; i < s.probs.size(); ++i)
        err += s.probs(i);
    return err;
}

} // namespace disent
