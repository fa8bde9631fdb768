#include "disent/generators.hpp"

#include <cmath>

#include <fmt/format.h>

namespace disent {

namespace {

Vec gaussian_vec(long n, Rng& rng) {
    Vec v(n);
    for (long i = 0; i < n; ++i)
        v(i) = rng.complex_gaussian();
    return v;
}

void require_square_legs(const Dims& d, const char* what) {
    if (d.chi1 != d.chi2 || d.chi3 != d.chi4)
        throw std::invalid_argument(fmt::format("{} requires chi1 = chi2 and chi3 = chi4", what));
}

} // namespace

TensorKind parse_kind(const std::string& name) {
    if (name == "gaussian")
        return TensorKind::gaussian;
    if (name == "lambda-inv")
        return TensorKind::lambda_inv;
    if (name == "lambda-pow2")
        return TensorKind::lambda_pow2;
    if (name == "mu-inv")
        return TensorKind::mu_inv;
    if (name == "ansatz")
        return TensorKind::ansatz;
    throw std::invalid_argument(fmt::format(
        "unknown tensor kind '{}': expected gaussian, lambda-inv, lambda-pow2, mu-inv or ansatz",
        name));
}

std::string kind_name(TensorKind kind) {
    switch (kind) {
    case TensorKind::gaussian: return "gaussian";
    case TensorKind::lambda_inv: return "lambda-inv";
    case TensorKind::lambda_pow2: return "lambda-pow2";
    case TensorKind::mu_inv: return "mu-inv";
    case TensorKind::ansatz: return "ansatz";
    }
    throw std::logic_error("unreachable");
}

Tensor3 gaussian_tensor(const Dims& d, Rng& rng) {
    d.validate();
    return Tensor3::from_data(d.k(), d.chi3, d.chi4, gaussian_vec(d.k() * d.chi3 * d.chi4, rng));
}

Tensor3 spectrum_tensor(const Dims& d, const RVec& lambda, Rng& rng) {
    d.validate();
    require_square_legs(d, "spectrum_tensor");
    const long chi = d.chi1, env = d.chi3;
    if (lambda.size() != chi * chi)
        throw std::invalid_argument(fmt::format("need chi1^2 = {} spectrum values, got {}",
                                                chi * chi, lambda.size()));
    if (chi > env)
        throw std::invalid_argument("spectrum_tensor requires chi1 <= chi3");
    if (!lambda.allFinite() || lambda.minCoeff() < 0.0)
        throw std::invalid_argument("spectrum values must be finite and non-negative");

    Mat w = random_isometry(chi * env, chi * chi, rng);
    Mat v = random_isometry(chi * env, chi * chi, rng);

    // M_{(k1 a),(k2 b)} = W diag(lambda) V^T has singular values lambda
    // because conj(V) also has orthonormal columns.
    Mat m = w * lambda.asDiagonal() * v.transpose();

    Tensor3 t(chi * chi, env, env);
    for (long k1 = 0; k1 < chi; ++k1)
        for (long k2 = 0; k2 < chi; ++k2)
            for (long a = 0; a < env; ++a)
                for (long b = 0; b < env; ++b)
                    t(k1 * chi + k2, a, b) = m(k1 * env + a, k2 * env + b);
    return t;
}

Tensor3 outer_product_tensor(const Dims& d, const RVec& mu, Rng& rng) {
    d.validate();
    require_square_legs(d, "outer_product_tensor");
    if (mu.size() != d.chi1 * d.chi1)
        throw std::invalid_argument(fmt::format("need chi1^2 = {} weights, got {}",
                                                d.chi1 * d.chi1, mu.size()));
    if (!mu.allFinite())
        throw std::invalid_argument("weights must be finite");

    Tensor3 t(d.k(), d.chi3, d.chi4);
    for (long term = 0; term < mu.size(); ++term) {
        Vec v1 = gaussian_vec(d.chi1, rng).normalized();
        Vec v2 = gaussian_vec(d.chi2, rng).normalized();
        Vec v3 = gaussian_vec(d.chi3, rng).normalized();
        Vec v4 = gaussian_vec(d.chi4, rng).normalized();
        for (long k1 = 0; k1 < d.chi1; ++k1)
            for (long k2 = 0; k2 < d.chi2; ++k2)
                for (long a = 0; a < d.chi3; ++a)
                    for (long b = 0; b < d.chi4; ++b)
                        t(k1 * d.chi2 + k2, a, b) += mu(term) * v1(k1) * v2(k2) * v3(a) * v4(b);
    }
    return t;
}

Tensor3 ansatz_tensor(const Mat& m1, const Mat& m2, const Mat& m3) {
    if (m1.size() == 0 || m2.size() == 0 || m3.size() == 0)
        throw std::invalid_argument("ansatz factors must be non-empty");
    const long chi1 = m1.rows(), a1n = m1.cols();
    const long chi2 = m2.rows(), b2n = m2.cols();
    const long a2n = m3.rows(), b1n = m3.cols();

    Tensor3 t(chi1 * chi2, a1n * a2n, b1n * b2n);
    for (long k1 = 0; k1 < chi1; ++k1)
        for (long k2 = 0; k2 < chi2; ++k2)
            for (long a1 = 0; a1 < a1n; ++a1)
                for (long a2 = 0; a2 < a2n; ++a2)
                    for (long b1 = 0; b1 < b1n; ++b1)
                        for (long b2 = 0; b2 < b2n; ++b2)
                            t(k1 * chi2 + k2, a1 * a2n + a2, b1 * b2n + b2) =
                                m1(k1, a1) * m2(k2, b2) * m3(a2, b1);
    return t;
}

Tensor3 ansatz_rank1_tensor(const Dims& d, Rng& rng) {
    d.validate();
    if (d.chi3 % d.chi1 != 0 || d.chi4 % d.chi2 != 0)
        throw std::invalid_argument(
            fmt::format("ansatz dims need chi1 | chi3 and chi2 | chi4, got ({}, {}, {}, {})",
                        d.chi1, d.chi2, d.chi3, d.chi4));
    Mat m1(d.chi1, d.chi1), m2(d.chi2, d.chi2);
    for (long j = 0; j < m1.cols(); ++j)
        m1.col(j) = gaussian_vec(m1.rows(), rng);
    for (long j = 0; j < m2.cols(); ++j)
        m2.col(j) = gaussian_vec(m2.rows(), rng);
    Mat m3 = gaussian_vec(d.chi3 / d.chi1, rng) * gaussian_vec(d.chi4 / d.chi2, rng).transpose();
    return ansatz_tensor(m1, m2, m3);
}

Tensor3 make_tensor(TensorKind kind, const Dims& d, Rng& rng) {
    switch (kind) {
    case TensorKind::gaussian:
        return gaussian_tensor(d, rng);
    case TensorKind::lambda_inv: {
        RVec lambda(d.chi1 * d.chi1);
        for (long i = 0; i < lambda.size(); ++i)
            lambda(i) = 1.0 / static_cast<double>(i + 1);
        return spectrum_tensor(d, lambda, rng);
    }
    case TensorKind::lambda_pow2: {
        RVec lambda(d.chi1 * d.chi1);
        for (long i = 0; i < lambda.size(); ++i)
            lambda(i) = std::pow(2.0, -static_cast<double>(i + 1));
        return spectrum_tensor(d, lambda, rng);
    }
    case TensorKind::mu_inv: {
        RVec mu(d.chi1 * d.chi1);
        for (long i = 0; i < mu.size(); ++i)
            mu(i) = 1.0 / static_cast<double>(i + 1);
        return outer_product_tensor(d, mu, rng);
    }
    case TensorKind::ansatz:
        return ansatz_rank1_tensor(d, rng);
    }
    throw std::logic_error("unreachable");
}

void check_kind_dims(TensorKind kind, const Dims& d) {
    d.validate();
    switch (kind) {
    case TensorKind::gaussian:
        return;
    case TensorKind::lambda_inv:
    case TensorKind::lambda_pow2:
        require_square_legs(d, "a planted spectrum");
        if (d.chi1 > d.chi3)
            throw std::invalid_argument("a planted spectrum requires chi1 <= chi3");
        return;
    case TensorKind::mu_inv:
        require_square_legs(d, "a product-tensor sum");
        return;
    case TensorKind::ansatz:
        if (d.chi3 % d.chi1 != 0 || d.chi4 % d.chi2 != 0)
            throw std::invalid_argument(
                fmt::format("ansatz dims need chi1 | chi3 and chi2 | chi4, got ({}, {}, {}, {})",
                            d.chi1, d.chi2, d.chi3, d.chi4));
        return;
    }
    throw std::logic_error("unreachable");
}

Vec random_state(int n, Rng& rng) {
    if (n < 2 || n > 24)
        throw std::invalid_argument(fmt::format("qubit count {} out of supported range [2, 24]", n));
    Vec psi = gaussian_vec(1l << n, rng);
    psi.normalize();
    return psi;
}

} // namespace disent
