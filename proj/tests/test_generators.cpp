#include <doctest.h>

#include <cmath>

#include "disent/entanglement.hpp"
#include "disent/generators.hpp"
#include "disent/rng.hpp"

using namespace disent;

namespace {

SingularSpectrum raw_cut_spectrum(const Tensor3& a, const Dims& d) {
    return cut_spectrum(apply_disentangler(Disentangler::identity(d.chi1, d.chi2), a));
}

RVec rvec(std::initializer_list<double> xs) {
    RVec v(static_cast<long>(xs.size()));
    long i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

} // namespace

TEST_CASE("kind names round-trip") {
    for (TensorKind k : {TensorKind::gaussian, TensorKind::lambda_inv, TensorKind::lambda_pow2,
                         TensorKind::mu_inv, TensorKind::ansatz})
        CHECK(parse_kind(kind_name(k)) == k);
    CHECK_THROWS_AS(parse_kind("no-such-kind"), std::invalid_argument);
}

TEST_CASE("gaussian entries have the standard complex moment") {
    Rng rng(31);
    double sum = 0.0;
    long count = 0;
    for (int inst = 0; inst < 10; ++inst) {
        Tensor3 a = gaussian_tensor({4, 4, 25, 25}, rng);
        sum += a.data().squaredNorm();
        count += a.size();
    }
    // E|z|^2 = 2 for a standard complex Gaussian; sd of the mean ~ 0.006.
    CHECK(sum / static_cast<double>(count) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("planted spectrum is recovered exactly across the construction cut") {
    Rng rng(32);
    Dims d{2, 2, 3, 3};
    RVec lambda = rvec({1.5, 1.0, 0.5, 0.25});
    Tensor3 a = spectrum_tensor(d, lambda, rng);
    SingularSpectrum s = raw_cut_spectrum(a, d);
    REQUIRE(s.count() == 6); // min(chi1*chi3, chi2*chi4)
    for (long i = 0; i < 4; ++i) CHECK(s.values(i) == doctest::Approx(lambda(i)).epsilon(1e-10));
    CHECK(s.values(4) < 1e-10);
    CHECK(s.values(5) < 1e-10);
}

TEST_CASE("spectrum tensor validates its inputs") {
    Rng rng(33);
    RVec four = rvec({1.0, 0.5, 0.25, 0.125});
    CHECK_THROWS_AS(spectrum_tensor({2, 3, 2, 2}, four, rng), std::invalid_argument);
    CHECK_THROWS_AS(spectrum_tensor({2, 2, 3, 4}, four, rng), std::invalid_argument);
    CHECK_THROWS_AS(spectrum_tensor({2, 2, 3, 3}, rvec({1.0, 0.5}), rng), std::invalid_argument);
    CHECK_THROWS_AS(spectrum_tensor({4, 4, 2, 2}, RVec(RVec::Ones(16)), rng),
                    std::invalid_argument); // chi1 > chi3
    CHECK_THROWS_AS(spectrum_tensor({2, 2, 3, 3}, rvec({1.0, 0.5, -0.1, 0.0}), rng),
                    std::invalid_argument);
}

TEST_CASE("single-term product sum is rank one across the cut") {
    Rng rng(34);
    Dims d{2, 2, 3, 3};
    Tensor3 a = outer_product_tensor(d, rvec({1.0, 0.0, 0.0, 0.0}), rng);
    SingularSpectrum s = raw_cut_spectrum(a, d);
    CHECK(s.values(1) < 1e-12 * s.values(0));
    CHECK(von_neumann_entropy(s) < 1e-10);
    CHECK_THROWS_AS(outer_product_tensor({2, 3, 2, 2}, rvec({1.0}), rng), std::invalid_argument);
    CHECK_THROWS_AS(outer_product_tensor(d, rvec({1.0, 0.5}), rng), std::invalid_argument);
}

TEST_CASE("ansatz tensor has the advertised factor structure") {
    Rng rng(35);
    Mat m1(2, 2), m2(2, 2), m3(3, 2);
    for (long r = 0; r < 2; ++r)
        for (long c = 0; c < 2; ++c) {
            m1(r, c) = rng.complex_gaussian();
            m2(r, c) = rng.complex_gaussian();
        }
    for (long r = 0; r < 3; ++r)
        for (long c = 0; c < 2; ++c) m3(r, c) = rng.complex_gaussian();

    // Legs: (2*2, 2*3, 2*2) with a1 in {0,1}, a2 in {0,1,2}.
    Tensor3 a = ansatz_tensor(m1, m2, m3);
    CHECK(a.dim0() == 4);
    CHECK(a.dim1() == 6);
    CHECK(a.dim2() == 4);
    for (long k1 = 0; k1 < 2; ++k1)
        for (long k2 = 0; k2 < 2; ++k2)
            for (long a1 = 0; a1 < 2; ++a1)
                for (long a2 = 0; a2 < 3; ++a2)
                    for (long b1 = 0; b1 < 2; ++b1)
                        for (long b2 = 0; b2 < 2; ++b2) {
                            cplx expected = m1(k1, a1) * m2(k2, b2) * m3(a2, b1);
                            cplx got = a(k1 * 2 + k2, a1 * 3 + a2, b1 * 2 + b2);
                            CHECK(std::abs(got - expected) < 1e-14);
                        }
}

TEST_CASE("rank-one ansatz instances require divisible legs") {
    Rng rng(36);
    Tensor3 a = ansatz_rank1_tensor({2, 2, 4, 6}, rng);
    CHECK(a.dim0() == 4);
    CHECK(a.dim1() == 4);
    CHECK(a.dim2() == 6);
    CHECK_THROWS_AS(ansatz_rank1_tensor({2, 2, 5, 4}, rng), std::invalid_argument);
    CHECK_THROWS_AS(ansatz_rank1_tensor({3, 2, 4, 4}, rng), std::invalid_argument);
}

TEST_CASE("check_kind_dims mirrors make_tensor acceptance") {
    Rng rng(37);
    struct Case {
        TensorKind kind;
        Dims d;
    };
    const Case cases[] = {
        {TensorKind::gaussian, {2, 3, 4, 5}},  {TensorKind::gaussian, {1, 1, 1, 1}},
        {TensorKind::lambda_inv, {2, 2, 3, 3}}, {TensorKind::lambda_inv, {2, 3, 3, 3}},
        {TensorKind::lambda_inv, {4, 4, 2, 2}}, {TensorKind::lambda_pow2, {2, 2, 2, 2}},
        {TensorKind::mu_inv, {3, 3, 2, 2}},     {TensorKind::mu_inv, {2, 2, 3, 4}},
        {TensorKind::ansatz, {2, 2, 4, 6}},     {TensorKind::ansatz, {2, 2, 5, 4}},
    };
    for (const Case& c : cases) {
        bool check_ok = true;
        try {
            check_kind_dims(c.kind, c.d);
        } catch (const std::invalid_argument&) {
            check_ok = false;
        }
        bool make_ok = true;
        try {
            Rng local(38);
            make_tensor(c.kind, c.d, local);
        } catch (const std::invalid_argument&) {
            make_ok = false;
        }
        CAPTURE(kind_name(c.kind));
        CHECK(check_ok == make_ok);
    }
}

TEST_CASE("random states are normalized and reject bad qubit counts") {
    Rng rng(39);
    Vec psi = random_state(5, rng);
    CHECK(psi.size() == 32);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(random_state(1, rng), std::invalid_argument);
    CHECK_THROWS_AS(random_state(25, rng), std::invalid_argument);
}

TEST_SUITE("slow") {

TEST_CASE("half-cut entropy of random states sits at the expected typical value") {
    Rng rng(40);
    const int n = 10;
    const long half = 32;
    double sum = 0.0;
    const int states = 20;
    for (int t = 0; t < states; ++t) {
        Vec psi = random_state(n, rng);
        Eigen::Map<const Mat> m(psi.data(), half, half);
        RVec s = singular_values(Mat(m));
        sum += von_neumann_entropy(SingularSpectrum::from_values(s));
    }
    // Typical value for a half cut: ln(32) - 32/(2*32) = 5 ln 2 - 1/2.
    CHECK(sum / states == doctest::Approx(5.0 * std::log(2.0) - 0.5).epsilon(0.03));
}

} // TEST_SUITE
