#include <doctest.h>

#include "disent/rng.hpp"
#include "disent/tensor.hpp"

using namespace disent;

namespace {

Tensor3 labeled(long d0, long d1, long d2) {
    Tensor3 t(d0, d1, d2);
    for (long k = 0; k < d0; ++k)
        for (long a = 0; a < d1; ++a)
            for (long b = 0; b < d2; ++b) t(k, a, b) = cplx(100.0 * k + 10.0 * a + b, -1.0 * k);
    return t;
}

} // namespace

TEST_CASE("matrix views agree with element indexing") {
    const Tensor3 t = labeled(3, 4, 5);
    const auto kab = t.as_k_by_ab();
    const auto kab2 = t.as_ka_by_b();
    for (long k = 0; k < 3; ++k)
        for (long a = 0; a < 4; ++a)
            for (long b = 0; b < 5; ++b) {
                CHECK(kab(k, a * 5 + b) == t(k, a, b));
                CHECK(kab2(k * 4 + a, b) == t(k, a, b));
            }
}

TEST_CASE("group_indices covers adjacent pairs and rejects the skipping one") {
    const Tensor3 t = labeled(2, 3, 4);
    const Mat m01 = group_indices(t, 0, 1).dense();
    const Mat m12 = group_indices(t, 1, 2).dense();
    CHECK(m01.rows() == 6);
    CHECK(m01.cols() == 4);
    CHECK(m12.rows() == 2);
    CHECK(m12.cols() == 12);
    for (long k = 0; k < 2; ++k)
        for (long a = 0; a < 3; ++a)
            for (long b = 0; b < 4; ++b) {
                CHECK(m01(k * 3 + a, b) == t(k, a, b));
                CHECK(m12(k, a * 4 + b) == t(k, a, b));
            }
    CHECK((group_indices(t, 1, 0).dense() - m01).norm() == 0.0); // order-insensitive
    CHECK_THROWS_AS(group_indices(t, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(group_indices(t, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(group_indices(t, 0, 3), std::invalid_argument);
}

TEST_CASE("from_data validates shape and finiteness") {
    Vec good(6);
    good.setOnes();
    CHECK_NOTHROW(Tensor3::from_data(1, 2, 3, good));
    CHECK_THROWS_AS(Tensor3::from_data(2, 2, 3, good), std::invalid_argument);
    Vec bad = good;
    bad(2) = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(Tensor3::from_data(1, 2, 3, bad), std::invalid_argument);
    CHECK_THROWS_AS(Tensor3(0, 2, 3), std::invalid_argument);
}

TEST_CASE("tensor4 round-trips its strides") {
    Tensor4 t(2, 3, 2, 2);
    for (long i = 0; i < 2; ++i)
        for (long j = 0; j < 3; ++j)
            for (long a = 0; a < 2; ++a)
                for (long b = 0; b < 2; ++b) t(i, j, a, b) = cplx(i, 10.0 * j + 2 * a + b);
    long count = 0;
    for (long i = 0; i < 2; ++i)
        for (long j = 0; j < 3; ++j)
            for (long a = 0; a < 2; ++a)
                for (long b = 0; b < 2; ++b) {
                    CHECK(t(i, j, a, b) == cplx(i, 10.0 * j + 2 * a + b));
                    ++count;
                }
    CHECK(count == t.data().size());
}

TEST_CASE("norm matches the flat vector norm") {
    Rng rng(5);
    Tensor3 t(2, 3, 4);
    for (long k = 0; k < 2; ++k)
        for (long a = 0; a < 3; ++a)
            for (long b = 0; b < 4; ++b) t(k, a, b) = rng.complex_gaussian();
    CHECK(t.norm() == doctest::Approx(t.data().norm()).epsilon(1e-14));
    CHECK(t.is_finite());
}
