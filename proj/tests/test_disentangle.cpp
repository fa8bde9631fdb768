#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "disent/entanglement.hpp"
#include "disent/generators.hpp"
#include "disent/rng.hpp"

using namespace disent;

namespace {

double entropy_after(const Disentangler& u, const Tensor3& a) {
    return von_neumann_entropy(cut_spectrum(apply_disentangler(u, a)));
}

} // namespace

TEST_CASE("regime dispatch covers the documented dimension space") {
    using detail::pick_regime;
    CHECK(pick_regime({2, 2, 2, 2}) == Regime::base);
    CHECK(pick_regime({2, 3, 5, 7}) == Regime::base);
    CHECK(pick_regime({4, 2, 2, 8}) == Regime::extended);
    CHECK(pick_regime({2, 4, 8, 2}) == Regime::swapped);
    CHECK(pick_regime({2, 2, 1, 256}) == Regime::extended);
    CHECK(!pick_regime({4, 3, 3, 4}).has_value());
    CHECK(!pick_regime({2, 2, 1, 2}).has_value());
    CHECK(!pick_regime({2, 2, 2, 1}).has_value());
}

TEST_CASE("every regime produces a unitary") {
    Rng rng(41);
    const Dims all[] = {
        {2, 2, 2, 2}, {2, 3, 5, 7}, {1, 1, 1, 1}, {1, 4, 4, 4}, {4, 1, 4, 4},
        {4, 2, 2, 8}, {6, 2, 3, 9}, {2, 4, 8, 2}, {3, 6, 9, 3}, {2, 2, 1, 9},
    };
    for (const Dims& d : all) {
        CAPTURE(d.chi1);
        CAPTURE(d.chi2);
        CAPTURE(d.chi3);
        CAPTURE(d.chi4);
        Tensor3 a = gaussian_tensor(d, rng);
        DisentangleResult res = disentangle_auto(a, d, {}, rng);
        CHECK(res.u.unitarity_error() < 1e-12);
        CHECK(res.u.u.rows() == d.k());
        CHECK(res.entropy == doctest::Approx(entropy_after(res.u, a)).epsilon(1e-10));
    }
}

TEST_CASE("guaranteed zero counts follow the closed form") {
    CHECK(zero_singular_lower_bound({2, 2, 2, 2}) == 1);
    CHECK(zero_singular_lower_bound({4, 4, 4, 4}) == 6);
    CHECK(zero_singular_lower_bound({16, 16, 16, 16}) == 120);
    CHECK(zero_singular_lower_bound({2, 3, 5, 7}) == 0);
    CHECK(zero_singular_lower_bound({3, 3, 3, 3}) == 3);
}

TEST_CASE("gaussian tensors gain the guaranteed zeros") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull, 6ull, 7ull, 8ull, 9ull, 10ull}) {
        Rng rng(seed);
        Dims d{4, 4, 4, 4};
        Tensor3 a = gaussian_tensor(d, rng);
        Disentangler u = fast_disentangle(a, d, rng);
        SingularSpectrum s = cut_spectrum(apply_disentangler(u, a));
        CHECK(s.zero_count() >= 6);
    }
}

TEST_CASE("ansatz instances disentangle to numerically zero entropy") {
    Rng rng(42);
    for (const Dims& d : {Dims{4, 4, 8, 8}, Dims{2, 3, 4, 9}}) {
        Tensor3 a = ansatz_rank1_tensor(d, rng);
        Disentangler u = fast_disentangle(a, d, rng);
        CHECK(entropy_after(u, a) < 1e-9);
    }
}

TEST_CASE("dimension combinations outside every regime are rejected") {
    Rng rng(43);
    Dims d{4, 3, 3, 4};
    Tensor3 a = gaussian_tensor(d, rng);
    CHECK_THROWS_AS(fast_disentangle(a, d, rng), std::domain_error);
    CHECK_THROWS_AS(disentangle_auto(a, d, {}, rng), std::domain_error);
}

TEST_CASE("folding requires the reduced leg to fit") {
    Rng rng(44);
    // fold = ceil(4/3) = 2, chi4' = ceil(4/2) = 2 < chi2 = 3.
    Dims d{4, 3, 2, 4};
    Tensor3 a = gaussian_tensor(d, rng);
    CHECK_THROWS_AS(extended_disentangle(a, d, rng), std::domain_error);
}

TEST_CASE("multiple trials keep the best candidate and honor fixed seeds") {
    Rng rng(45);
    Dims d{3, 3, 3, 3};
    Tensor3 a = gaussian_tensor(d, rng);

    DisentangleOptions opts;
    opts.trials = 8;
    opts.seed = 777;
    DisentangleResult first = disentangle_auto(a, d, opts, rng);
    REQUIRE(first.trial_entropies.size() == 8);
    double best = first.trial_entropies[0];
    for (double e : first.trial_entropies) best = std::min(best, e);
    CHECK(first.entropy == best);

    DisentangleResult second = disentangle_auto(a, d, opts, rng);
    CHECK((first.u.u - second.u.u).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(first.trial_entropies[i] == second.trial_entropies[i]);

    opts.try_both_orderings = true;
    DisentangleResult both = disentangle_auto(a, d, opts, rng);
    CHECK(both.entropy <= first.entropy + 1e-12);
}

TEST_CASE("compressed tensor becomes triangular under the computed unitary") {
    Rng rng(46);
    Dims d{3, 4, 6, 8};
    Tensor3 a = gaussian_tensor(d, rng);
    Rng stream(Rng::derive(99, 0));
    Mat b = detail::compress(a, d, stream);
    REQUIRE(b.rows() == d.k());
    REQUIRE(b.cols() == d.k());

    Rng replay(Rng::derive(99, 0));
    Mat b_replay = detail::compress(a, d, replay);
    Rng gs(Rng::derive(99, 1));
    Disentangler u = detail::orthonormalize(b, d, gs, detail::Step6Ordering::by_dims);
    CHECK((b - b_replay).cwiseAbs().maxCoeff() == 0.0);

    // Row key for chi1 <= chi2: chi2*i + j. U.B must vanish at (row, col)
    // whenever key(row) > key(col), writing col = (i, j).
    Mat ub = u.u * b;
    auto key = [&](long i, long j) { return d.chi2 * i + j; };
    for (long r = 0; r < d.k(); ++r)
        for (long c = 0; c < d.k(); ++c) {
            long ri = r / d.chi2, rj = r % d.chi2;
            long ci = c / d.chi2, cj = c % d.chi2;
            if (key(ri, rj) > key(ci, cj)) CHECK(std::abs(ub(r, c)) < 1e-10 * b.norm());
        }
}

TEST_SUITE("slow") {

TEST_CASE("entropy distribution is invariant under unitaries on the free legs") {
    // Rotating the chi3 leg by a fixed unitary must not shift the achieved
    // entropy distribution: compare means over many seeds within noise.
    Dims d{2, 2, 4, 4};
    Rng fixed(47);
    Mat w = random_unitary(d.chi3, fixed);

    const int trials = 500;
    double mean_plain = 0.0, mean_rotated = 0.0;
    std::vector<double> plain(trials), rotated(trials);
    for (int t = 0; t < trials; ++t) {
        Rng rng(Rng::derive(48, static_cast<std::uint64_t>(t)));
        Tensor3 a = gaussian_tensor(d, rng);
        Tensor3 b(d.k(), d.chi3, d.chi4);
        for (long k = 0; k < d.k(); ++k)
            for (long p = 0; p < d.chi3; ++p)
                for (long q = 0; q < d.chi4; ++q) {
                    cplx sum = 0.0;
                    for (long pp = 0; pp < d.chi3; ++pp) sum += w(p, pp) * a(k, pp, q);
                    b(k, p, q) = sum;
                }
        DisentangleOptions opts;
        opts.seed = 1000 + static_cast<std::uint64_t>(t);
        Rng r1(1), r2(2);
        plain[t] = disentangle_auto(a, d, opts, r1).entropy;
        rotated[t] = disentangle_auto(b, d, opts, r2).entropy;
        mean_plain += plain[t];
        mean_rotated += rotated[t];
    }
    mean_plain /= trials;
    mean_rotated /= trials;

    double var = 0.0;
    for (int t = 0; t < trials; ++t) {
        var += (plain[t] - mean_plain) * (plain[t] - mean_plain);
        var += (rotated[t] - mean_rotated) * (rotated[t] - mean_rotated);
    }
    var /= (2.0 * trials - 2.0);
    double se = std::sqrt(var * 2.0 / trials);
    CHECK(std::abs(mean_plain - mean_rotated) < 3.0 * se);
}

} // TEST_SUITE
