#include "disent/disentangle.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "disent/entanglement.hpp"

namespace disent {

void Dims::validate() const {
    if (chi1 < 1 || chi2 < 1 || chi3 < 1 || chi4 < 1)
        throw std::invalid_argument(fmt::format("leg dimensions must be positive, got ({}, {}, {}, {})",
                                                chi1, chi2, chi3, chi4));
}

void Dims::validate_tensor(const Tensor3& a) const {
    validate();
    if (a.dim0() != k() || a.dim1() != chi3 || a.dim2() != chi4)
        throw std::invalid_argument(
            fmt::format("tensor shape ({}, {}, {}) does not match dims ({}, {}, {}, {})", a.dim0(),
                        a.dim1(), a.dim2(), chi1, chi2, chi3, chi4));
}

double Disentangler::unitarity_error() const {
    Mat eye = Mat::Identity(u.rows(), u.cols());
    double right = (u * u.adjoint() - eye).cwiseAbs().maxCoeff();
    double left = (u.adjoint() * u - eye).cwiseAbs().maxCoeff();
    return std::max(right, left);
}

Disentangler Disentangler::identity(long chi1, long chi2) {
    return {chi1, chi2, Mat::Identity(chi1 * chi2, chi1 * chi2)};
}

long zero_singular_lower_bound(const Dims& d) {
    long bound = d.chi1 * (d.chi1 - 1) / 2 - std::max(d.chi1 * d.chi3, d.chi2 * d.chi4) +
                 d.chi2 * d.chi2;
    return std::max(0l, bound);
}

namespace detail {

std::optional<Regime> pick_regime(const Dims& d) {
    if (d.chi1 <= d.chi3 && d.chi2 <= d.chi4)
        return Regime::base;
    auto fits_extended = [](long c1, long c2, long c3, long c4) {
        if (c1 <= c3)
            return false;
        long fold = (c1 + c3 - 1) / c3;
        long folded_c4 = (c4 + fold - 1) / fold;
        return c2 <= folded_c4;
    };
    if (fits_extended(d.chi1, d.chi2, d.chi3, d.chi4))
        return Regime::extended;
    if (d.chi2 > d.chi4 && fits_extended(d.chi2, d.chi1, d.chi4, d.chi3))
        return Regime::swapped;
    return std::nullopt;
}

Mat compress(const Tensor3& a, const Dims& d, Rng& rng) {
    d.validate_tensor(a);
    if (d.chi1 > d.chi3 || d.chi2 > d.chi4)
        throw std::domain_error(fmt::format(
            "single-pass algorithm requires chi1 <= chi3 and chi2 <= chi4, got ({}, {}, {}, {})",
            d.chi1, d.chi2, d.chi3, d.chi4));
    if (a.norm() == 0.0)
        throw std::invalid_argument("cannot disentangle a zero tensor");

    const long kk = d.k();

    // Contracting a random vector against the grouped leg leaves a chi3 x
    // chi4 matrix whose dominant singular pair seeds the leg projections.
    // A zero contraction has probability zero but costs nothing to retry.
    Mat ra(d.chi3, d.chi4);
    for (int attempt = 0;; ++attempt) {
        Vec r(kk);
        for (long i = 0; i < kk; ++i)
            r(i) = rng.complex_gaussian();
        Eigen::RowVectorXcd flat = r.transpose() * a.as_k_by_ab();
        ra = Eigen::Map<const RowMat>(flat.data(), d.chi3, d.chi4);
        if (ra.norm() > 0.0)
            break;
        if (attempt == 3)
            throw std::domain_error("random contraction of the grouped leg keeps vanishing");
    }

    DominantPair dom = dominant_singular_pair(ra);
    Vec alpha3 = dom.left.conjugate();
    Vec alpha4 = dom.right;

    // Rank-chi1 factor on the a-leg: right singular vectors of
    // sum_b A_{k,ab} alpha4_b.
    Vec m3_flat = a.as_ka_by_b() * alpha4;
    Mat m3 = Eigen::Map<const RowMat>(m3_flat.data(), kk, d.chi3);
    Mat v3 = svd_truncated(m3, d.chi1).v;

    // Rank-chi2 factor on the b-leg: sum_a A_{k,ab} alpha3_a, one slice of
    // the grouped leg at a time.
    Mat m4(kk, d.chi4);
    for (long k = 0; k < kk; ++k) {
        Eigen::Map<const RowMat> slice(a.data().data() + k * d.chi3 * d.chi4, d.chi3, d.chi4);
        m4.row(k) = alpha3.transpose() * slice;
    }
    Mat v4 = svd_truncated(m4, d.chi2).v;

    // B_{k,ij} = sum_{ab} A_{k,ab} V3_{ai} V4_{bj}, flattened to column
    // index i*chi2 + j. Plain products throughout, no conjugation.
    Mat c = a.as_ka_by_b() * v4; // rows (k, a), cols j
    Mat b(kk, kk);
    for (long k = 0; k < kk; ++k) {
        Mat bk = v3.transpose() * c.block(k * d.chi3, 0, d.chi3, d.chi2);
        for (long i = 0; i < d.chi1; ++i)
            for (long j = 0; j < d.chi2; ++j)
                b(k, i * d.chi2 + j) = bk(i, j);
    }
    return b;
}

Disentangler orthonormalize(const Mat& b, const Dims& d, Rng& rng, Step6Ordering ordering) {
    const long kk = d.k();
    bool row_major = ordering == Step6Ordering::row_major ||
                     (ordering == Step6Ordering::by_dims && d.chi1 <= d.chi2);

    // Row (i, j) of B^dag is processed at rank chi2*i + j or chi1*j + i; the
    // later a row comes, the more rows of B it ends up orthogonal to.
    std::vector<long> order;
    order.reserve(kk);
    if (row_major) {
        for (long idx = 0; idx < kk; ++idx)
            order.push_back(idx);
    } else {
        for (long j = 0; j < d.chi2; ++j)
            for (long i = 0; i < d.chi1; ++i)
                order.push_back(i * d.chi2 + j);
    }

    return {d.chi1, d.chi2, gram_schmidt_rows(b.adjoint(), order, rng)};
}

Disentangler fast_disentangle_ordered(const Tensor3& a, const Dims& d, Rng& rng,
                                      Step6Ordering ordering) {
    return orthonormalize(compress(a, d, rng), d, rng, ordering);
}

namespace {

// Swaps the roles of the two free legs, including the two halves of the
// grouped leg: out[(k2 k1), b, a] = in[(k1 k2), a, b].
Tensor3 swap_legs(const Tensor3& a, const Dims& d) {
    Tensor3 out(d.k(), d.chi4, d.chi3);
    for (long k1 = 0; k1 < d.chi1; ++k1)
        for (long k2 = 0; k2 < d.chi2; ++k2)
            for (long x = 0; x < d.chi3; ++x)
                for (long y = 0; y < d.chi4; ++y)
                    out(k2 * d.chi1 + k1, y, x) = a(k1 * d.chi2 + k2, x, y);
    return out;
}

// Undoes the leg swap on a disentangler produced for the swapped tensor:
// U[(i j), (k1 k2)] = U_swapped[(j i), (k2 k1)].
Disentangler unswap(const Disentangler& du, const Dims& d) {
    Mat u(d.k(), d.k());
    for (long i = 0; i < d.chi1; ++i)
        for (long j = 0; j < d.chi2; ++j)
            for (long k1 = 0; k1 < d.chi1; ++k1)
                for (long k2 = 0; k2 < d.chi2; ++k2)
                    u(i * d.chi2 + j, k1 * d.chi2 + k2) = du.u(j * d.chi1 + i, k2 * d.chi1 + k1);
    return {d.chi1, d.chi2, std::move(u)};
}

} // namespace

} // namespace detail

Disentangler fast_disentangle(const Tensor3& a, const Dims& d, Rng& rng) {
    return detail::fast_disentangle_ordered(a, d, rng, detail::Step6Ordering::by_dims);
}

Disentangler extended_disentangle(const Tensor3& a, const Dims& d, Rng& rng) {
    d.validate_tensor(a);
    if (d.chi1 <= d.chi3)
        throw std::domain_error(fmt::format(
            "extension applies only when chi1 > chi3, got chi1 = {}, chi3 = {}", d.chi1, d.chi3));
    const long fold = (d.chi1 + d.chi3 - 1) / d.chi3;
    const long chi4f = (d.chi4 + fold - 1) / fold;
    if (d.chi2 > chi4f)
        throw std::domain_error(
            fmt::format("extension requires chi2 <= ceil(chi4 / ceil(chi1 / chi3)) = {}, "
                        "got chi2 = {}",
                        chi4f, d.chi2));
    if (a.norm() == 0.0)
        throw std::invalid_argument("cannot disentangle a zero tensor");

    // Right singular vectors of A viewed as a (k chi3) x chi4 matrix; the
    // left factor is never formed. Zero-padding to fold*chi4f columns makes
    // the column index splittable as (a', b') = (i / chi4f, i % chi4f).
    Mat vpad = Mat::Zero(d.chi4, fold * chi4f);
    vpad.leftCols(std::min(d.k() * d.chi3, d.chi4)) = svd_right_vectors(a.as_ka_by_b());

    // A'(k, (a a'), b') = sum_b A(k, a, b) vpad(b, a'*chi4f + b'), with the
    // folded leg grouped row-major as a*fold + a'.
    Tensor3 folded(d.k(), d.chi3 * fold, chi4f);
    for (long ap = 0; ap < fold; ++ap) {
        Mat p = a.as_ka_by_b() * vpad.middleCols(ap * chi4f, chi4f);
        for (long k = 0; k < d.k(); ++k)
            for (long x = 0; x < d.chi3; ++x)
                for (long bp = 0; bp < chi4f; ++bp)
                    folded(k, x * fold + ap, bp) = p(k * d.chi3 + x, bp);
    }

    // The folded problem satisfies chi1 <= chi3*fold and chi2 <= chi4f. The
    // orthonormalization key stays chi2*i + j regardless of chi1 vs chi2.
    Dims fd{d.chi1, d.chi2, d.chi3 * fold, chi4f};
    return detail::fast_disentangle_ordered(folded, fd, rng, detail::Step6Ordering::row_major);
}

DisentangleResult disentangle_auto(const Tensor3& a, const Dims& d, const DisentangleOptions& opts,
                                   Rng& rng) {
    d.validate_tensor(a);
    if (opts.trials < 1)
        throw std::invalid_argument("trials must be at least 1");

    auto regime = detail::pick_regime(d);
    if (!regime)
        throw std::domain_error(fmt::format(
            "no disentangling regime covers dims ({}, {}, {}, {}): need chi1 <= chi3 and "
            "chi2 <= chi4, or one leg foldable",
            d.chi1, d.chi2, d.chi3, d.chi4));

    const std::uint64_t root = opts.seed ? *opts.seed : rng.draw_u64();

    // The swapped regime runs the extension on the mirrored tensor; build the
    // mirror once.
    std::optional<Tensor3> mirrored;
    Dims mirrored_dims{d.chi2, d.chi1, d.chi4, d.chi3};
    if (*regime == Regime::swapped)
        mirrored = detail::swap_legs(a, d);

    DisentangleResult result;
    result.regime = *regime;
    result.trial_entropies.reserve(opts.trials);

    for (long t = 0; t < opts.trials; ++t) {
        Rng trial_rng(Rng::derive(root, static_cast<std::uint64_t>(t)));

        const auto t0 = std::chrono::steady_clock::now();
        std::vector<Disentangler> candidates;
        switch (*regime) {
        case Regime::base: {
            Mat b = detail::compress(a, d, trial_rng);
            candidates.push_back(
                detail::orthonormalize(b, d, trial_rng, detail::Step6Ordering::by_dims));
            if (opts.try_both_orderings) {
                auto flipped = d.chi1 <= d.chi2 ? detail::Step6Ordering::col_major
                                                : detail::Step6Ordering::row_major;
                candidates.push_back(detail::orthonormalize(b, d, trial_rng, flipped));
            }
            break;
        }
        case Regime::extended:
            candidates.push_back(extended_disentangle(a, d, trial_rng));
            break;
        case Regime::swapped:
            candidates.push_back(
                detail::unswap(extended_disentangle(*mirrored, mirrored_dims, trial_rng), d));
            break;
        }
        result.construct_seconds +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        double trial_best = 0.0;
        long best_cand = -1;
        for (long c = 0; c < static_cast<long>(candidates.size()); ++c) {
            double s = von_neumann_entropy(cut_spectrum(apply_disentangler(candidates[c], a)));
            if (best_cand < 0 || s < trial_best) {
                trial_best = s;
                best_cand = c;
            }
        }
        result.trial_entropies.push_back(trial_best);

        if (t == 0 || trial_best < result.entropy) {
            result.entropy = trial_best;
            result.u = std::move(candidates[best_cand]);
        }
    }
    return result;
}

} // namespace disent
