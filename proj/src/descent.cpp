#include "disent/descent.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "disent/entanglement.hpp"
#include "disent/linalg.hpp"

namespace disent {

namespace {

constexpr double k_smooth = 1e-12; // additive smoothing inside ln for the gradient

// Rearranges T (rows i*chi2+j, cols a*chi4+b) into the cut matrix with rows
// i*chi3+a and cols j*chi4+b, and back again.
Mat gather_cut(const Mat& t, const Dims& d) {
    Mat c(d.chi1 * d.chi3, d.chi2 * d.chi4);
    for (long i = 0; i < d.chi1; ++i)
        for (long j = 0; j < d.chi2; ++j)
            for (long a = 0; a < d.chi3; ++a)
                for (long b = 0; b < d.chi4; ++b)
                    c(i * d.chi3 + a, j * d.chi4 + b) = t(i * d.chi2 + j, a * d.chi4 + b);
    return c;
}

Mat scatter_cut(const Mat& c, const Dims& d) {
    Mat t(d.chi1 * d.chi2, d.chi3 * d.chi4);
    for (long i = 0; i < d.chi1; ++i)
        for (long j = 0; j < d.chi2; ++j)
            for (long a = 0; a < d.chi3; ++a)
                for (long b = 0; b < d.chi4; ++b)
                    t(i * d.chi2 + j, a * d.chi4 + b) = c(i * d.chi3 + a, j * d.chi4 + b);
    return t;
}

void check_shapes(const Mat& m, const Tensor3& a, const Dims& d) {
    d.validate();
    d.validate_tensor(a);
    if (m.rows() != d.k() || m.cols() != d.k())
        throw std::invalid_argument(fmt::format("matrix is {}x{} but the grouped leg has size {}",
                                                m.rows(), m.cols(), d.k()));
}

double entropy_of_singulars(const RVec& s) {
    return von_neumann_entropy(SingularSpectrum::from_values(s));
}

// Entropy from the eigenvalues of C^dag C. Much cheaper than an SVD of C and
// exact enough for line-search decisions: weights below ~1e-15 contribute
// nothing to the entropy either way.
double entropy_via_gram(const Mat& c) {
    Mat gram = c.adjoint() * c;
    Eigen::SelfAdjointEigenSolver<Mat> eig(gram, Eigen::EigenvaluesOnly);
    double total = 0.0;
    for (long i = 0; i < eig.eigenvalues().size(); ++i)
        total += std::max(eig.eigenvalues()(i), 0.0);
    if (!(total > 0)) throw std::domain_error("cut spectrum is identically zero");
    double s = 0.0;
    for (long i = 0; i < eig.eigenvalues().size(); ++i) {
        const double p = std::max(eig.eigenvalues()(i), 0.0) / total;
        if (p > 0) s -= p * std::log(p);
    }
    return s;
}

// Polar factor of x, assumed close to unitary (x = u - t * tangent). The
// Newton-Schulz iteration p <- p (3I - p^dag p) / 2 converges quadratically
// while ||x^dag x - I||_F < 1 and costs two small gemms per step; a plain SVD
// covers the rest.
Mat polar_unitary(const Mat& x) {
    const long n = x.rows();
    const Mat eye = Mat::Identity(n, n);
    Mat p = x;
    for (int it = 0; it < 24; ++it) {
        Mat gram = p.adjoint() * p;
        const double dev = (gram - eye).norm();
        if (!std::isfinite(dev) || dev > 0.9) break;
        if (dev < 1e-14) return p;
        p = 0.5 * p * (3.0 * eye - gram);
    }
    SvdResult svd = svd_full(x);
    return svd.u * svd.v.adjoint();
}

} // namespace

void DescentConfig::validate() const {
    if (!(initial_step > 0) || !(backtrack > 0) || !(backtrack < 1) || !(armijo_c > 0) ||
        !(min_step > 0) || !(entropy_tol >= 0) || max_iters < 1 || restarts < 1)
        throw std::invalid_argument("descent configuration out of range");
}

double cut_entropy_of(const Mat& m, const Tensor3& a, const Dims& d) {
    check_shapes(m, a, d);
    Mat t = m * a.as_k_by_ab();
    return entropy_of_singulars(singular_values(gather_cut(t, d)));
}

EntropyGradient entropy_and_gradient(const Mat& m, const Tensor3& a, const Dims& d) {
    check_shapes(m, a, d);
    Mat t = m * a.as_k_by_ab();
    SvdResult svd = svd_full(gather_cut(t, d));

    const long r = svd.s.size();
    const double total = svd.s.squaredNorm();
    if (!(total > 0)) throw std::domain_error("cut spectrum is identically zero");

    double entropy = 0.0;
    Eigen::VectorXd p(r);
    for (long i = 0; i < r; ++i) {
        p(i) = svd.s(i) * svd.s(i) / total;
        if (p(i) > 0) entropy -= p(i) * std::log(p(i));
    }

    // S~ = -sum_i p_i ln(p_i + eps) with p_i = s_i^2 / sum s^2. Writing
    // l_i = ln(p_i + eps) + p_i / (p_i + eps), the chain rule gives
    // dS~/ds_k = -(2 s_k / total) (l_k - sum_i p_i l_i).
    Eigen::VectorXd ell(r);
    for (long i = 0; i < r; ++i) ell(i) = std::log(p(i) + k_smooth) + p(i) / (p(i) + k_smooth);
    const double mean_ell = p.dot(ell);
    Eigen::VectorXd g(r);
    for (long k = 0; k < r; ++k) g(k) = -(2.0 * svd.s(k) / total) * (ell(k) - mean_ell);

    // Gradient w.r.t. the cut matrix, then w.r.t. T, then w.r.t. M. The
    // convention throughout is dS = Re tr(G^dag dX).
    Mat g_cut = svd.u * g.cast<cplx>().asDiagonal() * svd.v.adjoint();
    Mat g_t = scatter_cut(g_cut, d);
    Mat grad = g_t * a.as_k_by_ab().adjoint();
    return {entropy, std::move(grad)};
}

DescentTrace riemannian_descent(const Tensor3& a, const Dims& d, const Mat& u0,
                                const DescentConfig& cfg) {
    cfg.validate();
    check_shapes(u0, a, d);
    {
        Disentangler probe{d.chi1, d.chi2, u0};
        if (probe.unitarity_error() > 1e-6)
            throw std::invalid_argument("descent start point is not unitary");
    }

    const auto t0 = std::chrono::steady_clock::now();
    DescentTrace trace;
    Mat u = u0;
    EntropyGradient eg = entropy_and_gradient(u, a, d);
    trace.entropies.push_back(eg.entropy);

    const auto a_flat = a.as_k_by_ab();
    const auto entropy_at = [&](const Mat& m) {
        Mat t = m * a_flat;
        return entropy_via_gram(gather_cut(t, d));
    };

    double step = cfg.initial_step;
    const auto done = [&](double s) { return cfg.stop_below && s <= *cfg.stop_below; };

    Mat u_prev, rgrad_prev;
    bool have_prev = false;

    while (trace.iterations < cfg.max_iters && !done(eg.entropy)) {
        // Riemannian gradient: project onto the tangent space at u.
        Mat x = u.adjoint() * eg.grad;
        Mat skew = 0.5 * (x - x.adjoint());
        Mat rgrad = u * skew;
        const double gnorm2 = rgrad.squaredNorm();
        const double gnorm = std::sqrt(gnorm2);
        if (!(gnorm > 1e-14 * std::max(1.0, std::abs(eg.entropy)))) break;

        // Trial step: Barzilai-Borwein when the previous iterate admits it,
        // else the last accepted step. The Armijo backtracking below keeps
        // the sequence monotone regardless of the trial.
        double t = step;
        if (have_prev) {
            Mat du = u - u_prev;
            Mat dg = rgrad - rgrad_prev;
            const double denom = dg.squaredNorm();
            const double num = du.conjugate().cwiseProduct(dg).sum().real();
            if (std::isfinite(num) && num > 0 && denom > 0)
                t = std::clamp(num / denom, cfg.min_step, 100.0 * cfg.initial_step);
        }

        // Backtracking line search along -rgrad with polar retraction.
        bool accepted = false;
        Mat cand;
        double s_cand = 0.0;
        while (t >= cfg.min_step) {
            cand = polar_unitary(u - t * rgrad);
            s_cand = entropy_at(cand);
            if (s_cand <= eg.entropy - cfg.armijo_c * t * gnorm2) {
                accepted = true;
                break;
            }
            t *= cfg.backtrack;
        }
        if (!accepted) break;

        const double drop = eg.entropy - s_cand;
        u_prev = std::move(u);
        rgrad_prev = std::move(rgrad);
        have_prev = true;
        u = std::move(cand);
        eg = entropy_and_gradient(u, a, d);
        // The line-search value and the recomputed one agree to rounding; keep
        // the recomputed value so trace and gradient describe the same point.
        trace.entropies.push_back(eg.entropy);
        trace.step_sizes.push_back(t);
        trace.grad_norms.push_back(gnorm);
        trace.iterations += 1;
        step = t;
        if (drop < cfg.entropy_tol) break;
    }

    trace.final_u = std::move(u);
    trace.final_entropy = trace.entropies.back();
    trace.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return trace;
}

MinEntropySearch min_entropy_search(const Tensor3& a, const Dims& d, const DescentConfig& cfg,
                                    Rng& rng) {
    cfg.validate();
    d.validate();
    d.validate_tensor(a);

    MinEntropySearch best;
    bool have = false;
    for (long r = 0; r < cfg.restarts; ++r) {
        Mat u0;
        if (r == 0 && detail::pick_regime(d)) {
            DisentangleOptions opts;
            opts.trials = 1;
            u0 = disentangle_auto(a, d, opts, rng).u.u;
        } else {
            u0 = random_unitary(d.k(), rng);
        }
        DescentTrace trace = riemannian_descent(a, d, u0, cfg);
        best.restart_entropies.push_back(trace.final_entropy);
        if (!have || trace.final_entropy < best.entropy) {
            best.entropy = trace.final_entropy;
            best.u = trace.final_u;
            have = true;
        }
    }
    return best;
}

double estimate_min_entropy(const Tensor3& a, const Dims& d, const DescentConfig& cfg, Rng& rng) {
    return min_entropy_search(a, d, cfg, rng).entropy;
}

double random_unitary_entropy(const Tensor3& a, const Dims& d, Rng& rng) {
    d.validate();
    d.validate_tensor(a);
    return cut_entropy_of(random_unitary(d.k(), rng), a, d);
}

} // namespace disent
