#include "disent/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>
#include <fmt/format.h>

namespace disent {

namespace {

// JacobiSVD is the more accurate choice for small problems; BDCSVD scales
// better once the short side grows (it reduces complex input to a real
// bidiagonal first, so it wins well before the asymptotic regime).
constexpr long jacobi_cutoff = 15;

void check_nonempty(const Mat& m) {
    if (m.rows() < 1 || m.cols() < 1)
        throw std::invalid_argument("matrix must be non-empty");
    if (!m.allFinite())
        throw std::invalid_argument("matrix entries must be finite");
}

// Rotates each column pair so the largest-magnitude component of u (lowest
// index on ties) is real non-negative. Applying the same factor to v keeps
// u * s * v^dag unchanged.
void normalize_phases(Mat& u, Mat& v) {
    for (long j = 0; j < u.cols(); ++j) {
        long arg = 0;
        u.col(j).cwiseAbs().maxCoeff(&arg);
        cplx top = u(arg, j);
        double mag = std::abs(top);
        if (mag == 0.0)
            continue;
        cplx phase = std::conj(top) / mag;
        u.col(j) *= phase;
        v.col(j) *= phase;
    }
}

SvdResult svd_square(const Mat& m, unsigned options) {
    if (std::min(m.rows(), m.cols()) <= jacobi_cutoff) {
        Eigen::JacobiSVD<Mat> svd(m, options);
        return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
    }
    Eigen::BDCSVD<Mat> svd(m, options);
    if (svd.info() != Eigen::Success)
        throw SvdError(fmt::format("SVD failed to converge on {}x{} matrix", m.rows(), m.cols()));
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

SvdResult svd_dense(const Mat& m, unsigned options) {
    const long rows = m.rows();
    const long cols = m.cols();
    // Strongly rectangular input: a thin QR of the long side reduces the
    // problem to a square factor, so the cost stays linear in the long
    // dimension without touching accuracy.
    if (rows >= 4 * cols) {
        Eigen::HouseholderQR<Mat> qr(m);
        Mat q = qr.householderQ() * Mat::Identity(rows, cols);
        Mat r = Mat(qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>());
        SvdResult inner = svd_square(r, options);
        return {q * inner.u, inner.s, inner.v};
    }
    if (cols >= 4 * rows) {
        Eigen::HouseholderQR<Mat> qr(m.adjoint());
        Mat q = qr.householderQ() * Mat::Identity(cols, rows);
        Mat r = Mat(qr.matrixQR().topRows(rows).triangularView<Eigen::Upper>());
        SvdResult inner = svd_square(Mat(r.adjoint()), options);
        return {inner.u, inner.s, q * inner.v};
    }
    return svd_square(m, options);
}

struct GklResult {
    Vec left;
    Vec right;
    double sigma;
    bool converged;
};

// Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization,
// returning the top singular triple once its explicit residual passes the
// tolerance. Deterministic: the start vector is built from the matrix.
GklResult gkl_dominant(const Mat& m) {
    const long rows = m.rows();
    const long cols = m.cols();
    const long max_steps = std::min(std::min(rows, cols), 160l);
    const double norm_scale = m.norm();

    Vec v0 = m.adjoint() * Vec::Ones(rows);
    if (v0.norm() <= 1e-14 * norm_scale)
        v0 = m.adjoint() * Vec::Unit(rows, 0);
    if (v0.norm() <= 1e-14 * norm_scale)
        v0 = Vec::Ones(cols);
    v0.normalize();

    std::vector<Vec> vs, us;
    std::vector<double> alphas, betas; // betas[i] couples step i to i+1
    vs.push_back(v0);

    Vec u = m * v0;
    double alpha = u.norm();
    if (alpha == 0.0)
        return {Vec(), Vec(), 0.0, false};
    u /= alpha;
    us.push_back(u);
    alphas.push_back(alpha);

    auto reorth = [](Vec& w, const std::vector<Vec>& basis) {
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& q : basis)
                w -= q.dot(w) * q;
    };

    for (long k = 0; k < max_steps; ++k) {
        Vec w = m.adjoint() * us[k] - alphas[k] * vs[k];
        reorth(w, vs);
        double beta = w.norm();

        bool invariant = beta <= 1e-14 * norm_scale;
        if (!invariant) {
            vs.push_back(w / beta);
            betas.push_back(beta);
            Vec z = m * vs[k + 1] - beta * us[k];
            reorth(z, us);
            double next_alpha = z.norm();
            if (next_alpha <= 1e-14 * norm_scale) {
                vs.pop_back();
                betas.pop_back();
                invariant = true;
            } else {
                us.push_back(z / next_alpha);
                alphas.push_back(next_alpha);
            }
        }

        long steps = static_cast<long>(alphas.size());
        bool check_now = invariant || k + 1 == max_steps || (steps % 6 == 0);
        if (!check_now)
            continue;

        // Projected problem: real upper-bidiagonal, alphas on the diagonal.
        Eigen::MatrixXd bd = Eigen::MatrixXd::Zero(steps, steps);
        for (long i = 0; i < steps; ++i) {
            bd(i, i) = alphas[i];
            if (i + 1 < steps)
                bd(i, i + 1) = betas[i];
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> small(bd, Eigen::ComputeThinU | Eigen::ComputeThinV);
        double sigma = small.singularValues()(0);

        Vec left = Vec::Zero(rows);
        Vec right = Vec::Zero(cols);
        for (long i = 0; i < steps; ++i) {
            left += small.matrixU()(i, 0) * us[i];
            right += small.matrixV()(i, 0) * vs[i];
        }
        left.normalize();
        right.normalize();

        // M V_k = U_k B_k holds by construction, so the forward residual is
        // always tiny; convergence is visible only on the adjoint side.
        double residual = std::max((m * right - sigma * left).norm(),
                                   (m.adjoint() * left - sigma * right).norm());
        if (residual <= 1e-10 * sigma)
            return {left, right, sigma, true};
        if (invariant)
            break;
    }
    return {Vec(), Vec(), 0.0, false};
}

} // namespace

SvdResult svd_full(const Mat& m) {
    check_nonempty(m);
    SvdResult r = svd_dense(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    normalize_phases(r.u, r.v);
    return r;
}

SvdResult svd_full(const MatrixView& m) { return svd_full(m.dense()); }

SvdResult svd_truncated(const Mat& m, long k) {
    if (k < 1 || k > std::min(m.rows(), m.cols()))
        throw std::invalid_argument(fmt::format("truncation rank {} out of range for {}x{} matrix",
                                                k, m.rows(), m.cols()));
    SvdResult r = svd_full(m);
    return {r.u.leftCols(k), r.s.head(k), r.v.leftCols(k)};
}

SvdResult svd_truncated(const MatrixView& m, long k) { return svd_truncated(m.dense(), k); }

RVec singular_values(const Mat& m) {
    check_nonempty(m);
    if (std::min(m.rows(), m.cols()) <= jacobi_cutoff)
        return Eigen::JacobiSVD<Mat>(m).singularValues();
    Eigen::BDCSVD<Mat> svd(m);
    if (svd.info() != Eigen::Success)
        throw SvdError(fmt::format("SVD failed to converge on {}x{} matrix", m.rows(), m.cols()));
    return svd.singularValues();
}

Mat svd_right_vectors(const Mat& m) {
    check_nonempty(m);
    if (std::min(m.rows(), m.cols()) <= jacobi_cutoff)
        return Eigen::JacobiSVD<Mat>(m, Eigen::ComputeThinV).matrixV();
    Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw SvdError(fmt::format("SVD failed to converge on {}x{} matrix", m.rows(), m.cols()));
    return svd.matrixV();
}

DominantPair dominant_singular_pair(const Mat& m) {
    check_nonempty(m);
    if (m.norm() == 0.0)
        throw std::invalid_argument("dominant singular pair of a zero matrix is undefined");

    if (std::min(m.rows(), m.cols()) > 32) {
        GklResult r = gkl_dominant(m);
        if (r.converged) {
            Mat u = r.left, v = r.right;
            normalize_phases(u, v);
            return {u.col(0), v.col(0), r.sigma};
        }
        // Stalled iteration: the dense path below is the safe answer.
    }

    SvdResult r = svd_full(m);
    return {r.u.col(0), r.v.col(0), r.s(0)};
}

DominantPair dominant_singular_pair(const MatrixView& m) {
    return dominant_singular_pair(m.dense());
}

Mat gram_schmidt_rows(const Mat& b, const std::vector<long>& order, Rng& rng) {
    const long n = b.rows();
    if (b.cols() != n)
        throw std::invalid_argument("gram_schmidt_rows requires a square matrix");
    if (static_cast<long>(order.size()) != n)
        throw std::invalid_argument("order must be a permutation of the row indices");
    std::vector<bool> seen(n, false);
    for (long idx : order) {
        if (idx < 0 || idx >= n || seen[idx])
            throw std::invalid_argument("order must be a permutation of the row indices");
        seen[idx] = true;
    }

    const double tau_dep = 1e-12 * b.norm() / std::sqrt(static_cast<double>(n));

    Mat out = Mat::Zero(n, n);
    std::vector<long> built;    // output rows produced so far, in processing order
    std::vector<long> deferred; // dependent slots, filled after the main pass

    auto project_out = [&](Vec& w) {
        // x.dot(y) conjugates x, so this is w -= <g, w> g for each built row g.
        for (int pass = 0; pass < 2; ++pass)
            for (long r : built)
                w -= out.row(r).dot(w) * out.row(r).transpose();
    };

    for (long idx : order) {
        Vec w = b.row(idx).transpose();
        project_out(w);
        double nrm = w.norm();
        if (nrm <= tau_dep) {
            deferred.push_back(idx);
            continue;
        }
        out.row(idx) = (w / nrm).transpose();
        built.push_back(idx);
    }

    // Dependent rows carry no direction of their own; complete the basis with
    // random vectors orthonormal to everything else.
    for (long idx : deferred) {
        for (;;) {
            Vec w(n);
            for (long c = 0; c < n; ++c)
                w(c) = rng.complex_gaussian();
            project_out(w);
            double nrm = w.norm();
            if (nrm > 1e-6 * std::sqrt(static_cast<double>(n))) {
                out.row(idx) = (w / nrm).transpose();
                built.push_back(idx);
                break;
            }
        }
    }
    return out;
}

Mat random_isometry(long rows, long cols, Rng& rng) {
    if (rows < 1 || cols < 1 || cols > rows)
        throw std::invalid_argument(
            fmt::format("isometry shape {}x{} invalid: need rows >= cols >= 1", rows, cols));
    Mat g(rows, cols);
    for (long j = 0; j < cols; ++j)
        for (long i = 0; i < rows; ++i)
            g(i, j) = rng.complex_gaussian();

    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = Mat::Identity(rows, cols);
    q.applyOnTheLeft(qr.householderQ());

    // Fixing the R-diagonal phases makes the distribution exactly Haar.
    for (long j = 0; j < cols; ++j) {
        cplx r = qr.matrixQR()(j, j);
        double mag = std::abs(r);
        q.col(j) *= (mag == 0.0) ? cplx(1.0) : r / mag;
    }
    return q;
}

Mat random_unitary(long n, Rng& rng) { return random_isometry(n, n, rng); }

} // namespace disent
