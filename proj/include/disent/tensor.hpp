#pragma once

#include <complex>
#include <Eigen/Dense>

namespace disent {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense complex order-3 tensor. Entries are stored row-major over
/// (k, a, b): element (k, a, b) sits at offset (k*d1 + a)*d2 + b.
class Tensor3 {
  public:
    Tensor3(long d0, long d1, long d2);

    /// Takes ownership of `data`, which must have size d0*d1*d2 and only
    /// finite entries.
    static Tensor3 from_data(long d0, long d1, long d2, Vec data);

    long dim0() const { return d0_; }
    long dim1() const { return d1_; }
    long dim2() const { return d2_; }
    long size() const { return d0_ * d1_ * d2_; }

    cplx operator()(long k, long a, long b) const { return data_[(k * d1_ + a) * d2_ + b]; }
    cplx& operator()(long k, long a, long b) { return data_[(k * d1_ + a) * d2_ + b]; }

    const Vec& data() const { return data_; }
    Vec& data() { return data_; }

    double norm() const { return data_.norm(); }
    bool is_finite() const { return data_.allFinite(); }

    /// Contiguous matrix picture with the first two indices merged:
    /// rows (k, a), columns b.
    Eigen::Map<const RowMat> as_ka_by_b() const {
        return {data_.data(), d0_ * d1_, d2_};
    }

    /// Contiguous matrix picture with the last two indices merged:
    /// rows k, columns (a, b).
    Eigen::Map<const RowMat> as_k_by_ab() const {
        return {data_.data(), d0_, d1_ * d2_};
    }

  private:
    Tensor3(long d0, long d1, long d2, Vec data)
        : d0_(d0), d1_(d1), d2_(d2), data_(std::move(data)) {}

    long d0_, d1_, d2_;
    Vec data_;
};

/// Dense complex order-4 tensor, row-major over (i, j, a, b). Used for the
/// result of applying a disentangler, where the first leg of a Tensor3 has
/// been split into (i, j).
class Tensor4 {
  public:
    Tensor4(long d0, long d1, long d2, long d3);

    long dim0() const { return d0_; }
    long dim1() const { return d1_; }
    long dim2() const { return d2_; }
    long dim3() const { return d3_; }
    long size() const { return d0_ * d1_ * d2_ * d3_; }

    cplx operator()(long i, long j, long a, long b) const {
        return data_[((i * d1_ + j) * d2_ + a) * d3_ + b];
    }
    cplx& operator()(long i, long j, long a, long b) {
        return data_[((i * d1_ + j) * d2_ + a) * d3_ + b];
    }

    const Vec& data() const { return data_; }
    Vec& data() { return data_; }

  private:
    long d0_, d1_, d2_, d3_;
    Vec data_;
};

/// Matrix picture of a Tensor3 under one merge of two adjacent indices.
/// Zero-copy: holds a pointer into the tensor, which must outlive the view.
class MatrixView {
  public:
    MatrixView(long rows, long cols, const cplx* ptr) : rows_(rows), cols_(cols), ptr_(ptr) {}

    long rows() const { return rows_; }
    long cols() const { return cols_; }

    cplx operator()(long r, long c) const { return ptr_[r * cols_ + c]; }

    Eigen::Map<const RowMat> matrix() const { return {ptr_, rows_, cols_}; }

    /// Column-major owning copy, value-equal to matrix().
    Mat dense() const { return matrix(); }

  private:
    long rows_, cols_;
    const cplx* ptr_;
};

/// Merges two adjacent indices of `t` into one matrix axis. Valid merges are
/// {0,1} (rows (k,a), columns b) and {1,2} (rows k, columns (a,b)); the order
/// of `axis_a`, `axis_b` does not matter. Merging the non-adjacent pair
/// {0,2} is rejected.
MatrixView group_indices(const Tensor3& t, int axis_a, int axis_b);

} // namespace disent
