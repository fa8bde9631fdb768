#include "disent/tensor.hpp"

#include <stdexcept>
#include <fmt/format.h>

namespace disent {

namespace {

void check_dims(long d0, long d1, long d2) {
    if (d0 < 1 || d1 < 1 || d2 < 1)
        throw std::invalid_argument(
            fmt::format("tensor dims must be positive, got ({}, {}, {})", d0, d1, d2));
}

} // namespace

Tensor3::Tensor3(long d0, long d1, long d2) : d0_(d0), d1_(d1), d2_(d2) {
    check_dims(d0, d1, d2);
    data_ = Vec::Zero(d0 * d1 * d2);
}

Tensor3 Tensor3::from_data(long d0, long d1, long d2, Vec data) {
    check_dims(d0, d1, d2);
    if (data.size() != d0 * d1 * d2)
        throw std::invalid_argument(fmt::format("data size {} does not match dims ({}, {}, {})",
                                                data.size(), d0, d1, d2));
    if (!data.allFinite())
        throw std::invalid_argument("tensor entries must be finite");
    return Tensor3(d0, d1, d2, std::move(data));
}

Tensor4::Tensor4(long d0, long d1, long d2, long d3) : d0_(d0), d1_(d1), d2_(d2), d3_(d3) {
    if (d0 < 1 || d1 < 1 || d2 < 1 || d3 < 1)
        throw std::invalid_argument(fmt::format("tensor dims must be positive, got ({}, {}, {}, {})",
                                                d0, d1, d2, d3));
    data_ = Vec::Zero(d0 * d1 * d2 * d3);
}

MatrixView group_indices(const Tensor3& t, int axis_a, int axis_b) {
    int lo = std::min(axis_a, axis_b);
    int hi = std::max(axis_a, axis_b);
    if (lo == 0 && hi == 1)
        return {t.dim0() * t.dim1(), t.dim2(), t.data().data()};
    if (lo == 1 && hi == 2)
        return {t.dim0(), t.dim1() * t.dim2(), t.data().data()};
    throw std::invalid_argument(
        fmt::format("cannot merge axes {} and {}: only adjacent pairs (0,1) and (1,2) group "
                    "into a matrix",
                    axis_a, axis_b));
}

} // namespace disent
