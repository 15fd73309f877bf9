#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tucker/errors.hpp"

namespace tucker {

/// Dense column-major matrix of doubles.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

using Dims = std::vector<std::size_t>;

inline std::size_t product(std::span<const std::size_t> values) {
    return std::accumulate(values.begin(), values.end(), std::size_t{1}, std::multiplies<>{});
}

inline std::string dims_to_string(std::span<const std::size_t> dims, char sep = 'x') {
    std::string out;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(dims[i]);
    }
    return out;
}

/// N-dimensional dense tensor of doubles stored first-index-fastest.
///
/// Element (i_1, ..., i_N) (0-based) lives at offset
/// i_1 + I_1 * (i_2 + I_2 * (i_3 + ...)). Mode arguments taken by the free
/// functions below are 1-based.
class DenseTensor {
public:
    DenseTensor() = default;

    explicit DenseTensor(Dims dims) : dims_(std::move(dims)) {
        validate_dims(dims_);
        data_.assign(product(dims_), 0.0);
    }

    DenseTensor(Dims dims, std::vector<double> data) : dims_(std::move(dims)), data_(std::move(data)) {
        validate_dims(dims_);
        if (data_.size() != product(dims_))
            throw ParameterError("tensor data length " + std::to_string(data_.size()) +
                                 " does not match dims " + dims_to_string(dims_));
    }

    [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
    [[nodiscard]] std::size_t order() const noexcept { return dims_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    /// Extent of 1-based mode `n`.
    [[nodiscard]] std::size_t dim(std::size_t n) const {
        check_mode(n, order());
        return dims_[n - 1];
    }

    [[nodiscard]] std::span<double> data() noexcept { return data_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return data_; }

    double& operator[](std::size_t offset) { return data_[offset]; }
    double operator[](std::size_t offset) const { return data_[offset]; }

    [[nodiscard]] std::size_t offset(std::span<const std::size_t> index) const {
        if (index.size() != dims_.size()) throw ParameterError("index order does not match tensor order");
        std::size_t off = 0;
        for (std::size_t k = index.size(); k-- > 0;) {
            if (index[k] >= dims_[k]) throw ParameterError("index out of range");
            off = off * dims_[k] + index[k];
        }
        return off;
    }

    double& at(std::initializer_list<std::size_t> index) {
        return data_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
    }
    double at(std::initializer_list<std::size_t> index) const {
        return data_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
    }
    double& at(std::span<const std::size_t> index) { return data_[offset(index)]; }
    double at(std::span<const std::size_t> index) const { return data_[offset(index)]; }

    /// Mode-1 unfolding as a zero-copy view.
    [[nodiscard]] Eigen::Map<const Matrix> mode1_view() const {
        return {data_.data(), static_cast<Eigen::Index>(dims_[0]),
                static_cast<Eigen::Index>(data_.size() / dims_[0])};
    }

    [[nodiscard]] bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

    static void check_mode(std::size_t n, std::size_t order) {
        if (n < 1 || n > order)
            throw ParameterError("mode " + std::to_string(n) + " out of range 1.." + std::to_string(order));
    }

private:
    static void validate_dims(const Dims& dims) {
        if (dims.empty()) throw ParameterError("tensor order must be at least 1");
        for (std::size_t d : dims)
            if (d == 0) throw ParameterError("tensor dimensions must be positive");
    }

    Dims dims_;
    std::vector<double> data_;
};

namespace detail {

struct ModeSplit {
    std::size_t left;   // product of extents before the mode
    std::size_t extent; // extent of the mode
    std::size_t right;  // product of extents after the mode
};

inline ModeSplit split(const Dims& dims, std::size_t n) {
    ModeSplit s{1, dims[n - 1], 1};
    for (std::size_t k = 0; k < n - 1; ++k) s.left *= dims[k];
    for (std::size_t k = n; k < dims.size(); ++k) s.right *= dims[k];
    return s;
}

}  // namespace detail

/// Mode-n unfolding X_(n) of shape I_n x prod_{k != n} I_k.
///
/// Column index of element (i_1..i_N) is sum_{k != n} i_k * prod_{m<k, m!=n} I_m
/// (0-based), with the empty product taken as 1.
inline Matrix unfold(const DenseTensor& x, std::size_t n) {
    DenseTensor::check_mode(n, x.order());
    const auto s = detail::split(x.dims(), n);
    const auto left = static_cast<Eigen::Index>(s.left);
    const auto extent = static_cast<Eigen::Index>(s.extent);
    Matrix m(extent, left * static_cast<Eigen::Index>(s.right));
    if (s.left == 1) {
        m = Eigen::Map<const Matrix>(x.data().data(), extent, m.cols());
        return m;
    }
    for (std::size_t b = 0; b < s.right; ++b) {
        Eigen::Map<const Matrix> block(x.data().data() + b * s.left * s.extent, left, extent);
        m.middleCols(static_cast<Eigen::Index>(b) * left, left) = block.transpose();
    }
    return m;
}

/// Inverse of unfold: builds the tensor of shape `dims` whose mode-n unfolding is `m`.
inline DenseTensor fold(const Eigen::Ref<const Matrix>& m, std::size_t n, const Dims& dims) {
    DenseTensor out(dims);
    DenseTensor::check_mode(n, out.order());
    const auto s = detail::split(dims, n);
    if (static_cast<std::size_t>(m.rows()) != s.extent ||
        static_cast<std::size_t>(m.cols()) != s.left * s.right)
        throw ParameterError("fold: matrix shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                             " does not match mode-" + std::to_string(n) + " unfolding of " + dims_to_string(dims));
    const auto left = static_cast<Eigen::Index>(s.left);
    const auto extent = static_cast<Eigen::Index>(s.extent);
    if (s.left == 1) {
        Eigen::Map<Matrix>(out.data().data(), extent, m.cols()) = m;
        return out;
    }
    for (std::size_t b = 0; b < s.right; ++b) {
        Eigen::Map<Matrix> block(out.data().data() + b * s.left * s.extent, left, extent);
        block = m.middleCols(static_cast<Eigen::Index>(b) * left, left).transpose();
    }
    return out;
}

/// Mode-n product X x_n A, i.e. the tensor whose mode-n unfolding is A * X_(n).
inline DenseTensor mode_n_product(const DenseTensor& x, const Eigen::Ref<const Matrix>& a, std::size_t n) {
    DenseTensor::check_mode(n, x.order());
    const auto s = detail::split(x.dims(), n);
    if (static_cast<std::size_t>(a.cols()) != s.extent)
        throw ParameterError("mode_n_product: matrix has " + std::to_string(a.cols()) + " columns but mode " +
                             std::to_string(n) + " has extent " + std::to_string(s.extent));
    Dims out_dims = x.dims();
    out_dims[n - 1] = static_cast<std::size_t>(a.rows());
    DenseTensor out(out_dims);
    const auto left = static_cast<Eigen::Index>(s.left);
    const auto right = static_cast<Eigen::Index>(s.right);
    if (s.left == 1) {
        Eigen::Map<const Matrix> xm(x.data().data(), a.cols(), right);
        Eigen::Map<Matrix>(out.data().data(), a.rows(), right).noalias() = a * xm;
    } else if (s.right == 1) {
        Eigen::Map<const Matrix> xm(x.data().data(), left, a.cols());
        Eigen::Map<Matrix>(out.data().data(), left, a.rows()).noalias() = xm * a.transpose();
    } else {
        out = fold(a * unfold(x, n), n, out_dims);
    }
    return out;
}

inline double squared_norm(const DenseTensor& x) {
    double acc = 0.0;
    for (double v : x.data()) acc += v * v;
    return acc;
}

inline double frobenius_norm(const DenseTensor& x) { return std::sqrt(squared_norm(x)); }

inline DenseTensor operator-(const DenseTensor& a, const DenseTensor& b) {
    if (a.dims() != b.dims()) throw ParameterError("tensor shape mismatch in subtraction");
    DenseTensor out(a.dims());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline DenseTensor operator+(const DenseTensor& a, const DenseTensor& b) {
    if (a.dims() != b.dims()) throw ParameterError("tensor shape mismatch in addition");
    DenseTensor out(a.dims());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline DenseTensor operator*(double c, const DenseTensor& a) {
    DenseTensor out(a.dims());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
    return out;
}

/// Kronecker product A (x) B; block (i, j) of the result is a_ij * B.
inline Matrix kronecker(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace tucker
