#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <utility>

#include "tucker/tensor.hpp"

namespace tucker {

/// Thin SVD A = U diag(S) V^T with S nonincreasing.
struct SvdTriple {
    Matrix U;
    Vector S;
    Matrix V;
};

struct QrFactors {
    Matrix Q;
    Matrix R;
};

/// Economy QR by Householder reflections.
///
/// For rows >= cols, Q is rows x cols and R is cols x cols upper triangular.
/// For rows < cols, Q is square and R is rows x cols upper trapezoidal.
inline QrFactors thin_qr(const Eigen::Ref<const Matrix>& a) {
    const Eigen::Index k = std::min(a.rows(), a.cols());
    Eigen::HouseholderQR<Matrix> qr(a);
    QrFactors out;
    out.Q = qr.householderQ() * Matrix::Identity(a.rows(), k);
    out.R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    return out;
}

/// Orthonormal basis of range(A); the column count is the numerical rank.
///
/// A zero matrix yields a basis with zero columns.
inline Matrix orthonormalize(const Eigen::Ref<const Matrix>& a) {
    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    const Eigen::Index rank = qr.rank();
    return qr.householderQ() * Matrix::Identity(a.rows(), rank);
}

namespace detail {

inline SvdTriple bdc_svd(const Eigen::Ref<const Matrix>& a) {
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

// Columns of `basis` followed by an orthonormal completion to `count` columns.
inline Matrix complete_basis(const Matrix& basis, Eigen::Index count) {
    const Eigen::Index rows = basis.rows();
    if (count > rows) throw ParameterError("cannot complete an orthonormal basis beyond the ambient dimension");
    Matrix out(rows, count);
    out.leftCols(basis.cols()) = basis;
    if (count == basis.cols()) return out;
    Matrix full;
    if (basis.cols() == 0) {
        full = Matrix::Identity(rows, rows);
    } else {
        Eigen::HouseholderQR<Matrix> qr(basis);
        full = qr.householderQ();
    }
    out.rightCols(count - basis.cols()) = full.middleCols(basis.cols(), count - basis.cols());
    return out;
}

}  // namespace detail

/// Thin SVD with min(m, n) singular triplets.
///
/// Strongly rectangular inputs are first reduced by a Householder QR of the
/// long side, so the bidiagonal SVD only ever sees a square factor.
inline SvdTriple thin_svd(const Eigen::Ref<const Matrix>& a) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    if (m == 0 || n == 0) return {Matrix(m, 0), Vector(0), Matrix(n, 0)};
    constexpr Eigen::Index kAspect = 2;
    if (n >= kAspect * m) {
        // A^T = Q R  =>  A = R^T Q^T, SVD(R^T) = U S W^T  =>  V = Q W.
        auto qr = thin_qr(a.transpose());
        auto small = detail::bdc_svd(qr.R.transpose());
        return {std::move(small.U), std::move(small.S), qr.Q * small.V};
    }
    if (m >= kAspect * n) {
        auto qr = thin_qr(a);
        auto small = detail::bdc_svd(qr.R);
        return {qr.Q * small.U, std::move(small.S), std::move(small.V)};
    }
    return detail::bdc_svd(a);
}

/// All min(m, n) singular values of A, nonincreasing, without vectors.
inline Vector singular_values(const Eigen::Ref<const Matrix>& a) {
    if (a.rows() == 0 || a.cols() == 0) return Vector(0);
    if (a.cols() >= 2 * a.rows()) {
        Eigen::HouseholderQR<Matrix> qr(a.transpose());
        const Matrix r = qr.matrixQR().topRows(a.rows()).triangularView<Eigen::Upper>();
        return Eigen::BDCSVD<Matrix>(r).singularValues();
    }
    if (a.rows() >= 2 * a.cols()) {
        Eigen::HouseholderQR<Matrix> qr(a);
        const Matrix r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
        return Eigen::BDCSVD<Matrix>(r).singularValues();
    }
    return Eigen::BDCSVD<Matrix>(a).singularValues();
}

/// The r leading singular triplets of A.
///
/// When r exceeds min(m, n) the result is padded with zero singular values,
/// U is completed to an orthonormal m x r basis, and V is completed
/// orthonormally up to n columns and zero beyond. Requires r <= m.
inline SvdTriple truncated_svd(const Eigen::Ref<const Matrix>& a, Eigen::Index r) {
    if (r < 1) throw ParameterError("truncated_svd: rank must be at least 1");
    if (r > a.rows())
        throw ParameterError("truncated_svd: rank " + std::to_string(r) + " exceeds row count " +
                             std::to_string(a.rows()));
    auto full = thin_svd(a);
    const Eigen::Index k = full.S.size();
    if (r <= k) {
        return {full.U.leftCols(r), full.S.head(r), full.V.leftCols(r)};
    }
    SvdTriple out;
    out.U = detail::complete_basis(full.U, r);
    out.S = Vector::Zero(r);
    out.S.head(k) = full.S;
    out.V = Matrix::Zero(a.cols(), r);
    const Eigen::Index vcols = std::min<Eigen::Index>(r, a.cols());
    out.V.leftCols(vcols) = detail::complete_basis(full.V, vcols);
    return out;
}

struct LeastSquaresSolution {
    Matrix X;
    Eigen::Index rank = 0;
    bool rank_deficient = false;
};

/// Minimum-norm least-squares solution of B X = C via a complete orthogonal
/// (rank-revealing QR) decomposition; no pseudo-inverse is formed.
inline LeastSquaresSolution least_squares(const Eigen::Ref<const Matrix>& b, const Eigen::Ref<const Matrix>& c) {
    if (b.rows() != c.rows()) throw ParameterError("least_squares: row mismatch");
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(b);
    LeastSquaresSolution out;
    out.X = cod.solve(c);
    out.rank = cod.rank();
    out.rank_deficient = out.rank < std::min(b.rows(), b.cols());
    return out;
}

}  // namespace tucker
