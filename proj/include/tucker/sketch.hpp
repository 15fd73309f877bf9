#pragma once

#include <string>

#include "tucker/linalg.hpp"
#include "tucker/rng.hpp"

namespace tucker {

/// Low-rank approximation Q * Xc with orthonormal Q (m x k) and Xc (k x n).
struct SketchResult {
    Matrix Q;
    Matrix Xc;
    /// Set when Psi * Q lost column rank and the solve fell back to minimum norm.
    bool rank_deficient = false;

    [[nodiscard]] Matrix approximation() const { return Q * Xc; }
};

/// Randomized SVD with Gaussian range finder and oversampling `p`.
///
/// Returns the rank-r triple (Q U_B(:,1:r), S_B(1:r), V_B(:,1:r)) where
/// Q U_B S_B V_B^T is the SVD of Q^T A and Q spans A * Omega.
inline SvdTriple rsvd(const Eigen::Ref<const Matrix>& a, Eigen::Index r, Eigen::Index p, RngStream& rng) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    if (r < 1) throw ParameterError("rsvd: rank must be at least 1");
    if (p < 0) throw ParameterError("rsvd: oversampling must be nonnegative");
    if (r + p > std::min(m, n))
        throw ParameterError("rsvd: r + p = " + std::to_string(r + p) + " exceeds min(m, n) = " +
                             std::to_string(std::min(m, n)));
    const Matrix omega = gaussian_matrix(rng, n, r + p);
    const Matrix y = a * omega;
    const Matrix q = thin_qr(y).Q;
    const Matrix b = q.transpose() * a;
    auto svd = thin_svd(b);
    return {q * svd.U.leftCols(r), svd.S.head(r), svd.V.leftCols(r)};
}

namespace detail {

inline void check_sketch_sizes(Eigen::Index m, Eigen::Index n, Eigen::Index k, Eigen::Index l) {
    if (k < 1 || l < 1) throw ParameterError("sketch: k and l must be positive");
    if (k > l || k > n)
        throw ParameterError("sketch: require k <= min(l, n), got k=" + std::to_string(k) +
                             " l=" + std::to_string(l) + " n=" + std::to_string(n));
    if (l > m)
        throw ParameterError("sketch: require l <= m, got l=" + std::to_string(l) + " m=" + std::to_string(m));
}

// Shared body of sketch and sub_sketch; q = 0 is the plain two-sided sketch.
inline SketchResult two_sided_sketch(const Eigen::Ref<const Matrix>& a, Eigen::Index k, Eigen::Index l, int q,
                                     RngStream& rng) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    check_sketch_sizes(m, n, k, l);
    if (q < 0) throw ParameterError("sub_sketch: power iteration count must be nonnegative");

    const Matrix omega = orthonormalize(gaussian_matrix(rng, n, k));
    const Matrix psi = orthonormalize(gaussian_matrix(rng, l, m).transpose()).transpose();

    const Matrix y = a * omega;
    const Matrix w = psi * a;
    Matrix q_basis = thin_qr(y).Q;
    for (int j = 0; j < q; ++j) {
        const Matrix q_hat = thin_qr(a.transpose() * q_basis).Q;
        q_basis = thin_qr(a * q_hat).Q;
    }

    auto solve = least_squares(psi * q_basis, w);
    return {std::move(q_basis), std::move(solve.X), solve.rank_deficient};
}

}  // namespace detail

/// Two-sided sketch: Y = A Omega, W = Psi A with orthonormalized test
/// matrices, Q = qr(Y), Xc = argmin ||(Psi Q) Xc - W||.
///
/// Requires 1 <= k <= min(l, n) and l <= m.
inline SketchResult sketch(const Eigen::Ref<const Matrix>& a, Eigen::Index k, Eigen::Index l, RngStream& rng) {
    return detail::two_sided_sketch(a, k, l, 0, rng);
}

/// Two-sided sketch whose range basis is refined by `q` rounds of subspace
/// power iteration, re-orthonormalizing after every application of A and A^T.
///
/// q = 0 consumes the random stream identically to `sketch` and returns the
/// same result.
inline SketchResult sub_sketch(const Eigen::Ref<const Matrix>& a, Eigen::Index k, Eigen::Index l, int q,
                               RngStream& rng) {
    return detail::two_sided_sketch(a, k, l, q, rng);
}

}  // namespace tucker
