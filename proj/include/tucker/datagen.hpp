#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <numeric>
#include <vector>

#include "tucker/linalg.hpp"
#include "tucker/rng.hpp"
#include "tucker/tensor.hpp"

namespace tucker {

/// x(i_1, ..., i_N) = 1 / (i_1 + ... + i_N) with 1-based indices.
inline DenseTensor hilbert_tensor(const Dims& dims) {
    DenseTensor x(dims);
    std::vector<std::size_t> idx(dims.size(), 0);
    std::size_t sum = dims.size();  // sum of 1-based indices at the origin
    for (std::size_t off = 0; off < x.size(); ++off) {
        x[off] = 1.0 / static_cast<double>(sum);
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (++idx[k] < dims[k]) {
                ++sum;
                break;
            }
            sum -= idx[k] - 1;
            idx[k] = 0;
        }
    }
    return x;
}

/// i.i.d. N(0,1) entries in storage order.
inline DenseTensor gaussian_tensor(const Dims& dims, RngStream& rng) {
    DenseTensor x(dims);
    for (double& v : x.data()) v = rng.normal();
    return x;
}

/// X + delta * K with K a standard Gaussian tensor.
inline DenseTensor add_scaled_noise(const DenseTensor& x, double delta, RngStream& rng) {
    if (!(delta >= 0.0)) throw ParameterError("noise level must be nonnegative");
    DenseTensor out = x;
    if (delta == 0.0) return out;
    for (double& v : out.data()) v += delta * rng.normal();
    return out;
}

/// White Gaussian noise at `snr_db` relative to the measured mean power of X.
///
/// A zero tensor has no signal power and is returned unchanged (with a
/// warning on stderr).
inline DenseTensor add_awgn(const DenseTensor& x, double snr_db, RngStream& rng) {
    const double power = squared_norm(x) / static_cast<double>(x.size());
    if (power == 0.0) {
        std::cerr << "warning: add_awgn on a zero-power tensor; returning input unchanged\n";
        return x;
    }
    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
    return add_scaled_noise(x, sigma, rng);
}

struct SparseGenConfig {
    std::size_t n = 200;
    double gamma = 10.0;
    double density = 0.05;
    std::size_t leading_terms = 10;
    std::size_t total_terms = 200;
    std::uint64_t seed = 0;
    /// Replaces the sparse factor-vector draw when set (test hook).
    std::function<Vector(std::size_t n, RngStream&)> vector_source;
};

/// Sparse random vector with ceil(density * n) nonzeros at distinct uniform
/// positions, values uniform on (0, 1).
inline Vector sparse_random_vector(std::size_t n, double density, RngStream& rng) {
    const auto nnz = std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(density * static_cast<double>(n))));
    // Partial Fisher-Yates picks nnz distinct positions.
    std::vector<std::size_t> pos(n);
    std::iota(pos.begin(), pos.end(), std::size_t{0});
    for (std::size_t i = 0; i < nnz; ++i) std::swap(pos[i], pos[i + rng.below(n - i)]);
    Vector v = Vector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < nnz; ++i) v(static_cast<Eigen::Index>(pos[i])) = rng.uniform();
    return v;
}

/// Weighted sum of outer products
///   sum_{i <= leading} (gamma / i^2) x_i o y_i o z_i + sum_{i > leading} (1 / i^2) x_i o y_i o z_i
/// with sparse random factor vectors; the result is a dense n x n x n tensor.
inline DenseTensor sparse_lowrank_tensor(const SparseGenConfig& cfg, RngStream& rng) {
    if (cfg.n < 1) throw ParameterError("sparse tensor side must be positive");
    if (!(cfg.gamma > 0.0)) throw ParameterError("gamma must be positive");
    if (!(cfg.density > 0.0 && cfg.density <= 1.0)) throw ParameterError("density must lie in (0, 1]");
    const auto n = static_cast<Eigen::Index>(cfg.n);
    DenseTensor x({cfg.n, cfg.n, cfg.n});
    auto draw = [&](RngStream& r) {
        return cfg.vector_source ? cfg.vector_source(cfg.n, r) : sparse_random_vector(cfg.n, cfg.density, r);
    };
    Eigen::Map<Matrix> slab(x.data().data(), n * n, n);  // (i1 + n*i2) x i3
    for (std::size_t i = 1; i <= cfg.total_terms; ++i) {
        const double weight = (i <= cfg.leading_terms ? cfg.gamma : 1.0) / static_cast<double>(i * i);
        const Vector a = draw(rng);
        const Vector b = draw(rng);
        const Vector c = draw(rng);
        for (Eigen::Index k = 0; k < n; ++k) {
            if (c(k) == 0.0) continue;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (b(j) == 0.0) continue;
                slab.col(k).segment(j * n, n) += (weight * c(k) * b(j)) * a;
            }
        }
    }
    return x;
}

inline DenseTensor sparse_lowrank_tensor(const SparseGenConfig& cfg) {
    RngStream rng(cfg.seed);
    return sparse_lowrank_tensor(cfg, rng);
}

/// G x_1 U1 ... x_N UN with Gaussian core and orthonormalized Gaussian factors.
inline DenseTensor random_tucker_tensor(const Dims& dims, const Dims& ranks, RngStream& rng) {
    if (dims.size() != ranks.size()) throw ParameterError("dims and ranks must have the same length");
    DenseTensor x = gaussian_tensor(ranks, rng);
    for (std::size_t n = 1; n <= dims.size(); ++n) {
        const Matrix u = thin_qr(gaussian_matrix(rng, static_cast<Eigen::Index>(dims[n - 1]),
                                                 static_cast<Eigen::Index>(ranks[n - 1])))
                             .Q;
        x = mode_n_product(x, u, n);
    }
    return x;
}

}  // namespace tucker
