#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tucker/linalg.hpp"
#include "tucker/rng.hpp"
#include "tucker/sketch.hpp"
#include "tucker/tensor.hpp"

namespace tucker {

/// Core tensor plus one orthonormal factor per mode; factor n is I_n x r_n.
struct TuckerModel {
    DenseTensor core;
    std::vector<Matrix> factors;
    /// Non-fatal events raised while fitting (degenerate solves, vacuous settings).
    std::vector<std::string> diagnostics;

    [[nodiscard]] std::size_t order() const noexcept { return factors.size(); }

    [[nodiscard]] Dims dims() const {
        Dims d;
        d.reserve(factors.size());
        for (const auto& u : factors) d.push_back(static_cast<std::size_t>(u.rows()));
        return d;
    }

    [[nodiscard]] Dims ranks() const {
        Dims r;
        r.reserve(factors.size());
        for (const auto& u : factors) r.push_back(static_cast<std::size_t>(u.cols()));
        return r;
    }
};

enum class Algorithm { Thosvd, Sthosvd, RSthosvd, SketchSthosvd, SubSketchSthosvd };

inline constexpr std::array kAllAlgorithms{Algorithm::Thosvd, Algorithm::Sthosvd, Algorithm::RSthosvd,
                                           Algorithm::SketchSthosvd, Algorithm::SubSketchSthosvd};

/// Display name as used in reports.
inline std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Thosvd: return "THOSVD";
        case Algorithm::Sthosvd: return "STHOSVD";
        case Algorithm::RSthosvd: return "R-STHOSVD";
        case Algorithm::SketchSthosvd: return "Sketch-STHOSVD";
        case Algorithm::SubSketchSthosvd: return "sub-Sketch-STHOSVD";
    }
    return "?";
}

/// Short command-line key: thosvd, sthosvd, rsthosvd, sketch, subsketch.
inline std::string_view algorithm_key(Algorithm a) {
    switch (a) {
        case Algorithm::Thosvd: return "thosvd";
        case Algorithm::Sthosvd: return "sthosvd";
        case Algorithm::RSthosvd: return "rsthosvd";
        case Algorithm::SketchSthosvd: return "sketch";
        case Algorithm::SubSketchSthosvd: return "subsketch";
    }
    return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view text) {
    for (Algorithm a : kAllAlgorithms)
        if (text == algorithm_key(a) || text == algorithm_name(a)) return a;
    return std::nullopt;
}

inline bool is_randomized(Algorithm a) {
    return a == Algorithm::RSthosvd || a == Algorithm::SketchSthosvd || a == Algorithm::SubSketchSthosvd;
}

struct ApproxConfig {
    static constexpr std::size_t kDefaultOversampling = 5;
    static constexpr std::size_t kDefaultSketchExtra = 2;
    static constexpr int kDefaultPowerIterations = 1;

    /// Target multilinear rank, one entry per mode, 1 <= r_n <= I_n.
    Dims ranks;
    /// 1-based processing order; empty means 1, 2, ..., N.
    std::vector<std::size_t> order;
    /// R-STHOSVD oversampling p.
    std::size_t oversampling = kDefaultOversampling;
    /// Sketch sizes l_n; empty means l_n = min(r_n + sketch_extra, I_n).
    Dims sketch_sizes;
    std::size_t sketch_extra = kDefaultSketchExtra;
    /// Power iterations q for sub-Sketch-STHOSVD.
    int power_q = kDefaultPowerIterations;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::vector<std::size_t> resolve_order(const ApproxConfig& cfg, std::size_t order) {
    if (cfg.order.empty()) {
        std::vector<std::size_t> natural(order);
        for (std::size_t n = 0; n < order; ++n) natural[n] = n + 1;
        return natural;
    }
    if (cfg.order.size() != order) throw ParameterError("processing order must list every mode exactly once");
    std::vector<bool> seen(order, false);
    for (std::size_t n : cfg.order) {
        if (n < 1 || n > order || seen[n - 1]) throw ParameterError("processing order is not a permutation of 1..N");
        seen[n - 1] = true;
    }
    return cfg.order;
}

inline void validate_ranks(const ApproxConfig& cfg, const Dims& dims) {
    if (cfg.ranks.size() != dims.size())
        throw ParameterError("expected " + std::to_string(dims.size()) + " target ranks, got " +
                             std::to_string(cfg.ranks.size()));
    for (std::size_t n = 0; n < dims.size(); ++n)
        if (cfg.ranks[n] < 1 || cfg.ranks[n] > dims[n])
            throw ParameterError("target rank " + std::to_string(cfg.ranks[n]) + " for mode " +
                                 std::to_string(n + 1) + " outside 1.." + std::to_string(dims[n]));
}

// Sketch size for 1-based mode n. Explicit sizes must satisfy r_n < l_n <= I_n.
inline Eigen::Index sketch_size(const ApproxConfig& cfg, const Dims& dims, std::size_t n,
                                std::vector<std::string>& diagnostics) {
    const std::size_t r = cfg.ranks[n - 1];
    const std::size_t extent = dims[n - 1];
    if (cfg.sketch_extra == 0) throw ParameterError("sketch_extra must be at least 1 so that l_n > r_n");
    std::size_t l = std::min(r + cfg.sketch_extra, extent);
    if (!cfg.sketch_sizes.empty()) {
        if (cfg.sketch_sizes.size() != dims.size())
            throw ParameterError("expected " + std::to_string(dims.size()) + " sketch sizes");
        l = cfg.sketch_sizes[n - 1];
        if (l <= r || l > extent)
            throw ParameterError("sketch size " + std::to_string(l) + " for mode " + std::to_string(n) +
                                 " must satisfy r_n < l_n <= I_n (r_n=" + std::to_string(r) +
                                 ", I_n=" + std::to_string(extent) + ")");
    }
    if (l == r + 1)
        diagnostics.push_back("mode " + std::to_string(n) + ": l_n = r_n + 1 makes the expected-error bound infinite");
    return static_cast<Eigen::Index>(l);
}

struct ModeUpdate {
    Matrix factor;  // I_n x r_n
    Matrix core;    // r_n x (product of the other current extents)
};

inline ModeUpdate svd_update(const Matrix& unfolding, Eigen::Index r) {
    auto svd = truncated_svd(unfolding, r);
    return {std::move(svd.U), svd.S.asDiagonal() * svd.V.transpose()};
}

// Sequentially truncated driver: the core shrinks mode by mode in `order`.
template <typename Step>
TuckerModel sequential_truncation(const DenseTensor& x, const ApproxConfig& cfg, Step&& step) {
    validate_ranks(cfg, x.dims());
    const auto order = resolve_order(cfg, x.order());
    TuckerModel model;
    model.factors.resize(x.order());
    DenseTensor core = x;
    for (std::size_t n : order) {
        const Matrix unfolding = unfold(core, n);
        ModeUpdate update = step(unfolding, n, model.diagnostics);
        Dims shrunk = core.dims();
        shrunk[n - 1] = static_cast<std::size_t>(update.core.rows());
        core = fold(update.core, n, shrunk);
        model.factors[n - 1] = std::move(update.factor);
    }
    model.core = std::move(core);
    return model;
}

}  // namespace detail

/// Truncated HOSVD: each factor from the unfolding of the original tensor,
/// then core = X x_1 U1^T ... x_N UN^T.
inline TuckerModel thosvd(const DenseTensor& x, const ApproxConfig& cfg) {
    detail::validate_ranks(cfg, x.dims());
    TuckerModel model;
    model.factors.reserve(x.order());
    for (std::size_t n = 1; n <= x.order(); ++n)
        model.factors.push_back(truncated_svd(unfold(x, n), static_cast<Eigen::Index>(cfg.ranks[n - 1])).U);
    DenseTensor core = x;
    for (std::size_t n = 1; n <= x.order(); ++n) core = mode_n_product(core, model.factors[n - 1].transpose(), n);
    model.core = std::move(core);
    return model;
}

/// Sequentially truncated HOSVD in the configured processing order.
inline TuckerModel sthosvd(const DenseTensor& x, const ApproxConfig& cfg) {
    return detail::sequential_truncation(x, cfg, [&](const Matrix& g, std::size_t n, auto&) {
        return detail::svd_update(g, static_cast<Eigen::Index>(cfg.ranks[n - 1]));
    });
}

/// STHOSVD with each truncated SVD replaced by a randomized SVD.
///
/// Oversampling is reduced where r_n + p would exceed the unfolding's smaller
/// side; a mode whose rank already reaches that side uses the exact SVD.
inline TuckerModel r_sthosvd(const DenseTensor& x, const ApproxConfig& cfg, RngStream& rng) {
    return detail::sequential_truncation(x, cfg, [&](const Matrix& g, std::size_t n, auto&) {
        const auto r = static_cast<Eigen::Index>(cfg.ranks[n - 1]);
        const Eigen::Index room = std::min(g.rows(), g.cols());
        if (r >= room) return detail::svd_update(g, r);
        const Eigen::Index p = std::min<Eigen::Index>(static_cast<Eigen::Index>(cfg.oversampling), room - r);
        auto svd = rsvd(g, r, p, rng);
        return detail::ModeUpdate{std::move(svd.U), svd.S.asDiagonal() * svd.V.transpose()};
    });
}

namespace detail {

inline TuckerModel sketched_sthosvd(const DenseTensor& x, const ApproxConfig& cfg, int q, RngStream& rng) {
    return sequential_truncation(x, cfg, [&](const Matrix& g, std::size_t n, std::vector<std::string>& diag) {
        const auto r = static_cast<Eigen::Index>(cfg.ranks[n - 1]);
        // k = r_n cannot exceed either side of the unfolding; the full-capture case is exact.
        if (r >= std::min(g.rows(), g.cols())) return svd_update(g, r);
        const Eigen::Index l = sketch_size(cfg, x.dims(), n, diag);
        auto s = sub_sketch(g, r, l, q, rng);
        if (s.rank_deficient)
            diag.push_back("mode " + std::to_string(n) + ": Psi*Q rank deficient, minimum-norm solve used");
        return ModeUpdate{std::move(s.Q), std::move(s.Xc)};
    });
}

}  // namespace detail

/// STHOSVD whose per-mode factorization is the two-sided sketch with k = r_n.
inline TuckerModel sketch_sthosvd(const DenseTensor& x, const ApproxConfig& cfg, RngStream& rng) {
    return detail::sketched_sthosvd(x, cfg, 0, rng);
}

/// STHOSVD whose per-mode factorization is the sketch refined by q >= 1
/// rounds of subspace power iteration.
inline TuckerModel sub_sketch_sthosvd(const DenseTensor& x, const ApproxConfig& cfg, RngStream& rng) {
    if (cfg.power_q < 1) throw ParameterError("sub-Sketch-STHOSVD requires q >= 1");
    return detail::sketched_sthosvd(x, cfg, cfg.power_q, rng);
}

inline TuckerModel r_sthosvd(const DenseTensor& x, const ApproxConfig& cfg) {
    RngStream rng(cfg.seed);
    return r_sthosvd(x, cfg, rng);
}

inline TuckerModel sketch_sthosvd(const DenseTensor& x, const ApproxConfig& cfg) {
    RngStream rng(cfg.seed);
    return sketch_sthosvd(x, cfg, rng);
}

inline TuckerModel sub_sketch_sthosvd(const DenseTensor& x, const ApproxConfig& cfg) {
    RngStream rng(cfg.seed);
    return sub_sketch_sthosvd(x, cfg, rng);
}

/// Runs `algorithm`; randomized pipelines draw from a stream seeded by cfg.seed.
inline TuckerModel decompose(const DenseTensor& x, const ApproxConfig& cfg, Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::Thosvd: return thosvd(x, cfg);
        case Algorithm::Sthosvd: return sthosvd(x, cfg);
        case Algorithm::RSthosvd: return r_sthosvd(x, cfg);
        case Algorithm::SketchSthosvd: return sketch_sthosvd(x, cfg);
        case Algorithm::SubSketchSthosvd: return sub_sketch_sthosvd(x, cfg);
    }
    throw ParameterError("unknown algorithm");
}

/// core x_1 U1 x_2 U2 ... x_N UN.
inline DenseTensor reconstruct(const TuckerModel& model) {
    if (model.core.order() != model.factors.size()) throw ParameterError("core order does not match factor count");
    DenseTensor out = model.core;
    for (std::size_t n = 1; n <= model.factors.size(); ++n) out = mode_n_product(out, model.factors[n - 1], n);
    return out;
}

}  // namespace tucker
