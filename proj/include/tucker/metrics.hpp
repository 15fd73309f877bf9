#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tucker/linalg.hpp"
#include "tucker/pipelines.hpp"
#include "tucker/tensor.hpp"

namespace tucker {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// ||X - Xhat||_F / ||X||_F.
inline double relative_error(const DenseTensor& x, const DenseTensor& xhat) {
    if (x.dims() != xhat.dims()) throw ParameterError("relative_error: shape mismatch");
    const double ref = squared_norm(x);
    if (ref == 0.0) throw ParameterError("relative_error: reference tensor is zero");
    double diff = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - xhat[i];
        diff += d * d;
    }
    return std::sqrt(diff / ref);
}

/// 10 log10(peak^2 / MSE); +infinity for an exact match.
inline double psnr(const DenseTensor& x, const DenseTensor& xhat, double peak) {
    if (x.dims() != xhat.dims()) throw ParameterError("psnr: shape mismatch");
    if (!(peak > 0.0)) throw ParameterError("psnr: peak must be positive");
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - xhat[i];
        sse += d * d;
    }
    if (sse == 0.0) return kInfinity;
    const double mse = sse / static_cast<double>(x.size());
    return 10.0 * std::log10(peak * peak / mse);
}

/// tau_j^2 = sum_{i >= j} sigma_i^2 for 1-based j in 1..len+1.
inline double tail_energy(std::span<const double> sigma, std::size_t j) {
    if (j < 1 || j > sigma.size() + 1)
        throw ParameterError("tail_energy: index " + std::to_string(j) + " outside 1.." +
                             std::to_string(sigma.size() + 1));
    double acc = 0.0;
    // Smallest terms first.
    for (std::size_t i = sigma.size(); i-- > j - 1;) acc += sigma[i] * sigma[i];
    return acc;
}

inline double tail_energy(const Vector& sigma, std::size_t j) {
    return tail_energy(std::span<const double>(sigma.data(), static_cast<std::size_t>(sigma.size())), j);
}

/// Full singular spectra of every mode-n unfolding.
struct SpectrumSummary {
    Dims dims;
    std::vector<Vector> sigma;

    [[nodiscard]] const Vector& mode(std::size_t n) const {
        DenseTensor::check_mode(n, sigma.size());
        return sigma[n - 1];
    }
};

/// Dense SVD of every unfolding; desk-scale only.
inline SpectrumSummary spectrum_summary(const DenseTensor& x) {
    SpectrumSummary s;
    s.dims = x.dims();
    for (std::size_t n = 1; n <= x.order(); ++n) s.sigma.push_back(singular_values(unfold(x, n)));
    return s;
}

/// Delta_n^2 = sum_{i > r_n} sigma_i^2(X_(n)).
inline double mode_tail_delta(const SpectrumSummary& summary, std::size_t n, std::size_t rank) {
    const Vector& s = summary.mode(n);
    return tail_energy(s, std::min<std::size_t>(rank + 1, static_cast<std::size_t>(s.size()) + 1));
}

/// f(s, t) = s / (t - s - 1) on t > s + 1 > 1; +infinity at t = s + 1.
inline double f_factor(double s, double t) {
    if (!(s > 0.0)) throw ParameterError("f_factor: requires s > 0");
    if (t < s + 1.0) throw ParameterError("f_factor: requires t > s + 1");
    if (t == s + 1.0) return kInfinity;
    return s / (t - s - 1.0);
}

enum class BoundVariant { Thosvd, Sthosvd, Sketch, SubSketch };

struct ModeBound {
    double delta2 = 0.0;
    /// Minimizing index of the inner minimum; 0 when the variant has none or the domain is empty.
    std::size_t rho = 0;
    double term = 0.0;
};

struct BoundReport {
    std::vector<ModeBound> modes;
    double total = 0.0;
    std::vector<std::string> diagnostics;
};

namespace detail {

// sigma_{k+1} / sigma_k of a nonincreasing spectrum, 1-based k; 0 when sigma_k = 0.
inline double singular_gap(const Vector& s, std::size_t k) {
    const auto len = static_cast<std::size_t>(s.size());
    if (k < 1 || k > len) return 0.0;
    const double sk = s(static_cast<Eigen::Index>(k - 1));
    if (sk == 0.0) return 0.0;
    const double next = k < len ? s(static_cast<Eigen::Index>(k)) : 0.0;
    return next / sk;
}

}  // namespace detail

/// Right-hand side of the expected/deterministic squared-error bound for a
/// pipeline, per mode and summed.
///
///  - Thosvd, Sthosvd: sum_n Delta_n^2.
///  - Sketch: sum_n f(r_n, l_n) * min_{1 <= rho < r_n - 1} r_n / (r_n - rho - 1) * Delta_n^2.
///  - SubSketch: sum_n (1 + f(r_n, l_n)) * min_rho (1 + f(rho, r_n) gap^{4q}) * tau_{rho+1}^2(X_(n)),
///    gap = sigma_{r_n+1} / sigma_{r_n} of X_(n).
///
/// The inner minimum is empty for r_n <= 2, making that mode's term +infinity.
inline BoundReport bound_oracle(const SpectrumSummary& summary, const ApproxConfig& cfg, BoundVariant variant) {
    const std::size_t order = summary.sigma.size();
    if (cfg.ranks.size() != order) throw ParameterError("bound_oracle: rank count does not match tensor order");

    BoundReport report;
    for (std::size_t n = 1; n <= order; ++n) {
        const std::size_t r = cfg.ranks[n - 1];
        if (r < 1) throw ParameterError("bound_oracle: ranks must be positive");
        const Vector& s = summary.mode(n);
        ModeBound mb;
        mb.delta2 = mode_tail_delta(summary, n, r);

        if (variant == BoundVariant::Thosvd || variant == BoundVariant::Sthosvd) {
            mb.term = mb.delta2;
        } else if (r >= summary.dims[n - 1]) {
            // Full-rank modes are factored exactly by the sketching pipelines.
            mb.term = mb.delta2;
        } else if (r <= 2) {
            mb.term = kInfinity;
            report.diagnostics.push_back("mode " + std::to_string(n) +
                                         ": empty minimization over rho < r_n - 1, bound is vacuous");
        } else {
            std::size_t l = std::min(r + cfg.sketch_extra, summary.dims[n - 1]);
            if (!cfg.sketch_sizes.empty()) {
                if (cfg.sketch_sizes.size() != order) throw ParameterError("bound_oracle: sketch size count mismatch");
                l = cfg.sketch_sizes[n - 1];
            }
            if (l <= r) throw ParameterError("bound_oracle: sketch size must exceed the target rank");
            const double outer = f_factor(static_cast<double>(r), static_cast<double>(l));
            double best = kInfinity;
            for (std::size_t rho = 1; rho + 1 < r; ++rho) {
                double value = 0.0;
                if (variant == BoundVariant::Sketch) {
                    value = static_cast<double>(r) / static_cast<double>(r - rho - 1) * mb.delta2;
                } else {
                    const double gap = detail::singular_gap(s, r);
                    const double inner = 1.0 + f_factor(static_cast<double>(rho), static_cast<double>(r)) *
                                                   std::pow(gap, 4.0 * cfg.power_q);
                    value = inner * tail_energy(s, std::min<std::size_t>(rho + 1, static_cast<std::size_t>(s.size()) + 1));
                }
                if (value < best) {
                    best = value;
                    mb.rho = rho;
                }
            }
            const double factor = variant == BoundVariant::Sketch ? outer : 1.0 + outer;
            mb.term = std::isinf(factor) ? kInfinity : factor * best;
            if (std::isinf(factor))
                report.diagnostics.push_back("mode " + std::to_string(n) + ": l_n = r_n + 1, bound is vacuous");
        }
        report.total += mb.term;
        report.modes.push_back(mb);
    }
    return report;
}

inline BoundReport bound_oracle(const DenseTensor& x, const ApproxConfig& cfg, BoundVariant variant) {
    return bound_oracle(spectrum_summary(x), cfg, variant);
}

}  // namespace tucker
