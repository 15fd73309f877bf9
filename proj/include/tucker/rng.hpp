#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "tucker/tensor.hpp"

namespace tucker {

/// Counter-based random stream (Philox4x32-10).
///
/// The key is the 64-bit seed; the 128-bit counter holds a 64-bit block
/// index and a 64-bit stream id. Draws depend only on (seed, stream, position),
/// so sequences are identical on every platform and independent streams are
/// obtained by changing the stream id.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept : seed_(seed), stream_(stream) {}

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

    /// A fresh stream sharing this seed, positioned at its start.
    [[nodiscard]] RngStream substream(std::uint64_t id) const noexcept { return RngStream(seed_, id); }

    std::uint64_t next_u64() noexcept {
        if (lane_ == 2) {
            block_ = philox(block_index_++);
            lane_ = 0;
        }
        const auto hi = static_cast<std::uint64_t>(block_[2 * lane_]);
        const auto lo = static_cast<std::uint64_t>(block_[2 * lane_ + 1]);
        ++lane_;
        return (hi << 32) | lo;
    }

    /// Uniform on the open interval (0, 1) with 53 bits of resolution.
    double uniform() noexcept { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) noexcept {
        // Lemire-style rejection keeps the draw unbiased.
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// The raw Philox4x32-10 bijection.
    static std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                      std::array<std::uint32_t, 2> key) noexcept {
        constexpr std::uint32_t kMul0 = 0xD2511F53u;
        constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
        constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
        constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }

private:
    using Block = std::array<std::uint32_t, 4>;

    [[nodiscard]] Block philox(std::uint64_t index) const noexcept {
        return philox4x32_10({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                              static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                             {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_index_ = 0;
    Block block_{};
    int lane_ = 2;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// rows x cols matrix of i.i.d. N(0,1) entries, filled column by column.
inline Matrix gaussian_matrix(RngStream& rng, Eigen::Index rows, Eigen::Index cols) {
    if (rows < 1 || cols < 1) throw ParameterError("gaussian_matrix: dimensions must be positive");
    Matrix m(rows, cols);
    double* p = m.data();
    for (Eigen::Index i = 0; i < rows * cols; ++i) p[i] = rng.normal();
    return m;
}

}  // namespace tucker
