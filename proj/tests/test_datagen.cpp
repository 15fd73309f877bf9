#include <gtest/gtest.h>

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>

#include "tucker/datagen.hpp"

using namespace tucker;

namespace {

double sum_inverse_squares(int n) {
    double s = 0.0;
    for (int i = 1; i <= n; ++i) s += 1.0 / (static_cast<double>(i) * i);
    return s;
}

double tail_after(const DenseTensor& x, std::size_t n, Eigen::Index r) {
    const Vector s = Eigen::JacobiSVD<Matrix>(unfold(x, n)).singularValues();
    return s.tail(s.size() - r).squaredNorm();
}

}  // namespace

TEST(Hilbert, Entries) {
    const DenseTensor h3 = hilbert_tensor({4, 5, 6});
    EXPECT_EQ(h3.at({0, 0, 0}), 1.0 / 3.0);
    EXPECT_EQ(h3.at({3, 4, 5}), 1.0 / 15.0);
    EXPECT_EQ(h3.at({1, 0, 2}), 1.0 / 6.0);
    const DenseTensor h5 = hilbert_tensor({25, 25, 25, 25, 25});
    EXPECT_EQ(h5.at({24, 24, 24, 24, 24}), 1.0 / 125.0);
    EXPECT_EQ(h5.at({0, 0, 0, 0, 0}), 1.0 / 5.0);
}

TEST(Hilbert, MatchesFormulaEverywhere) {
    const Dims dims{3, 4, 2, 5};
    const DenseTensor h = hilbert_tensor(dims);
    std::size_t off = 0;
    for (std::size_t l = 0; l < 5; ++l)
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t j = 0; j < 4; ++j)
                for (std::size_t i = 0; i < 3; ++i, ++off)
                    ASSERT_EQ(h[off], 1.0 / static_cast<double>(i + j + k + l + 4));
}

TEST(Hilbert, PermutationSymmetric) {
    const DenseTensor h = hilbert_tensor({4, 4, 4});
    std::array<std::size_t, 3> perm{0, 1, 2};
    do {
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                for (std::size_t k = 0; k < 4; ++k) {
                    const std::array<std::size_t, 3> idx{i, j, k};
                    const std::array<std::size_t, 3> p{idx[perm[0]], idx[perm[1]], idx[perm[2]]};
                    ASSERT_EQ(h.at({i, j, k}), h.at(std::span<const std::size_t>(p)));
                }
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST(GaussianTensor, DeterminismAndShape) {
    RngStream a(1), b(1);
    EXPECT_EQ(gaussian_tensor({5, 4}, a), gaussian_tensor({5, 4}, b));
    RngStream c(2);
    const DenseTensor s = gaussian_tensor({1}, c);
    EXPECT_EQ(s.size(), 1u);
    EXPECT_TRUE(std::isfinite(s[0]));
}

TEST(GaussianTensor, Moments) {
    RngStream rng(3);
    const DenseTensor x = gaussian_tensor({50, 50, 50}, rng);
    double mean = 0.0;
    for (double v : x.data()) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x.data()) var += (v - mean) * (v - mean);
    var /= static_cast<double>(x.size() - 1);
    EXPECT_NEAR(mean, 0.0, 0.01);
    EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(ScaledNoise, ZeroDeltaIsIdentity) {
    RngStream rng(4);
    const DenseTensor x = hilbert_tensor({5, 5, 5});
    EXPECT_EQ(add_scaled_noise(x, 0.0, rng), x);
    EXPECT_THROW(add_scaled_noise(x, -1.0, rng), ParameterError);
}

TEST(ScaledNoise, NormConcentration) {
    RngStream rng(5);
    const DenseTensor x = hilbert_tensor({100, 100, 100});
    const double delta = 1e-3;
    const DenseTensor noisy = add_scaled_noise(x, delta, rng);
    const double ratio = frobenius_norm(noisy - x) / (delta * std::sqrt(1e6));
    EXPECT_NEAR(ratio, 1.0, 0.05);
}

TEST(Awgn, MeasuredSnr) {
    RngStream rng(6);
    const DenseTensor x = hilbert_tensor({100, 100, 100});
    for (double snr : {0.0, 10.0, 30.0}) {
        const DenseTensor noisy = add_awgn(x, snr, rng);
        const double measured = 10.0 * std::log10(squared_norm(x) / squared_norm(noisy - x));
        EXPECT_NEAR(measured, snr, 0.2);
    }
}

TEST(Awgn, HighSnrIsNearlyExact) {
    RngStream rng(7);
    const DenseTensor x = hilbert_tensor({10, 10, 10});
    EXPECT_LE(frobenius_norm(add_awgn(x, 300.0, rng) - x), 1e-10 * frobenius_norm(x));
}

TEST(Awgn, ImageNoiseStd) {
    // SNR 20 dB: noise variance = mean power / 100, i.e. std = RMS / 10.
    RngStream rng(8);
    DenseTensor img({64, 64, 3});
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = static_cast<double>((i * 37) % 256);
    const double rms = std::sqrt(squared_norm(img) / static_cast<double>(img.size()));
    const DenseTensor noisy = add_awgn(img, 20.0, rng);
    const double std = std::sqrt(squared_norm(noisy - img) / static_cast<double>(img.size()));
    EXPECT_NEAR(std, rms / 10.0, 0.02 * rms / 10.0);
}

TEST(Awgn, ZeroSignalUnchanged) {
    RngStream rng(9);
    const DenseTensor z({4, 4});
    EXPECT_EQ(add_awgn(z, 10.0, rng), z);
}

TEST(SparseVector, CountAndRange) {
    RngStream rng(10);
    for (int t = 0; t < 20; ++t) {
        const Vector v = sparse_random_vector(200, 0.05, rng);
        EXPECT_EQ((v.array() != 0.0).count(), 10);
        EXPECT_GT(v.maxCoeff(), 0.0);
        EXPECT_LT(v.maxCoeff(), 1.0);
        EXPECT_GE(v.minCoeff(), 0.0);
    }
    EXPECT_EQ((sparse_random_vector(30, 0.05, rng).array() != 0.0).count(), 2);  // ceil(1.5)
}

TEST(SparseTensor, UnitVectorHook) {
    SparseGenConfig cfg;
    cfg.n = 5;
    cfg.gamma = 1.0;
    cfg.vector_source = [](std::size_t n, RngStream&) {
        Vector e = Vector::Zero(static_cast<Eigen::Index>(n));
        e(0) = 1.0;
        return e;
    };
    const DenseTensor x = sparse_lowrank_tensor(cfg);
    EXPECT_NEAR(x.at({0, 0, 0}), sum_inverse_squares(200), 1e-15);
    for (std::size_t i = 1; i < x.size(); ++i) EXPECT_EQ(x[i], 0.0);
}

TEST(SparseTensor, GammaWeightsLeadingTerms) {
    SparseGenConfig cfg;
    cfg.n = 3;
    cfg.gamma = 10.0;
    cfg.vector_source = [](std::size_t n, RngStream&) {
        Vector e = Vector::Zero(static_cast<Eigen::Index>(n));
        e(1) = 1.0;
        return e;
    };
    const DenseTensor x = sparse_lowrank_tensor(cfg);
    const double expect = 10.0 * sum_inverse_squares(10) + (sum_inverse_squares(200) - sum_inverse_squares(10));
    EXPECT_NEAR(x.at({1, 1, 1}), expect, 1e-14);
}

TEST(SparseTensor, OuterProductNonzeroFrequency) {
    // One term nonzero at a fixed position with probability density^3.
    SparseGenConfig cfg;
    cfg.n = 20;
    cfg.density = 0.5;
    cfg.leading_terms = 1;
    cfg.total_terms = 1;
    RngStream rng(11);
    int hits = 0;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t) {
        const DenseTensor x = sparse_lowrank_tensor(cfg, rng);
        if (x.at({3, 7, 11}) != 0.0) ++hits;
    }
    const double expected = 0.125 * draws;
    EXPECT_NEAR(hits, expected, 0.2 * expected);
}

TEST(SparseTensor, Determinism) {
    SparseGenConfig cfg;
    cfg.n = 30;
    cfg.seed = 5;
    EXPECT_EQ(sparse_lowrank_tensor(cfg), sparse_lowrank_tensor(cfg));
}

TEST(SparseTensor, MultilinearRankBoundedByTermCount) {
    SparseGenConfig cfg;
    cfg.n = 40;
    cfg.density = 0.3;
    cfg.total_terms = 20;
    cfg.leading_terms = 5;
    cfg.seed = 6;
    const DenseTensor x = sparse_lowrank_tensor(cfg);
    for (std::size_t n = 1; n <= 3; ++n) {
        const Vector s = Eigen::JacobiSVD<Matrix>(unfold(x, n)).singularValues();
        EXPECT_LE(s(20), 1e-12 * s(0));
    }
}

TEST(SparseTensor, LargerGapShrinksTail) {
    SparseGenConfig small, large;
    small.n = large.n = 100;
    small.gamma = 2;
    large.gamma = 200;
    small.seed = large.seed = 7;
    const DenseTensor xs = sparse_lowrank_tensor(small);
    const DenseTensor xl = sparse_lowrank_tensor(large);
    EXPECT_LT(tail_after(xl, 1, 10) / squared_norm(xl), tail_after(xs, 1, 10) / squared_norm(xs));
}

TEST(SparseTensor, RejectsBadConfig) {
    SparseGenConfig cfg;
    cfg.n = 10;
    cfg.density = 0.0;
    EXPECT_THROW(sparse_lowrank_tensor(cfg), ParameterError);
    cfg.density = 0.5;
    cfg.gamma = 0.0;
    EXPECT_THROW(sparse_lowrank_tensor(cfg), ParameterError);
}

TEST(RandomTucker, HasRequestedMultilinearRank) {
    RngStream rng(8);
    const DenseTensor x = random_tucker_tensor({12, 10, 9}, {2, 3, 4}, rng);
    const std::array<Eigen::Index, 3> ranks{2, 3, 4};
    for (std::size_t n = 1; n <= 3; ++n) {
        const Vector s = Eigen::JacobiSVD<Matrix>(unfold(x, n)).singularValues();
        EXPECT_GT(s(ranks[n - 1] - 1), 1e-8 * s(0));
        EXPECT_LE(s(ranks[n - 1]), 1e-12 * s(0));
    }
}
