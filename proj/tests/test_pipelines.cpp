#include <gtest/gtest.h>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tucker/datagen.hpp"
#include "tucker/metrics.hpp"
#include "tucker/pipelines.hpp"

using namespace tucker;

namespace {

// Independent oracle: sum over modes of the Jacobi-SVD tail beyond r_n.
double oracle_delta_sum(const DenseTensor& x, const Dims& ranks) {
    double total = 0.0;
    for (std::size_t n = 1; n <= x.order(); ++n) {
        const Vector s = Eigen::JacobiSVD<Matrix>(unfold(x, n)).singularValues();
        const auto r = static_cast<Eigen::Index>(ranks[n - 1]);
        if (r < s.size()) total += s.tail(s.size() - r).squaredNorm();
    }
    return total;
}

ApproxConfig config(Dims ranks, std::uint64_t seed = 0) {
    ApproxConfig cfg;
    cfg.ranks = std::move(ranks);
    cfg.seed = seed;
    return cfg;
}

double rel_err(const DenseTensor& x, const TuckerModel& m) { return relative_error(x, reconstruct(m)); }

void expect_well_formed(const TuckerModel& m, const DenseTensor& x, const Dims& ranks) {
    ASSERT_EQ(m.order(), x.order());
    EXPECT_EQ(m.core.dims(), ranks);
    EXPECT_EQ(m.dims(), x.dims());
    for (const auto& u : m.factors) {
        const auto r = u.cols();
        EXPECT_LE((u.transpose() * u - Matrix::Identity(r, r)).norm(), 1e-12 * std::sqrt(static_cast<double>(r)));
    }
    EXPECT_EQ(reconstruct(m).dims(), x.dims());
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

DenseTensor outer3(const Vector& a, const Vector& b, const Vector& c) {
    DenseTensor x({static_cast<std::size_t>(a.size()), static_cast<std::size_t>(b.size()),
                   static_cast<std::size_t>(c.size())});
    for (Eigen::Index k = 0; k < c.size(); ++k)
        for (Eigen::Index j = 0; j < b.size(); ++j)
            for (Eigen::Index i = 0; i < a.size(); ++i)
                x.at({static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(k)}) =
                    a(i) * b(j) * c(k);
    return x;
}

}  // namespace

TEST(Algorithm, NamesAndKeys) {
    EXPECT_EQ(algorithm_name(Algorithm::SubSketchSthosvd), "sub-Sketch-STHOSVD");
    EXPECT_EQ(algorithm_name(Algorithm::RSthosvd), "R-STHOSVD");
    for (Algorithm a : kAllAlgorithms) EXPECT_EQ(parse_algorithm(algorithm_key(a)), a);
    EXPECT_FALSE(parse_algorithm("hooi"));
    EXPECT_FALSE(is_randomized(Algorithm::Sthosvd));
    EXPECT_TRUE(is_randomized(Algorithm::SketchSthosvd));
}

TEST(Thosvd, RankOneOuterProduct) {
    RngStream rng(1);
    const DenseTensor x = outer3(gaussian_matrix(rng, 6, 1), gaussian_matrix(rng, 5, 1), gaussian_matrix(rng, 4, 1));
    for (Algorithm a : kAllAlgorithms) EXPECT_LE(rel_err(x, decompose(x, config({1, 1, 1}), a)), 1e-12);
}

TEST(Thosvd, FullRanksAreExact) {
    RngStream rng(2);
    const DenseTensor x = gaussian_tensor({5, 4, 3}, rng);
    for (Algorithm a : kAllAlgorithms) {
        const auto m = decompose(x, config({5, 4, 3}), a);
        expect_well_formed(m, x, {5, 4, 3});
        EXPECT_LE(rel_err(x, m), 1e-12) << algorithm_name(a);
    }
}

TEST(Pipelines, ExactMultilinearRankRecovery) {
    RngStream rng(3);
    const DenseTensor x = random_tucker_tensor({30, 30, 30}, {2, 2, 2}, rng);
    ApproxConfig cfg = config({2, 2, 2}, 4);
    cfg.oversampling = 2;
    for (Algorithm a : kAllAlgorithms) {
        const auto m = decompose(x, cfg, a);
        expect_well_formed(m, x, {2, 2, 2});
        EXPECT_LE(rel_err(x, m), 1e-10) << algorithm_name(a);
    }
}

TEST(Pipelines, OrthonormalFactorsOnGenericInput) {
    RngStream rng(5);
    const DenseTensor x = gaussian_tensor({12, 10, 8, 6}, rng);
    for (Algorithm a : kAllAlgorithms) expect_well_formed(decompose(x, config({4, 3, 5, 2}, 6), a), x, {4, 3, 5, 2});
}

TEST(Pipelines, RejectInvalidConfigs) {
    const DenseTensor x = hilbert_tensor({6, 6, 6});
    EXPECT_THROW(sthosvd(x, config({2, 2})), ParameterError);
    EXPECT_THROW(sthosvd(x, config({2, 7, 2})), ParameterError);
    EXPECT_THROW(sthosvd(x, config({2, 0, 2})), ParameterError);
    ApproxConfig bad_order = config({2, 2, 2});
    bad_order.order = {1, 1, 2};
    EXPECT_THROW(sthosvd(x, bad_order), ParameterError);
    bad_order.order = {1, 2};
    EXPECT_THROW(sthosvd(x, bad_order), ParameterError);
    ApproxConfig no_power = config({2, 2, 2});
    no_power.power_q = 0;
    EXPECT_THROW(sub_sketch_sthosvd(x, no_power), ParameterError);
    ApproxConfig no_extra = config({2, 2, 2});
    no_extra.sketch_extra = 0;
    EXPECT_THROW(sketch_sthosvd(x, no_extra), ParameterError);
    ApproxConfig small_l = config({3, 3, 3});
    small_l.sketch_sizes = {3, 5, 5};
    EXPECT_THROW(sketch_sthosvd(x, small_l), ParameterError);
    small_l.sketch_sizes = {5, 7, 5};
    EXPECT_THROW(sketch_sthosvd(x, small_l), ParameterError);
}

TEST(Pipelines, DiagnosticForMinimalSketchSize) {
    const DenseTensor x = hilbert_tensor({8, 8, 8});
    ApproxConfig cfg = config({3, 3, 3});
    cfg.sketch_sizes = {4, 5, 5};
    const auto m = sketch_sthosvd(x, cfg);
    ASSERT_EQ(m.diagnostics.size(), 1u);
    EXPECT_NE(m.diagnostics[0].find("mode 1"), std::string::npos);
}

TEST(Pipelines, FullRankModeInSketchVariants) {
    RngStream rng(7);
    const DenseTensor x = gaussian_tensor({10, 9, 3}, rng);
    for (Algorithm a : {Algorithm::RSthosvd, Algorithm::SketchSthosvd, Algorithm::SubSketchSthosvd})
        expect_well_formed(decompose(x, config({4, 4, 3}, 8), a), x, {4, 4, 3});
}

TEST(Pipelines, DeterministicBoundHolds) {
    RngStream rng(9);
    std::vector<DenseTensor> tensors{hilbert_tensor({20, 18, 16}), gaussian_tensor({12, 10, 9}, rng),
                                     hilbert_tensor({8, 8, 8, 8})};
    for (const auto& x : tensors) {
        for (std::size_t r : {1u, 2u, 4u, 7u}) {
            const Dims ranks(x.order(), r);
            const double bound = oracle_delta_sum(x, ranks) + 1e-10 * squared_norm(x);
            for (Algorithm a : {Algorithm::Thosvd, Algorithm::Sthosvd}) {
                const double err2 = squared_norm(x - reconstruct(decompose(x, config(ranks), a)));
                EXPECT_LE(err2, bound) << algorithm_name(a) << " r=" << r;
            }
        }
    }
}

TEST(Sthosvd, CoreEnergyIdentity) {
    // ||X||^2 = ||core||^2 + sum of tails discarded from each intermediate unfolding.
    RngStream rng(10);
    const DenseTensor x = gaussian_tensor({9, 8, 7}, rng);
    const Dims ranks{3, 4, 2};
    double discarded = 0.0;
    DenseTensor g = x;
    for (std::size_t n = 1; n <= 3; ++n) {
        Eigen::JacobiSVD<Matrix> svd(unfold(g, n), Eigen::ComputeThinU);
        const auto r = static_cast<Eigen::Index>(ranks[n - 1]);
        const Vector s = svd.singularValues();
        discarded += s.tail(s.size() - r).squaredNorm();
        g = mode_n_product(g, svd.matrixU().leftCols(r).transpose(), n);
    }
    const auto m = sthosvd(x, config(ranks));
    EXPECT_NEAR(squared_norm(x), squared_norm(m.core) + discarded, 1e-10 * squared_norm(x));
    EXPECT_NEAR(squared_norm(m.core), squared_norm(g), 1e-10 * squared_norm(x));
}

TEST(Pipelines, ErrorNonincreasingInRank) {
    RngStream rng(11);
    const DenseTensor x = gaussian_tensor({10, 9, 8}, rng);
    for (Algorithm a : {Algorithm::Thosvd, Algorithm::Sthosvd}) {
        double prev = INFINITY;
        for (std::size_t r = 1; r <= 8; ++r) {
            const double e = rel_err(x, decompose(x, config({r, r, r}), a));
            EXPECT_LE(e, prev + 1e-12);
            prev = e;
        }
    }
}

TEST(Hilbert, DeskScaleTruncationError) {
    const DenseTensor x = hilbert_tensor({100, 100, 100});
    const double oracle = std::sqrt(oracle_delta_sum(x, {10, 10, 10}) / squared_norm(x));
    for (Algorithm a : {Algorithm::Thosvd, Algorithm::Sthosvd}) {
        const double e = rel_err(x, decompose(x, config({10, 10, 10}), a));
        EXPECT_LE(e, 5e-6);
        EXPECT_LE(e, oracle * (1 + 1e-6));
    }
}

TEST(Sthosvd, ProcessingOrderInvarianceOnSupersymmetricTensor) {
    const DenseTensor x = hilbert_tensor({25, 25, 25, 25, 25});
    ApproxConfig cfg = config({5, 5, 5, 5, 5});
    const double base = rel_err(x, sthosvd(x, cfg));
    for (const std::vector<std::size_t>& order : {std::vector<std::size_t>{5, 4, 3, 2, 1}, {2, 4, 1, 5, 3}}) {
        cfg.order = order;
        EXPECT_NEAR(rel_err(x, sthosvd(x, cfg)), base, 1e-10 * base);
    }
}

TEST(RSthosvd, WithinFactorOfDeterministicBaseline) {
    const DenseTensor x = hilbert_tensor({100, 100, 100});
    const double base = rel_err(x, sthosvd(x, config({10, 10, 10})));
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        EXPECT_LE(rel_err(x, r_sthosvd(x, config({10, 10, 10}, seed))), 10.0 * base) << "seed " << seed;
}

TEST(SubSketchSthosvd, ReachesDeterministicAccuracyWithLargeGap) {
    SparseGenConfig sc;
    sc.n = 200;
    sc.gamma = 200;
    RngStream data(12);
    const DenseTensor x = sparse_lowrank_tensor(sc, data);
    const double base = rel_err(x, sthosvd(x, config({50, 50, 50})));
    std::vector<double> errors;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        errors.push_back(rel_err(x, sub_sketch_sthosvd(x, config({50, 50, 50}, seed))));
    std::printf("STHOSVD %.4e, sub-Sketch-STHOSVD median %.4e\n", base, median(errors));
    EXPECT_LE(median(errors), 2.0 * base);
}

TEST(SubSketchSthosvd, MedianErrorNonincreasingInQ) {
    RngStream data(13);
    const DenseTensor x = gaussian_tensor({30, 30, 30}, data);
    double prev = INFINITY;
    for (int q = 1; q <= 3; ++q) {
        std::vector<double> errors;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            ApproxConfig cfg = config({5, 5, 5}, seed);
            cfg.power_q = q;
            errors.push_back(rel_err(x, sub_sketch_sthosvd(x, cfg)));
        }
        const double med = median(errors);
        EXPECT_LE(med, prev) << "q=" << q;
        prev = med;
    }
}

TEST(Pipelines, RandomizedRunsAreBitDeterministic) {
    RngStream data(14);
    const DenseTensor x = gaussian_tensor({15, 12, 10}, data);
    for (Algorithm a : {Algorithm::RSthosvd, Algorithm::SketchSthosvd, Algorithm::SubSketchSthosvd}) {
        const auto m1 = decompose(x, config({4, 4, 4}, 99), a);
        const auto m2 = decompose(x, config({4, 4, 4}, 99), a);
        EXPECT_EQ(m1.core, m2.core);
        for (std::size_t n = 0; n < 3; ++n) EXPECT_EQ(m1.factors[n], m2.factors[n]);
        const auto m3 = decompose(x, config({4, 4, 4}, 100), a);
        EXPECT_NE(m1.factors[0], m3.factors[0]);
    }
}

TEST(Reconstruct, ScalarCoreOnUnitVectors) {
    TuckerModel m;
    m.core = DenseTensor({1, 1, 1}, {2.5});
    for (Eigen::Index d : {3, 4, 2}) m.factors.push_back(Matrix::Identity(d, 1));
    const DenseTensor x = reconstruct(m);
    EXPECT_EQ(x.dims(), (Dims{3, 4, 2}));
    EXPECT_EQ(x.at({0, 0, 0}), 2.5);
    EXPECT_EQ(squared_norm(x), 6.25);
}

TEST(Reconstruct, MatchesKroneckerPath) {
    RngStream rng(15);
    TuckerModel m;
    m.core = gaussian_tensor({2, 3, 2}, rng);
    for (auto [rows, cols] : {std::pair{5, 2}, std::pair{4, 3}, std::pair{6, 2}})
        m.factors.push_back(gaussian_matrix(rng, rows, cols));
    const DenseTensor x = reconstruct(m);
    const Matrix kron = kronecker(m.factors[2], m.factors[1]);
    const DenseTensor via_kron = fold(m.factors[0] * unfold(m.core, 1) * kron.transpose(), 1, x.dims());
    EXPECT_LE(frobenius_norm(x - via_kron), 1e-10 * frobenius_norm(x));
    m.factors.pop_back();
    EXPECT_THROW(reconstruct(m), ParameterError);
}

TEST(Reconstruct, FullRankSthosvdRoundTrip) {
    RngStream rng(16);
    const DenseTensor x = gaussian_tensor({6, 7, 5}, rng);
    EXPECT_LE(frobenius_norm(x - reconstruct(sthosvd(x, config({6, 7, 5})))), 1e-12 * frobenius_norm(x));
}
