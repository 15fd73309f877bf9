// Two-sided sketch of a matrix with a slowly decaying spectrum, with and
// without power iterations, against the best rank-k error.
//
//   sketch_demo [trials]

#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "tucker/tucker.hpp"

int main(int argc, char** argv) {
    using namespace tucker;
    const int trials = argc > 1 ? std::atoi(argv[1]) : 20;
    if (trials < 1) {
        std::fprintf(stderr, "trials must be positive\n");
        return 1;
    }
    constexpr Eigen::Index m = 300, n = 200, k = 10, l = 12;
    Vector sigma(n);
    for (Eigen::Index i = 0; i < n; ++i) sigma(i) = 1.0 / std::sqrt(static_cast<double>(i + 1));
    RngStream data(2);
    const Matrix u = thin_qr(gaussian_matrix(data, m, n)).Q;
    const Matrix v = thin_qr(gaussian_matrix(data, n, n)).Q;
    const Matrix a = u * sigma.asDiagonal() * v.transpose();

    const double best = std::sqrt(sigma.tail(n - k).squaredNorm()) / a.norm();
    std::printf("%dx%d, k=%d, l=%d, best rank-%d error %.6e\n", static_cast<int>(m), static_cast<int>(n),
                static_cast<int>(k), static_cast<int>(l), static_cast<int>(k), best);
    for (int q = 0; q <= 3; ++q) {
        double sum = 0.0;
        for (int t = 0; t < trials; ++t) {
            RngStream rng(static_cast<std::uint64_t>(t));
            const auto s = q == 0 ? sketch(a, k, l, rng) : sub_sketch(a, k, l, q, rng);
            sum += (a - s.approximation()).norm() / a.norm();
        }
        std::printf("q=%d  mean error %.6e  (%.3fx best)\n", q, sum / trials, sum / trials / best);
    }
}
