// Rank sweep on a Hilbert tensor: relative error and wall time per algorithm.
//
//   hilbert_demo [side] [seed]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "tucker/tucker.hpp"

int main(int argc, char** argv) {
    using namespace tucker;
    const std::size_t side = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 60;
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;
    if (side < 4) {
        std::fprintf(stderr, "side must be at least 4\n");
        return 1;
    }
    const DenseTensor x = hilbert_tensor({side, side, side});
    std::printf("Hilbert %zux%zux%zu, seed %llu\n", side, side, side, static_cast<unsigned long long>(seed));
    std::printf("%-6s %-20s %14s %10s\n", "rank", "algorithm", "rel_error", "ms");
    for (std::size_t r = 2; r <= side / 2; r += 2) {
        ApproxConfig cfg;
        cfg.ranks = {r, r, r};
        cfg.seed = seed;
        for (Algorithm a : kAllAlgorithms) {
            const auto t0 = std::chrono::steady_clock::now();
            const TuckerModel m = decompose(x, cfg, a);
            const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            std::printf("%-6zu %-20s %14.6e %10.2f\n", r, std::string(algorithm_name(a)).c_str(),
                        relative_error(x, reconstruct(m)), ms);
        }
    }
}
