#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tucker/datagen.hpp"
#include "tucker/image.hpp"
#include "tucker/metrics.hpp"
#include "tucker/pipelines.hpp"

namespace tucker {

enum class Source { Hilbert, Sparse, Gaussian, Image };

/// One experiment: a tensor source, an optional noise model, and a sweep of
/// target ranks x algorithms x trials.
struct BenchDescriptor {
    std::string experiment = "bench";
    Source source = Source::Hilbert;
    Dims dims;                      // hilbert, gaussian
    SparseGenConfig sparse;         // sparse (seed is taken from base_seed)
    std::string image_path;         // image
    std::optional<double> delta;    // X + delta * K
    std::optional<double> snr_db;   // white Gaussian noise at this SNR
    std::vector<Dims> rank_sweep;
    std::vector<Algorithm> algorithms{kAllAlgorithms.begin(), kAllAlgorithms.end()};
    std::size_t trials = 1;
    std::uint64_t base_seed = 0;
    std::vector<std::size_t> order;
    std::size_t oversampling = ApproxConfig::kDefaultOversampling;
    std::size_t sketch_extra = ApproxConfig::kDefaultSketchExtra;
    int power_q = ApproxConfig::kDefaultPowerIterations;
    bool aggregate_mean = false;
};

struct BenchRow {
    std::string experiment;
    std::string algorithm;
    Dims ranks;
    Dims sketch_sizes;          // empty for non-sketching algorithms
    std::optional<int> q;       // sub-Sketch-STHOSVD only
    std::uint64_t seed = 0;
    double rel_error = 0.0;
    std::optional<double> psnr; // image sources only; may be +infinity
    double wall_ms = 0.0;
};

using BenchReport = std::vector<BenchRow>;

/// Called with each row and its reconstruction (before aggregation).
using ReconstructionSink = std::function<void(const BenchRow&, const DenseTensor&)>;

/// Seed used by trial `trial` of a sweep.
inline std::uint64_t trial_seed(std::uint64_t base, std::size_t trial) { return base ^ static_cast<std::uint64_t>(trial); }

struct BenchInput {
    DenseTensor tensor;     // what the algorithms decompose
    DenseTensor reference;  // clean signal, used for PSNR
};

/// Builds the input tensor of a descriptor. Data draws use stream 1 of the
/// base seed and noise uses stream 2, so they never collide with trial streams.
inline BenchInput make_bench_input(const BenchDescriptor& d) {
    DenseTensor clean;
    RngStream data_rng(d.base_seed, 1);
    switch (d.source) {
        case Source::Hilbert:
            if (d.dims.empty()) throw ParameterError("bench: hilbert source needs --dims");
            clean = hilbert_tensor(d.dims);
            break;
        case Source::Gaussian:
            if (d.dims.empty()) throw ParameterError("bench: gaussian source needs --dims");
            clean = gaussian_tensor(d.dims, data_rng);
            break;
        case Source::Sparse:
            clean = sparse_lowrank_tensor(d.sparse, data_rng);
            break;
        case Source::Image:
            clean = load_image_tensor(d.image_path);
            break;
    }
    RngStream noise_rng(d.base_seed, 2);
    DenseTensor noisy = clean;
    if (d.delta) noisy = add_scaled_noise(noisy, *d.delta, noise_rng);
    if (d.snr_db) noisy = add_awgn(noisy, *d.snr_db, noise_rng);
    return {std::move(noisy), std::move(clean)};
}

namespace detail {

inline BenchReport aggregate_by_mean(const BenchReport& rows, std::uint64_t base_seed) {
    BenchReport out;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    std::vector<std::size_t> counts;
    for (const auto& row : rows) {
        const auto key = std::make_pair(dims_to_string(row.ranks), row.algorithm);
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, out.size());
            out.push_back(row);
            out.back().seed = base_seed;
            counts.push_back(1);
            continue;
        }
        auto& acc = out[it->second];
        acc.rel_error += row.rel_error;
        acc.wall_ms += row.wall_ms;
        if (acc.psnr && row.psnr) *acc.psnr += *row.psnr;
        ++counts[it->second];
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto c = static_cast<double>(counts[i]);
        out[i].rel_error /= c;
        out[i].wall_ms /= c;
        if (out[i].psnr) *out[i].psnr /= c;
    }
    return out;
}

}  // namespace detail

/// Runs every (rank, algorithm, trial) combination on a prepared input.
///
/// Only the decomposition call is timed. Relative error is measured against
/// the decomposed tensor; PSNR (image sources) against the clean reference.
inline BenchReport run_bench(const BenchDescriptor& d, const BenchInput& input, const ReconstructionSink& sink = {}) {
    if (d.rank_sweep.empty()) throw ParameterError("bench: empty rank sweep");
    if (d.algorithms.empty()) throw ParameterError("bench: no algorithms selected");
    if (d.trials < 1) throw ParameterError("bench: trials must be at least 1");
    const bool with_psnr = d.source == Source::Image;

    BenchReport rows;
    for (const Dims& ranks : d.rank_sweep) {
        for (Algorithm algo : d.algorithms) {
            for (std::size_t trial = 0; trial < d.trials; ++trial) {
                ApproxConfig cfg;
                cfg.ranks = ranks;
                cfg.order = d.order;
                cfg.oversampling = d.oversampling;
                cfg.power_q = d.power_q;
                cfg.seed = trial_seed(d.base_seed, trial);
                BenchRow row;
                row.experiment = d.experiment;
                row.algorithm = std::string(algorithm_name(algo));
                row.ranks = ranks;
                row.seed = cfg.seed;
                cfg.sketch_extra = d.sketch_extra;
                if (algo == Algorithm::SketchSthosvd || algo == Algorithm::SubSketchSthosvd) {
                    if (ranks.size() != input.tensor.order()) throw ParameterError("bench: rank count mismatch");
                    for (std::size_t n = 0; n < ranks.size(); ++n)
                        row.sketch_sizes.push_back(std::min(ranks[n] + d.sketch_extra, input.tensor.dims()[n]));
                }
                if (algo == Algorithm::SubSketchSthosvd) row.q = d.power_q;

                const auto start = std::chrono::steady_clock::now();
                const TuckerModel model = decompose(input.tensor, cfg, algo);
                const auto stop = std::chrono::steady_clock::now();
                row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();

                const DenseTensor approx = reconstruct(model);
                row.rel_error = relative_error(input.tensor, approx);
                if (with_psnr) row.psnr = psnr(input.reference, approx, kImagePeak);
                if (sink) sink(row, approx);
                rows.push_back(std::move(row));
            }
        }
    }
    return d.aggregate_mean ? detail::aggregate_by_mean(rows, d.base_seed) : rows;
}

inline BenchReport run_bench(const BenchDescriptor& d, const ReconstructionSink& sink = {}) {
    return run_bench(d, make_bench_input(d), sink);
}

inline constexpr const char* kCsvHeader = "experiment,algorithm,ranks,sketch_sizes,q,seed,rel_error,psnr,wall_ms";

/// %.6e formatting, e.g. 2.734700e-06 and 0.000000e+00.
inline std::string format_scientific(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

inline void write_csv(const BenchReport& report, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& row : report) {
        out << row.experiment << ',' << row.algorithm << ',' << dims_to_string(row.ranks) << ','
            << dims_to_string(row.sketch_sizes) << ',' << (row.q ? std::to_string(*row.q) : std::string()) << ','
            << row.seed << ',' << format_scientific(row.rel_error) << ',';
        if (row.psnr) out << (std::isinf(*row.psnr) ? std::string("inf") : format_scientific(*row.psnr));
        out << ',' << format_scientific(row.wall_ms) << '\n';
    }
}

inline void write_csv(const BenchReport& report, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    write_csv(report, f);
    if (!f) throw IoError("write failed: " + path);
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) fields.push_back(field);
    if (!line.empty() && line.back() == sep) fields.emplace_back();
    return fields;
}

}  // namespace detail

/// Parses an `x`-joined integer list such as "10x10x10".
inline Dims parse_dims(const std::string& text) {
    Dims out;
    if (text.empty()) return out;
    for (const auto& part : detail::split_fields(text, 'x')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw ParameterError("malformed dimension list '" + text + "'");
        out.push_back(std::stoull(part));
    }
    return out;
}

/// Reads back a report written by write_csv.
inline BenchReport read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw IoError("CSV: unexpected header");
    BenchReport report;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_fields(line, ',');
        if (f.size() != 9) throw IoError("CSV: expected 9 fields, got " + std::to_string(f.size()));
        try {
            BenchRow row;
            row.experiment = f[0];
            row.algorithm = f[1];
            row.ranks = parse_dims(f[2]);
            row.sketch_sizes = parse_dims(f[3]);
            if (!f[4].empty()) row.q = std::stoi(f[4]);
            row.seed = std::stoull(f[5]);
            row.rel_error = std::stod(f[6]);
            if (f[7] == "inf") row.psnr = kInfinity;
            else if (!f[7].empty()) row.psnr = std::stod(f[7]);
            row.wall_ms = std::stod(f[8]);
            report.push_back(std::move(row));
        } catch (const std::logic_error& e) {
            throw IoError(std::string("CSV: malformed row: ") + e.what());
        }
    }
    return report;
}

}  // namespace tucker
