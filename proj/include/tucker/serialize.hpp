#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "tucker/pipelines.hpp"

namespace tucker {

// Binary container layout, all integers and floats little-endian:
//   "TUCK" | version u32 | N u32 | dims N x u64 | ranks N x u64
//   | core (prod ranks) x f64 | factor 1 .. factor N, each I_n * r_n x f64 column-major
inline constexpr char kTuckerMagic[4] = {'T', 'U', 'C', 'K'};
inline constexpr std::uint32_t kTuckerFormatVersion = 1;

namespace detail {

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

inline void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

inline void put_f64(std::vector<unsigned char>& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class ByteReader {
public:
    explicit ByteReader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

    std::uint64_t uint(int width) {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += static_cast<std::size_t>(width);
        return v;
    }

    double f64() { return std::bit_cast<double>(uint(8)); }

    void need(std::size_t count) const {
        if (bytes_.size() - pos_ < count) throw IoError("Tucker model: truncated payload");
    }

    [[nodiscard]] bool at_end() const { return pos_ == bytes_.size(); }

private:
    const std::vector<unsigned char>& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline std::vector<unsigned char> serialize(const TuckerModel& model) {
    const Dims dims = model.dims();
    const Dims ranks = model.ranks();
    if (model.core.dims() != ranks) throw ParameterError("serialize: core dims do not match factor ranks");
    std::vector<unsigned char> out(std::begin(kTuckerMagic), std::end(kTuckerMagic));
    detail::put_u32(out, kTuckerFormatVersion);
    detail::put_u32(out, static_cast<std::uint32_t>(dims.size()));
    for (auto d : dims) detail::put_u64(out, d);
    for (auto r : ranks) detail::put_u64(out, r);
    for (double v : model.core.data()) detail::put_f64(out, v);
    for (const auto& u : model.factors)
        for (Eigen::Index i = 0; i < u.size(); ++i) detail::put_f64(out, u.data()[i]);
    return out;
}

inline TuckerModel deserialize(const std::vector<unsigned char>& bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kTuckerMagic, 4) != 0)
        throw IoError("Tucker model: bad magic");
    detail::ByteReader in(bytes);
    in.uint(4);
    const auto version = in.uint(4);
    if (version != kTuckerFormatVersion) throw IoError("Tucker model: unsupported version " + std::to_string(version));
    const auto order = static_cast<std::size_t>(in.uint(4));
    if (order == 0) throw IoError("Tucker model: zero order");
    Dims dims(order), ranks(order);
    for (auto& d : dims) d = in.uint(8);
    for (auto& r : ranks) r = in.uint(8);
    for (std::size_t n = 0; n < order; ++n)
        if (dims[n] == 0 || ranks[n] == 0 || ranks[n] > dims[n]) throw IoError("Tucker model: invalid dims/ranks");

    TuckerModel model;
    std::vector<double> core(product(ranks));
    in.need(core.size() * 8);
    for (double& v : core) v = in.f64();
    model.core = DenseTensor(ranks, std::move(core));
    for (std::size_t n = 0; n < order; ++n) {
        Matrix u(static_cast<Eigen::Index>(dims[n]), static_cast<Eigen::Index>(ranks[n]));
        in.need(static_cast<std::size_t>(u.size()) * 8);
        for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = in.f64();
        model.factors.push_back(std::move(u));
    }
    if (!in.at_end()) throw IoError("Tucker model: trailing bytes");
    return model;
}

inline void save_model(const TuckerModel& model, const std::string& path) {
    const auto bytes = serialize(model);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("write failed: " + path);
}

inline TuckerModel load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

/// Dense tensors are stored as a trivial model: core = X, identity factors.
inline void save_tensor(const DenseTensor& x, const std::string& path) {
    TuckerModel model;
    model.core = x;
    for (auto d : x.dims()) model.factors.push_back(Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
    save_model(model, path);
}

/// Loads any model file and expands it to the full tensor.
inline DenseTensor load_tensor(const std::string& path) {
    TuckerModel model = load_model(path);
    if (model.ranks() == model.dims()) {
        bool identity = true;
        for (const auto& u : model.factors) identity = identity && u.isIdentity(0.0);
        if (identity) return std::move(model.core);
    }
    return reconstruct(model);
}

}  // namespace tucker
