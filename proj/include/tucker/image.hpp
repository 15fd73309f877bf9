#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "tucker/tensor.hpp"

namespace tucker {

inline constexpr double kImagePeak = 255.0;

namespace detail {

class PnmHeaderReader {
public:
    explicit PnmHeaderReader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

    std::size_t number() {
        skip_space_and_comments();
        std::size_t value = 0;
        std::size_t digits = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + static_cast<std::size_t>(bytes_[pos_++] - '0');
            if (++digits > 9) throw IoError("PNM: header value too large");
        }
        if (digits == 0) throw IoError("PNM: malformed header");
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    std::size_t raster_start() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) throw IoError("PNM: malformed header");
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::vector<unsigned char>& bytes_;
    std::size_t pos_ = 2;
};

}  // namespace detail

/// Decodes a binary PGM (P5) or PPM (P6) with maxval 255 into an
/// (height, width, channels) tensor of values 0..255.
inline DenseTensor decode_pnm(const std::vector<unsigned char>& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
        throw IoError("PNM: expected binary P5 or P6 magic");
    const std::size_t channels = bytes[1] == '6' ? 3 : 1;
    detail::PnmHeaderReader header(bytes);
    const std::size_t width = header.number();
    const std::size_t height = header.number();
    const std::size_t maxval = header.number();
    if (width == 0 || height == 0) throw IoError("PNM: zero image dimension");
    if (maxval != 255) throw IoError("PNM: maxval " + std::to_string(maxval) + " unsupported (need 255)");
    const std::size_t start = header.raster_start();
    const std::size_t count = width * height * channels;
    if (bytes.size() < start + count) throw IoError("PNM: truncated raster");

    DenseTensor img({height, width, channels});
    const unsigned char* raster = bytes.data() + start;
    for (std::size_t row = 0; row < height; ++row)
        for (std::size_t col = 0; col < width; ++col)
            for (std::size_t ch = 0; ch < channels; ++ch)
                img[row + height * (col + width * ch)] = raster[(row * width + col) * channels + ch];
    return img;
}

/// Clamps to [0, 255], rounds to nearest, and encodes as P5 (1 channel) or P6 (3 channels).
inline std::vector<unsigned char> encode_pnm(const DenseTensor& img) {
    if (img.order() != 3 || (img.dims()[2] != 1 && img.dims()[2] != 3))
        throw ParameterError("image tensor must have dims (height, width, 1|3)");
    const std::size_t height = img.dims()[0];
    const std::size_t width = img.dims()[1];
    const std::size_t channels = img.dims()[2];
    const std::string header =
        std::string(channels == 3 ? "P6" : "P5") + "\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    out.reserve(out.size() + img.size());
    for (std::size_t row = 0; row < height; ++row)
        for (std::size_t col = 0; col < width; ++col)
            for (std::size_t ch = 0; ch < channels; ++ch) {
                const double v = img[row + height * (col + width * ch)];
                const double clamped = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, kImagePeak);
                out.push_back(static_cast<unsigned char>(std::lround(clamped)));
            }
    return out;
}

inline DenseTensor load_image_tensor(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open image " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return decode_pnm(bytes);
}

inline void save_image_tensor(const DenseTensor& img, const std::string& path) {
    const auto bytes = encode_pnm(img);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("write failed: " + path);
}

}  // namespace tucker
