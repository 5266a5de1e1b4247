#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tfrs/errors.hpp"

namespace tfrs {

/// Rounds half away from zero (1.5 -> 2, -1.5 -> -2).
inline double round_half_away(double x) {
    return x >= 0.0 ? std::floor(x + 0.5) : std::ceil(x - 0.5);
}

inline std::uint8_t clamp_u8(double x) {
    double r = round_half_away(x);
    if (r < 0.0) return 0;
    if (r > 255.0) return 255;
    return static_cast<std::uint8_t>(r);
}

struct GrayTag {};
struct BinaryTag {};

/// Row-major raster. The tag keeps grayscale and binary images distinct
/// types even when the sample type coincides.
template <typename T, typename Tag = GrayTag>
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<T> data; // row-major, data[row * width + col]

    Raster() = default;
    Raster(int w, int h, T fill = T{})
        : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    T& at(int row, int col) { return data[static_cast<std::size_t>(row) * width + col]; }
    const T& at(int row, int col) const { return data[static_cast<std::size_t>(row) * width + col]; }

    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height && col >= 0 && col < width;
    }

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }

    bool operator==(const Raster&) const = default;
};

/// 8-bit grayscale, the I/O and preprocessing representation.
using GrayImage8 = Raster<std::uint8_t, GrayTag>;
/// Real-valued grayscale used after the wavelet/fusion stages.
using GrayImageF = Raster<double, GrayTag>;
/// Values are strictly 0 or 1.
using BinaryImage = Raster<std::uint8_t, BinaryTag>;

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // row-major r,g,b triples, 3*width*height

    RgbImage() = default;
    RgbImage(int w, int h)
        : width(w), height(h), data(3u * static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {}

    std::uint8_t* pixel(int row, int col) {
        return data.data() + 3 * (static_cast<std::size_t>(row) * width + col);
    }
    const std::uint8_t* pixel(int row, int col) const {
        return data.data() + 3 * (static_cast<std::size_t>(row) * width + col);
    }

    bool operator==(const RgbImage&) const = default;
};

/// Connected-component labeling result; 0 is background, foreground
/// labels are 1..label_count with every value in that range present.
struct LabelImage {
    int width = 0;
    int height = 0;
    std::vector<int> data;
    int label_count = 0;

    LabelImage() = default;
    LabelImage(int w, int h)
        : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {}

    int& at(int row, int col) { return data[static_cast<std::size_t>(row) * width + col]; }
    int at(int row, int col) const { return data[static_cast<std::size_t>(row) * width + col]; }
};

inline GrayImageF to_real(const GrayImage8& img) {
    GrayImageF out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) out.data[i] = img.data[i];
    return out;
}

/// Grayscale conversion of an RGB capture; rounding is half away from zero.
inline GrayImage8 to_grayscale(const RgbImage& img) {
    GrayImage8 out(img.width, img.height);
    for (std::size_t i = 0, n = out.pixel_count(); i < n; ++i) {
        const std::uint8_t* p = img.data.data() + 3 * i;
        out.data[i] = clamp_u8(0.2989 * p[0] + 0.5870 * p[1] + 0.1140 * p[2]);
    }
    return out;
}

} // namespace tfrs
