#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tfrs/errors.hpp"
#include "tfrs/raster.hpp"

namespace tfrs {

inline constexpr int kLbpBlockSize = 8;

/// Codes for the interior pixels of the source image; 1-pixel border excluded.
struct LbpCodeImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    std::uint8_t at(int row, int col) const {
        return data[static_cast<std::size_t>(row) * width + col];
    }
};

/// Concatenated 256-bin histograms of non-overlapping 8x8 blocks, row-major.
/// Each histogram sums to 64.
struct BlockHistogramFeature {
    int blocks_y = 0;
    int blocks_x = 0;
    static constexpr int bins_per_block = 256;
    std::vector<std::uint32_t> data;

    std::vector<double> to_feature_vector() const {
        return std::vector<double>(data.begin(), data.end());
    }
};

/// 3x3 neighborhood given row-major (top-left, top, ..., bottom-right).
/// Bits run clockwise from the top-left neighbor, most significant first;
/// a bit is set when the neighbor is >= the center.
inline int lbp_code(const std::array<std::uint8_t, 9>& n) {
    const std::uint8_t center = n[4];
    // clockwise from top-left: tl, t, tr, r, br, b, bl, l
    const std::array<std::uint8_t, 8> ring{n[0], n[1], n[2], n[5], n[8], n[7], n[6], n[3]};
    int code = 0;
    for (int bit = 0; bit < 8; ++bit)
        if (ring[static_cast<std::size_t>(bit)] >= center) code |= 1 << (7 - bit);
    return code;
}

inline LbpCodeImage lbp_image(const GrayImage8& img) {
    if (img.width < 3 || img.height < 3)
        throw SizeError("LBP needs an image of at least 3x3");
    LbpCodeImage out;
    out.width = img.width - 2;
    out.height = img.height - 2;
    out.data.resize(static_cast<std::size_t>(out.width) * out.height);
    for (int r = 1; r + 1 < img.height; ++r) {
        for (int c = 1; c + 1 < img.width; ++c) {
            std::array<std::uint8_t, 9> n{img.at(r - 1, c - 1), img.at(r - 1, c), img.at(r - 1, c + 1),
                                          img.at(r, c - 1),     img.at(r, c),     img.at(r, c + 1),
                                          img.at(r + 1, c - 1), img.at(r + 1, c), img.at(r + 1, c + 1)};
            out.data[static_cast<std::size_t>(r - 1) * out.width + (c - 1)] =
                static_cast<std::uint8_t>(lbp_code(n));
        }
    }
    return out;
}

/// Tiles the code image into 8x8 blocks row-major, discarding partial blocks
/// at the right/bottom edges, and concatenates one 256-bin histogram per block.
inline BlockHistogramFeature block_features(const LbpCodeImage& codes) {
    const int by = codes.height / kLbpBlockSize;
    const int bx = codes.width / kLbpBlockSize;
    if (by < 1 || bx < 1)
        throw SizeError("code image smaller than one 8x8 block");

    BlockHistogramFeature f;
    f.blocks_y = by;
    f.blocks_x = bx;
    f.data.assign(static_cast<std::size_t>(by) * bx * BlockHistogramFeature::bins_per_block, 0);
    for (int y = 0; y < by; ++y) {
        for (int x = 0; x < bx; ++x) {
            std::uint32_t* hist =
                f.data.data() +
                (static_cast<std::size_t>(y) * bx + x) * BlockHistogramFeature::bins_per_block;
            for (int r = 0; r < kLbpBlockSize; ++r)
                for (int c = 0; c < kLbpBlockSize; ++c)
                    ++hist[codes.at(y * kLbpBlockSize + r, x * kLbpBlockSize + c)];
        }
    }
    return f;
}

} // namespace tfrs
