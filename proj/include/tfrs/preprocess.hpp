#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "tfrs/errors.hpp"
#include "tfrs/raster.hpp"

namespace tfrs {

inline constexpr int kFaceHeight = 112;
inline constexpr int kFaceWidth = 92;

enum class Connectivity { Four, Eight };

/// Face-region centroid in 1-based image coordinates: x is the column, y
/// the row. Storage stays 0-based; the conversion is owned by this module.
struct Centroid {
    double x = 0.0;
    double y = 0.0;
};

struct EllipseSpec {
    Centroid center;
    int semi_minor = 1; // horizontal half-axis, pixels
    int semi_major = 1; // vertical half-axis, pixels
};

inline double mean_gray(const GrayImage8& img) {
    double sum = std::accumulate(img.data.begin(), img.data.end(), 0.0);
    return sum / static_cast<double>(img.pixel_count());
}

/// Global-mean threshold; pixels at or above the mean become foreground.
inline BinaryImage binarize(const GrayImage8& img) {
    const double threshold = mean_gray(img);
    BinaryImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = img.data[i] >= threshold ? 1 : 0;
    return out;
}

namespace detail {

// Union-find over provisional labels, path halving.
class LabelMerge {
public:
    int fresh() {
        parent_.push_back(static_cast<int>(parent_.size()));
        return parent_.back();
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<int> parent_;
};

} // namespace detail

/// Two-pass connected-component labeling. Pass 1 scans row-major, labeling
/// from already-visited neighbors and recording label equivalences; pass 2
/// resolves the equivalence classes and renumbers them 1..K in order of
/// first row-major appearance.
inline LabelImage label_components(const BinaryImage& img, Connectivity conn) {
    LabelImage out(img.width, img.height);
    detail::LabelMerge merge;
    std::vector<int> provisional(img.pixel_count(), -1);

    auto consider = [&](int r, int c, int& best) {
        if (!img.in_bounds(r, c)) return;
        int p = provisional[static_cast<std::size_t>(r) * img.width + c];
        if (p < 0) return;
        if (best < 0) {
            best = p;
        } else {
            merge.unite(best, p);
            best = std::min(best, merge.find(p));
        }
    };

    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            if (!img.at(r, c)) continue;
            int best = -1;
            consider(r, c - 1, best);
            consider(r - 1, c, best);
            if (conn == Connectivity::Eight) {
                consider(r - 1, c - 1, best);
                consider(r - 1, c + 1, best);
            }
            provisional[static_cast<std::size_t>(r) * img.width + c] =
                best >= 0 ? best : merge.fresh();
        }
    }

    std::vector<int> final_of_root;
    std::vector<int> roots;
    for (std::size_t i = 0; i < provisional.size(); ++i) {
        if (provisional[i] < 0) continue;
        int root = merge.find(provisional[i]);
        if (root >= static_cast<int>(final_of_root.size()))
            final_of_root.resize(static_cast<std::size_t>(root) + 1, 0);
        if (final_of_root[static_cast<std::size_t>(root)] == 0) {
            roots.push_back(root);
            final_of_root[static_cast<std::size_t>(root)] = static_cast<int>(roots.size());
        }
        out.data[i] = final_of_root[static_cast<std::size_t>(root)];
    }
    out.label_count = static_cast<int>(roots.size());
    return out;
}

/// Mask of the label with the most pixels; ties go to the smallest label.
inline BinaryImage largest_component(const LabelImage& labels) {
    if (labels.label_count < 1) throw NoComponentError("no foreground components");
    std::vector<std::size_t> counts(static_cast<std::size_t>(labels.label_count) + 1, 0);
    for (int v : labels.data)
        if (v > 0) ++counts[static_cast<std::size_t>(v)];
    int best = 1;
    for (int l = 2; l <= labels.label_count; ++l)
        if (counts[static_cast<std::size_t>(l)] > counts[static_cast<std::size_t>(best)]) best = l;

    BinaryImage mask(labels.width, labels.height);
    for (std::size_t i = 0; i < labels.data.size(); ++i)
        mask.data[i] = labels.data[i] == best ? 1 : 0;
    return mask;
}

/// Foreground coordinate means, returned in 1-based coordinates.
inline Centroid centroid(const BinaryImage& mask) {
    double sx = 0.0, sy = 0.0;
    std::size_t count = 0;
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            if (!mask.at(r, c)) continue;
            sx += c + 1;
            sy += r + 1;
            ++count;
        }
    }
    if (count == 0) throw NoComponentError("empty mask has no centroid");
    return Centroid{sx / static_cast<double>(count), sy / static_cast<double>(count)};
}

/// Ellipse axes from the component extents through the centroid: semi-minor
/// is the reach to the rightmost foreground pixel on the centroid's row,
/// semi-major the reach to the topmost foreground pixel in the centroid's
/// column. Both are rounded to whole pixels and clamped to >= 1.
inline EllipseSpec estimate_axes(const BinaryImage& mask, const Centroid& c) {
    const int row = static_cast<int>(round_half_away(c.y)) - 1;
    const int col = static_cast<int>(round_half_away(c.x)) - 1;
    if (!mask.in_bounds(row, col))
        throw DegenerateMaskError("centroid rounds outside the image");

    int rightmost = -1;
    for (int j = mask.width - 1; j >= 0; --j) {
        if (mask.at(row, j)) {
            rightmost = j;
            break;
        }
    }
    if (rightmost < 0)
        throw DegenerateMaskError("no foreground on the centroid row");

    int topmost = -1;
    for (int i = 0; i < mask.height; ++i) {
        if (mask.at(i, col)) {
            topmost = i;
            break;
        }
    }
    if (topmost < 0)
        throw DegenerateMaskError("no foreground in the centroid column");

    int semi_minor = static_cast<int>(round_half_away((rightmost + 1) - c.x));
    int semi_major = static_cast<int>(round_half_away(c.y - (topmost + 1)));
    return EllipseSpec{c, std::max(1, semi_minor), std::max(1, semi_major)};
}

namespace detail {

// Midpoint ellipse boundary about an integer center (0-based), four-way
// symmetric, clipped to the image bounds.
template <typename Plot>
void midpoint_ellipse(int cx, int cy, int a, int b, Plot&& plot) {
    auto plot4 = [&](int x, int y) {
        plot(cx + x, cy + y);
        plot(cx - x, cy + y);
        plot(cx + x, cy - y);
        plot(cx - x, cy - y);
    };

    const double a2 = static_cast<double>(a) * a;
    const double b2 = static_cast<double>(b) * b;

    double x = 0, y = b;
    double dx = 0, dy = 2.0 * a2 * y;
    double d1 = b2 - a2 * b + 0.25 * a2;
    while (dx < dy) {
        plot4(static_cast<int>(x), static_cast<int>(y));
        if (d1 < 0) {
            x += 1;
            dx += 2.0 * b2;
            d1 += dx + b2;
        } else {
            x += 1;
            y -= 1;
            dx += 2.0 * b2;
            dy -= 2.0 * a2;
            d1 += dx - dy + b2;
        }
    }
    double d2 = b2 * (x + 0.5) * (x + 0.5) + a2 * (y - 1) * (y - 1) - a2 * b2;
    while (y >= 0) {
        plot4(static_cast<int>(x), static_cast<int>(y));
        if (d2 > 0) {
            y -= 1;
            dy -= 2.0 * a2;
            d2 += a2 - dy;
        } else {
            y -= 1;
            x += 1;
            dx += 2.0 * b2;
            dy -= 2.0 * a2;
            d2 += dx - dy + a2;
        }
    }
}

} // namespace detail

/// Filled ellipse mask: the midpoint-rasterized boundary plus every pixel
/// whose center satisfies ((x-cx)/a)^2 + ((y-cy)/b)^2 <= 1. The rasterization
/// is centered on the rounded centroid; out-of-bounds pixels are clipped.
inline BinaryImage ellipse_mask(const EllipseSpec& spec, int width, int height) {
    BinaryImage mask(width, height);
    const int cx = static_cast<int>(round_half_away(spec.center.x)) - 1;
    const int cy = static_cast<int>(round_half_away(spec.center.y)) - 1;
    const int a = spec.semi_minor;
    const int b = spec.semi_major;

    const double inv_a2 = 1.0 / (static_cast<double>(a) * a);
    const double inv_b2 = 1.0 / (static_cast<double>(b) * b);
    const int r0 = std::max(0, cy - b), r1 = std::min(height - 1, cy + b);
    const int c0 = std::max(0, cx - a), c1 = std::min(width - 1, cx + a);
    for (int r = r0; r <= r1; ++r) {
        const double fy = static_cast<double>(r - cy) * (r - cy) * inv_b2;
        for (int c = c0; c <= c1; ++c) {
            const double fx = static_cast<double>(c - cx) * (c - cx) * inv_a2;
            if (fx + fy <= 1.0) mask.at(r, c) = 1;
        }
    }
    detail::midpoint_ellipse(cx, cy, a, b, [&](int x, int y) {
        if (mask.in_bounds(y, x)) mask.at(y, x) = 1;
    });
    return mask;
}

namespace detail {

// Bilinear sample of a real-valued grid at (row, col); callers guarantee
// 0 <= row <= h-1 and 0 <= col <= w-1.
inline double bilinear(const std::vector<double>& grid, int w, double row, double col) {
    const int r0 = static_cast<int>(std::floor(row));
    const int c0 = static_cast<int>(std::floor(col));
    const double fr = row - r0;
    const double fc = col - c0;
    const int r1 = fr > 0.0 ? r0 + 1 : r0;
    const int c1 = fc > 0.0 ? c0 + 1 : c0;
    const double v00 = grid[static_cast<std::size_t>(r0) * w + c0];
    const double v01 = grid[static_cast<std::size_t>(r0) * w + c1];
    const double v10 = grid[static_cast<std::size_t>(r1) * w + c0];
    const double v11 = grid[static_cast<std::size_t>(r1) * w + c1];
    return v00 * (1 - fr) * (1 - fc) + v01 * (1 - fr) * fc + v10 * fr * (1 - fc) + v11 * fr * fc;
}

} // namespace detail

/// Keeps gray values inside the ellipse (everything else 0), extracts the
/// ellipse's bounding box and resamples it to 112x92 with bilinear
/// interpolation, rounding half away from zero back to 8 bits.
inline GrayImage8 crop_and_normalize(const GrayImage8& gray, const EllipseSpec& spec) {
    const BinaryImage mask = ellipse_mask(spec, gray.width, gray.height);
    const int cx = static_cast<int>(round_half_away(spec.center.x)) - 1;
    const int cy = static_cast<int>(round_half_away(spec.center.y)) - 1;
    const int r0 = std::max(0, cy - spec.semi_major);
    const int r1 = std::min(gray.height - 1, cy + spec.semi_major);
    const int c0 = std::max(0, cx - spec.semi_minor);
    const int c1 = std::min(gray.width - 1, cx + spec.semi_minor);
    if (r0 > r1 || c0 > c1)
        throw DegenerateMaskError("ellipse bounding box lies outside the image");

    const int bh = r1 - r0 + 1;
    const int bw = c1 - c0 + 1;
    std::vector<double> box(static_cast<std::size_t>(bh) * bw, 0.0);
    for (int r = 0; r < bh; ++r)
        for (int c = 0; c < bw; ++c)
            if (mask.at(r0 + r, c0 + c))
                box[static_cast<std::size_t>(r) * bw + c] = gray.at(r0 + r, c0 + c);

    GrayImage8 out(kFaceWidth, kFaceHeight);
    const double row_scale = kFaceHeight > 1 ? static_cast<double>(bh - 1) / (kFaceHeight - 1) : 0.0;
    const double col_scale = kFaceWidth > 1 ? static_cast<double>(bw - 1) / (kFaceWidth - 1) : 0.0;
    for (int r = 0; r < kFaceHeight; ++r) {
        for (int c = 0; c < kFaceWidth; ++c) {
            double v = detail::bilinear(box, bw, r * row_scale, c * col_scale);
            out.at(r, c) = clamp_u8(v);
        }
    }
    return out;
}

} // namespace tfrs
