#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "tfrs/errors.hpp"
#include "tfrs/raster.hpp"

namespace tfrs {

/// One-level wavelet quadrants of an even-dimension image. Naming: hl is the
/// top-right quadrant (the paper's A band), lh bottom-left (B), hh
/// bottom-right (C).
struct SubbandSet {
    GrayImageF ll, hl, lh, hh;
};

/// Scalar fusion weights for the confidence matrix; alpha + beta = 1.
struct FusionWeights {
    double alpha = 1.0;
    double beta = 0.0;
};

struct HaarPair {
    std::vector<double> means;
    std::vector<double> details;
};

/// Unnormalized Haar step: pairwise means and half-differences, so
/// v[2k] = mean + detail and v[2k+1] = mean - detail.
inline HaarPair haar1d_step(const std::vector<double>& v) {
    if (v.size() < 2 || v.size() % 2 != 0)
        throw OddLengthError("haar step needs a non-empty even-length vector");
    HaarPair out;
    out.means.resize(v.size() / 2);
    out.details.resize(v.size() / 2);
    for (std::size_t k = 0; k < out.means.size(); ++k) {
        out.means[k] = (v[2 * k] + v[2 * k + 1]) / 2.0;
        out.details[k] = (v[2 * k] - v[2 * k + 1]) / 2.0;
    }
    return out;
}

inline std::vector<double> inverse_haar1d_step(const std::vector<double>& means,
                                               const std::vector<double>& details) {
    if (means.size() != details.size())
        throw SizeError("mean/detail halves differ in length");
    std::vector<double> v(means.size() * 2);
    for (std::size_t k = 0; k < means.size(); ++k) {
        v[2 * k] = means[k] + details[k];
        v[2 * k + 1] = means[k] - details[k];
    }
    return v;
}

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace detail

/// Full 1D decomposition of a power-of-two-length vector: the overall mean
/// followed by detail coefficients, coarsest level first.
inline std::vector<double> haar1d_full(const std::vector<double>& v) {
    if (!detail::is_power_of_two(v.size()))
        throw SizeError("full haar decomposition needs a power-of-two length");
    std::vector<double> w = v;
    for (std::size_t n = v.size(); n > 1; n /= 2) {
        HaarPair pair = haar1d_step(std::vector<double>(w.begin(), w.begin() + n));
        std::copy(pair.means.begin(), pair.means.end(), w.begin());
        std::copy(pair.details.begin(), pair.details.end(), w.begin() + n / 2);
    }
    return w;
}

inline std::vector<double> inverse_haar1d_full(const std::vector<double>& coeffs) {
    if (!detail::is_power_of_two(coeffs.size()))
        throw SizeError("inverse full haar needs a power-of-two length");
    std::vector<double> w = coeffs;
    for (std::size_t n = 1; n < w.size(); n *= 2) {
        std::vector<double> means(w.begin(), w.begin() + n);
        std::vector<double> details(w.begin() + n, w.begin() + 2 * n);
        std::vector<double> v = inverse_haar1d_step(means, details);
        std::copy(v.begin(), v.end(), w.begin());
    }
    return w;
}

namespace detail {

inline std::vector<double> get_row(const GrayImageF& img, int r) {
    return std::vector<double>(img.data.begin() + static_cast<std::ptrdiff_t>(r) * img.width,
                               img.data.begin() + static_cast<std::ptrdiff_t>(r + 1) * img.width);
}

inline std::vector<double> get_col(const GrayImageF& img, int c) {
    std::vector<double> v(static_cast<std::size_t>(img.height));
    for (int r = 0; r < img.height; ++r) v[static_cast<std::size_t>(r)] = img.at(r, c);
    return v;
}

inline void set_row(GrayImageF& img, int r, const std::vector<double>& v) {
    std::copy(v.begin(), v.end(), img.data.begin() + static_cast<std::ptrdiff_t>(r) * img.width);
}

inline void set_col(GrayImageF& img, int c, const std::vector<double>& v) {
    for (int r = 0; r < img.height; ++r) img.at(r, c) = v[static_cast<std::size_t>(r)];
}

} // namespace detail

/// One 2D level: a Haar step along every row (means left, details right),
/// then along every column of the result. Requires even dimensions only.
inline SubbandSet dwt2_single(const GrayImageF& img) {
    if (img.width < 2 || img.height < 2 || img.width % 2 != 0 || img.height % 2 != 0)
        throw SizeError("single-level 2D transform needs even dimensions >= 2");

    GrayImageF tmp(img.width, img.height);
    for (int r = 0; r < img.height; ++r) {
        HaarPair p = haar1d_step(detail::get_row(img, r));
        std::vector<double> row(p.means);
        row.insert(row.end(), p.details.begin(), p.details.end());
        detail::set_row(tmp, r, row);
    }
    for (int c = 0; c < img.width; ++c) {
        HaarPair p = haar1d_step(detail::get_col(tmp, c));
        std::vector<double> col(p.means);
        col.insert(col.end(), p.details.begin(), p.details.end());
        detail::set_col(tmp, c, col);
    }

    const int hw = img.width / 2, hh = img.height / 2;
    SubbandSet s{GrayImageF(hw, hh), GrayImageF(hw, hh), GrayImageF(hw, hh), GrayImageF(hw, hh)};
    for (int r = 0; r < hh; ++r) {
        for (int c = 0; c < hw; ++c) {
            s.ll.at(r, c) = tmp.at(r, c);
            s.hl.at(r, c) = tmp.at(r, c + hw);
            s.lh.at(r, c) = tmp.at(r + hh, c);
            s.hh.at(r, c) = tmp.at(r + hh, c + hw);
        }
    }
    return s;
}

inline GrayImageF inverse_dwt2_single(const SubbandSet& s) {
    const int hw = s.ll.width, hh = s.ll.height;
    GrayImageF tmp(hw * 2, hh * 2);
    for (int r = 0; r < hh; ++r) {
        for (int c = 0; c < hw; ++c) {
            tmp.at(r, c) = s.ll.at(r, c);
            tmp.at(r, c + hw) = s.hl.at(r, c);
            tmp.at(r + hh, c) = s.lh.at(r, c);
            tmp.at(r + hh, c + hw) = s.hh.at(r, c);
        }
    }
    for (int c = 0; c < tmp.width; ++c) {
        std::vector<double> col = detail::get_col(tmp, c);
        std::vector<double> means(col.begin(), col.begin() + hh);
        std::vector<double> details(col.begin() + hh, col.end());
        detail::set_col(tmp, c, inverse_haar1d_step(means, details));
    }
    for (int r = 0; r < tmp.height; ++r) {
        std::vector<double> row = detail::get_row(tmp, r);
        std::vector<double> means(row.begin(), row.begin() + hw);
        std::vector<double> details(row.begin() + hw, row.end());
        detail::set_row(tmp, r, inverse_haar1d_step(means, details));
    }
    return tmp;
}

/// Full standard decomposition: haar1d_full over each row, then each column.
/// Both dimensions must be powers of two.
inline GrayImageF standard_decomposition(const GrayImageF& img) {
    if (!detail::is_power_of_two(static_cast<std::size_t>(img.width)) ||
        !detail::is_power_of_two(static_cast<std::size_t>(img.height)))
        throw SizeError("standard decomposition needs power-of-two dimensions");
    GrayImageF out = img;
    if (img.width > 1)
        for (int r = 0; r < out.height; ++r) detail::set_row(out, r, haar1d_full(detail::get_row(out, r)));
    if (img.height > 1)
        for (int c = 0; c < out.width; ++c) detail::set_col(out, c, haar1d_full(detail::get_col(out, c)));
    return out;
}

inline GrayImageF inverse_standard_decomposition(const GrayImageF& img) {
    if (!detail::is_power_of_two(static_cast<std::size_t>(img.width)) ||
        !detail::is_power_of_two(static_cast<std::size_t>(img.height)))
        throw SizeError("inverse standard decomposition needs power-of-two dimensions");
    GrayImageF out = img;
    if (img.height > 1)
        for (int c = 0; c < out.width; ++c)
            detail::set_col(out, c, inverse_haar1d_full(detail::get_col(out, c)));
    if (img.width > 1)
        for (int r = 0; r < out.height; ++r)
            detail::set_row(out, r, inverse_haar1d_full(detail::get_row(out, r)));
    return out;
}

/// Pixel-wise average of the three detail bands: D = (A + B + C) / 3.
inline GrayImageF average_detail(const SubbandSet& s) {
    GrayImageF d(s.hl.width, s.hl.height);
    for (std::size_t i = 0; i < d.data.size(); ++i)
        d.data[i] = (s.hl.data[i] + s.lh.data[i] + s.hh.data[i]) / 3.0;
    return d;
}

/// Total confidence matrix T = alpha * L + beta * D.
inline GrayImageF confidence_matrix(const GrayImageF& ll, const GrayImageF& d, FusionWeights w) {
    if (ll.width != d.width || ll.height != d.height)
        throw SizeError("approximation and detail bands differ in size");
    GrayImageF t(ll.width, ll.height);
    for (std::size_t i = 0; i < t.data.size(); ++i)
        t.data[i] = w.alpha * ll.data[i] + w.beta * d.data[i];
    return t;
}

/// The eleven weight rows of the experiment sweep, (1.0, 0.0) .. (0.0, 1.0).
inline std::vector<FusionWeights> sweep_weights() {
    std::vector<FusionWeights> out;
    out.reserve(11);
    for (int i = 0; i <= 10; ++i) {
        const double beta = 0.1 * i;
        out.push_back(FusionWeights{1.0 - beta, beta});
    }
    return out;
}

/// Rows concatenated top-to-bottom into a feature vector.
inline std::vector<double> flatten(const GrayImageF& t) { return t.data; }

} // namespace tfrs
