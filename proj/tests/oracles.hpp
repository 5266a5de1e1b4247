#pragma once

// Independent reference implementations used to check the library: a BFS
// flood-fill labeler, a classical (pivot-driven) Jacobi eigensolver applied
// to the full covariance, a midpoint circle rasterizer, a literal chained
// tanh forward pass, and central-difference MLP gradients. None of these
// share code with the implementations they verify.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <vector>

#include "tfrs/tfrs.hpp"

namespace oracle {

// BFS flood fill, components numbered 1..K by first row-major appearance.
inline tfrs::LabelImage flood_fill_label(const tfrs::BinaryImage& img, tfrs::Connectivity conn) {
    tfrs::LabelImage out(img.width, img.height);
    int next = 0;
    std::vector<std::pair<int, int>> offsets = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    if (conn == tfrs::Connectivity::Eight) {
        offsets.push_back({-1, -1});
        offsets.push_back({-1, 1});
        offsets.push_back({1, -1});
        offsets.push_back({1, 1});
    }
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            if (!img.at(r, c) || out.at(r, c) != 0) continue;
            ++next;
            std::queue<std::pair<int, int>> frontier;
            frontier.push({r, c});
            out.at(r, c) = next;
            while (!frontier.empty()) {
                auto [cr, cc] = frontier.front();
                frontier.pop();
                for (auto [dr, dc] : offsets) {
                    const int nr = cr + dr, nc = cc + dc;
                    if (!img.in_bounds(nr, nc) || !img.at(nr, nc) || out.at(nr, nc) != 0) continue;
                    out.at(nr, nc) = next;
                    frontier.push({nr, nc});
                }
            }
        }
    }
    out.label_count = next;
    return out;
}

// Classical Jacobi: repeatedly zero the largest off-diagonal element.
// Returns eigenvalues (descending) and row-major eigenvectors.
struct EigenPairs {
    std::vector<double> values;
    std::vector<double> vectors;
};

inline EigenPairs symmetric_eigen_reference(std::vector<double> a, int n) {
    auto at = [n](std::vector<double>& m, int r, int c) -> double& {
        return m[static_cast<std::size_t>(r) * n + c];
    };
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) at(v, i, i) = 1.0;

    for (int iter = 0; iter < 200 * n * n; ++iter) {
        int p = 0, q = 1;
        double biggest = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c = r + 1; c < n; ++c)
                if (std::abs(at(a, r, c)) > biggest) {
                    biggest = std::abs(at(a, r, c));
                    p = r;
                    q = c;
                }
        if (n < 2 || biggest < 1e-15) break;

        const double app = at(a, p, p), aqq = at(a, q, q), apq = at(a, p, q);
        const double phi = 0.5 * std::atan2(2.0 * apq, aqq - app);
        const double c = std::cos(phi), s = std::sin(phi);
        for (int i = 0; i < n; ++i) {
            const double aip = at(a, i, p), aiq = at(a, i, q);
            at(a, i, p) = c * aip - s * aiq;
            at(a, i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
            const double api = at(a, p, i), aqi = at(a, q, i);
            at(a, p, i) = c * api - s * aqi;
            at(a, q, i) = s * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
            const double vip = at(v, i, p), viq = at(v, i, q);
            at(v, i, p) = c * vip - s * viq;
            at(v, i, q) = s * vip + c * viq;
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return a[static_cast<std::size_t>(x) * n + x] > a[static_cast<std::size_t>(y) * n + y];
    });
    EigenPairs out;
    out.values.resize(static_cast<std::size_t>(n));
    out.vectors.resize(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r) {
        out.values[static_cast<std::size_t>(r)] = a[static_cast<std::size_t>(order[static_cast<std::size_t>(r)]) * n +
                                                    order[static_cast<std::size_t>(r)]];
        for (int i = 0; i < n; ++i)
            out.vectors[static_cast<std::size_t>(r) * n + i] =
                v[static_cast<std::size_t>(i) * n + order[static_cast<std::size_t>(r)]];
    }
    return out;
}

// Direct NxN covariance eigendecomposition (divisor M, matching fit_pca).
inline EigenPairs covariance_eigen_reference(const tfrs::FeatureMatrix& train) {
    const int m = train.rows, n = train.cols;
    std::vector<double> mean(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) mean[static_cast<std::size_t>(j)] += train.row(i)[static_cast<std::size_t>(j)];
    for (double& x : mean) x /= m;
    std::vector<double> cov(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int r = 0; r < n; ++r) {
            const double xr = train.row(i)[static_cast<std::size_t>(r)] - mean[static_cast<std::size_t>(r)];
            for (int c = 0; c < n; ++c) {
                const double xc = train.row(i)[static_cast<std::size_t>(c)] - mean[static_cast<std::size_t>(c)];
                cov[static_cast<std::size_t>(r) * n + c] += xr * xc / m;
            }
        }
    }
    return symmetric_eigen_reference(std::move(cov), n);
}

// Standard midpoint circle boundary (integer center/radius).
inline std::vector<std::pair<int, int>> midpoint_circle(int cx, int cy, int radius) {
    std::vector<std::pair<int, int>> pts;
    int x = 0, y = radius;
    int d = 1 - radius;
    auto plot8 = [&](int px, int py) {
        pts.push_back({cx + px, cy + py});
        pts.push_back({cx - px, cy + py});
        pts.push_back({cx + px, cy - py});
        pts.push_back({cx - px, cy - py});
        pts.push_back({cx + py, cy + px});
        pts.push_back({cx - py, cy + px});
        pts.push_back({cx + py, cy - px});
        pts.push_back({cx - py, cy - px});
    };
    while (x <= y) {
        plot8(x, y);
        if (d < 0) {
            d += 2 * x + 3;
        } else {
            d += 2 * (x - y) + 5;
            --y;
        }
        ++x;
    }
    return pts;
}

// Literal restatement of the forward rule: four tanh(Wa + b) stages.
inline std::vector<double> chained_tanh_reference(const tfrs::MlpModel& model,
                                                  const std::vector<double>& x) {
    std::vector<double> a = x;
    for (int l = 0; l < tfrs::kMlpTrainableLayers; ++l) {
        const int n_in = model.config.layer_sizes[static_cast<std::size_t>(l)];
        const int n_out = model.config.layer_sizes[static_cast<std::size_t>(l) + 1];
        std::vector<double> next(static_cast<std::size_t>(n_out));
        for (int o = 0; o < n_out; ++o) {
            double z = model.biases[static_cast<std::size_t>(l)][static_cast<std::size_t>(o)];
            for (int i = 0; i < n_in; ++i)
                z += model.weights[static_cast<std::size_t>(l)][static_cast<std::size_t>(o) * n_in + i] *
                     a[static_cast<std::size_t>(i)];
            next[static_cast<std::size_t>(o)] = std::tanh(z);
        }
        a = std::move(next);
    }
    return a;
}

// Central-difference gradient of the batch loss with respect to every
// weight and bias.
inline tfrs::MlpGradient finite_difference_gradient(tfrs::MlpModel model,
                                                    const std::vector<std::vector<double>>& inputs,
                                                    const std::vector<std::vector<double>>& targets,
                                                    double eps = 1e-5) {
    auto loss_of = [&](const tfrs::MlpModel& m) {
        double loss = 0.0;
        for (std::size_t e = 0; e < inputs.size(); ++e) {
            const std::vector<double> out = chained_tanh_reference(m, inputs[e]);
            for (std::size_t o = 0; o < out.size(); ++o)
                loss += 0.5 * (targets[e][o] - out[o]) * (targets[e][o] - out[o]);
        }
        return loss;
    };

    tfrs::MlpGradient g;
    g.weights.resize(tfrs::kMlpTrainableLayers);
    g.biases.resize(tfrs::kMlpTrainableLayers);
    for (int l = 0; l < tfrs::kMlpTrainableLayers; ++l) {
        g.weights[static_cast<std::size_t>(l)].resize(model.weights[static_cast<std::size_t>(l)].size());
        for (std::size_t i = 0; i < model.weights[static_cast<std::size_t>(l)].size(); ++i) {
            double& w = model.weights[static_cast<std::size_t>(l)][i];
            const double keep = w;
            w = keep + eps;
            const double hi = loss_of(model);
            w = keep - eps;
            const double lo = loss_of(model);
            w = keep;
            g.weights[static_cast<std::size_t>(l)][i] = (hi - lo) / (2.0 * eps);
        }
        g.biases[static_cast<std::size_t>(l)].resize(model.biases[static_cast<std::size_t>(l)].size());
        for (std::size_t i = 0; i < model.biases[static_cast<std::size_t>(l)].size(); ++i) {
            double& b = model.biases[static_cast<std::size_t>(l)][i];
            const double keep = b;
            b = keep + eps;
            const double hi = loss_of(model);
            b = keep - eps;
            const double lo = loss_of(model);
            b = keep;
            g.biases[static_cast<std::size_t>(l)][i] = (hi - lo) / (2.0 * eps);
        }
    }
    g.loss = loss_of(model);
    return g;
}

inline tfrs::GrayImage8 random_gray(tfrs::Rng& rng, int w, int h) {
    tfrs::GrayImage8 img(w, h);
    for (auto& p : img.data) p = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    return img;
}

inline tfrs::RgbImage random_rgb(tfrs::Rng& rng, int w, int h) {
    tfrs::RgbImage img(w, h);
    for (auto& p : img.data) p = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    return img;
}

inline tfrs::BinaryImage random_binary(tfrs::Rng& rng, int w, int h, double density) {
    tfrs::BinaryImage img(w, h);
    for (auto& p : img.data) p = rng.uniform() < density ? 1 : 0;
    return img;
}

inline tfrs::GrayImageF random_real_image(tfrs::Rng& rng, int w, int h) {
    tfrs::GrayImageF img(w, h);
    for (auto& p : img.data) p = rng.uniform(-100.0, 255.0);
    return img;
}

// The Fig. 4a binary grid (8x8, three components of 6, 5, and 9 pixels).
inline tfrs::BinaryImage figure4_grid() {
    const std::array<std::array<int, 8>, 8> g = {{{0, 0, 0, 0, 0, 0, 0, 0},
                                                  {0, 1, 1, 0, 0, 1, 1, 1},
                                                  {0, 1, 1, 0, 0, 0, 1, 1},
                                                  {0, 1, 1, 0, 0, 0, 0, 0},
                                                  {0, 0, 0, 0, 0, 0, 0, 0},
                                                  {0, 0, 0, 1, 1, 1, 0, 0},
                                                  {0, 0, 0, 1, 1, 1, 0, 0},
                                                  {0, 0, 0, 1, 1, 1, 0, 0}}};
    tfrs::BinaryImage img(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) img.at(r, c) = static_cast<std::uint8_t>(g[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    return img;
}

} // namespace oracle
