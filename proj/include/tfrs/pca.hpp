#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "tfrs/errors.hpp"

namespace tfrs {

/// M stacked feature rows with per-row class labels.
struct FeatureMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data; // row-major
    std::vector<int> labels;

    std::span<const double> row(int i) const {
        return std::span<const double>(data).subspan(static_cast<std::size_t>(i) * cols,
                                                     static_cast<std::size_t>(cols));
    }
    std::span<double> row(int i) {
        return std::span<double>(data).subspan(static_cast<std::size_t>(i) * cols,
                                               static_cast<std::size_t>(cols));
    }
};

/// Odd rows (1-based: 1, 3, 5, ...) go to training, even rows to testing.
inline std::pair<FeatureMatrix, FeatureMatrix> split_train_test(const FeatureMatrix& m) {
    if (m.rows < 2) throw SizeError("need at least two rows to split");
    FeatureMatrix train, test;
    train.cols = test.cols = m.cols;
    for (int i = 0; i < m.rows; ++i) {
        FeatureMatrix& part = (i % 2 == 0) ? train : test;
        auto r = m.row(i);
        part.data.insert(part.data.end(), r.begin(), r.end());
        part.labels.push_back(m.labels[static_cast<std::size_t>(i)]);
        ++part.rows;
    }
    return {std::move(train), std::move(test)};
}

/// Mean vector plus the top-k unit eigenvectors of the training covariance,
/// descending eigenvalue order.
struct EigenModel {
    int k = 0;
    int n = 0;
    std::vector<double> mean;        // n
    std::vector<double> eigenvalues; // k, descending, >= 0
    std::vector<double> components;  // k x n row-major, orthonormal rows
    bool degenerate_spectrum = false;

    std::span<const double> component(int i) const {
        return std::span<const double>(components).subspan(static_cast<std::size_t>(i) * n,
                                                           static_cast<std::size_t>(n));
    }
};

namespace detail {

struct SymmetricEigen {
    std::vector<double> values;  // descending
    std::vector<double> vectors; // row-major, vectors[i*n+j] = coord j of eigenvector i
};

/// Cyclic Jacobi sweeps for a dense symmetric matrix. Converged when the
/// off-diagonal Frobenius norm drops to rel_tol times its initial value.
inline SymmetricEigen jacobi_symmetric_eigen(std::vector<double> a, int n,
                                             double rel_tol = 1e-12, int max_sweeps = 100) {
    auto idx = [n](int r, int c) { return static_cast<std::size_t>(r) * n + c; };
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[idx(i, i)] = 1.0;

    auto off_norm = [&] {
        double s = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (r != c) s += a[idx(r, c)] * a[idx(r, c)];
        return std::sqrt(s);
    };

    const double off0 = off_norm();
    if (off0 > 0.0) {
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            for (int p = 0; p < n - 1; ++p) {
                for (int q = p + 1; q < n; ++q) {
                    const double apq = a[idx(p, q)];
                    if (apq == 0.0) continue;
                    const double theta = (a[idx(q, q)] - a[idx(p, p)]) / (2.0 * apq);
                    double t;
                    if (std::abs(theta) > 1e150) {
                        t = 1.0 / (2.0 * theta);
                    } else {
                        t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                        if (theta < 0.0) t = -t;
                    }
                    const double c = 1.0 / std::sqrt(t * t + 1.0);
                    const double s = t * c;
                    const double tau = s / (1.0 + c);

                    a[idx(p, p)] -= t * apq;
                    a[idx(q, q)] += t * apq;
                    a[idx(p, q)] = 0.0;
                    a[idx(q, p)] = 0.0;
                    for (int i = 0; i < n; ++i) {
                        if (i == p || i == q) continue;
                        const double aip = a[idx(i, p)];
                        const double aiq = a[idx(i, q)];
                        a[idx(i, p)] = aip - s * (aiq + tau * aip);
                        a[idx(p, i)] = a[idx(i, p)];
                        a[idx(i, q)] = aiq + s * (aip - tau * aiq);
                        a[idx(q, i)] = a[idx(i, q)];
                    }
                    for (int i = 0; i < n; ++i) {
                        const double vip = v[idx(i, p)];
                        const double viq = v[idx(i, q)];
                        v[idx(i, p)] = vip - s * (viq + tau * vip);
                        v[idx(i, q)] = viq + s * (vip - tau * viq);
                    }
                }
            }
            if (off_norm() <= rel_tol * off0) break;
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return a[idx(x, x)] > a[idx(y, y)]; });

    SymmetricEigen out;
    out.values.resize(static_cast<std::size_t>(n));
    out.vectors.resize(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r) {
        out.values[static_cast<std::size_t>(r)] = a[idx(order[static_cast<std::size_t>(r)],
                                                        order[static_cast<std::size_t>(r)])];
        for (int i = 0; i < n; ++i)
            out.vectors[idx(r, i)] = v[idx(i, order[static_cast<std::size_t>(r)])];
    }
    return out;
}

// Largest-magnitude entry positive; first index wins magnitude ties.
inline void fix_component_sign(std::span<double> comp) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < comp.size(); ++j)
        if (std::abs(comp[j]) > std::abs(comp[best])) best = j;
    if (comp[best] < 0.0)
        for (double& x : comp) x = -x;
}

} // namespace detail

/// Eigenface PCA via the MxM Gram matrix of the centered training rows.
/// Gram eigenvectors are mapped back to feature space and unit-normalized.
/// Directions with no variance left are filled from a deterministic
/// identity-seeded orthonormal basis and flag the model as degenerate.
inline EigenModel fit_pca(const FeatureMatrix& train, int k) {
    const int m = train.rows;
    const int n = train.cols;
    if (m < 1 || n < 1) throw SizeError("empty training matrix");
    if (k < 1 || k > m) throw RankError("component count must be in [1, rows]");

    EigenModel model;
    model.k = k;
    model.n = n;
    model.mean.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < m; ++i) {
        auto r = train.row(i);
        for (int j = 0; j < n; ++j) model.mean[static_cast<std::size_t>(j)] += r[static_cast<std::size_t>(j)];
    }
    for (double& x : model.mean) x /= m;

    std::vector<double> centered(static_cast<std::size_t>(m) * n);
    for (int i = 0; i < m; ++i) {
        auto r = train.row(i);
        for (int j = 0; j < n; ++j)
            centered[static_cast<std::size_t>(i) * n + j] =
                r[static_cast<std::size_t>(j)] - model.mean[static_cast<std::size_t>(j)];
    }

    std::vector<double> gram(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            double dot = 0.0;
            const double* ri = centered.data() + static_cast<std::size_t>(i) * n;
            const double* rj = centered.data() + static_cast<std::size_t>(j) * n;
            for (int t = 0; t < n; ++t) dot += ri[t] * rj[t];
            gram[static_cast<std::size_t>(i) * m + j] = dot / m;
            gram[static_cast<std::size_t>(j) * m + i] = dot / m;
        }
    }

    detail::SymmetricEigen eig = detail::jacobi_symmetric_eigen(std::move(gram), m);

    model.eigenvalues.resize(static_cast<std::size_t>(k));
    model.components.assign(static_cast<std::size_t>(k) * n, 0.0);
    const double scale = std::sqrt(std::max(eig.values[0], 0.0) * m);
    const double norm_floor = 1e-10 * std::max(scale, 1.0);

    std::vector<int> degenerate_slots;
    for (int l = 0; l < k; ++l) {
        model.eigenvalues[static_cast<std::size_t>(l)] = std::max(eig.values[static_cast<std::size_t>(l)], 0.0);
        double* u = model.components.data() + static_cast<std::size_t>(l) * n;
        for (int i = 0; i < m; ++i) {
            const double w = eig.vectors[static_cast<std::size_t>(l) * m + i];
            if (w == 0.0) continue;
            const double* ri = centered.data() + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) u[j] += w * ri[j];
        }
        double norm = std::sqrt(std::inner_product(u, u + n, u, 0.0));
        if (norm <= norm_floor) {
            degenerate_slots.push_back(l);
            continue;
        }
        for (int j = 0; j < n; ++j) u[j] /= norm;
        detail::fix_component_sign(std::span<double>(u, static_cast<std::size_t>(n)));
    }

    // Identity-seeded orthonormal fill for zero-variance directions.
    if (!degenerate_slots.empty()) {
        model.degenerate_spectrum = true;
        int seed_axis = 0;
        for (int slot : degenerate_slots) {
            double* u = model.components.data() + static_cast<std::size_t>(slot) * n;
            for (; seed_axis < n; ++seed_axis) {
                std::vector<double> cand(static_cast<std::size_t>(n), 0.0);
                cand[static_cast<std::size_t>(seed_axis)] = 1.0;
                for (int l = 0; l < k; ++l) {
                    if (l == slot) continue;
                    const double* c = model.components.data() + static_cast<std::size_t>(l) * n;
                    double d = 0.0;
                    for (int j = 0; j < n; ++j) d += c[j] * cand[static_cast<std::size_t>(j)];
                    if (d == 0.0) continue;
                    for (int j = 0; j < n; ++j) cand[static_cast<std::size_t>(j)] -= d * c[j];
                }
                const double norm =
                    std::sqrt(std::inner_product(cand.begin(), cand.end(), cand.begin(), 0.0));
                if (norm > 0.5) {
                    for (int j = 0; j < n; ++j) u[j] = cand[static_cast<std::size_t>(j)] / norm;
                    detail::fix_component_sign(std::span<double>(u, static_cast<std::size_t>(n)));
                    ++seed_axis;
                    break;
                }
            }
        }
    }
    return model;
}

/// Projection onto the eigenspace: components * (x - mean).
inline std::vector<double> project(const EigenModel& model, std::span<const double> x) {
    if (static_cast<int>(x.size()) != model.n)
        throw SizeError("vector length does not match the model dimension");
    std::vector<double> y(static_cast<std::size_t>(model.k), 0.0);
    for (int l = 0; l < model.k; ++l) {
        const double* c = model.components.data() + static_cast<std::size_t>(l) * model.n;
        double dot = 0.0;
        for (int j = 0; j < model.n; ++j)
            dot += c[j] * (x[static_cast<std::size_t>(j)] - model.mean[static_cast<std::size_t>(j)]);
        y[static_cast<std::size_t>(l)] = dot;
    }
    return y;
}

} // namespace tfrs
