#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "tfrs/errors.hpp"
#include "tfrs/pca.hpp"

namespace tfrs {

/// Nearest-class-mean classifier state: one prototype per class, classes in
/// first-appearance order of the training labels.
struct MinDistModel {
    std::vector<std::vector<double>> prototypes;
    std::vector<int> class_labels;
    std::vector<int> counts;
};

inline MinDistModel fit_min_distance(const FeatureMatrix& train) {
    if (train.rows < 1) throw SizeError("empty training set");
    MinDistModel model;
    for (int i = 0; i < train.rows; ++i) {
        const int label = train.labels[static_cast<std::size_t>(i)];
        std::size_t j = 0;
        while (j < model.class_labels.size() && model.class_labels[j] != label) ++j;
        if (j == model.class_labels.size()) {
            model.class_labels.push_back(label);
            model.prototypes.emplace_back(static_cast<std::size_t>(train.cols), 0.0);
            model.counts.push_back(0);
        }
        auto r = train.row(i);
        for (int c = 0; c < train.cols; ++c)
            model.prototypes[j][static_cast<std::size_t>(c)] += r[static_cast<std::size_t>(c)];
        ++model.counts[j];
    }
    for (std::size_t j = 0; j < model.prototypes.size(); ++j)
        for (double& x : model.prototypes[j]) x /= model.counts[j];
    return model;
}

/// Label of the Euclidean-closest prototype; ties go to the earliest class
/// in model order.
inline int classify_min_distance(const MinDistModel& model, std::span<const double> x) {
    if (model.prototypes.empty()) throw SizeError("classifier has no prototypes");
    std::size_t best = 0;
    double best_d2 = 0.0;
    for (std::size_t j = 0; j < model.prototypes.size(); ++j) {
        const std::vector<double>& p = model.prototypes[j];
        if (p.size() != x.size())
            throw SizeError("vector length does not match the prototypes");
        double d2 = 0.0;
        for (std::size_t c = 0; c < p.size(); ++c) {
            const double d = x[c] - p[c];
            d2 += d * d;
        }
        if (j == 0 || d2 < best_d2) {
            best = j;
            best_d2 = d2;
        }
    }
    return model.class_labels[best];
}

} // namespace tfrs
