#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "tfrs/dataset.hpp"
#include "tfrs/lbp.hpp"
#include "tfrs/mindist.hpp"
#include "tfrs/mlp.hpp"
#include "tfrs/pca.hpp"
#include "tfrs/wavelet.hpp"

namespace tfrs {

enum class FeatureKind { WaveletConfidence, LbpBlocks };
enum class ClassifierKind { Mlp, MinDist, Both };
enum class TableFormat { Csv, Markdown };

struct MlpOptions {
    int hidden1 = 32, hidden2 = 32, hidden3 = 32;
    double learning_rate = 0.02;
    double momentum = 0.9;
    int epochs = 300;
    double target_loss = 1e-3;
};

struct ExperimentConfig {
    FeatureKind feature = FeatureKind::WaveletConfidence;
    ClassifierKind classifier = ClassifierKind::MinDist;
    std::vector<int> eigen_counts{10, 20, 30, 40, 50};
    bool sweep = false;
    double alpha = 0.5; // single-run weight when sweep is off; beta = 1 - alpha
    int mindist_k = 40; // eigenvector count for minimum-distance tables
    MlpOptions mlp;
    std::uint64_t seed = 0;
    int threads = 1;
    bool lenient = false;
};

/// Recognition-rate table shaped like the paper's result tables.
struct ResultsTable {
    std::string corner_label;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<double> cells; // row-major percentages, quantized to 2 decimals

    double cell(int r, int c) const {
        return cells[static_cast<std::size_t>(r) * col_labels.size() + static_cast<std::size_t>(c)];
    }
};

/// Exact percentage of matching labels.
inline double recognition_rate(const std::vector<int>& predicted, const std::vector<int>& actual) {
    if (predicted.size() != actual.size())
        throw SizeError("prediction and truth lengths differ");
    if (predicted.empty()) throw SizeError("cannot score an empty set");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == actual[i]) ++correct;
    return 100.0 * static_cast<double>(correct) / static_cast<double>(predicted.size());
}

/// Quantizes a percentage to 2 decimals, truncating toward zero the way the
/// reference tables do (97/102 reports as 95.09, not 95.10).
inline double quantize_rate(double rate) {
    return std::floor(rate * 100.0 + 1e-6) / 100.0;
}

inline std::string format_rate(double rate) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", quantize_rate(rate));
    return buf;
}

inline std::string emit_results(const ResultsTable& table, TableFormat format) {
    const std::size_t cols = table.col_labels.size();
    std::string out;
    if (format == TableFormat::Csv) {
        out += table.corner_label;
        for (const std::string& c : table.col_labels) out += "," + c;
        out += "\n";
        for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
            out += table.row_labels[r];
            for (std::size_t c = 0; c < cols; ++c)
                out += "," + format_rate(table.cells[r * cols + c]);
            out += "\n";
        }
    } else {
        out += "| " + table.corner_label + " |";
        for (const std::string& c : table.col_labels) out += " " + c + " |";
        out += "\n|";
        for (std::size_t c = 0; c <= cols; ++c) out += " --- |";
        out += "\n";
        for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
            out += "| " + table.row_labels[r] + " |";
            for (std::size_t c = 0; c < cols; ++c)
                out += " " + format_rate(table.cells[r * cols + c]) + " |";
            out += "\n";
        }
    }
    return out;
}

namespace detail {

inline FeatureMatrix stack_rows(std::vector<std::vector<double>>&& rows, const std::vector<int>& labels) {
    FeatureMatrix m;
    m.rows = static_cast<int>(rows.size());
    m.cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
    m.labels = labels;
    m.data.reserve(static_cast<std::size_t>(m.rows) * m.cols);
    for (auto& r : rows) {
        if (static_cast<int>(r.size()) != m.cols) throw SizeError("ragged feature rows");
        m.data.insert(m.data.end(), r.begin(), r.end());
    }
    return m;
}

inline FeatureMatrix take_front(const FeatureMatrix& m, int k) {
    FeatureMatrix out;
    out.rows = m.rows;
    out.cols = k;
    out.labels = m.labels;
    out.data.resize(static_cast<std::size_t>(m.rows) * k);
    for (int i = 0; i < m.rows; ++i) {
        auto r = m.row(i);
        std::copy(r.begin(), r.begin() + k, out.data.begin() + static_cast<std::size_t>(i) * k);
    }
    return out;
}

inline FeatureMatrix project_rows(const EigenModel& eig, const FeatureMatrix& m, int threads) {
    FeatureMatrix out;
    out.rows = m.rows;
    out.cols = eig.k;
    out.labels = m.labels;
    out.data.resize(static_cast<std::size_t>(m.rows) * eig.k);
    parallel_for(m.rows, threads, [&](int i) {
        std::vector<double> y = project(eig, m.row(i));
        std::copy(y.begin(), y.end(), out.data.begin() + static_cast<std::size_t>(i) * eig.k);
    });
    return out;
}

inline int distinct_labels(const std::vector<int>& labels) {
    std::vector<int> seen;
    for (int l : labels)
        if (std::find(seen.begin(), seen.end(), l) == seen.end()) seen.push_back(l);
    return static_cast<int>(seen.size());
}

struct MlpCellResult {
    MlpModel model;
    double rate = 0.0;
    std::vector<double> input_scales; // per-dimension factors applied before the net
};

// Per-dimension deviation of the training projections (they are zero-mean
// over the training set by construction).
inline std::vector<double> projection_scales(const FeatureMatrix& train) {
    std::vector<double> scales(static_cast<std::size_t>(train.cols), 1.0);
    for (int c = 0; c < train.cols; ++c) {
        double s2 = 0.0;
        for (int i = 0; i < train.rows; ++i) {
            const double v = train.data[static_cast<std::size_t>(i) * train.cols + c];
            s2 += v * v;
        }
        const double sd = std::sqrt(s2 / train.rows);
        if (sd > 1e-12) scales[static_cast<std::size_t>(c)] = 1.0 / sd;
    }
    return scales;
}

inline void scale_columns(FeatureMatrix& m, const std::vector<double>& scales) {
    for (int i = 0; i < m.rows; ++i)
        for (int c = 0; c < m.cols; ++c)
            m.data[static_cast<std::size_t>(i) * m.cols + c] *= scales[static_cast<std::size_t>(c)];
}

// Trains one ANN cell on k-dimensional projections. Inputs are standardized
// by the per-dimension training deviation so the tanh units start in their
// active range; the same factors apply at prediction time.
inline MlpCellResult run_mlp_cell(const FeatureMatrix& train_k, const FeatureMatrix& test_k,
                                  const MlpOptions& opt, std::uint64_t seed) {
    FeatureMatrix train = train_k;
    FeatureMatrix test = test_k;
    const std::vector<double> scales = projection_scales(train);
    scale_columns(train, scales);
    scale_columns(test, scales);

    MlpConfig cfg;
    cfg.layer_sizes = {train.cols, opt.hidden1, opt.hidden2, opt.hidden3, distinct_labels(train.labels)};
    cfg.learning_rate = opt.learning_rate;
    cfg.momentum = opt.momentum;
    cfg.epochs = opt.epochs;
    cfg.target_loss = opt.target_loss;
    cfg.seed = seed;

    MlpCellResult out;
    out.model = mlp_train(train, cfg);
    out.input_scales = scales;
    std::vector<int> predicted(static_cast<std::size_t>(test.rows));
    for (int i = 0; i < test.rows; ++i)
        predicted[static_cast<std::size_t>(i)] = mlp_predict_label(out.model, test.row(i));
    out.rate = recognition_rate(predicted, test.labels);
    return out;
}

struct MinDistCellResult {
    MinDistModel model;
    double rate = 0.0;
};

inline MinDistCellResult run_mindist_cell(const FeatureMatrix& train_k, const FeatureMatrix& test_k) {
    MinDistCellResult out;
    out.model = fit_min_distance(train_k);
    std::vector<int> predicted(static_cast<std::size_t>(test_k.rows));
    for (int i = 0; i < test_k.rows; ++i)
        predicted[static_cast<std::size_t>(i)] = classify_min_distance(out.model, test_k.row(i));
    out.rate = recognition_rate(predicted, test_k.labels);
    return out;
}

inline std::string weight_row_label(const FusionWeights& w) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "alpha=%.1f beta=%.1f", w.alpha, w.beta);
    return buf;
}

// Per-image wavelet bands for the confidence features.
struct WaveletBands {
    std::vector<GrayImageF> ll;
    std::vector<GrayImageF> avg_detail;
};

inline WaveletBands wavelet_bands(const std::vector<GrayImage8>& faces, int threads) {
    WaveletBands bands;
    bands.ll.resize(faces.size());
    bands.avg_detail.resize(faces.size());
    parallel_for(static_cast<int>(faces.size()), threads, [&](int i) {
        const SubbandSet s = dwt2_single(to_real(faces[static_cast<std::size_t>(i)]));
        bands.ll[static_cast<std::size_t>(i)] = s.ll;
        bands.avg_detail[static_cast<std::size_t>(i)] = average_detail(s);
    });
    return bands;
}

inline FeatureMatrix confidence_features(const WaveletBands& bands, const std::vector<int>& labels,
                                         FusionWeights w, int threads) {
    std::vector<std::vector<double>> rows(bands.ll.size());
    parallel_for(static_cast<int>(bands.ll.size()), threads, [&](int i) {
        rows[static_cast<std::size_t>(i)] = flatten(confidence_matrix(
            bands.ll[static_cast<std::size_t>(i)], bands.avg_detail[static_cast<std::size_t>(i)], w));
    });
    return stack_rows(std::move(rows), labels);
}

inline FeatureMatrix lbp_features(const std::vector<GrayImage8>& faces, const std::vector<int>& labels,
                                  int threads) {
    std::vector<std::vector<double>> rows(faces.size());
    parallel_for(static_cast<int>(faces.size()), threads, [&](int i) {
        rows[static_cast<std::size_t>(i)] =
            block_features(lbp_image(faces[static_cast<std::size_t>(i)])).to_feature_vector();
    });
    return stack_rows(std::move(rows), labels);
}

} // namespace detail

/// The wavelet-confidence protocol: per weight row, fuse bands, stack, split
/// odd/even, PCA, then classify. ANN tables have one column per eigenvector
/// count; minimum-distance tables have a single column at a fixed count.
inline ResultsTable run_wavelet_experiment(const DatasetManifest& manifest,
                                           const ExperimentConfig& cfg) {
    if (cfg.classifier == ClassifierKind::Both)
        throw SizeError("wavelet tables use one classifier at a time");
    if (cfg.eigen_counts.empty()) throw SizeError("need at least one eigenvector count");

    const PreprocessOutcome pre = preprocess_all(manifest, cfg.lenient, cfg.threads);
    const detail::WaveletBands bands = detail::wavelet_bands(pre.faces, cfg.threads);

    const std::vector<FusionWeights> weights =
        cfg.sweep ? sweep_weights()
                  : std::vector<FusionWeights>{FusionWeights{cfg.alpha, 1.0 - cfg.alpha}};

    ResultsTable table;
    table.corner_label = "alpha/beta";
    if (cfg.classifier == ClassifierKind::Mlp) {
        for (int k : cfg.eigen_counts) table.col_labels.push_back("k=" + std::to_string(k));
    } else {
        table.col_labels.push_back("mindist k=" + std::to_string(cfg.mindist_k));
    }

    for (const FusionWeights& w : weights) {
        table.row_labels.push_back(detail::weight_row_label(w));
        const FeatureMatrix features = detail::confidence_features(bands, pre.labels, w, cfg.threads);
        const auto [train, test] = split_train_test(features);
        const int kmax = cfg.classifier == ClassifierKind::Mlp
                             ? *std::max_element(cfg.eigen_counts.begin(), cfg.eigen_counts.end())
                             : cfg.mindist_k;
        const EigenModel eig = fit_pca(train, kmax);
        const FeatureMatrix train_proj = detail::project_rows(eig, train, cfg.threads);
        const FeatureMatrix test_proj = detail::project_rows(eig, test, cfg.threads);

        if (cfg.classifier == ClassifierKind::Mlp) {
            for (int k : cfg.eigen_counts) {
                const FeatureMatrix train_k = detail::take_front(train_proj, k);
                const FeatureMatrix test_k = detail::take_front(test_proj, k);
                table.cells.push_back(
                    quantize_rate(detail::run_mlp_cell(train_k, test_k, cfg.mlp, cfg.seed).rate));
            }
        } else {
            table.cells.push_back(
                quantize_rate(detail::run_mindist_cell(train_proj, test_proj).rate));
        }
    }
    return table;
}

/// The block-LBP protocol: LBP code histograms, PCA, then an ANN column per
/// eigenvector count plus one minimum-distance column (Table 6 layout when
/// both classifiers are selected).
inline ResultsTable run_lbp_experiment(const DatasetManifest& manifest, const ExperimentConfig& cfg) {
    if (cfg.eigen_counts.empty()) throw SizeError("need at least one eigenvector count");
    const bool want_mlp = cfg.classifier != ClassifierKind::MinDist;
    const bool want_mindist = cfg.classifier != ClassifierKind::Mlp;

    const PreprocessOutcome pre = preprocess_all(manifest, cfg.lenient, cfg.threads);
    const FeatureMatrix features = detail::lbp_features(pre.faces, pre.labels, cfg.threads);
    const auto [train, test] = split_train_test(features);

    int kmax = want_mindist ? cfg.mindist_k : 1;
    if (want_mlp)
        kmax = std::max(kmax, *std::max_element(cfg.eigen_counts.begin(), cfg.eigen_counts.end()));
    const EigenModel eig = fit_pca(train, kmax);
    const FeatureMatrix train_proj = detail::project_rows(eig, train, cfg.threads);
    const FeatureMatrix test_proj = detail::project_rows(eig, test, cfg.threads);

    ResultsTable table;
    table.corner_label = "database";
    std::string row = manifest.root.filename().string();
    if (row.empty()) row = manifest.root.parent_path().filename().string();
    if (row.empty()) row = "dataset";
    table.row_labels.push_back(row);

    if (want_mlp) {
        for (int k : cfg.eigen_counts) {
            table.col_labels.push_back("ann k=" + std::to_string(k));
            const FeatureMatrix train_k = detail::take_front(train_proj, k);
            const FeatureMatrix test_k = detail::take_front(test_proj, k);
            table.cells.push_back(
                quantize_rate(detail::run_mlp_cell(train_k, test_k, cfg.mlp, cfg.seed).rate));
        }
    }
    if (want_mindist) {
        table.col_labels.push_back("mindist k=" + std::to_string(cfg.mindist_k));
        const FeatureMatrix train_k = detail::take_front(train_proj, cfg.mindist_k);
        const FeatureMatrix test_k = detail::take_front(test_proj, cfg.mindist_k);
        table.cells.push_back(quantize_rate(detail::run_mindist_cell(train_k, test_k).rate));
    }
    return table;
}

inline ResultsTable run_experiment(const DatasetManifest& manifest, const ExperimentConfig& cfg) {
    return cfg.feature == FeatureKind::WaveletConfidence ? run_wavelet_experiment(manifest, cfg)
                                                         : run_lbp_experiment(manifest, cfg);
}

/// Models behind a single experiment cell, for serialization and `eval`.
struct TrainedCell {
    FeatureKind feature = FeatureKind::WaveletConfidence;
    FusionWeights weights;
    EigenModel eigen;
    std::optional<MlpModel> mlp;
    std::optional<MinDistModel> mindist;
    std::vector<double> mlp_input_scales;
    double rate = 0.0;
};

/// Trains the one cell described by a non-sweep config (single eigen count).
inline TrainedCell train_single_cell(const DatasetManifest& manifest, const ExperimentConfig& cfg) {
    if (cfg.classifier == ClassifierKind::Both)
        throw SizeError("single-cell training needs one classifier");
    const int k = cfg.classifier == ClassifierKind::MinDist ? cfg.mindist_k : cfg.eigen_counts.at(0);

    const PreprocessOutcome pre = preprocess_all(manifest, cfg.lenient, cfg.threads);
    TrainedCell cell;
    cell.feature = cfg.feature;
    cell.weights = FusionWeights{cfg.alpha, 1.0 - cfg.alpha};

    FeatureMatrix features;
    if (cfg.feature == FeatureKind::WaveletConfidence) {
        const detail::WaveletBands bands = detail::wavelet_bands(pre.faces, cfg.threads);
        features = detail::confidence_features(bands, pre.labels, cell.weights, cfg.threads);
    } else {
        features = detail::lbp_features(pre.faces, pre.labels, cfg.threads);
    }
    const auto [train, test] = split_train_test(features);
    cell.eigen = fit_pca(train, k);
    const FeatureMatrix train_proj = detail::project_rows(cell.eigen, train, cfg.threads);
    const FeatureMatrix test_proj = detail::project_rows(cell.eigen, test, cfg.threads);

    if (cfg.classifier == ClassifierKind::Mlp) {
        detail::MlpCellResult r = detail::run_mlp_cell(train_proj, test_proj, cfg.mlp, cfg.seed);
        cell.mlp = std::move(r.model);
        cell.mlp_input_scales = std::move(r.input_scales);
        cell.rate = r.rate;
    } else {
        detail::MinDistCellResult r = detail::run_mindist_cell(train_proj, test_proj);
        cell.mindist = std::move(r.model);
        cell.rate = r.rate;
    }
    return cell;
}

} // namespace tfrs
