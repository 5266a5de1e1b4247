// tfrs: thermal face recognition experiment CLI.
//
// Subcommands: synth (deterministic synthetic dataset), preprocess (elliptic
// face crops), run (feature x classifier experiment tables), eval (classify
// with serialized models). Exit codes: 0 success, 1 usage error, 2 data
// error, 3 internal error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tfrs/tfrs.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

tfrs::FeatureKind parse_feature(const std::string& s) {
    if (s == "wavelet") return tfrs::FeatureKind::WaveletConfidence;
    if (s == "lbp") return tfrs::FeatureKind::LbpBlocks;
    throw UsageError("unknown feature '" + s + "' (expected wavelet or lbp)");
}

tfrs::ClassifierKind parse_classifier(const std::string& s) {
    if (s == "ann") return tfrs::ClassifierKind::Mlp;
    if (s == "mindist") return tfrs::ClassifierKind::MinDist;
    if (s == "both") return tfrs::ClassifierKind::Both;
    throw UsageError("unknown classifier '" + s + "' (expected ann, mindist, or both)");
}

// Returns true when the file set the classifier explicitly.
bool apply_config_file(const fs::path& path, tfrs::ExperimentConfig& cfg) {
    json doc;
    try {
        doc = json::parse(tfrs::read_file(path));
    } catch (const json::parse_error& e) {
        throw tfrs::ParseError(std::string("config JSON: ") + e.what(), 0);
    }
    if (doc.contains("feature")) cfg.feature = parse_feature(doc["feature"].get<std::string>());
    const bool classifier_set = doc.contains("classifier");
    if (classifier_set)
        cfg.classifier = parse_classifier(doc["classifier"].get<std::string>());
    if (doc.contains("eigen_counts")) cfg.eigen_counts = doc["eigen_counts"].get<std::vector<int>>();
    if (doc.contains("sweep")) cfg.sweep = doc["sweep"].get<bool>();
    if (doc.contains("alpha")) cfg.alpha = doc["alpha"].get<double>();
    if (doc.contains("mindist_k")) cfg.mindist_k = doc["mindist_k"].get<int>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("threads")) cfg.threads = doc["threads"].get<int>();
    if (doc.contains("lenient")) cfg.lenient = doc["lenient"].get<bool>();
    if (doc.contains("mlp")) {
        const json& m = doc["mlp"];
        if (m.contains("hidden")) {
            auto h = m["hidden"].get<std::vector<int>>();
            if (h.size() != 3) throw UsageError("mlp.hidden must list exactly 3 layer widths");
            cfg.mlp.hidden1 = h[0];
            cfg.mlp.hidden2 = h[1];
            cfg.mlp.hidden3 = h[2];
        }
        if (m.contains("learning_rate")) cfg.mlp.learning_rate = m["learning_rate"].get<double>();
        if (m.contains("momentum")) cfg.mlp.momentum = m["momentum"].get<double>();
        if (m.contains("epochs")) cfg.mlp.epochs = m["epochs"].get<int>();
        if (m.contains("target_loss")) cfg.mlp.target_loss = m["target_loss"].get<double>();
    }
    return classifier_set;
}

void report_dataset(const tfrs::DatasetManifest& manifest) {
    std::cerr << "dataset: " << manifest.subject_count() << " subjects x "
              << manifest.images_per_subject << " images under " << manifest.root.string() << "\n";
    for (const std::string& w : manifest.warnings) std::cerr << "warning: " << w << "\n";
}

void save_models(const fs::path& dir, const tfrs::TrainedCell& cell,
                 const tfrs::DatasetManifest& manifest) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw tfrs::IoError("cannot create " + dir.string() + ": " + ec.message());

    json bundle;
    bundle["format"] = "tfrs-bundle-v1";
    bundle["feature"] = cell.feature == tfrs::FeatureKind::WaveletConfidence ? "wavelet" : "lbp";
    bundle["alpha"] = cell.weights.alpha;
    bundle["beta"] = cell.weights.beta;
    bundle["eigen_model"] = "eigen.tfrseig";
    bundle["labels"] = manifest.subject_names;
    tfrs::write_file(dir / "eigen.tfrseig", tfrs::write_eigen_model(cell.eigen));
    if (cell.mlp) {
        bundle["classifier"] = "ann";
        bundle["classifier_model"] = "mlp.tfrsmlp";
        bundle["input_scales"] = cell.mlp_input_scales;
        tfrs::write_file(dir / "mlp.tfrsmlp", tfrs::write_mlp_model(*cell.mlp));
    } else {
        bundle["classifier"] = "mindist";
        bundle["classifier_model"] = "mindist.tfrsmdc";
        tfrs::write_file(dir / "mindist.tfrsmdc", tfrs::write_mindist_model(*cell.mindist));
    }
    tfrs::write_file(dir / "bundle.json", bundle.dump(2) + "\n");
    std::cerr << "models written to " << dir.string() << "\n";
}

int cmd_synth(std::uint64_t seed, int subjects, int per_subject, const fs::path& out) {
    const tfrs::DatasetManifest m = tfrs::synth_dataset(seed, subjects, per_subject, out);
    std::cerr << "wrote " << m.total_images() << " images (" << m.subject_count() << " subjects x "
              << m.images_per_subject << ") under " << out.string() << "\n";
    return 0;
}

int cmd_preprocess(const fs::path& in, const fs::path& out, bool lenient, int per_subject,
                   int threads) {
    const tfrs::DatasetManifest manifest = tfrs::scan_dataset(in, per_subject);
    report_dataset(manifest);
    const tfrs::PreprocessOutcome pre = tfrs::preprocess_all(manifest, lenient, threads);
    for (const std::string& d : pre.dropped) std::cerr << "dropped: " << d << "\n";

    // Mirror the subject tree; one cropped PGM per surviving image.
    std::size_t face = 0;
    for (int flat = 0; flat < manifest.total_images(); ++flat) {
        const fs::path& src = manifest.image_at(flat);
        if (std::find(pre.dropped.begin(), pre.dropped.end(), src.string()) != pre.dropped.end())
            continue;
        const fs::path dir =
            out / manifest.subject_names[static_cast<std::size_t>(manifest.label_at(flat))];
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw tfrs::IoError("cannot create " + dir.string() + ": " + ec.message());
        tfrs::write_file(dir / (src.stem().string() + ".pgm"),
                         tfrs::save_pnm(pre.faces[face], /*binary=*/true));
        ++face;
    }
    std::cerr << "wrote " << face << " cropped faces under " << out.string() << "\n";
    return 0;
}

int cmd_run(const tfrs::ExperimentConfig& cfg, const fs::path& in, int per_subject,
            tfrs::TableFormat format, const std::optional<fs::path>& out_file,
            const std::optional<fs::path>& models_dir) {
    const tfrs::DatasetManifest manifest = tfrs::scan_dataset(in, per_subject);
    report_dataset(manifest);

    const tfrs::ResultsTable table = tfrs::run_experiment(manifest, cfg);
    const std::string rendered = tfrs::emit_results(table, format);
    if (out_file) {
        tfrs::write_file(*out_file, rendered);
        std::cerr << "results written to " << out_file->string() << "\n";
    } else {
        std::cout << rendered;
    }

    if (models_dir) {
        if (cfg.sweep) throw UsageError("--save-models needs a single-cell run (no sweep)");
        if (cfg.classifier == tfrs::ClassifierKind::Both)
            throw UsageError("--save-models needs --classifier ann or mindist");
        if (cfg.classifier == tfrs::ClassifierKind::Mlp && cfg.eigen_counts.size() != 1)
            throw UsageError("--save-models with ann needs exactly one --eigen value");
        save_models(*models_dir, tfrs::train_single_cell(manifest, cfg), manifest);
    }
    return 0;
}

int cmd_eval(const fs::path& bundle_path, const fs::path& in, int per_subject, int threads,
             const std::optional<fs::path>& out_file) {
    json bundle;
    try {
        bundle = json::parse(tfrs::read_file(bundle_path));
    } catch (const json::parse_error& e) {
        throw tfrs::ParseError(std::string("bundle JSON: ") + e.what(), 0);
    }
    if (bundle.value("format", "") != "tfrs-bundle-v1")
        throw tfrs::ParseError("not a tfrs model bundle", 0);

    const fs::path base = bundle_path.parent_path();
    const tfrs::FeatureKind feature = parse_feature(bundle["feature"].get<std::string>());
    const tfrs::FusionWeights weights{bundle.value("alpha", 0.5), bundle.value("beta", 0.5)};
    const tfrs::EigenModel eigen =
        tfrs::read_eigen_model(tfrs::read_file(base / bundle["eigen_model"].get<std::string>()));
    const std::string clf = bundle["classifier"].get<std::string>();
    const std::vector<std::string> label_names =
        bundle.value("labels", std::vector<std::string>{});

    std::optional<tfrs::MlpModel> mlp;
    std::optional<tfrs::MinDistModel> mindist;
    std::vector<double> mlp_scales;
    if (clf == "ann") {
        mlp = tfrs::read_mlp_model(
            tfrs::read_file(base / bundle["classifier_model"].get<std::string>()));
        mlp_scales = bundle.value("input_scales", std::vector<double>{});
    } else {
        mindist = tfrs::read_mindist_model(
            tfrs::read_file(base / bundle["classifier_model"].get<std::string>()));
    }

    const tfrs::DatasetManifest manifest = tfrs::scan_dataset(in, per_subject);
    report_dataset(manifest);
    const tfrs::PreprocessOutcome pre = tfrs::preprocess_all(manifest, /*lenient=*/false, threads);

    tfrs::FeatureMatrix features;
    if (feature == tfrs::FeatureKind::WaveletConfidence) {
        const auto bands = tfrs::detail::wavelet_bands(pre.faces, threads);
        features = tfrs::detail::confidence_features(bands, pre.labels, weights, threads);
    } else {
        features = tfrs::detail::lbp_features(pre.faces, pre.labels, threads);
    }
    const tfrs::FeatureMatrix proj = tfrs::detail::project_rows(eigen, features, threads);

    auto label_name = [&](int label) {
        if (label >= 0 && label < static_cast<int>(label_names.size()))
            return label_names[static_cast<std::size_t>(label)];
        return std::to_string(label);
    };

    std::string out = "path,actual,predicted\n";
    std::vector<int> predicted(static_cast<std::size_t>(proj.rows));
    for (int i = 0; i < proj.rows; ++i) {
        int p;
        if (mlp) {
            std::vector<double> x(proj.row(i).begin(), proj.row(i).end());
            for (std::size_t c = 0; c < x.size() && c < mlp_scales.size(); ++c)
                x[c] *= mlp_scales[c];
            p = tfrs::mlp_predict_label(*mlp, x);
        } else {
            p = tfrs::classify_min_distance(*mindist, proj.row(i));
        }
        predicted[static_cast<std::size_t>(i)] = p;
        out += manifest.image_at(i).string() + "," +
               manifest.subject_names[static_cast<std::size_t>(pre.labels[static_cast<std::size_t>(i)])] +
               "," + label_name(p) + "\n";
    }
    if (out_file) {
        tfrs::write_file(*out_file, out);
    } else {
        std::cout << out;
    }
    std::cerr << "recognition_rate "
              << tfrs::format_rate(tfrs::recognition_rate(predicted, pre.labels)) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"thermal face recognition experiments"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a deterministic synthetic dataset");
    std::uint64_t synth_seed = 1;
    int synth_subjects = 10, synth_per = 12;
    std::string synth_out;
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--subjects", synth_subjects, "number of subjects")->check(CLI::Range(2, 999));
    synth->add_option("--per-subject", synth_per, "images per subject (even)");
    synth->add_option("--out", synth_out, "output directory")->required();

    // preprocess
    auto* prep = app.add_subcommand("preprocess", "crop faces to 112x92 PGMs");
    std::string prep_in, prep_out;
    bool prep_strict = false, prep_lenient = false;
    int prep_per = 0, prep_threads = 1;
    prep->add_option("--in", prep_in, "dataset root")->required()->check(CLI::ExistingDirectory);
    prep->add_option("--out", prep_out, "output directory")->required();
    prep->add_flag("--strict", prep_strict, "abort on any preprocessing failure (default)");
    prep->add_flag("--lenient", prep_lenient, "drop failed image pairs instead of aborting");
    prep->add_option("--per-subject", prep_per, "use only the first N images per subject");
    prep->add_option("--threads", prep_threads, "worker threads")->check(CLI::Range(1, 256));

    // run
    auto* run = app.add_subcommand("run", "run an experiment and emit a results table");
    std::string run_in, run_feature = "wavelet", run_classifier, run_format = "csv";
    std::string run_out, run_config, run_models;
    std::vector<int> run_eigen;
    bool run_sweep = false, run_lenient = false;
    double run_alpha = 0.5, run_lr = 0.02, run_mc = 0.9, run_target = 1e-3;
    int run_mindist_k = 40, run_threads = 1, run_per = 0, run_epochs = 300;
    std::uint64_t run_seed = 0;
    std::vector<int> run_hidden;
    run->add_option("--in", run_in, "dataset root")->required()->check(CLI::ExistingDirectory);
    run->add_option("--feature", run_feature, "wavelet|lbp");
    run->add_option("--classifier", run_classifier, "ann|mindist|both (both: lbp only)");
    run->add_option("--eigen", run_eigen, "eigenvector counts, e.g. 10,20,30,40,50")->delimiter(',');
    run->add_flag("--alpha-beta-sweep", run_sweep, "sweep the 11 (alpha, beta) rows");
    run->add_option("--alpha", run_alpha, "fusion alpha for non-sweep runs (beta = 1 - alpha)")
        ->check(CLI::Range(0.0, 1.0));
    run->add_option("--mindist-k", run_mindist_k, "eigenvector count for minimum-distance columns");
    run->add_option("--seed", run_seed, "experiment seed");
    run->add_option("--format", run_format, "csv|markdown");
    run->add_option("--out", run_out, "write the table here instead of stdout");
    run->add_option("--config", run_config, "JSON config file (flags override it)")
        ->check(CLI::ExistingFile);
    run->add_option("--threads", run_threads, "worker threads")->check(CLI::Range(1, 256));
    run->add_flag("--lenient", run_lenient, "drop failed image pairs instead of aborting");
    run->add_option("--per-subject", run_per, "use only the first N images per subject");
    run->add_option("--epochs", run_epochs, "ANN training epochs");
    run->add_option("--hidden", run_hidden, "ANN hidden layer widths, e.g. 32,32,32")->delimiter(',');
    run->add_option("--learning-rate", run_lr, "ANN learning rate");
    run->add_option("--momentum", run_mc, "ANN momentum constant")->check(CLI::Range(0.0, 1.0));
    run->add_option("--target-loss", run_target, "stop ANN training at this batch loss");
    run->add_option("--save-models", run_models, "serialize the trained single-cell models here");

    // eval
    auto* eval = app.add_subcommand("eval", "classify a dataset with serialized models");
    std::string eval_model, eval_in, eval_out;
    int eval_threads = 1, eval_per = 0;
    eval->add_option("--model", eval_model, "bundle.json written by run --save-models")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--in", eval_in, "dataset root")->required()->check(CLI::ExistingDirectory);
    eval->add_option("--out", eval_out, "write predictions CSV here instead of stdout");
    eval->add_option("--threads", eval_threads, "worker threads")->check(CLI::Range(1, 256));
    eval->add_option("--per-subject", eval_per, "use only the first N images per subject");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) {
            return cmd_synth(synth_seed, synth_subjects, synth_per, synth_out);
        }
        if (prep->parsed()) {
            if (prep_strict && prep_lenient)
                throw UsageError("--strict and --lenient are mutually exclusive");
            return cmd_preprocess(prep_in, prep_out, prep_lenient, prep_per, prep_threads);
        }
        if (run->parsed()) {
            tfrs::ExperimentConfig cfg;
            bool classifier_set = false;
            if (!run_config.empty()) classifier_set = apply_config_file(run_config, cfg);
            if (run->count("--feature") || run_config.empty())
                cfg.feature = parse_feature(run_feature);
            if (run->count("--classifier")) {
                cfg.classifier = parse_classifier(run_classifier);
            } else if (!classifier_set) {
                cfg.classifier = cfg.feature == tfrs::FeatureKind::LbpBlocks
                                     ? tfrs::ClassifierKind::Both
                                     : tfrs::ClassifierKind::Mlp;
            }
            if (!run_eigen.empty()) cfg.eigen_counts = run_eigen;
            if (run->count("--alpha-beta-sweep")) cfg.sweep = true;
            if (run->count("--alpha")) cfg.alpha = run_alpha;
            if (run->count("--mindist-k")) cfg.mindist_k = run_mindist_k;
            if (run->count("--seed")) cfg.seed = run_seed;
            if (run->count("--threads")) cfg.threads = run_threads;
            if (run->count("--lenient")) cfg.lenient = true;
            if (run->count("--epochs")) cfg.mlp.epochs = run_epochs;
            if (run->count("--learning-rate")) cfg.mlp.learning_rate = run_lr;
            if (run->count("--momentum")) cfg.mlp.momentum = run_mc;
            if (run->count("--target-loss")) cfg.mlp.target_loss = run_target;
            if (!run_hidden.empty()) {
                if (run_hidden.size() != 3) throw UsageError("--hidden needs exactly 3 widths");
                cfg.mlp.hidden1 = run_hidden[0];
                cfg.mlp.hidden2 = run_hidden[1];
                cfg.mlp.hidden3 = run_hidden[2];
            }
            if (cfg.feature == tfrs::FeatureKind::WaveletConfidence &&
                cfg.classifier == tfrs::ClassifierKind::Both)
                throw UsageError("wavelet runs need --classifier ann or mindist");

            tfrs::TableFormat format;
            if (run_format == "csv") format = tfrs::TableFormat::Csv;
            else if (run_format == "markdown") format = tfrs::TableFormat::Markdown;
            else throw UsageError("unknown format '" + run_format + "'");

            return cmd_run(cfg, run_in, run_per, format,
                           run_out.empty() ? std::nullopt : std::optional<fs::path>(run_out),
                           run_models.empty() ? std::nullopt : std::optional<fs::path>(run_models));
        }
        if (eval->parsed()) {
            return cmd_eval(eval_model, eval_in, eval_per, eval_threads,
                            eval_out.empty() ? std::nullopt : std::optional<fs::path>(eval_out));
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const tfrs::TfrsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
