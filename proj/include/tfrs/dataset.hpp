#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tfrs/errors.hpp"
#include "tfrs/parallel.hpp"
#include "tfrs/pnm.hpp"
#include "tfrs/preprocess.hpp"
#include "tfrs/rng.hpp"

namespace tfrs {

/// One subdirectory per subject, PNM images inside. Subjects and images are
/// sorted lexicographically; that order defines the dataset rows and hence
/// the odd/even train/test split.
struct DatasetManifest {
    std::filesystem::path root;
    std::vector<std::string> subject_names;
    std::vector<std::vector<std::filesystem::path>> images; // per subject, sorted
    int images_per_subject = 0;
    std::vector<std::string> warnings; // skipped non-PNM files

    int subject_count() const { return static_cast<int>(subject_names.size()); }
    int total_images() const { return subject_count() * images_per_subject; }

    const std::filesystem::path& image_at(int flat) const {
        return images[static_cast<std::size_t>(flat / images_per_subject)]
                     [static_cast<std::size_t>(flat % images_per_subject)];
    }
    int label_at(int flat) const { return flat / images_per_subject; }
};

namespace detail {

inline bool has_pnm_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

} // namespace detail

/// Scans a dataset tree. per_subject > 0 keeps only the first per_subject
/// images (lexicographically) of every subject.
inline DatasetManifest scan_dataset(const std::filesystem::path& root, int per_subject = 0) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) throw ManifestError("dataset root is not a directory: " + root.string());

    DatasetManifest m;
    m.root = root;
    std::map<std::string, std::vector<fs::path>> subjects; // sorted by name
    for (const auto& entry : fs::directory_iterator(root)) {
        if (!entry.is_directory()) continue;
        std::vector<fs::path>& files = subjects[entry.path().filename().string()];
        for (const auto& f : fs::directory_iterator(entry.path())) {
            if (!f.is_regular_file()) continue;
            if (!detail::has_pnm_extension(f.path())) {
                m.warnings.push_back("skipped non-PNM file: " + f.path().string());
                continue;
            }
            files.push_back(f.path());
        }
        std::sort(files.begin(), files.end());
    }

    if (subjects.size() < 2) throw ManifestError("need at least 2 subject directories under " + root.string());

    int count = -1;
    for (auto& [name, files] : subjects) {
        if (per_subject > 0) {
            if (static_cast<int>(files.size()) < per_subject)
                throw ManifestError("subject " + name + " has fewer than " +
                                    std::to_string(per_subject) + " images");
            files.resize(static_cast<std::size_t>(per_subject));
        }
        if (count < 0) count = static_cast<int>(files.size());
        if (static_cast<int>(files.size()) != count)
            throw ManifestError("unequal image counts per subject (subject " + name + ")");
        m.subject_names.push_back(name);
        m.images.push_back(std::move(files));
    }
    if (count < 2 || count % 2 != 0)
        throw ManifestError("images per subject must be even and >= 2 for the odd/even split");
    m.images_per_subject = count;
    return m;
}

namespace detail {

// One subject's synthetic "thermal" pattern: an elliptical warm support on a
// dark background with 3-6 smooth anisotropic Gaussian blobs inside.
struct SynthSubject {
    double cx, cy;   // support center, 0-based pixel coordinates
    double a, b;     // support semi-axes
    struct Blob {
        double x, y, cos_t, sin_t, su, sv, amp;
    };
    std::vector<Blob> blobs;

    double sample(double x, double y) const {
        const double nx = (x - cx) / a;
        const double ny = (y - cy) / b;
        if (nx * nx + ny * ny > 1.0) return 18.0; // background
        double v = 150.0;
        for (const Blob& bl : blobs) {
            const double dx = x - bl.x;
            const double dy = y - bl.y;
            const double u = dx * bl.cos_t + dy * bl.sin_t;
            const double w = -dx * bl.sin_t + dy * bl.cos_t;
            v += bl.amp * std::exp(-0.5 * (u * u / (bl.su * bl.su) + w * w / (bl.sv * bl.sv)));
        }
        return std::clamp(v, 100.0, 245.0);
    }
};

inline SynthSubject make_synth_subject(Rng& rng, int width, int height) {
    SynthSubject s;
    s.cx = width / 2.0;
    s.cy = height / 2.0;
    s.a = rng.uniform_int(46, 54);
    s.b = rng.uniform_int(62, 72);
    const int blob_count = rng.uniform_int(3, 6);
    for (int i = 0; i < blob_count; ++i) {
        // blob center uniform in the inner 80% of the support
        double ux, uy;
        do {
            ux = rng.uniform(-0.8, 0.8);
            uy = rng.uniform(-0.8, 0.8);
        } while (ux * ux + uy * uy > 0.64);
        SynthSubject::Blob bl;
        bl.x = s.cx + ux * s.a;
        bl.y = s.cy + uy * s.b;
        const double theta = rng.uniform(0.0, 3.141592653589793);
        bl.cos_t = std::cos(theta);
        bl.sin_t = std::sin(theta);
        bl.su = rng.uniform(9.0, 26.0);
        bl.sv = rng.uniform(5.0, 13.0);
        const double mag = rng.uniform(35.0, 85.0);
        bl.amp = rng.uniform() < 0.75 ? mag : -0.5 * mag;
        s.blobs.push_back(bl);
    }
    return s;
}

} // namespace detail

inline constexpr int kSynthWidth = 160;
inline constexpr int kSynthHeight = 192;

/// Writes a deterministic synthetic dataset of binary PGMs under `out`:
/// per subject a fixed blob pattern, per image +-2 px jitter and Gaussian
/// noise (sigma 8). Same seed, same bytes.
inline DatasetManifest synth_dataset(std::uint64_t seed, int n_subjects, int per_subject,
                                     const std::filesystem::path& out) {
    namespace fs = std::filesystem;
    if (n_subjects < 2 || per_subject < 2 || per_subject % 2 != 0)
        throw ManifestError("synthetic dataset needs >= 2 subjects and an even per-subject count >= 2");
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError("cannot create " + out.string() + ": " + ec.message());

    Rng rng(seed);
    const int W = kSynthWidth, H = kSynthHeight;
    const int pad = 3; // covers the +-2 px jitter
    for (int s = 0; s < n_subjects; ++s) {
        const detail::SynthSubject subject = detail::make_synth_subject(rng, W, H);
        std::vector<double> base(static_cast<std::size_t>(W + 2 * pad) * (H + 2 * pad));
        for (int y = -pad; y < H + pad; ++y)
            for (int x = -pad; x < W + pad; ++x)
                base[static_cast<std::size_t>(y + pad) * (W + 2 * pad) + (x + pad)] =
                    subject.sample(x, y);

        char subject_dir[16];
        std::snprintf(subject_dir, sizeof subject_dir, "s%03d", s);
        const fs::path dir = out / subject_dir;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

        for (int i = 0; i < per_subject; ++i) {
            const int dx = rng.uniform_int(-2, 2);
            const int dy = rng.uniform_int(-2, 2);
            GrayImage8 img(W, H);
            for (int y = 0; y < H; ++y) {
                for (int x = 0; x < W; ++x) {
                    const double v =
                        base[static_cast<std::size_t>(y - dy + pad) * (W + 2 * pad) + (x - dx + pad)];
                    img.at(y, x) = clamp_u8(v + rng.normal(0.0, 8.0));
                }
            }
            char name[20];
            std::snprintf(name, sizeof name, "i%03d.pgm", i);
            write_file(dir / name, save_pnm(img, /*binary=*/true));
        }
    }
    return scan_dataset(out);
}

/// Failure report for strict-mode preprocessing.
class PreprocessFailure : public TfrsError {
public:
    PreprocessFailure(const std::string& msg, std::vector<std::string> record)
        : TfrsError(msg), records(std::move(record)) {}
    std::vector<std::string> records;
};

struct PreprocessOutcome {
    std::vector<GrayImage8> faces; // 112x92 each
    std::vector<int> labels;       // subject index per face, manifest order
    std::vector<std::string> dropped; // lenient mode: removed images
};

/// The full per-image pipeline: grayscale conversion (if RGB), mean-threshold
/// binarization, 8-connected labeling, largest component, centroid, axis
/// estimation, elliptic crop to 112x92.
inline GrayImage8 preprocess_face(const GrayImage8& gray) {
    const BinaryImage bin = binarize(gray);
    const LabelImage labels = label_components(bin, Connectivity::Eight);
    const BinaryImage mask = largest_component(labels);
    const Centroid c = centroid(mask);
    const EllipseSpec spec = estimate_axes(mask, c);
    return crop_and_normalize(gray, spec);
}

inline GrayImage8 preprocess_face(const PnmImage& img) {
    if (std::holds_alternative<RgbImage>(img))
        return preprocess_face(to_grayscale(std::get<RgbImage>(img)));
    return preprocess_face(std::get<GrayImage8>(img));
}

/// Runs preprocess_face over every manifest image (parallel over images).
/// Strict mode aborts with all failure records; lenient mode drops the
/// odd/even row pair containing each failed image and records the drops.
inline PreprocessOutcome preprocess_all(const DatasetManifest& manifest, bool lenient = false,
                                        int threads = 1) {
    const int total = manifest.total_images();
    std::vector<std::optional<GrayImage8>> results(static_cast<std::size_t>(total));
    std::vector<std::string> failures(static_cast<std::size_t>(total));

    parallel_for(total, threads, [&](int i) {
        try {
            results[static_cast<std::size_t>(i)] = preprocess_face(load_pnm_file(manifest.image_at(i)));
        } catch (const TfrsError& e) {
            failures[static_cast<std::size_t>(i)] = manifest.image_at(i).string() + ": " + e.what();
        }
    });

    std::vector<std::string> records;
    for (const std::string& f : failures)
        if (!f.empty()) records.push_back(f);

    PreprocessOutcome out;
    if (!records.empty() && !lenient)
        throw PreprocessFailure("preprocessing failed for " + std::to_string(records.size()) +
                                    " image(s); first: " + records.front(),
                                records);

    // Drop whole odd/even pairs so the split stays aligned in lenient mode.
    std::vector<bool> keep(static_cast<std::size_t>(total), true);
    for (int i = 0; i < total; ++i) {
        if (failures[static_cast<std::size_t>(i)].empty()) continue;
        const int pair_start = i - (i % 2);
        for (int j = pair_start; j < std::min(pair_start + 2, total); ++j) {
            if (keep[static_cast<std::size_t>(j)]) {
                keep[static_cast<std::size_t>(j)] = false;
                out.dropped.push_back(manifest.image_at(j).string());
            }
        }
    }
    for (int i = 0; i < total; ++i) {
        if (!keep[static_cast<std::size_t>(i)]) continue;
        out.faces.push_back(std::move(*results[static_cast<std::size_t>(i)]));
        out.labels.push_back(manifest.label_at(i));
    }
    if (out.faces.empty()) throw PreprocessFailure("no images survived preprocessing", records);
    return out;
}

} // namespace tfrs
