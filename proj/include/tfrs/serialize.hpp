#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "tfrs/errors.hpp"
#include "tfrs/mindist.hpp"
#include "tfrs/mlp.hpp"
#include "tfrs/pca.hpp"
#include "tfrs/pnm.hpp"

namespace tfrs {

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f64(std::string& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

class ByteReader {
public:
    explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

    void expect_magic(std::string_view magic) {
        if (bytes_.size() < magic.size() || bytes_.substr(0, magic.size()) != magic)
            throw ParseError("bad model magic (expected " + std::string(magic) + ")", 0);
        pos_ = magic.size();
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }

    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return std::bit_cast<double>(v);
    }

private:
    void need(std::size_t n) {
        if (bytes_.size() - pos_ < n) throw TruncatedError("truncated model data");
    }
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

} // namespace detail

// --- EigenModel: "TFRSEIG1", u32 k, u32 N, mean, eigenvalues, components ---

inline std::string write_eigen_model(const EigenModel& m) {
    std::string out = "TFRSEIG1";
    detail::put_u32(out, static_cast<std::uint32_t>(m.k));
    detail::put_u32(out, static_cast<std::uint32_t>(m.n));
    for (double v : m.mean) detail::put_f64(out, v);
    for (double v : m.eigenvalues) detail::put_f64(out, v);
    for (double v : m.components) detail::put_f64(out, v);
    return out;
}

inline EigenModel read_eigen_model(std::string_view bytes) {
    detail::ByteReader r(bytes);
    r.expect_magic("TFRSEIG1");
    EigenModel m;
    m.k = static_cast<int>(r.u32());
    m.n = static_cast<int>(r.u32());
    if (m.k < 1 || m.n < 1) throw ParseError("invalid eigen model dimensions", 8);
    m.mean.resize(static_cast<std::size_t>(m.n));
    for (double& v : m.mean) v = r.f64();
    m.eigenvalues.resize(static_cast<std::size_t>(m.k));
    for (double& v : m.eigenvalues) v = r.f64();
    m.components.resize(static_cast<std::size_t>(m.k) * m.n);
    for (double& v : m.components) v = r.f64();
    return m;
}

// --- MlpModel: "TFRSMLP1", u32 layer count, u32 dims, then per trainable
// layer the row-major weight matrix followed by the bias vector ---

inline std::string write_mlp_model(const MlpModel& m) {
    std::string out = "TFRSMLP1";
    detail::put_u32(out, static_cast<std::uint32_t>(m.config.layer_sizes.size()));
    for (int s : m.config.layer_sizes) detail::put_u32(out, static_cast<std::uint32_t>(s));
    for (int l = 0; l < kMlpTrainableLayers; ++l) {
        for (double v : m.weights[static_cast<std::size_t>(l)]) detail::put_f64(out, v);
        for (double v : m.biases[static_cast<std::size_t>(l)]) detail::put_f64(out, v);
    }
    return out;
}

inline MlpModel read_mlp_model(std::string_view bytes) {
    detail::ByteReader r(bytes);
    r.expect_magic("TFRSMLP1");
    const std::uint32_t layers = r.u32();
    if (layers != 5) throw ParseError("unsupported layer count", 8);
    MlpModel m;
    for (std::size_t i = 0; i < 5; ++i) {
        const std::uint32_t s = r.u32();
        if (s < 1 || s > 1'000'000) throw ParseError("invalid layer size", 12 + 4 * i);
        m.config.layer_sizes[i] = static_cast<int>(s);
    }
    m.weights.resize(kMlpTrainableLayers);
    m.biases.resize(kMlpTrainableLayers);
    for (int l = 0; l < kMlpTrainableLayers; ++l) {
        const auto n_in = static_cast<std::size_t>(m.config.layer_sizes[static_cast<std::size_t>(l)]);
        const auto n_out = static_cast<std::size_t>(m.config.layer_sizes[static_cast<std::size_t>(l) + 1]);
        m.weights[static_cast<std::size_t>(l)].resize(n_in * n_out);
        for (double& v : m.weights[static_cast<std::size_t>(l)]) v = r.f64();
        m.biases[static_cast<std::size_t>(l)].resize(n_out);
        for (double& v : m.biases[static_cast<std::size_t>(l)]) v = r.f64();
    }
    // Unit order equals label order in every training flow, so loaded models
    // report unit indices as labels.
    m.class_labels.resize(static_cast<std::size_t>(m.config.layer_sizes[4]));
    for (std::size_t u = 0; u < m.class_labels.size(); ++u) m.class_labels[u] = static_cast<int>(u);
    return m;
}

// --- MinDistModel: "TFRSMDC1", u32 W, u32 k, labels, prototypes ---

inline std::string write_mindist_model(const MinDistModel& m) {
    std::string out = "TFRSMDC1";
    const std::size_t w = m.prototypes.size();
    const std::size_t k = w ? m.prototypes[0].size() : 0;
    detail::put_u32(out, static_cast<std::uint32_t>(w));
    detail::put_u32(out, static_cast<std::uint32_t>(k));
    for (int label : m.class_labels) detail::put_u32(out, static_cast<std::uint32_t>(label));
    for (const auto& p : m.prototypes)
        for (double v : p) detail::put_f64(out, v);
    return out;
}

inline MinDistModel read_mindist_model(std::string_view bytes) {
    detail::ByteReader r(bytes);
    r.expect_magic("TFRSMDC1");
    const std::uint32_t w = r.u32();
    const std::uint32_t k = r.u32();
    if (w < 1) throw ParseError("minimum-distance model has no classes", 8);
    MinDistModel m;
    m.class_labels.resize(w);
    for (auto& label : m.class_labels) label = static_cast<int>(r.u32());
    m.prototypes.assign(w, std::vector<double>(k));
    for (auto& p : m.prototypes)
        for (double& v : p) v = r.f64();
    m.counts.assign(w, 1);
    return m;
}

// file helpers

template <typename Model>
void save_model_file(const std::filesystem::path& path, const Model& m) {
    if constexpr (std::is_same_v<Model, EigenModel>) {
        write_file(path, write_eigen_model(m));
    } else if constexpr (std::is_same_v<Model, MlpModel>) {
        write_file(path, write_mlp_model(m));
    } else {
        write_file(path, write_mindist_model(m));
    }
}

} // namespace tfrs
