#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <variant>

#include "tfrs/errors.hpp"
#include "tfrs/raster.hpp"

namespace tfrs {

using PnmImage = std::variant<GrayImage8, RgbImage>;

namespace detail {

class PnmReader {
public:
    explicit PnmReader(std::string_view bytes) : bytes_(bytes) {}

    std::size_t pos() const { return pos_; }
    bool eof() const { return pos_ >= bytes_.size(); }

    std::uint8_t byte() {
        if (eof()) throw TruncatedError("unexpected end of PNM data");
        return static_cast<std::uint8_t>(bytes_[pos_++]);
    }

    // Skips whitespace and '#' comments (comment runs to end of line).
    void skip_space() {
        while (!eof()) {
            char c = bytes_[pos_];
            if (c == '#') {
                while (!eof() && bytes_[pos_] != '\n') ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f') {
                ++pos_;
            } else {
                break;
            }
        }
    }

    int read_int(const char* what) {
        skip_space();
        if (eof()) throw TruncatedError(std::string("missing ") + what);
        std::size_t start = pos_;
        long value = 0;
        bool any = false;
        while (!eof() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000L)
                throw ParseError(std::string("overlarge ") + what, start);
            ++pos_;
            any = true;
        }
        if (!any) throw ParseError(std::string("expected ") + what, pos_);
        return static_cast<int>(value);
    }

    std::string_view raw(std::size_t n) {
        if (bytes_.size() - pos_ < n) throw TruncatedError("truncated PNM pixel data");
        std::string_view v = bytes_.substr(pos_, n);
        pos_ += n;
        return v;
    }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

inline std::uint8_t ascii_sample(PnmReader& r, int maxval) {
    std::size_t at = r.pos();
    int v = r.read_int("pixel value");
    if (v > maxval) throw ParseError("pixel value exceeds maxval", at);
    return static_cast<std::uint8_t>(v);
}

} // namespace detail

/// Parses P2/P3/P5/P6 from a byte buffer. P2/P5 load as GrayImage8,
/// P3/P6 as RgbImage. maxval above 255 is rejected (UnsupportedError).
inline PnmImage load_pnm(std::string_view bytes) {
    detail::PnmReader r(bytes);
    if (bytes.size() < 2 || bytes[0] != 'P')
        throw ParseError("not a PNM file (bad magic)", 0);
    char kind = bytes[1];
    if (kind != '2' && kind != '3' && kind != '5' && kind != '6')
        throw ParseError("unsupported PNM magic", 1);
    r.raw(2);

    int width = r.read_int("width");
    int height = r.read_int("height");
    int maxval = r.read_int("maxval");
    if (width < 1 || height < 1)
        throw ParseError("non-positive image dimensions", r.pos());
    if (maxval < 1)
        throw ParseError("non-positive maxval", r.pos());
    if (maxval > 255)
        throw UnsupportedError("maxval > 255 is not supported");

    const bool color = (kind == '3' || kind == '6');
    const std::size_t samples =
        (color ? 3u : 1u) * static_cast<std::size_t>(width) * static_cast<std::size_t>(height);

    std::vector<std::uint8_t> px;
    px.reserve(samples);
    if (kind == '5' || kind == '6') {
        r.byte(); // single whitespace byte between maxval and raster
        std::string_view raw = r.raw(samples);
        px.assign(raw.begin(), raw.end());
    } else {
        for (std::size_t i = 0; i < samples; ++i) px.push_back(detail::ascii_sample(r, maxval));
    }

    if (color) {
        RgbImage img(width, height);
        img.data = std::move(px);
        return img;
    }
    GrayImage8 img(width, height);
    img.data = std::move(px);
    return img;
}

/// Encodes P2 (ASCII) or P5 (raw) with maxval fixed at 255.
inline std::string save_pnm(const GrayImage8& img, bool binary) {
    std::string out = binary ? "P5\n" : "P2\n";
    out += std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    if (binary) {
        out.append(reinterpret_cast<const char*>(img.data.data()), img.data.size());
    } else {
        for (int r = 0; r < img.height; ++r) {
            for (int c = 0; c < img.width; ++c) {
                if (c) out += ' ';
                out += std::to_string(img.at(r, c));
            }
            out += '\n';
        }
    }
    return out;
}

/// Encodes P3 (ASCII) or P6 (raw) with maxval fixed at 255.
inline std::string save_pnm(const RgbImage& img, bool binary) {
    std::string out = binary ? "P6\n" : "P3\n";
    out += std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    if (binary) {
        out.append(reinterpret_cast<const char*>(img.data.data()), img.data.size());
    } else {
        for (int r = 0; r < img.height; ++r) {
            for (int c = 0; c < img.width; ++c) {
                const std::uint8_t* p = img.pixel(r, c);
                if (c) out += ' ';
                out += std::to_string(p[0]);
                out += ' ';
                out += std::to_string(p[1]);
                out += ' ';
                out += std::to_string(p[2]);
            }
            out += '\n';
        }
    }
    return out;
}

/// Real-valued images must be quantized by the caller before saving.
inline std::string save_pnm(const GrayImageF&, bool) {
    throw UnsupportedError("cannot save real-valued grayscale; quantize to 8-bit first");
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed for " + path.string());
    return bytes;
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

inline PnmImage load_pnm_file(const std::filesystem::path& path) {
    return load_pnm(read_file(path));
}

} // namespace tfrs
