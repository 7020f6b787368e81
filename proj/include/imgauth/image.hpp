#ifndef IMGAUTH_IMAGE_HPP
#define IMGAUTH_IMAGE_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "imgauth/error.hpp"

namespace imgauth {

/// Row-major 2-D grid of unconstrained reals (derivative fields, DCT coefficients).
struct RealField {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> values;

    RealField() = default;
    RealField(std::size_t w, std::size_t h, double fill = 0.0) : width(w), height(h), values(w * h, fill) {}

    double& at(std::size_t x, std::size_t y) { return values[y * width + x]; }
    double at(std::size_t x, std::size_t y) const { return values[y * width + x]; }
    std::size_t size() const noexcept { return values.size(); }
};

/// Grayscale raster with every pixel in [0, 1]. The range is checked on construction
/// and on every write, so a GrayImage in hand is always valid.
class GrayImage {
public:
    GrayImage() = default;

    GrayImage(std::size_t width, std::size_t height, double fill = 0.0)
        : width_(width), height_(height), pixels_(width * height, fill) {
        check_dims();
        check_value(fill);
    }

    GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels)
        : width_(width), height_(height), pixels_(std::move(pixels)) {
        check_dims();
        if (pixels_.size() != width_ * height_)
            throw ParameterError("pixel count " + std::to_string(pixels_.size()) + " does not match " +
                                 std::to_string(width_) + "x" + std::to_string(height_));
        for (double p : pixels_) check_value(p);
    }

    /// Builds an image from arbitrary reals, clamping each into [0, 1]. NaN maps to 0.
    static GrayImage clamped(std::size_t width, std::size_t height, std::vector<double> values) {
        for (double& v : values) v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
        return GrayImage(width, height, std::move(values));
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    bool empty() const noexcept { return pixels_.empty(); }

    double at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
    void set(std::size_t x, std::size_t y, double v) {
        check_value(v);
        pixels_[y * width_ + x] = v;
    }

    std::span<const double> pixels() const noexcept { return pixels_; }

    RealField to_field() const {
        RealField f;
        f.width = width_;
        f.height = height_;
        f.values = pixels_;
        return f;
    }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    void check_dims() const {
        if (width_ == 0 || height_ == 0) throw ParameterError("image dimensions must be positive");
    }
    static void check_value(double v) {
        if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("pixel value " + std::to_string(v) + " outside [0,1]");
    }

    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> pixels_;
};

/// Axis-aligned crop window in pixels; (x0, y0) is the top-left corner.
struct CropRect {
    std::size_t x0 = 0;
    std::size_t y0 = 0;
    std::size_t w = 0;
    std::size_t h = 0;
};

namespace detail {

class PgmReader {
public:
    explicit PgmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t pos() const noexcept { return pos_; }

    void skip_separators() {
        while (pos_ < bytes_.size()) {
            const char c = static_cast<char>(bytes_[pos_]);
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                return;
            }
        }
    }

    std::string token() {
        skip_separators();
        const std::size_t start = pos_;
        while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') ++pos_;
        if (start == pos_) throw DecodeError("unexpected end of PGM header", start);
        return {reinterpret_cast<const char*>(bytes_.data()) + start, pos_ - start};
    }

    unsigned long number(const char* what) {
        skip_separators();
        const std::size_t start = pos_;
        const std::string tok = token();
        if (!std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); }) || tok.size() > 9)
            throw DecodeError(std::string("malformed PGM ") + what + " '" + tok + "'", start);
        return std::stoul(tok);
    }

    /// Consumes the single whitespace byte that terminates a binary header.
    void header_terminator() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
            throw DecodeError("missing whitespace after PGM header", pos_);
        ++pos_;
    }

    std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }
    void advance(std::size_t n) { pos_ += n; }
    bool at_end() const noexcept { return pos_ >= bytes_.size(); }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Decodes a binary (P5) or ASCII (P2) graymap with maxval <= 255.
inline GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
    detail::PgmReader rd(bytes);
    if (bytes.size() < 2) throw DecodeError("file too short for a PGM magic number", 0);
    const std::string magic = rd.token();
    if (magic != "P5" && magic != "P2") throw DecodeError("unsupported magic '" + magic + "'", 0);
    const bool binary = magic == "P5";

    const std::size_t width = rd.number("width");
    const std::size_t height = rd.number("height");
    if (width == 0 || height == 0) throw DecodeError("PGM dimensions must be positive", rd.pos());
    const std::size_t maxval_pos = rd.pos();
    const unsigned long maxval = rd.number("maxval");
    if (maxval == 0 || maxval > 255)
        throw DecodeError("PGM maxval " + std::to_string(maxval) + " outside 1..255", maxval_pos);

    const std::size_t count = width * height;
    std::vector<double> pixels(count);
    // divide rather than multiply by 1/maxval so that k/255 round-trips exactly
    const double denom = static_cast<double>(maxval);
    if (binary) {
        rd.header_terminator();
        const auto data = rd.rest();
        if (data.size() < count) throw DecodeError("truncated PGM pixel data", rd.pos() + data.size());
        for (std::size_t i = 0; i < count; ++i) {
            if (data[i] > maxval) throw DecodeError("PGM sample exceeds maxval", rd.pos() + i);
            pixels[i] = data[i] / denom;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            rd.skip_separators();
            if (rd.at_end()) throw DecodeError("truncated PGM pixel data", rd.pos());
            const std::size_t at = rd.pos();
            const unsigned long v = rd.number("sample");
            if (v > maxval) throw DecodeError("PGM sample exceeds maxval", at);
            pixels[i] = static_cast<double>(v) / denom;
        }
    }
    return GrayImage(width, height, std::move(pixels));
}

/// Quantizes a [0,1] value to 8 bits, rounding halves up.
inline std::uint8_t quantize_u8(double p) {
    return static_cast<std::uint8_t>(std::clamp(std::floor(p * 255.0 + 0.5), 0.0, 255.0));
}

/// Encodes as binary P5, maxval 255, no comments.
inline std::vector<std::uint8_t> save_pgm(const GrayImage& img) {
    const std::string header =
        "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(header.size() + img.size());
    for (double p : img.pixels()) out.push_back(quantize_u8(p));
    return out;
}

inline GrayImage crop(const GrayImage& img, const CropRect& r) {
    if (r.w == 0 || r.h == 0 || r.x0 + r.w > img.width() || r.y0 + r.h > img.height())
        throw BoundsError("crop rect (" + std::to_string(r.x0) + "," + std::to_string(r.y0) + "," +
                          std::to_string(r.w) + "," + std::to_string(r.h) + ") exceeds image " +
                          std::to_string(img.width()) + "x" + std::to_string(img.height()));
    std::vector<double> px;
    px.reserve(r.w * r.h);
    for (std::size_t y = r.y0; y < r.y0 + r.h; ++y)
        for (std::size_t x = r.x0; x < r.x0 + r.w; ++x) px.push_back(img.at(x, y));
    return GrayImage(r.w, r.h, std::move(px));
}

inline std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed for '" + path + "'");
}

inline GrayImage read_pgm_file(const std::string& path) {
    const auto bytes = read_file(path);
    try {
        return load_pgm(bytes);
    } catch (const DecodeError& e) {
        throw DecodeError(path + ": " + e.what());
    }
}

inline void write_pgm_file(const std::string& path, const GrayImage& img) { write_file(path, save_pgm(img)); }

}  // namespace imgauth

#endif  // IMGAUTH_IMAGE_HPP
