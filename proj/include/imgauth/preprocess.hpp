#ifndef IMGAUTH_PREPROCESS_HPP
#define IMGAUTH_PREPROCESS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imgauth/error.hpp"
#include "imgauth/image.hpp"
#include "imgauth/interpolation.hpp"

namespace imgauth {

// ---------------------------------------------------------------------------
// Spatial / intensity stages
// ---------------------------------------------------------------------------

/// k x k box mean with symmetric edge extension.
inline GrayImage average_filter(const GrayImage& img, int k) {
    if (k < 3 || k % 2 == 0) throw ParameterError("average filter size must be odd and >= 3, got " + std::to_string(k));
    const std::size_t w = img.width(), h = img.height();
    const std::int64_t r = k / 2;
    // separable: horizontal then vertical pass, fixed summation order
    std::vector<double> tmp(w * h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (std::int64_t d = -r; d <= r; ++d) acc += img.at(symmetric_index(static_cast<std::int64_t>(x) + d, w), y);
            tmp[y * w + x] = acc / k;
        }
    std::vector<double> out(w * h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (std::int64_t d = -r; d <= r; ++d) acc += tmp[symmetric_index(static_cast<std::int64_t>(y) + d, h) * w + x];
            out[y * w + x] = acc / k;
        }
    return GrayImage::clamped(w, h, std::move(out));
}

/// Global histogram equalization over 256 levels. Constant images are returned unchanged.
inline GrayImage histogram_equalize(const GrayImage& img) {
    std::array<std::size_t, 256> hist{};
    std::vector<std::uint8_t> level(img.size());
    const auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        level[i] = quantize_u8(px[i]);
        ++hist[level[i]];
    }
    std::array<std::size_t, 256> cdf{};
    std::size_t run = 0;
    std::size_t cdf_min = 0;
    for (std::size_t v = 0; v < 256; ++v) {
        run += hist[v];
        cdf[v] = run;
        if (cdf_min == 0 && run > 0) cdf_min = run;
    }
    const std::size_t n = px.size();
    if (cdf_min == n) return img;
    const double denom = static_cast<double>(n - cdf_min);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(cdf[level[i]] - cdf_min) / denom;
    return GrayImage(img.width(), img.height(), std::move(out));
}

/// Percentile with linear interpolation between order statistics (pct in [0, 100]).
inline double percentile(std::vector<double> values, double pct) {
    if (values.empty()) throw ParameterError("percentile of an empty set");
    std::sort(values.begin(), values.end());
    const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + (values[hi] - values[lo]) * frac;
}

inline GrayImage contrast_stretch(const GrayImage& img, double lo_pct, double hi_pct) {
    if (!(lo_pct >= 0.0 && lo_pct < hi_pct && hi_pct <= 100.0))
        throw ParameterError("contrast stretch needs 0 <= lo < hi <= 100");
    const std::vector<double> px(img.pixels().begin(), img.pixels().end());
    const double lo = percentile(px, lo_pct);
    const double hi = percentile(px, hi_pct);
    if (!(hi > lo)) return img;
    std::vector<double> out(px.size());
    for (std::size_t i = 0; i < px.size(); ++i) out[i] = (px[i] - lo) / (hi - lo);
    return GrayImage::clamped(img.width(), img.height(), std::move(out));
}

/// Bilinear resize with corner-aligned mapping (output corners sit on input corners).
/// A single output row/column samples the input centre.
inline GrayImage resize_bilinear(const GrayImage& img, std::size_t out_w, std::size_t out_h) {
    if (out_w == 0 || out_h == 0) throw ParameterError("resize target must be at least 1x1");
    auto coord = [](std::size_t i, std::size_t out, std::size_t in) {
        if (out == 1) return static_cast<double>(in - 1) / 2.0;
        return static_cast<double>(i) * static_cast<double>(in - 1) / static_cast<double>(out - 1);
    };
    std::vector<double> out(out_w * out_h);
    for (std::size_t y = 0; y < out_h; ++y) {
        const double sy = coord(y, out_h, img.height());
        const auto y0 = static_cast<std::size_t>(std::floor(sy));
        const std::size_t y1 = std::min(y0 + 1, img.height() - 1);
        const double fy = sy - static_cast<double>(y0);
        for (std::size_t x = 0; x < out_w; ++x) {
            const double sx = coord(x, out_w, img.width());
            const auto x0 = static_cast<std::size_t>(std::floor(sx));
            const std::size_t x1 = std::min(x0 + 1, img.width() - 1);
            const double fx = sx - static_cast<double>(x0);
            const double top = img.at(x0, y0) + (img.at(x1, y0) - img.at(x0, y0)) * fx;
            const double bot = img.at(x0, y1) + (img.at(x1, y1) - img.at(x0, y1)) * fx;
            out[y * out_w + x] = top + (bot - top) * fy;
        }
    }
    return GrayImage::clamped(out_w, out_h, std::move(out));
}

// ---------------------------------------------------------------------------
// 2-D DCT
// ---------------------------------------------------------------------------

namespace detail {

/// Orthonormal DCT-II basis, row u holds the u-th cosine sampled at n points.
inline std::vector<double> dct_basis(std::size_t n) {
    std::vector<double> b(n * n);
    for (std::size_t u = 0; u < n; ++u) {
        const double scale = u == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        for (std::size_t i = 0; i < n; ++i)
            b[u * n + i] = scale * std::cos(std::numbers::pi * (2.0 * i + 1.0) * u / (2.0 * n));
    }
    return b;
}

/// out = B_rows * in * B_cols^T (forward) or B_rows^T * in * B_cols (inverse).
inline RealField separable_transform(const RealField& in, bool inverse) {
    const std::size_t w = in.width, h = in.height;
    const auto bw = dct_basis(w);
    const auto bh = dct_basis(h);
    RealField tmp(w, h), out(w, h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t u = 0; u < w; ++u) {
            double acc = 0.0;
            for (std::size_t x = 0; x < w; ++x) acc += in.at(x, y) * (inverse ? bw[x * w + u] : bw[u * w + x]);
            tmp.at(u, y) = acc;
        }
    for (std::size_t u = 0; u < w; ++u)
        for (std::size_t v = 0; v < h; ++v) {
            double acc = 0.0;
            for (std::size_t y = 0; y < h; ++y) acc += tmp.at(u, y) * (inverse ? bh[y * h + v] : bh[v * h + y]);
            out.at(u, v) = acc;
        }
    return out;
}

}  // namespace detail

/// Orthonormal type-II 2-D DCT; coefficient (u, v) is stored at column u, row v.
inline RealField dct2(const RealField& in) {
    if (in.width == 0 || in.height == 0) throw ParameterError("dct2 of an empty field");
    return detail::separable_transform(in, false);
}
inline RealField dct2(const GrayImage& img) { return dct2(img.to_field()); }

inline RealField idct2(const RealField& coeffs) {
    if (coeffs.width == 0 || coeffs.height == 0) throw ParameterError("idct2 of an empty field");
    return detail::separable_transform(coeffs, true);
}

/// JPEG-style zig-zag order over a w x h grid, as (column, row) pairs.
inline std::vector<std::pair<std::size_t, std::size_t>> zigzag_order(std::size_t w, std::size_t h) {
    std::vector<std::pair<std::size_t, std::size_t>> order;
    order.reserve(w * h);
    for (std::size_t s = 0; s + 1 < w + h; ++s) {
        std::vector<std::pair<std::size_t, std::size_t>> diag;
        for (std::size_t v = 0; v <= s && v < h; ++v) {
            const std::size_t u = s - v;
            if (u < w) diag.emplace_back(u, v);
        }
        if (s % 2 == 0) std::reverse(diag.begin(), diag.end());
        order.insert(order.end(), diag.begin(), diag.end());
    }
    return order;
}

/// First k zig-zag coefficients of the 2-D DCT.
inline std::vector<double> dct_lowfreq(const GrayImage& img, std::size_t k) {
    if (k == 0 || k > img.size()) throw ParameterError("dct coefficient count must be in 1..pixel count");
    const auto c = dct2(img);
    const auto order = zigzag_order(c.width, c.height);
    std::vector<double> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = c.at(order[i].first, order[i].second);
    return out;
}

// ---------------------------------------------------------------------------
// Feature vectors and PCA
// ---------------------------------------------------------------------------

struct FeatureVector {
    std::vector<double> values;
    std::optional<std::string> source_label;
};

struct PcaModel {
    std::vector<double> mean;
    std::vector<std::vector<double>> components;  // k rows of length D
    std::vector<double> eigenvalues;

    std::size_t input_dim() const noexcept { return mean.size(); }
    std::size_t output_dim() const noexcept { return components.size(); }
};

/// Top-k principal axes of the sample covariance (divisor count - 1). When there are fewer
/// samples than dimensions the eigenproblem is solved on the Gram matrix instead.
inline PcaModel pca_fit(std::span<const FeatureVector> vectors, std::size_t k) {
    const std::size_t n = vectors.size();
    if (n < 2) throw ParameterError("pca needs at least two vectors");
    const std::size_t d = vectors.front().values.size();
    if (d == 0) throw ParameterError("pca input vectors are empty");
    for (const auto& v : vectors)
        if (v.values.size() != d) throw ParameterError("pca input vectors differ in length");
    if (k < 1 || k > std::min(n - 1, d))
        throw ParameterError("pca k=" + std::to_string(k) + " exceeds min(count-1, dim)=" + std::to_string(std::min(n - 1, d)));

    Eigen::MatrixXd x(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) x(i, j) = vectors[i].values[j];
    const Eigen::RowVectorXd mu = x.colwise().mean();
    x.rowwise() -= mu;
    const double denom = static_cast<double>(n - 1);

    Eigen::MatrixXd axes(d, k);
    Eigen::VectorXd lambda(k);
    if (n < d) {
        const Eigen::MatrixXd gram = (x * x.transpose()) / denom;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        const Eigen::VectorXd ev = es.eigenvalues();
        const double tol = std::max(1e-12, ev.cwiseAbs().maxCoeff() * 1e-10);
        std::size_t filled = 0;
        for (std::size_t i = 0; i < k; ++i) {
            const Eigen::Index idx = static_cast<Eigen::Index>(n - 1 - i);
            if (ev(idx) <= tol) break;
            Eigen::VectorXd v = x.transpose() * es.eigenvectors().col(idx);
            v.normalize();
            axes.col(static_cast<Eigen::Index>(i)) = v;
            lambda(static_cast<Eigen::Index>(i)) = ev(idx);
            ++filled;
        }
        // rank-deficient data: complete with null-space directions (eigenvalue 0)
        for (std::size_t e = 0; filled < k && e < d; ++e) {
            Eigen::VectorXd v = Eigen::VectorXd::Unit(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(e));
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t j = 0; j < filled; ++j) v -= axes.col(static_cast<Eigen::Index>(j)).dot(v) * axes.col(static_cast<Eigen::Index>(j));
            if (v.norm() < 1e-6) continue;
            // stay orthogonal to the data span so C v = 0 holds
            const Eigen::VectorXd cv = x.transpose() * (x * v);
            if (cv.norm() > 1e-8 * std::max(1.0, v.norm())) continue;
            axes.col(static_cast<Eigen::Index>(filled)) = v.normalized();
            lambda(static_cast<Eigen::Index>(filled)) = 0.0;
            ++filled;
        }
        if (filled < k) throw ParameterError("could not complete a PCA basis of size " + std::to_string(k));
    } else {
        const Eigen::MatrixXd cov = (x.transpose() * x) / denom;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        for (std::size_t i = 0; i < k; ++i) {
            const Eigen::Index idx = static_cast<Eigen::Index>(d - 1 - i);
            axes.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(idx);
            lambda(static_cast<Eigen::Index>(i)) = es.eigenvalues()(idx);
        }
    }

    PcaModel m;
    m.mean.assign(mu.data(), mu.data() + d);
    for (std::size_t i = 0; i < k; ++i) {
        Eigen::VectorXd v = axes.col(static_cast<Eigen::Index>(i));
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        m.components.emplace_back(v.data(), v.data() + d);
        const double l = lambda(static_cast<Eigen::Index>(i));
        m.eigenvalues.push_back(l < 0.0 ? 0.0 : l);
    }
    return m;
}

inline FeatureVector project_features(const PcaModel& model, const FeatureVector& v) {
    if (v.values.size() != model.input_dim())
        throw ParameterError("feature length " + std::to_string(v.values.size()) + " does not match PCA input " +
                             std::to_string(model.input_dim()));
    FeatureVector out;
    out.source_label = v.source_label;
    out.values.resize(model.output_dim());
    for (std::size_t c = 0; c < model.output_dim(); ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < model.input_dim(); ++j) acc += model.components[c][j] * (v.values[j] - model.mean[j]);
        out.values[c] = acc;
    }
    return out;
}

inline std::vector<double> reconstruct_features(const PcaModel& model, std::span<const double> coeffs) {
    if (coeffs.size() != model.output_dim()) throw ParameterError("coefficient count does not match PCA model");
    std::vector<double> out = model.mean;
    for (std::size_t c = 0; c < coeffs.size(); ++c)
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += coeffs[c] * model.components[c][j];
    return out;
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

struct PreprocessOptions {
    int filter_size = 3;
    bool stretch = false;
    double stretch_lo_pct = 1.0;
    double stretch_hi_pct = 99.0;
};

/// Filter, equalize, optional stretch, shrink to target_side x target_side.
inline GrayImage preprocess_image(const GrayImage& img, std::size_t target_side, const PreprocessOptions& opt = {}) {
    if (target_side < 4) throw ParameterError("target side must be >= 4");
    GrayImage g = average_filter(img, opt.filter_size);
    g = histogram_equalize(g);
    if (opt.stretch) g = contrast_stretch(g, opt.stretch_lo_pct, opt.stretch_hi_pct);
    return resize_bilinear(g, target_side, target_side);
}

/// Row-major flatten of the preprocessed image (length target_side^2).
inline FeatureVector preprocess_to_vector(const GrayImage& img, std::size_t target_side,
                                          const PreprocessOptions& opt = {}) {
    const auto g = preprocess_image(img, target_side, opt);
    FeatureVector fv;
    fv.values.assign(g.pixels().begin(), g.pixels().end());
    return fv;
}

}  // namespace imgauth

#endif  // IMGAUTH_PREPROCESS_HPP
