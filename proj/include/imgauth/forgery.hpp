#ifndef IMGAUTH_FORGERY_HPP
#define IMGAUTH_FORGERY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "imgauth/error.hpp"
#include "imgauth/image.hpp"
#include "imgauth/interpolation.hpp"

namespace imgauth {

/// Forward affine map in pixel coordinates (x = column, y = row):
///   X' = a0 + a1 x + a2 y
///   Y' = b0 + b1 x + b2 y
struct AffineParams {
    double a0 = 0.0, a1 = 1.0, a2 = 0.0;
    double b0 = 0.0, b1 = 0.0, b2 = 1.0;

    double determinant() const noexcept { return a1 * b2 - a2 * b1; }

    static AffineParams identity() { return {}; }

    static AffineParams translation(double dx, double dy) { return {dx, 1.0, 0.0, dy, 0.0, 1.0}; }

    /// Scale by `scale`, shear x by `skew * y`, then rotate counterclockwise (as displayed)
    /// by `rotate_deg`, all about the centre (cx, cy).
    static AffineParams about_center(double cx, double cy, double scale, double rotate_deg, double skew) {
        const double th = rotate_deg * std::numbers::pi / 180.0;
        double c = std::cos(th);
        double s = std::sin(th);
        // snap quarter turns so that integer grids map onto integer grids
        if (std::abs(c) < 1e-15) c = 0.0;
        if (std::abs(s) < 1e-15) s = 0.0;
        // rows grow downward, so a displayed counterclockwise turn is -th in (x, y)
        const double r11 = c, r12 = s, r21 = -s, r22 = c;
        // M = R * Shear * Scale
        const double m11 = r11 * scale, m12 = (r11 * skew + r12) * scale;
        const double m21 = r21 * scale, m22 = (r21 * skew + r22) * scale;
        AffineParams p{0.0, m11, m12, 0.0, m21, m22};
        p.a0 = cx - (m11 * cx + m12 * cy);
        p.b0 = cy - (m21 * cx + m22 * cy);
        return p;
    }

    std::string describe() const {
        auto f = [](double v) {
            char buf[48];
            std::snprintf(buf, sizeof buf, "%.9g", v + 0.0);
            return std::string(buf);
        };
        return "a0=" + f(a0) + " a1=" + f(a1) + " a2=" + f(a2) + " b0=" + f(b0) + " b1=" + f(b1) + " b2=" + f(b2);
    }
};

namespace detail {

/// Tensor-product interpolation of `img` at source coordinate (sx, sy).
inline double sample_2d(const GrayImage& img, double sx, double sy, InterpolationKernel kernel) {
    const int r = kernel.radius();
    const auto bx = static_cast<std::int64_t>(std::floor(sx));
    const auto by = static_cast<std::int64_t>(std::floor(sy));
    std::array<double, 6> wx{}, wy{};
    std::array<std::size_t, 6> ix{}, iy{};
    int nx = 0, ny = 0;
    for (std::int64_t k = bx - r; k <= bx + r + 1; ++k) {
        const double w = kernel_weight(kernel, sx - static_cast<double>(k));
        if (w != 0.0) {
            wx[nx] = w;
            ix[nx++] = symmetric_index(k, img.width());
        }
    }
    for (std::int64_t k = by - r; k <= by + r + 1; ++k) {
        const double w = kernel_weight(kernel, sy - static_cast<double>(k));
        if (w != 0.0) {
            wy[ny] = w;
            iy[ny++] = symmetric_index(k, img.height());
        }
    }
    double acc = 0.0;
    for (int j = 0; j < ny; ++j) {
        double row = 0.0;
        for (int i = 0; i < nx; ++i) row += img.at(ix[i], iy[j]) * wx[i];
        acc += row * wy[j];
    }
    return acc;
}

}  // namespace detail

/// Resamples `img` under the affine map `p` by inverse mapping: every output pixel
/// (X', Y') takes the interpolated input value at T^-1(X', Y'). Output keeps the
/// input dimensions and is clamped into [0, 1].
inline GrayImage apply_affine(const GrayImage& img, const AffineParams& p, InterpolationKernel kernel) {
    const double det = p.determinant();
    if (!std::isfinite(det) || std::abs(det) < 1e-12)
        throw NonInvertibleError("affine map is singular (determinant " + std::to_string(det) + ")");
    const double i11 = p.b2 / det, i12 = -p.a2 / det;
    const double i21 = -p.b1 / det, i22 = p.a1 / det;
    std::vector<double> out(img.size());
    for (std::size_t y = 0; y < img.height(); ++y) {
        for (std::size_t x = 0; x < img.width(); ++x) {
            const double u = static_cast<double>(x) - p.a0;
            const double v = static_cast<double>(y) - p.b0;
            const double sx = i11 * u + i12 * v;
            const double sy = i21 * u + i22 * v;
            out[y * img.width() + x] = detail::sample_2d(img, sx, sy, kernel);
        }
    }
    return GrayImage::clamped(img.width(), img.height(), std::move(out));
}

}  // namespace imgauth

#endif  // IMGAUTH_FORGERY_HPP
