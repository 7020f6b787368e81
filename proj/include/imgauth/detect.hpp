#ifndef IMGAUTH_DETECT_HPP
#define IMGAUTH_DETECT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "imgauth/error.hpp"
#include "imgauth/image.hpp"
#include "imgauth/interpolation.hpp"

namespace imgauth {

// ---------------------------------------------------------------------------
// Derivatives
// ---------------------------------------------------------------------------

/// Coefficients of [1, -1] convolved with itself n times: c_j = (-1)^j C(n, j).
inline std::vector<double> difference_coefficients(int n) {
    if (n < 1) throw ParameterError("derivative order must be >= 1");
    std::vector<double> c{1.0};
    for (int i = 0; i < n; ++i) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t j = 0; j < c.size(); ++j) {
            next[j] += c[j];
            next[j + 1] -= c[j];
        }
        c = std::move(next);
    }
    return c;
}

/// n-th finite difference, centred at floor(n/2), symmetric edge extension.
/// For n = 2 this is y[i] = x[i-1] - 2 x[i] + x[i+1].
inline std::vector<double> derivative_n(std::span<const double> sig, int n) {
    const auto c = difference_coefficients(n);
    if (sig.size() <= static_cast<std::size_t>(n))
        throw ParameterError("sequence length must exceed derivative order");
    const std::int64_t shift = n / 2;
    std::vector<double> out(sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j)
            acc += c[j] * sig[symmetric_index(static_cast<std::int64_t>(i) - shift + static_cast<std::int64_t>(j),
                                              sig.size())];
        out[i] = acc;
    }
    return out;
}

/// |D^n b| with the difference taken along each row.
inline RealField image_derivative_magnitude(const GrayImage& img, int n) {
    if (n < 1) throw ParameterError("derivative order must be >= 1");
    if (img.width() <= static_cast<std::size_t>(n) + 1)
        throw ParameterError("image width " + std::to_string(img.width()) + " too small for derivative order " +
                             std::to_string(n));
    RealField out(img.width(), img.height());
    const auto px = img.pixels();
    for (std::size_t y = 0; y < img.height(); ++y) {
        const auto row = derivative_n(px.subspan(y * img.width(), img.width()), n);
        for (std::size_t x = 0; x < img.width(); ++x) out.at(x, y) = std::abs(row[x]);
    }
    return out;
}

/// Variance (unit noise power) of the n-th unit-step difference of a signal that was
/// interpolated from i.i.d. samples spaced `step` apart, evaluated at position x:
///   sum_k ( sum_j c_j w((x + j - floor(n/2)) / step - k) )^2
/// Periodic in x with period `step`.
inline double theoretical_derivative_variance(InterpolationKernel kernel, int n, double x, double step) {
    if (!(step > 0.0)) throw ParameterError("step must be positive");
    const auto c = difference_coefficients(n);
    const double shift = static_cast<double>(n / 2);
    const double t_lo = (x - shift) / step;
    const double t_hi = (x - shift + n) / step;
    const auto k_lo = static_cast<std::int64_t>(std::floor(t_lo)) - kernel.radius() - 1;
    const auto k_hi = static_cast<std::int64_t>(std::ceil(t_hi)) + kernel.radius() + 1;
    double total = 0.0;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        double d = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j)
            d += c[j] * kernel_weight(kernel, (x + static_cast<double>(j) - shift) / step - static_cast<double>(k));
        total += d * d;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Radon projections
// ---------------------------------------------------------------------------

/// One projection per angle; projections[a][origins[a]] is the bin at x' = 0.
struct Sinogram {
    std::vector<int> angles;
    std::vector<std::vector<double>> projections;
    std::vector<std::size_t> origins;
};

inline std::vector<int> all_angles() {
    std::vector<int> a(180);
    for (int i = 0; i < 180; ++i) a[i] = i;
    return a;
}

/// Projects `field` onto the axis x' = x cos(theta) + y sin(theta) for each angle (degrees).
/// Coordinates are centred on pixel (floor((W-1)/2), floor((H-1)/2)) with y pointing up.
/// Each pixel is split into four quarter-mass sub-pixels at offsets of +/-0.25, and each
/// sub-pixel lands whole in the unit bin nearest to its x'.
inline Sinogram radon_transform(const RealField& field, std::span<const int> angles) {
    if (field.width == 0 || field.height == 0) throw ParameterError("radon transform of an empty field");
    const std::size_t w = field.width, h = field.height;
    const double ox = static_cast<double>((w - 1) / 2);
    const double oy = static_cast<double>((h - 1) / 2);

    std::vector<double> xs(2 * w), ys(2 * h);
    for (std::size_t i = 0; i < 2 * w; ++i) xs[i] = static_cast<double>(i / 2) - ox + (i % 2 ? 0.25 : -0.25);
    for (std::size_t i = 0; i < 2 * h; ++i) ys[i] = oy - static_cast<double>(i / 2) + (i % 2 ? -0.25 : 0.25);

    Sinogram sino;
    sino.angles.assign(angles.begin(), angles.end());
    sino.projections.reserve(angles.size());
    sino.origins.reserve(angles.size());
    std::vector<double> xc(2 * w), ys_(2 * h);
    for (int deg : angles) {
        const double th = deg * std::numbers::pi / 180.0;
        double c = std::cos(th), s = std::sin(th);
        if (std::abs(c) < 1e-15) c = 0.0;
        if (std::abs(s) < 1e-15) s = 0.0;
        for (std::size_t i = 0; i < 2 * w; ++i) xc[i] = xs[i] * c;
        for (std::size_t i = 0; i < 2 * h; ++i) ys_[i] = ys[i] * s;

        const double lo = std::min(xc.front(), xc.back()) + std::min(ys_.front(), ys_.back());
        const double hi = std::max(xc.front(), xc.back()) + std::max(ys_.front(), ys_.back());
        const auto bin_lo = static_cast<std::int64_t>(std::floor(lo + 0.5));
        const auto bin_hi = static_cast<std::int64_t>(std::floor(hi + 0.5));
        std::vector<double> proj(static_cast<std::size_t>(bin_hi - bin_lo + 1), 0.0);

        for (std::size_t row = 0; row < h; ++row) {
            for (std::size_t col = 0; col < w; ++col) {
                const double v = field.values[row * w + col];
                if (v == 0.0) continue;
                const double q = 0.25 * v;
                for (std::size_t sr = 2 * row; sr < 2 * row + 2; ++sr)
                    for (std::size_t sc = 2 * col; sc < 2 * col + 2; ++sc) {
                        const auto b = static_cast<std::int64_t>(std::floor(xc[sc] + ys_[sr] + 0.5)) - bin_lo;
                        proj[static_cast<std::size_t>(b)] += q;
                    }
            }
        }
        sino.projections.push_back(std::move(proj));
        sino.origins.push_back(static_cast<std::size_t>(-bin_lo));
    }
    return sino;
}

// ---------------------------------------------------------------------------
// Autocovariance and periodicity
// ---------------------------------------------------------------------------

struct AutoCovSequence {
    std::vector<double> values;  // lag 0..K
    std::size_t source_length = 0;
};

/// Biased autocovariance R(k) = (1/N) sum_{i<N-k} (v[i+k] - mean)(v[i] - mean), k = 0..max_lag.
inline AutoCovSequence autocovariance(std::span<const double> v, std::size_t max_lag) {
    const std::size_t n = v.size();
    if (n == 0 || max_lag >= n)
        throw ParameterError("max lag " + std::to_string(max_lag) + " must be below sequence length " +
                             std::to_string(n));
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = v[i] - mean;
    AutoCovSequence out;
    out.source_length = n;
    out.values.resize(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) acc += d[i + k] * d[i];
        out.values[k] = acc / static_cast<double>(n);
    }
    return out;
}

/// DFT magnitudes of the lag sequence mirrored to even symmetry (length 2K), bins 0..K.
/// Bin f corresponds to f / (2K) cycles per sample.
inline std::vector<double> autocovariance_spectrum(const AutoCovSequence& acov) {
    const auto& r = acov.values;
    if (r.size() < 2) throw ParameterError("autocovariance needs at least two lags");
    const std::size_t k_max = r.size() - 1;
    const std::size_t len = 2 * k_max;
    std::vector<double> cos_table(len);
    for (std::size_t i = 0; i < len; ++i) cos_table[i] = std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / len);
    std::vector<double> mag(k_max + 1);
    for (std::size_t f = 0; f <= k_max; ++f) {
        double acc = r[0] + ((f % 2) ? -r[k_max] : r[k_max]);
        for (std::size_t k = 1; k < k_max; ++k) acc += 2.0 * r[k] * cos_table[(f * k) % len];
        mag[f] = std::abs(acc);
    }
    return mag;
}

struct PeriodicityScore {
    double dominant_frequency = 0.0;  // cycles / sample
    double strength = 0.0;            // peak / median
};

/// Peak-to-median ratio of the autocovariance spectrum after dropping the lowest
/// `dc_exclusion_bins` bins.
inline PeriodicityScore periodicity_score(const AutoCovSequence& acov, std::size_t dc_exclusion_bins) {
    if (acov.values.size() < 8) throw ParameterError("autocovariance must have at least 8 lags");
    if (dc_exclusion_bins < 1) throw ParameterError("dc exclusion must be at least one bin");
    const auto mag = autocovariance_spectrum(acov);
    if (dc_exclusion_bins >= mag.size()) throw ParameterError("dc exclusion removes every frequency bin");
    const std::size_t len = 2 * (acov.values.size() - 1);

    std::size_t peak_bin = dc_exclusion_bins;
    for (std::size_t f = dc_exclusion_bins + 1; f < mag.size(); ++f)
        if (mag[f] > mag[peak_bin]) peak_bin = f;
    const double peak = mag[peak_bin];
    if (peak == 0.0) return {};

    std::vector<double> rest(mag.begin() + static_cast<std::ptrdiff_t>(dc_exclusion_bins), mag.end());
    const std::size_t mid = rest.size() / 2;
    std::nth_element(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(mid), rest.end());
    double median = rest[mid];
    if (rest.size() % 2 == 0) {
        const double lower = *std::max_element(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(mid));
        median = 0.5 * (median + lower);
    }
    // a spectrum that is zero almost everywhere caps the ratio rather than dividing by zero
    median = std::max(median, peak * 1e-12);
    return {static_cast<double>(peak_bin) / static_cast<double>(len), peak / median};
}

// ---------------------------------------------------------------------------
// Verdict
// ---------------------------------------------------------------------------

struct DetectorConfig {
    int derivative_order = 2;
    // `imgauth calibrate tests/data/calibration_noise` output; config/default.json carries the same value
    double threshold = 55.2163540980945;
    std::size_t max_lag = 128;
    std::size_t dc_exclusion_bins = 2;
};

struct AngleScore {
    int angle = 0;
    double dominant_frequency = 0.0;
    double strength = 0.0;
};

struct PeriodicityReport {
    std::vector<AngleScore> entries;
    double global_max_strength = 0.0;
    int global_peak_angle = 0;
    double global_peak_frequency = 0.0;
};

enum class Verdict { authentic, forged };

struct ForgeryVerdict {
    Verdict label = Verdict::authentic;
    double score = 0.0;
    double threshold = 0.0;
    PeriodicityReport report;
};

inline std::size_t lag_count_for(std::size_t projection_length, const DetectorConfig& cfg) {
    return std::min(cfg.max_lag, projection_length / 2);
}

inline void check_detector_config(const DetectorConfig& cfg) {
    if (cfg.derivative_order < 1) throw ParameterError("derivative order must be >= 1");
    if (!(cfg.threshold > 0.0)) throw ParameterError("threshold must be positive");
    if (cfg.max_lag < 7) throw ParameterError("max lag must be at least 7");
    if (cfg.dc_exclusion_bins < 1) throw ParameterError("dc exclusion must be at least one bin");
}

inline Sinogram detector_sinogram(const GrayImage& img, const DetectorConfig& cfg) {
    check_detector_config(cfg);
    if (img.width() < 32 || img.height() < 32)
        throw ParameterError("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                             " is smaller than the 32x32 detector minimum");
    auto field = image_derivative_magnitude(img, cfg.derivative_order);
    // Remove the global mean so the chord-length envelope of each projection vanishes;
    // otherwise its low-frequency energy swamps any resampling periodicity.
    double mean = 0.0;
    for (double v : field.values) mean += v;
    mean /= static_cast<double>(field.size());
    for (double& v : field.values) v -= mean;
    const auto angles = all_angles();
    return radon_transform(field, angles);
}

/// Scores every projection; the global maximum keeps the lowest angle on ties.
inline PeriodicityReport score_sinogram(const Sinogram& sino, const DetectorConfig& cfg) {
    PeriodicityReport rep;
    rep.entries.reserve(sino.angles.size());
    bool first = true;
    for (std::size_t a = 0; a < sino.angles.size(); ++a) {
        const auto& proj = sino.projections[a];
        const auto acov = autocovariance(proj, lag_count_for(proj.size(), cfg));
        const auto ps = periodicity_score(acov, cfg.dc_exclusion_bins);
        rep.entries.push_back({sino.angles[a], ps.dominant_frequency, ps.strength});
        if (first || ps.strength > rep.global_max_strength) {
            rep.global_max_strength = ps.strength;
            rep.global_peak_angle = sino.angles[a];
            rep.global_peak_frequency = ps.dominant_frequency;
            first = false;
        }
    }
    return rep;
}

inline ForgeryVerdict detect_forgery(const GrayImage& img, const DetectorConfig& cfg) {
    const auto sino = detector_sinogram(img, cfg);
    ForgeryVerdict v;
    v.report = score_sinogram(sino, cfg);
    v.score = v.report.global_max_strength;
    v.threshold = cfg.threshold;
    v.label = v.score > cfg.threshold ? Verdict::forged : Verdict::authentic;
    return v;
}

/// Writes "angle,frequency,magnitude" rows for every angle and spectrum bin.
inline void write_spectrum_csv(std::ostream& os, const GrayImage& img, const DetectorConfig& cfg) {
    const auto sino = detector_sinogram(img, cfg);
    os << "angle,frequency,magnitude\n";
    char buf[96];
    for (std::size_t a = 0; a < sino.angles.size(); ++a) {
        const auto& proj = sino.projections[a];
        const auto acov = autocovariance(proj, lag_count_for(proj.size(), cfg));
        const auto mag = autocovariance_spectrum(acov);
        const double len = 2.0 * static_cast<double>(acov.values.size() - 1);
        for (std::size_t f = 0; f < mag.size(); ++f) {
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", sino.angles[a], static_cast<double>(f) / len, mag[f]);
            os << buf;
        }
    }
}

}  // namespace imgauth

#endif  // IMGAUTH_DETECT_HPP
