#ifndef IMGAUTH_INTERPOLATION_HPP
#define IMGAUTH_INTERPOLATION_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imgauth/error.hpp"

namespace imgauth {

enum class KernelKind { nearest, linear, cubic };

/// Interpolation kernel w used to rebuild a continuous signal from its samples.
struct InterpolationKernel {
    KernelKind kind = KernelKind::linear;

    /// Half-width of the support; w(t) == 0 for |t| >= radius().
    int radius() const noexcept {
        switch (kind) {
            case KernelKind::nearest: return 1;
            case KernelKind::linear: return 1;
            case KernelKind::cubic: return 2;
        }
        return 2;
    }
};

/// Keys cubic convolution parameter.
inline constexpr double kKeysA = -0.5;

inline double kernel_weight(InterpolationKernel kernel, double t) {
    switch (kernel.kind) {
        case KernelKind::nearest:
            // half-open [-0.5, 0.5)
            return (t >= -0.5 && t < 0.5) ? 1.0 : 0.0;
        case KernelKind::linear: {
            const double a = std::abs(t);
            return a < 1.0 ? 1.0 - a : 0.0;
        }
        case KernelKind::cubic: {
            const double a = std::abs(t);
            if (a < 1.0) return ((kKeysA + 2.0) * a - (kKeysA + 3.0)) * a * a + 1.0;
            if (a < 2.0) return ((kKeysA * a - 5.0 * kKeysA) * a + 8.0 * kKeysA) * a - 4.0 * kKeysA;
            return 0.0;
        }
    }
    return 0.0;
}

inline std::string_view to_string(KernelKind k) {
    switch (k) {
        case KernelKind::nearest: return "nearest";
        case KernelKind::linear: return "linear";
        case KernelKind::cubic: return "cubic";
    }
    return "?";
}

inline KernelKind parse_kernel(std::string_view s) {
    if (s == "nearest") return KernelKind::nearest;
    if (s == "linear" || s == "bilinear") return KernelKind::linear;
    if (s == "cubic" || s == "bicubic") return KernelKind::cubic;
    throw ParameterError("unknown kernel '" + std::string(s) + "'");
}

/// Maps any integer index into [0, n) by half-sample symmetric extension
/// (x[-1] = x[0], x[n] = x[n-1]).
inline std::size_t symmetric_index(std::int64_t k, std::size_t n) {
    const auto len = static_cast<std::int64_t>(n);
    const std::int64_t period = 2 * len;
    std::int64_t m = k % period;
    if (m < 0) m += period;
    return static_cast<std::size_t>(m < len ? m : period - 1 - m);
}

/// Uniformly sampled 1-D signal: samples f_k taken every `step` units.
struct Signal {
    std::vector<double> samples;
    double step = 1.0;
};

/// Evaluates sum_k f_k w(x/step - k) at each position, with symmetric edge extension.
inline std::vector<double> resample_signal_1d(const Signal& sig, std::span<const double> positions,
                                              InterpolationKernel kernel) {
    if (sig.samples.empty()) throw ParameterError("signal must be non-empty");
    if (!(sig.step > 0.0)) throw ParameterError("signal step must be positive");
    const int r = kernel.radius();
    std::vector<double> out;
    out.reserve(positions.size());
    for (double x : positions) {
        if (!std::isfinite(x)) throw ParameterError("resample position must be finite");
        const double t = x / sig.step;
        const auto base = static_cast<std::int64_t>(std::floor(t));
        double acc = 0.0;
        for (std::int64_t k = base - r; k <= base + r + 1; ++k) {
            const double w = kernel_weight(kernel, t - static_cast<double>(k));
            if (w != 0.0) acc += sig.samples[symmetric_index(k, sig.samples.size())] * w;
        }
        out.push_back(acc);
    }
    return out;
}

}  // namespace imgauth

#endif  // IMGAUTH_INTERPOLATION_HPP
