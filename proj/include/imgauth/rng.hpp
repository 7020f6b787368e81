#ifndef IMGAUTH_RNG_HPP
#define IMGAUTH_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "imgauth/image.hpp"

namespace imgauth {

/// Deterministic generator: std::mt19937_64 with doubles formed from the top 53 bits of
/// each draw, so sequences are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (one value per call).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

/// i.i.d. uniform [0,1] pixels, quantized to 8 bits so the image survives a PGM round-trip.
inline GrayImage white_noise_image(std::size_t width, std::size_t height, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> px(width * height);
    for (double& p : px) p = static_cast<double>(rng.next_u64() >> 56) / 255.0;
    return GrayImage(width, height, std::move(px));
}

}  // namespace imgauth

#endif  // IMGAUTH_RNG_HPP
