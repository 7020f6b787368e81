#ifndef IMGAUTH_TOOLS_FIXTURES_HPP
#define IMGAUTH_TOOLS_FIXTURES_HPP

// Deterministic synthetic data used by the committed test fixtures.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "imgauth/gallery.hpp"
#include "imgauth/image.hpp"
#include "imgauth/rng.hpp"

namespace imgauth::fixtures {

inline constexpr std::size_t kFaceSide = 128;

/// Smooth subject template: random low-frequency cosine mixture rescaled into [0.2, 0.8].
inline std::vector<double> subject_pattern(std::size_t subject, std::uint64_t seed, std::size_t side = kFaceSide) {
    Rng rng(seed * 1000003ULL + subject * 7919ULL + 17);
    constexpr std::size_t kFreqs = 6;
    std::vector<double> coef(kFreqs * kFreqs);
    for (std::size_t v = 0; v < kFreqs; ++v)
        for (std::size_t u = 0; u < kFreqs; ++u)
            coef[v * kFreqs + u] = (u == 0 && v == 0) ? 0.0 : rng.normal() / (1.0 + 0.5 * (u + v));
    std::vector<double> px(side * side, 0.0);
    for (std::size_t y = 0; y < side; ++y)
        for (std::size_t x = 0; x < side; ++x) {
            double acc = 0.0;
            for (std::size_t v = 0; v < kFreqs; ++v)
                for (std::size_t u = 0; u < kFreqs; ++u)
                    acc += coef[v * kFreqs + u] * std::cos(std::numbers::pi * (2.0 * x + 1.0) * u / (2.0 * side)) *
                           std::cos(std::numbers::pi * (2.0 * y + 1.0) * v / (2.0 * side));
            px[y * side + x] = acc;
        }
    const auto [lo, hi] = std::minmax_element(px.begin(), px.end());
    const double a = *lo, b = *hi;
    for (double& p : px) p = 0.2 + 0.6 * (p - a) / (b - a);
    return px;
}

/// One sighting of a subject: its template plus Gaussian pixel noise, quantized to 8 bits.
inline GrayImage face_image(std::size_t subject, std::size_t sample, std::uint64_t seed, double noise_sigma = 0.05,
                            std::size_t side = kFaceSide) {
    auto px = subject_pattern(subject, seed, side);
    Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * (subject + 1)) ^ (0xbf58476d1ce4e5b9ULL * (sample + 1)));
    for (double& p : px) p = std::clamp(p + noise_sigma * rng.normal(), 0.0, 1.0);
    for (double& p : px) p = quantize_u8(p) / 255.0;
    return GrayImage(side, side, std::move(px));
}

/// Writes `<dir>/manifest.tsv` plus one PGM per image.
inline void write_gallery(const std::filesystem::path& dir, std::size_t subjects, std::size_t first_sample,
                          std::size_t samples, std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    std::vector<GalleryEntry> entries;
    for (std::size_t s = 0; s < subjects; ++s)
        for (std::size_t i = first_sample; i < first_sample + samples; ++i) {
            char name[64];
            std::snprintf(name, sizeof name, "s%02zu_%02zu.pgm", s + 1, i + 1);
            char label[32];
            std::snprintf(label, sizeof label, "subject%02zu", s + 1);
            write_pgm_file((dir / name).string(), face_image(s, i, seed));
            entries.push_back({label, name});
        }
    const auto text = manifest_text(entries);
    write_file((dir / "manifest.tsv").string(),
               std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

inline void write_noise_set(const std::filesystem::path& dir, std::size_t count, std::uint64_t seed,
                            std::size_t side = 128) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < count; ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "noise_%03zu.pgm", i);
        write_pgm_file((dir / name).string(), white_noise_image(side, side, seed + i));
    }
}

}  // namespace imgauth::fixtures

#endif  // IMGAUTH_TOOLS_FIXTURES_HPP
