#ifndef IMGAUTH_CONFIG_HPP
#define IMGAUTH_CONFIG_HPP

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "imgauth/detect.hpp"
#include "imgauth/error.hpp"
#include "imgauth/image.hpp"
#include "imgauth/network.hpp"
#include "imgauth/preprocess.hpp"

namespace imgauth {

enum class FeatureMode { raw400, dct_lowfreq, pca };
enum class Matcher { network, euclidean };

inline std::string to_string(FeatureMode m) {
    switch (m) {
        case FeatureMode::raw400: return "raw400";
        case FeatureMode::dct_lowfreq: return "dct_lowfreq";
        case FeatureMode::pca: return "pca";
    }
    return "?";
}

inline FeatureMode parse_feature_mode(const std::string& s) {
    if (s == "raw400" || s == "raw") return FeatureMode::raw400;
    if (s == "dct_lowfreq" || s == "dct") return FeatureMode::dct_lowfreq;
    if (s == "pca") return FeatureMode::pca;
    throw ParameterError("unknown feature_mode '" + s + "'");
}

inline std::string to_string(Matcher m) { return m == Matcher::network ? "network" : "euclidean"; }

inline Matcher parse_matcher(const std::string& s) {
    if (s == "network") return Matcher::network;
    if (s == "euclidean") return Matcher::euclidean;
    throw ParameterError("unknown matcher '" + s + "'");
}

/// Settings that decide how an image becomes a feature vector. Stored in model files so
/// recognition reproduces training exactly.
struct FeatureSettings {
    FeatureMode mode = FeatureMode::pca;
    std::size_t target_side = 20;
    std::size_t pca_k = 30;
    std::size_t dct_k = 64;
    PreprocessOptions preprocess;
};

struct PipelineConfig {
    DetectorConfig detector;
    FeatureSettings features;
    std::size_t hidden = 90;
    TrainConfig train;
    double reject_below = 0.5;
    Matcher matcher = Matcher::network;
};

using nlohmann::json;

inline json detector_to_json(const DetectorConfig& d) {
    return {{"n", d.derivative_order}, {"tau", d.threshold}, {"max_lag", d.max_lag}, {"dc_exclusion", d.dc_exclusion_bins}};
}

inline DetectorConfig detector_from_json(const json& j) {
    DetectorConfig d;
    d.derivative_order = j.value("n", d.derivative_order);
    d.threshold = j.value("tau", d.threshold);
    d.max_lag = j.value("max_lag", d.max_lag);
    d.dc_exclusion_bins = j.value("dc_exclusion", d.dc_exclusion_bins);
    check_detector_config(d);
    return d;
}

inline json config_to_json(const PipelineConfig& c) {
    json stretch = nullptr;
    if (c.features.preprocess.stretch)
        stretch = json::array({c.features.preprocess.stretch_lo_pct, c.features.preprocess.stretch_hi_pct});
    return {
        {"detector", detector_to_json(c.detector)},
        {"feature_mode", to_string(c.features.mode)},
        {"target_side", c.features.target_side},
        {"pca_k", c.features.pca_k},
        {"dct_k", c.features.dct_k},
        {"filter_size", c.features.preprocess.filter_size},
        {"contrast_stretch", stretch},
        {"hidden", c.hidden},
        {"train",
         {{"learning_rate", c.train.learning_rate},
          {"momentum", c.train.momentum},
          {"error_goal", c.train.error_goal},
          {"max_epochs", c.train.max_epochs},
          {"seed", c.train.seed}}},
        {"reject_below", c.reject_below},
        {"matcher", to_string(c.matcher)},
    };
}

inline PipelineConfig config_from_json(const json& j) {
    PipelineConfig c;
    try {
        if (j.contains("detector")) c.detector = detector_from_json(j.at("detector"));
        c.features.mode = parse_feature_mode(j.value("feature_mode", to_string(c.features.mode)));
        c.features.target_side = j.value("target_side", c.features.target_side);
        c.features.pca_k = j.value("pca_k", c.features.pca_k);
        c.features.dct_k = j.value("dct_k", c.features.dct_k);
        c.features.preprocess.filter_size = j.value("filter_size", c.features.preprocess.filter_size);
        if (j.contains("contrast_stretch") && !j.at("contrast_stretch").is_null()) {
            const auto& s = j.at("contrast_stretch");
            c.features.preprocess.stretch = true;
            c.features.preprocess.stretch_lo_pct = s.at(0).get<double>();
            c.features.preprocess.stretch_hi_pct = s.at(1).get<double>();
        }
        c.hidden = j.value("hidden", c.hidden);
        if (j.contains("train")) {
            const auto& t = j.at("train");
            c.train.learning_rate = t.value("learning_rate", c.train.learning_rate);
            c.train.momentum = t.value("momentum", c.train.momentum);
            c.train.error_goal = t.value("error_goal", c.train.error_goal);
            c.train.max_epochs = t.value("max_epochs", c.train.max_epochs);
            c.train.seed = t.value("seed", c.train.seed);
        }
        c.reject_below = j.value("reject_below", c.reject_below);
        c.matcher = parse_matcher(j.value("matcher", to_string(c.matcher)));
    } catch (const json::exception& e) {
        throw DecodeError(std::string("invalid config: ") + e.what());
    }
    if (c.features.target_side < 4) throw ParameterError("target_side must be >= 4");
    if (c.hidden == 0) throw ParameterError("hidden layer width must be >= 1");
    return c;
}

inline PipelineConfig load_config(const std::string& path) {
    const auto bytes = read_file(path);
    json j;
    try {
        j = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw DecodeError(path + ": " + e.what(), e.byte);
    }
    return config_from_json(j);
}

inline void save_config(const std::string& path, const PipelineConfig& c) {
    const std::string text = config_to_json(c).dump(2) + "\n";
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace imgauth

#endif  // IMGAUTH_CONFIG_HPP
