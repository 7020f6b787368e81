#ifndef IMGAUTH_MODEL_IO_HPP
#define IMGAUTH_MODEL_IO_HPP

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imgauth/config.hpp"
#include "imgauth/error.hpp"
#include "imgauth/network.hpp"
#include "imgauth/preprocess.hpp"

namespace imgauth {

inline constexpr int kModelFormatVersion = 1;

struct GalleryFeature {
    std::string label;
    std::vector<double> values;
};

/// Everything recognition needs: network, optional PCA basis, the feature recipe,
/// subject labels (index = network output), the detector that gated training, and the
/// gallery's feature vectors for the Euclidean matcher.
struct ModelFile {
    Network net;
    std::optional<PcaModel> pca;
    FeatureSettings features;
    std::vector<std::string> labels;
    DetectorConfig detector;
    std::uint64_t seed = 0;
    std::string gallery_checksum;
    std::vector<GalleryFeature> gallery_features;

    std::size_t feature_length() const noexcept { return net.input_size(); }
};

namespace detail {

inline json matrix_to_json(const Layer& l) {
    json rows = json::array();
    for (std::size_t o = 0; o < l.out; ++o)
        rows.push_back(std::vector<double>(l.weights.begin() + static_cast<std::ptrdiff_t>(o * l.in),
                                           l.weights.begin() + static_cast<std::ptrdiff_t>((o + 1) * l.in)));
    return rows;
}

inline std::vector<double> json_matrix(const json& rows, std::size_t out, std::size_t in, const char* what) {
    if (!rows.is_array() || rows.size() != out) throw DecodeError(std::string("model ") + what + " has wrong row count");
    std::vector<double> flat;
    flat.reserve(out * in);
    for (const auto& r : rows) {
        if (!r.is_array() || r.size() != in) throw DecodeError(std::string("model ") + what + " has wrong column count");
        for (const auto& v : r) flat.push_back(v.get<double>());
    }
    return flat;
}

}  // namespace detail

inline std::string serialize_model(const ModelFile& m) {
    json j;
    j["format_version"] = kModelFormatVersion;
    j["layer_sizes"] = m.net.layer_sizes;
    j["activation"] = "sigmoid";
    j["weights"] = json::array({detail::matrix_to_json(m.net.layers[0]), detail::matrix_to_json(m.net.layers[1])});
    j["biases"] = json::array({m.net.layers[0].biases, m.net.layers[1].biases});
    if (m.pca)
        j["pca"] = {{"mean", m.pca->mean}, {"components", m.pca->components}, {"eigenvalues", m.pca->eigenvalues}};
    else
        j["pca"] = nullptr;
    j["feature_mode"] = to_string(m.features.mode);
    j["target_side"] = m.features.target_side;
    j["dct_k"] = m.features.dct_k;
    j["filter_size"] = m.features.preprocess.filter_size;
    j["contrast_stretch"] = m.features.preprocess.stretch
                                ? json::array({m.features.preprocess.stretch_lo_pct, m.features.preprocess.stretch_hi_pct})
                                : json(nullptr);
    j["labels"] = m.labels;
    j["detector"] = detector_to_json(m.detector);
    j["seed"] = m.seed;
    json gallery = json::array();
    for (const auto& g : m.gallery_features) gallery.push_back({{"label", g.label}, {"values", g.values}});
    j["gallery"] = {{"checksum", m.gallery_checksum}, {"features", gallery}};
    return j.dump() + "\n";
}

/// Parses a model file. Any structural problem raises DecodeError; nothing partial escapes.
inline ModelFile deserialize_model(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw DecodeError(std::string("corrupted model file: ") + e.what(), e.byte);
    }
    try {
        if (!j.is_object() || !j.contains("format_version")) throw DecodeError("model file has no format_version");
        const int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion)
            throw DecodeError("unsupported model format_version " + std::to_string(version) + " (this build reads " +
                              std::to_string(kModelFormatVersion) + ")");
        if (j.value("activation", std::string()) != "sigmoid") throw DecodeError("model activation must be sigmoid");

        ModelFile m;
        const auto sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
        if (sizes.size() != 3 || sizes[0] == 0 || sizes[1] == 0 || sizes[2] == 0)
            throw DecodeError("model layer_sizes must hold three positive sizes");
        m.net.layer_sizes = {sizes[0], sizes[1], sizes[2]};
        for (std::size_t l = 0; l < 2; ++l) {
            Layer& layer = m.net.layers[l];
            layer.in = sizes[l];
            layer.out = sizes[l + 1];
            layer.weights = detail::json_matrix(j.at("weights").at(l), layer.out, layer.in, "weights");
            layer.biases = j.at("biases").at(l).get<std::vector<double>>();
            if (layer.biases.size() != layer.out) throw DecodeError("model biases have wrong length");
            for (double w : layer.weights)
                if (!std::isfinite(w)) throw DecodeError("model weight is not finite");
        }
        if (!j.at("pca").is_null()) {
            PcaModel p;
            const auto& pj = j.at("pca");
            p.mean = pj.at("mean").get<std::vector<double>>();
            p.components = pj.at("components").get<std::vector<std::vector<double>>>();
            p.eigenvalues = pj.at("eigenvalues").get<std::vector<double>>();
            for (const auto& c : p.components)
                if (c.size() != p.mean.size()) throw DecodeError("model pca component has wrong length");
            if (p.eigenvalues.size() != p.components.size()) throw DecodeError("model pca eigenvalue count mismatch");
            m.pca = std::move(p);
        }
        m.features.mode = parse_feature_mode(j.at("feature_mode").get<std::string>());
        m.features.target_side = j.at("target_side").get<std::size_t>();
        m.features.dct_k = j.value("dct_k", m.features.dct_k);
        m.features.preprocess.filter_size = j.value("filter_size", m.features.preprocess.filter_size);
        if (j.contains("contrast_stretch") && !j.at("contrast_stretch").is_null()) {
            m.features.preprocess.stretch = true;
            m.features.preprocess.stretch_lo_pct = j.at("contrast_stretch").at(0).get<double>();
            m.features.preprocess.stretch_hi_pct = j.at("contrast_stretch").at(1).get<double>();
        }
        if (m.pca) m.features.pca_k = m.pca->components.size();
        m.labels = j.at("labels").get<std::vector<std::string>>();
        if (m.labels.empty()) throw DecodeError("model has no labels");
        m.detector = detector_from_json(j.at("detector"));
        m.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("gallery")) {
            m.gallery_checksum = j.at("gallery").value("checksum", std::string());
            for (const auto& g : j.at("gallery").at("features"))
                m.gallery_features.push_back({g.at("label").get<std::string>(), g.at("values").get<std::vector<double>>()});
        }
        if (m.features.mode == FeatureMode::pca && !m.pca) throw DecodeError("pca feature mode without a pca block");
        return m;
    } catch (const DecodeError&) {
        throw;
    } catch (const std::exception& e) {
        throw DecodeError(std::string("malformed model file: ") + e.what());
    }
}

inline void save_model(const std::string& path, const ModelFile& m) {
    const auto text = serialize_model(m);
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

inline ModelFile load_model(const std::string& path) {
    const auto bytes = read_file(path);
    return deserialize_model(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace imgauth

#endif  // IMGAUTH_MODEL_IO_HPP
