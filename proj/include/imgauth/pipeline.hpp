#ifndef IMGAUTH_PIPELINE_HPP
#define IMGAUTH_PIPELINE_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "imgauth/config.hpp"
#include "imgauth/detect.hpp"
#include "imgauth/error.hpp"
#include "imgauth/forgery.hpp"
#include "imgauth/gallery.hpp"
#include "imgauth/image.hpp"
#include "imgauth/model_io.hpp"
#include "imgauth/network.hpp"
#include "imgauth/preprocess.hpp"

namespace imgauth {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitForged = 3;
inline constexpr int kExitRejected = 4;

/// Observation points for tests. `on_features` fires every time an image is turned into a
/// feature vector, with the image's path or a short description.
struct PipelineHooks {
    std::function<void(const std::string&)> on_features;
};

inline std::string fmt_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Features
// ---------------------------------------------------------------------------

/// Vector before any PCA projection: the flattened preprocessed image, or its low-frequency DCT.
inline std::vector<double> base_features(const GrayImage& img, const FeatureSettings& s) {
    const auto g = preprocess_image(img, s.target_side, s.preprocess);
    if (s.mode == FeatureMode::dct_lowfreq) return dct_lowfreq(g, s.dct_k);
    return {g.pixels().begin(), g.pixels().end()};
}

inline std::size_t expected_feature_length(const FeatureSettings& s) {
    switch (s.mode) {
        case FeatureMode::raw400: return s.target_side * s.target_side;
        case FeatureMode::dct_lowfreq: return s.dct_k;
        case FeatureMode::pca: return s.pca_k;
    }
    return 0;
}

inline std::vector<double> finish_features(std::vector<double> base, const FeatureSettings& s,
                                           const std::optional<PcaModel>& pca) {
    if (s.mode != FeatureMode::pca) return base;
    if (!pca) throw ParameterError("pca feature mode requires a fitted PCA model");
    FeatureVector fv{std::move(base), std::nullopt};
    return project_features(*pca, fv).values;
}

struct FeatureSet {
    std::vector<std::vector<double>> vectors;
    std::optional<PcaModel> pca;
};

/// Turns training images into feature vectors, fitting PCA when the mode asks for it.
inline FeatureSet build_training_features(const std::vector<GrayImage>& images, const FeatureSettings& s) {
    FeatureSet fs;
    std::vector<FeatureVector> base;
    base.reserve(images.size());
    for (const auto& img : images) base.push_back({base_features(img, s), std::nullopt});
    if (s.mode == FeatureMode::pca) fs.pca = pca_fit(base, s.pca_k);
    for (auto& b : base) fs.vectors.push_back(finish_features(std::move(b.values), s, fs.pca));
    return fs;
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

inline std::string verdict_line(const ForgeryVerdict& v) {
    if (v.label == Verdict::authentic)
        return "AUTHENTIC score=" + fmt_num(v.score) + " threshold=" + fmt_num(v.threshold);
    return "FORGED score=" + fmt_num(v.score) + " threshold=" + fmt_num(v.threshold) +
           " angle=" + std::to_string(v.report.global_peak_angle) + " freq=" + fmt_num(v.report.global_peak_frequency);
}

struct VerifyArgs {
    std::string image_path;
    std::string config_path;
    std::optional<std::string> csv_out;
    std::optional<CropRect> crop;
};

inline GrayImage load_probe(const std::string& path, const std::optional<CropRect>& rect) {
    auto img = read_pgm_file(path);
    if (rect) img = crop(img, *rect);
    return img;
}

inline int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    try {
        const auto cfg = load_config(a.config_path);
        const auto img = load_probe(a.image_path, a.crop);
        const auto v = detect_forgery(img, cfg.detector);
        if (a.csv_out) {
            std::ofstream csv(*a.csv_out, std::ios::trunc);
            if (!csv) throw Error("cannot write '" + *a.csv_out + "'");
            write_spectrum_csv(csv, img, cfg.detector);
        }
        out << verdict_line(v) << "\n";
        return v.label == Verdict::forged ? kExitForged : kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

// ---------------------------------------------------------------------------
// Synthetic forgeries
// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string image_path;
    std::string out_path;
    double scale = 1.0;
    double rotate_deg = 0.0;
    double skew = 0.0;
    KernelKind kernel = KernelKind::linear;
};

inline AffineParams centered_affine(const GrayImage& img, double scale, double rotate_deg, double skew) {
    return AffineParams::about_center(static_cast<double>(img.width() - 1) / 2.0,
                                      static_cast<double>(img.height() - 1) / 2.0, scale, rotate_deg, skew);
}

inline int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
    try {
        const auto img = read_pgm_file(a.image_path);
        const auto p = centered_affine(img, a.scale, a.rotate_deg, a.skew);
        const auto forged = apply_affine(img, p, {a.kernel});
        write_pgm_file(a.out_path, forged);
        out << p.describe() << " kernel=" << to_string(a.kernel) << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

// ---------------------------------------------------------------------------
// Threshold calibration
// ---------------------------------------------------------------------------

inline const std::vector<double>& calibration_scales() {
    static const std::vector<double> s{1.1, 1.2, 1.3, 1.4, 1.5};
    return s;
}

inline const std::vector<KernelKind>& calibration_kernels() {
    static const std::vector<KernelKind> k{KernelKind::linear, KernelKind::cubic};
    return k;
}

struct ThresholdChoice {
    double threshold = 0.0;
    double balanced_accuracy = 0.0;
};

inline double balanced_accuracy(std::span<const double> originals, std::span<const double> forgeries, double tau) {
    std::size_t tn = 0, tp = 0;
    for (double s : originals) tn += s > tau ? 0 : 1;
    for (double s : forgeries) tp += s > tau ? 1 : 0;
    return 0.5 * (static_cast<double>(tn) / originals.size() + static_cast<double>(tp) / forgeries.size());
}

/// Scans midpoints between consecutive distinct scores; keeps the best balanced accuracy,
/// lowest threshold on ties.
inline ThresholdChoice choose_threshold(std::span<const double> originals, std::span<const double> forgeries) {
    if (originals.empty() || forgeries.empty()) throw ParameterError("calibration needs both originals and forgeries");
    std::vector<double> all(originals.begin(), originals.end());
    all.insert(all.end(), forgeries.begin(), forgeries.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    ThresholdChoice best{};
    bool have = false;
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
        const double tau = 0.5 * (all[i] + all[i + 1]);
        const double ba = balanced_accuracy(originals, forgeries, tau);
        if (!have || ba > best.balanced_accuracy) {
            best = {tau, ba};
            have = true;
        }
    }
    if (!have) {
        // every score identical: nothing separates, place tau at that score
        best = {std::max(all.front(), std::numeric_limits<double>::min()), 0.5};
    }
    return best;
}

struct CalibrationScores {
    std::vector<double> originals;
    std::vector<double> forgeries;
    std::vector<std::string> csv_rows;  // "image,kind,scale,kernel,score"
};

inline CalibrationScores score_calibration_corpus(const std::vector<std::pair<std::string, GrayImage>>& originals,
                                                  const DetectorConfig& det) {
    CalibrationScores cs;
    for (const auto& [name, img] : originals) {
        const double s0 = detect_forgery(img, det).score;
        cs.originals.push_back(s0);
        cs.csv_rows.push_back(name + ",original,1,none," + fmt_num(s0));
        for (double scale : calibration_scales())
            for (KernelKind k : calibration_kernels()) {
                const auto forged = apply_affine(img, centered_affine(img, scale, 0.0, 0.0), {k});
                const double s = detect_forgery(forged, det).score;
                cs.forgeries.push_back(s);
                char buf[32];
                std::snprintf(buf, sizeof buf, "%g", scale);
                cs.csv_rows.push_back(name + ",forged," + buf + "," + std::string(to_string(k)) + "," + fmt_num(s));
            }
    }
    return cs;
}

struct CalibrateArgs {
    std::string originals_dir;
    std::string config_out;
    std::optional<std::string> config_in;
    std::optional<std::string> scores_csv;
};

inline std::vector<std::filesystem::path> list_pgm_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".pgm") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    return files;
}

inline int cmd_calibrate(const CalibrateArgs& a, std::ostream& out, std::ostream& err) {
    try {
        PipelineConfig cfg;
        if (a.config_in) cfg = load_config(*a.config_in);
        else if (std::filesystem::exists(a.config_out)) cfg = load_config(a.config_out);
        const auto files = list_pgm_files(a.originals_dir);
        if (files.size() < 10)
            throw ParameterError("calibration needs at least 10 original images, found " + std::to_string(files.size()));
        std::vector<std::pair<std::string, GrayImage>> originals;
        for (const auto& f : files) originals.emplace_back(f.filename().string(), read_pgm_file(f.string()));
        const auto cs = score_calibration_corpus(originals, cfg.detector);
        const auto choice = choose_threshold(cs.originals, cs.forgeries);
        cfg.detector.threshold = choice.threshold;
        save_config(a.config_out, cfg);
        if (a.scores_csv) {
            std::ofstream csv(*a.scores_csv, std::ios::trunc);
            if (!csv) throw Error("cannot write '" + *a.scores_csv + "'");
            csv << "image,kind,scale,kernel,score\n";
            for (const auto& r : cs.csv_rows) csv << r << "\n";
        }
        out << "TAU " << fmt_num(choice.threshold) << " balanced_accuracy=" << fmt_num(choice.balanced_accuracy)
            << " originals=" << cs.originals.size() << " forgeries=" << cs.forgeries.size() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

struct LoadedEntry {
    GalleryEntry entry;
    std::string path;
    GrayImage image;
};

/// Loads gallery images and runs each through the detector. Returns the forged paths.
inline std::vector<std::string> gate_images(const std::vector<LoadedEntry>& items, const DetectorConfig& det,
                                            std::ostream& report) {
    std::vector<std::string> forged;
    for (const auto& it : items) {
        const auto v = detect_forgery(it.image, det);
        if (v.label == Verdict::forged) {
            forged.push_back(it.path);
            report << "FORGED " << it.path << " score=" << fmt_num(v.score) << " threshold=" << fmt_num(v.threshold)
                   << "\n";
        }
    }
    return forged;
}

inline std::vector<LoadedEntry> load_entries(const Gallery& g) {
    std::vector<LoadedEntry> items;
    for (const auto& e : g.entries) items.push_back({e, g.full_path(e), read_pgm_file(g.full_path(e))});
    return items;
}

struct TrainedModel {
    ModelFile model;
    TrainResult result;
};

/// Features, optional PCA, and network training for already-verified images.
inline TrainedModel fit_model(const std::vector<LoadedEntry>& items, const std::vector<std::string>& labels,
                              const PipelineConfig& cfg, const PipelineHooks* hooks = nullptr) {
    if (labels.size() < 2) throw ParameterError("recognition needs at least two subjects");
    std::vector<GrayImage> images;
    for (const auto& it : items) {
        if (hooks && hooks->on_features) hooks->on_features(it.path);
        images.push_back(it.image);
    }
    const auto fs = build_training_features(images, cfg.features);
    std::vector<LabeledVector> data;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto idx = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), items[i].entry.label) - labels.begin());
        data.push_back({fs.vectors[i], idx});
    }
    const std::size_t dim = fs.vectors.front().size();
    auto net = init_network({dim, cfg.hidden, labels.size()}, cfg.train.seed);
    TrainedModel tm;
    tm.result = train(std::move(net), data, cfg.train);
    tm.model.net = tm.result.net;
    tm.model.pca = fs.pca;
    tm.model.features = cfg.features;
    tm.model.labels = labels;
    tm.model.detector = cfg.detector;
    tm.model.seed = cfg.train.seed;
    for (std::size_t i = 0; i < items.size(); ++i) tm.model.gallery_features.push_back({items[i].entry.label, fs.vectors[i]});
    return tm;
}

inline void write_training_csv(std::ostream& os, const std::vector<TrainRecord>& history) {
    os << "epoch,mse,seconds\n";
    char buf[96];
    for (const auto& r : history) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.6f\n", r.epoch, r.mse, r.wall_time);
        os << buf;
    }
}

struct TrainArgs {
    std::string gallery_dir;
    std::string config_path;
    std::string model_out;
    std::optional<std::string> csv_out;
    std::optional<std::uint64_t> seed;
};

inline int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err, const PipelineHooks* hooks = nullptr) {
    try {
        auto cfg = load_config(a.config_path);
        if (a.seed) cfg.train.seed = *a.seed;
        const auto g = load_gallery(a.gallery_dir);
        const auto items = load_entries(g);
        const auto labels = g.labels();
        if (cfg.features.mode == FeatureMode::pca && cfg.features.pca_k > items.size() - 1)
            throw ParameterError("pca_k " + std::to_string(cfg.features.pca_k) + " exceeds training images - 1 (" +
                                 std::to_string(items.size() - 1) + ")");
        const auto forged = gate_images(items, cfg.detector, out);
        if (!forged.empty()) {
            err << "refusing to train: " << forged.size() << " gallery image(s) failed verification\n";
            return kExitForged;
        }
        auto tm = fit_model(items, labels, cfg, hooks);
        tm.model.gallery_checksum = g.checksum;
        save_model(a.model_out, tm.model);
        if (a.csv_out) {
            std::ofstream csv(*a.csv_out, std::ios::trunc);
            if (!csv) throw Error("cannot write '" + *a.csv_out + "'");
            write_training_csv(csv, tm.result.history);
        }
        const auto& last = tm.result.history.back();
        out << "TRAINED epochs=" << last.epoch << " mse=" << fmt_num(last.mse) << " subjects=" << labels.size()
            << " images=" << items.size() << "\n";
        if (!tm.result.reached_goal)
            out << "WARNING error goal " << fmt_num(cfg.train.error_goal) << " not reached after " << last.epoch
                << " epochs\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

// ---------------------------------------------------------------------------
// Recognition
// ---------------------------------------------------------------------------

struct MatchResult {
    std::string label;
    double confidence = 0.0;
    bool rejected = false;
    std::optional<double> distance;  // Euclidean matcher only
};

inline std::vector<double> probe_features(const GrayImage& img, const ModelFile& m) {
    auto v = finish_features(base_features(img, m.features), m.features, m.pca);
    if (v.size() != m.feature_length())
        throw ParameterError("probe feature length " + std::to_string(v.size()) + " does not match model input " +
                             std::to_string(m.feature_length()));
    return v;
}

inline MatchResult match_features(std::span<const double> v, const ModelFile& m, Matcher matcher, double reject_below) {
    MatchResult r;
    if (matcher == Matcher::network) {
        const auto p = predict(m.net, v, reject_below);
        r.label = m.labels.at(p.label);
        r.confidence = p.confidence;
        r.rejected = p.rejected;
        return r;
    }
    if (m.gallery_features.empty()) throw ParameterError("model carries no gallery features for euclidean matching");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : m.gallery_features) {
        if (g.values.size() != v.size()) throw ParameterError("gallery feature length mismatch");
        double d2 = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) d2 += (v[i] - g.values[i]) * (v[i] - g.values[i]);
        const double d = std::sqrt(d2);
        if (d < best) {
            best = d;
            r.label = g.label;
        }
    }
    r.distance = best;
    r.confidence = 1.0 / (1.0 + best);
    r.rejected = r.confidence < reject_below;
    return r;
}

inline void check_model_matches_config(const ModelFile& m, const PipelineConfig& cfg) {
    if (m.features.mode != cfg.features.mode || m.features.target_side != cfg.features.target_side ||
        expected_feature_length(cfg.features) != m.feature_length())
        throw ParameterError("model features (" + to_string(m.features.mode) + ", length " +
                             std::to_string(m.feature_length()) + ") do not match config (" +
                             to_string(cfg.features.mode) + ", length " +
                             std::to_string(expected_feature_length(cfg.features)) + ")");
}

struct RecognizeArgs {
    std::string image_path;
    std::vector<std::string> model_paths;
    std::string config_path;
    std::optional<CropRect> crop;
};

/// Verify, then match. A forged probe returns before any feature extraction.
/// With several models (one per gallery) the best match across all of them is reported.
inline int cmd_recognize(const RecognizeArgs& a, std::ostream& out, std::ostream& err,
                         const PipelineHooks* hooks = nullptr) {
    try {
        if (a.model_paths.empty()) throw ParameterError("at least one --model is required");
        const auto cfg = load_config(a.config_path);
        const auto img = load_probe(a.image_path, a.crop);
        const auto verdict = detect_forgery(img, cfg.detector);
        if (verdict.label == Verdict::forged) {
            out << verdict_line(verdict) << "\n";
            return kExitForged;
        }
        std::optional<MatchResult> best;
        for (const auto& path : a.model_paths) {
            const auto m = load_model(path);
            check_model_matches_config(m, cfg);
            if (hooks && hooks->on_features) hooks->on_features(a.image_path);
            const auto v = probe_features(img, m);
            auto r = match_features(v, m, cfg.matcher, cfg.reject_below);
            const bool better = !best || (cfg.matcher == Matcher::euclidean ? *r.distance < *best->distance
                                                                            : r.confidence > best->confidence);
            if (better) best = std::move(r);
        }
        if (best->rejected) {
            out << "REJECTED confidence=" << fmt_num(best->confidence) << "\n";
            return kExitRejected;
        }
        out << "MATCH " << best->label << " confidence=" << fmt_num(best->confidence);
        if (best->distance) out << " distance=" << fmt_num(*best->distance);
        out << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

// ---------------------------------------------------------------------------
// Benchmarks
// ---------------------------------------------------------------------------

struct SplitSets {
    std::vector<LoadedEntry> train;
    std::vector<LoadedEntry> test;
};

/// Per subject, in manifest order: the last floor(n/3) images (at least one when n >= 2) are test.
inline SplitSets split_by_subject(const std::vector<LoadedEntry>& items) {
    std::map<std::string, std::size_t> counts;
    for (const auto& it : items) ++counts[it.entry.label];
    std::map<std::string, std::size_t> seen;
    SplitSets s;
    for (const auto& it : items) {
        const std::size_t n = counts[it.entry.label];
        std::size_t n_test = n / 3;
        if (n_test == 0 && n >= 2) n_test = 1;
        const std::size_t idx = seen[it.entry.label]++;
        (idx >= n - n_test ? s.test : s.train).push_back(it);
    }
    return s;
}

struct RecognitionScore {
    std::size_t correct = 0;
    std::size_t total = 0;
    double accuracy() const { return total ? static_cast<double>(correct) / total : 0.0; }
};

/// Rank-1 accuracy of a model fitted on `train` and probed with `test`.
inline RecognitionScore evaluate_recognition(const std::vector<LoadedEntry>& train_items,
                                             const std::vector<LoadedEntry>& test_items,
                                             const std::vector<std::string>& labels, PipelineConfig cfg) {
    if (cfg.features.mode == FeatureMode::pca)
        cfg.features.pca_k = std::min(cfg.features.pca_k, train_items.size() - 1);
    const auto tm = fit_model(train_items, labels, cfg);
    RecognitionScore sc;
    for (const auto& t : test_items) {
        const auto v = probe_features(t.image, tm.model);
        const auto r = match_features(v, tm.model, cfg.matcher, 0.0);
        sc.correct += r.label == t.entry.label ? 1 : 0;
        ++sc.total;
    }
    return sc;
}

struct BenchArgs {
    std::string gallery_dir;
    std::string config_path;
    std::string csv_out;
    bool hidden_sweep = false;
    bool subject_sweep = false;
    std::optional<std::string> test_gallery_dir;
    std::size_t epochs = 50;
    std::optional<std::uint64_t> seed;
};

inline const std::vector<std::size_t>& hidden_sweep_widths() {
    static const std::vector<std::size_t> h{30, 60, 90, 180, 360};
    return h;
}

inline int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    try {
        if (a.hidden_sweep == a.subject_sweep) throw ParameterError("choose exactly one of --hidden-sweep / --subject-sweep");
        auto cfg = load_config(a.config_path);
        if (a.seed) cfg.train.seed = *a.seed;
        const auto g = load_gallery(a.gallery_dir);
        auto items = load_entries(g);
        std::vector<LoadedEntry> test_items;
        if (a.test_gallery_dir) test_items = load_entries(load_gallery(*a.test_gallery_dir));

        std::vector<LoadedEntry> everything = items;
        everything.insert(everything.end(), test_items.begin(), test_items.end());
        if (!gate_images(everything, cfg.detector, out).empty()) {
            err << "refusing to benchmark: gallery image(s) failed verification\n";
            return kExitForged;
        }

        std::ofstream csv(a.csv_out, std::ios::trunc);
        if (!csv) throw Error("cannot write '" + a.csv_out + "'");
        const auto labels = g.labels();

        if (a.hidden_sweep) {
            if (a.epochs == 0) throw ParameterError("--epochs must be positive");
            csv << "hidden,epochs,macs_per_epoch,seconds_per_epoch,final_mse\n";
            auto run_cfg = cfg;
            run_cfg.train.max_epochs = a.epochs;
            run_cfg.train.error_goal = std::numeric_limits<double>::min();
            if (run_cfg.features.mode == FeatureMode::pca)
                run_cfg.features.pca_k = std::min(run_cfg.features.pca_k, items.size() - 1);
            for (std::size_t h : hidden_sweep_widths()) {
                run_cfg.hidden = h;
                const auto tm = fit_model(items, labels, run_cfg);
                const double secs = tm.result.history.back().wall_time;
                const std::size_t updates = tm.result.history.back().epoch;
                const auto macs = macs_per_epoch(tm.model.net.layer_sizes, items.size());
                char buf[160];
                std::snprintf(buf, sizeof buf, "%zu,%zu,%llu,%.9f,%.17g\n", h, updates,
                              static_cast<unsigned long long>(macs), secs / static_cast<double>(updates + 1),
                              tm.result.history.back().mse);
                csv << buf;
                out << "hidden=" << h << " macs_per_epoch=" << macs << " seconds_per_epoch="
                    << fmt_num(secs / static_cast<double>(updates + 1)) << "\n";
            }
            return kExitOk;
        }

        SplitSets split;
        if (a.test_gallery_dir) split = {items, test_items};
        else split = split_by_subject(items);
        if (labels.size() < 2 || split.test.empty()) throw ParameterError("subject sweep needs >= 2 subjects and a test split");
        csv << "subjects,train_images,test_images,correct,accuracy\n";
        for (std::size_t c = 2; c <= labels.size(); c += 2) {
            const std::vector<std::string> subset(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(c));
            auto in_subset = [&](const LoadedEntry& e) {
                return std::find(subset.begin(), subset.end(), e.entry.label) != subset.end();
            };
            std::vector<LoadedEntry> tr, te;
            std::copy_if(split.train.begin(), split.train.end(), std::back_inserter(tr), in_subset);
            std::copy_if(split.test.begin(), split.test.end(), std::back_inserter(te), in_subset);
            if (te.empty()) throw ParameterError("no test images for " + std::to_string(c) + " subjects");
            const auto sc = evaluate_recognition(tr, te, subset, cfg);
            char buf[128];
            std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%zu,%.6f\n", c, tr.size(), te.size(), sc.correct, sc.accuracy());
            csv << buf;
            out << "subjects=" << c << " accuracy=" << fmt_num(sc.accuracy()) << "\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace imgauth

#endif  // IMGAUTH_PIPELINE_HPP
