// imgauth: verify images for resampling traces, then recognise authenticated faces.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "imgauth/pipeline.hpp"

namespace {

std::optional<imgauth::CropRect> parse_crop(const std::string& s) {
    if (s.empty()) return std::nullopt;
    imgauth::CropRect r;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream in(s);
    if (!(in >> r.x0 >> c1 >> r.y0 >> c2 >> r.w >> c3 >> r.h) || c1 != ',' || c2 != ',' || c3 != ',' || !in.eof())
        throw CLI::ValidationError("--crop", "expected x0,y0,w,h");
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Image forgery authentication and face recognition"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "imgauth 1.0");

    std::string config;
    std::optional<std::uint64_t> seed;
    auto add_common = [&](CLI::App* sub, bool with_seed) {
        sub->add_option("--config", config, "Pipeline config (JSON)")->required();
        if (with_seed) sub->add_option("--seed", seed, "Override the training seed");
    };

    imgauth::VerifyArgs verify;
    std::string verify_crop;
    auto* v = app.add_subcommand("verify", "Check an image for resampling traces (exit 0 authentic, 3 forged)");
    v->add_option("image", verify.image_path, "PGM image")->required();
    add_common(v, false);
    v->add_option("--csv", verify.csv_out, "Write angle,frequency,magnitude spectrum CSV");
    v->add_option("--crop", verify_crop, "Crop rectangle x0,y0,w,h");

    imgauth::SynthArgs synth;
    std::string kernel = "linear";
    auto* s = app.add_subcommand("synth", "Write an affine-resampled copy of an image");
    s->add_option("image", synth.image_path, "Input PGM")->required();
    s->add_option("out", synth.out_path, "Output PGM")->required();
    s->add_option("--config", config, "Pipeline config (unused; accepted for uniformity)");
    s->add_option("--scale", synth.scale, "Content scale factor (1.2 enlarges by 20%)");
    s->add_option("--rotate-deg", synth.rotate_deg, "Counterclockwise rotation in degrees");
    s->add_option("--skew", synth.skew, "Horizontal shear factor");
    s->add_option("--kernel", kernel, "nearest | linear | cubic")->check(CLI::IsMember({"nearest", "linear", "cubic"}));

    imgauth::CalibrateArgs calib;
    auto* c = app.add_subcommand("calibrate", "Pick the detector threshold from a folder of original PGMs");
    c->add_option("originals", calib.originals_dir, "Directory of original .pgm images (>= 10)")->required();
    c->add_option("config_out", calib.config_out, "Config file to write")->required();
    c->add_option("--config", calib.config_in, "Base config to copy the other settings from");
    c->add_option("--scores-csv", calib.scores_csv, "Write image,kind,scale,kernel,score CSV");

    imgauth::TrainArgs trn;
    auto* t = app.add_subcommand("train", "Verify a gallery, then train a recognition model");
    t->add_option("gallery", trn.gallery_dir, "Gallery directory containing manifest.tsv")->required();
    t->add_option("model_out", trn.model_out, "Model file to write")->required();
    add_common(t, true);
    t->add_option("--csv", trn.csv_out, "Write epoch,mse,seconds training curve CSV");

    imgauth::RecognizeArgs rec;
    std::string rec_crop;
    auto* r = app.add_subcommand("recognize", "Verify a probe, then match it (exit 0 match, 3 forged, 4 rejected)");
    r->add_option("image", rec.image_path, "Probe PGM")->required();
    r->add_option("--model", rec.model_paths, "Model file; repeat for several galleries")->required();
    add_common(r, false);
    r->add_option("--crop", rec_crop, "Crop rectangle x0,y0,w,h");

    imgauth::BenchArgs bench;
    auto* b = app.add_subcommand("bench", "Emit sweep CSVs");
    b->footer(
        "hidden-sweep CSV: hidden,epochs,macs_per_epoch,seconds_per_epoch,final_mse (H = 30,60,90,180,360)\n"
        "subject-sweep CSV: subjects,train_images,test_images,correct,accuracy (C = 2,4,...)");
    b->add_option("gallery", bench.gallery_dir, "Gallery directory")->required();
    b->add_option("csv_out", bench.csv_out, "CSV file to write")->required();
    add_common(b, true);
    b->add_flag("--hidden-sweep", bench.hidden_sweep, "Time training across hidden widths");
    b->add_flag("--subject-sweep", bench.subject_sweep, "Accuracy across subject counts");
    b->add_option("--test-gallery", bench.test_gallery_dir, "Separate probe gallery (default: per-subject split)");
    b->add_option("--epochs", bench.epochs, "Epochs per hidden-sweep run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : imgauth::kExitError;
    }

    try {
        if (*v) {
            verify.config_path = config;
            verify.crop = parse_crop(verify_crop);
            return imgauth::cmd_verify(verify, std::cout, std::cerr);
        }
        if (*s) {
            synth.kernel = imgauth::parse_kernel(kernel);
            return imgauth::cmd_synth(synth, std::cout, std::cerr);
        }
        if (*c) return imgauth::cmd_calibrate(calib, std::cout, std::cerr);
        if (*t) {
            trn.config_path = config;
            trn.seed = seed;
            return imgauth::cmd_train(trn, std::cout, std::cerr);
        }
        if (*r) {
            rec.config_path = config;
            rec.crop = parse_crop(rec_crop);
            return imgauth::cmd_recognize(rec, std::cout, std::cerr);
        }
        if (*b) {
            bench.config_path = config;
            bench.seed = seed;
            return imgauth::cmd_bench(bench, std::cout, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return imgauth::kExitError;
    }
    return imgauth::kExitError;
}
