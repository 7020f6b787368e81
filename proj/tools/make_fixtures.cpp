// Regenerates the synthetic fixtures committed under tests/data.
//   make_fixtures noise <dir> <count> <seed>
//   make_fixtures desk <dir> <subjects> <train> <test> <seed>

#include <CLI11.hpp>

#include <iostream>

#include "fixtures.hpp"

int main(int argc, char** argv) {
    CLI::App app{"imgauth fixture generator"};
    app.require_subcommand(1);

    std::string dir;
    std::size_t count = 10, subjects = 10, n_train = 4, n_test = 2;
    std::uint64_t seed = 1;

    auto* noise = app.add_subcommand("noise", "White-noise originals");
    noise->add_option("dir", dir)->required();
    noise->add_option("count", count)->required();
    noise->add_option("seed", seed)->required();

    auto* desk = app.add_subcommand("desk", "Synthetic face gallery: <dir>/train and <dir>/test");
    desk->add_option("dir", dir)->required();
    desk->add_option("subjects", subjects)->required();
    desk->add_option("train", n_train)->required();
    desk->add_option("test", n_test)->required();
    desk->add_option("seed", seed)->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*noise) imgauth::fixtures::write_noise_set(dir, count, seed);
        if (*desk) {
            imgauth::fixtures::write_gallery(std::filesystem::path(dir) / "train", subjects, 0, n_train, seed);
            imgauth::fixtures::write_gallery(std::filesystem::path(dir) / "test", subjects, n_train, n_test, seed);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
