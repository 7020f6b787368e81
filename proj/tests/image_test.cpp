#include <gtest/gtest.h>

#include "imgauth/image.hpp"
#include "test_util.hpp"

using namespace imgauth;
using imgauth::testkit::bytes_of;

TEST(LoadPgm, BinaryTwoByTwo) {
    auto bytes = bytes_of("P5 2 2 255\n");
    bytes.insert(bytes.end(), {0, 255, 128, 64});
    const auto img = load_pgm(bytes);
    ASSERT_EQ(img.width(), 2u);
    ASSERT_EQ(img.height(), 2u);
    EXPECT_EQ(img.at(0, 0), 0.0);
    EXPECT_EQ(img.at(1, 0), 1.0);
    EXPECT_DOUBLE_EQ(img.at(0, 1), 128.0 / 255.0);
    EXPECT_DOUBLE_EQ(img.at(1, 1), 64.0 / 255.0);
}

TEST(LoadPgm, SinglePixel) {
    auto bytes = bytes_of("P5 1 1 255\n");
    bytes.push_back(255);
    const auto img = load_pgm(bytes);
    EXPECT_EQ(img.width(), 1u);
    EXPECT_EQ(img.at(0, 0), 1.0);
}

TEST(LoadPgm, TruncatedDataReportsOffsetOfMissingByte) {
    auto bytes = bytes_of("P5 2 2 255\n");
    bytes.insert(bytes.end(), {1, 2, 3});
    try {
        (void)load_pgm(bytes);
        FAIL() << "expected DecodeError";
    } catch (const DecodeError& e) {
        EXPECT_EQ(e.offset(), 14u);
        EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos);
    }
}

TEST(LoadPgm, AsciiWithComments) {
    const auto img = load_pgm(bytes_of("P2\n# made by hand\n3 1 # width height\n# max\n10\n0 5\n10\n"));
    ASSERT_EQ(img.width(), 3u);
    EXPECT_EQ(img.at(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(img.at(1, 0), 0.5);
    EXPECT_EQ(img.at(2, 0), 1.0);
}

TEST(LoadPgm, CommentBetweenBinaryHeaderTokens) {
    auto bytes = bytes_of("P5\n#c\n1 #w\n1\n255\n");
    bytes.push_back(51);
    EXPECT_DOUBLE_EQ(load_pgm(bytes).at(0, 0), 0.2);
}

TEST(LoadPgm, RejectsBadHeaders) {
    EXPECT_THROW((void)load_pgm(bytes_of("P6 1 1 255\nx")), DecodeError);
    EXPECT_THROW((void)load_pgm(bytes_of("P5 1 1 0\nx")), DecodeError);
    EXPECT_THROW((void)load_pgm(bytes_of("P5 1 1 256\nx")), DecodeError);
    EXPECT_THROW((void)load_pgm(bytes_of("P5 a 1 255\nx")), DecodeError);
    EXPECT_THROW((void)load_pgm(bytes_of("P5 0 1 255\n")), DecodeError);
    EXPECT_THROW((void)load_pgm(bytes_of("P5 1 1")), DecodeError);
    EXPECT_THROW((void)load_pgm(bytes_of("P2 2 1 255 7")), DecodeError);
    EXPECT_THROW((void)load_pgm(bytes_of("")), DecodeError);
}

TEST(LoadPgm, SampleAboveMaxval) {
    auto bytes = bytes_of("P5 1 1 100\n");
    bytes.push_back(101);
    EXPECT_THROW((void)load_pgm(bytes), DecodeError);
}

TEST(SavePgm, HalfRoundsUp) {
    const auto bytes = save_pgm(GrayImage(1, 1, 0.5));
    const auto header = bytes_of("P5\n1 1\n255\n");
    ASSERT_EQ(bytes.size(), header.size() + 1);
    EXPECT_TRUE(std::equal(header.begin(), header.end(), bytes.begin()));
    EXPECT_EQ(bytes.back(), 128);
}

TEST(SavePgm, ZerosAndNoComments) {
    const auto bytes = save_pgm(GrayImage(2, 2, 0.0));
    ASSERT_EQ(bytes.size(), 11u + 4u);
    for (std::size_t i = 11; i < bytes.size(); ++i) EXPECT_EQ(bytes[i], 0);
    EXPECT_EQ(std::find(bytes.begin(), bytes.end(), '#'), bytes.end());
}

TEST(SavePgm, RoundTripOfQuantizedImagesIsByteIdentical) {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t w = 1 + rng.next_u64() % 40, h = 1 + rng.next_u64() % 40;
        std::vector<double> px(w * h);
        for (double& p : px) p = static_cast<double>(rng.next_u64() % 256) / 255.0;
        const GrayImage img(w, h, px);
        const auto bytes = save_pgm(img);
        const auto back = load_pgm(bytes);
        EXPECT_EQ(back, img);
        EXPECT_EQ(save_pgm(back), bytes);
    }
}

TEST(SavePgm, ArbitraryValuesRoundTripWithinOneLevel) {
    const auto img = testkit::random_image(17, 9, 3);
    const auto back = load_pgm(save_pgm(img));
    for (std::size_t i = 0; i < img.size(); ++i) EXPECT_LE(std::abs(back.pixels()[i] - img.pixels()[i]), 1.0 / 255.0);
}

TEST(Crop, FullRectIsIdentity) {
    const auto img = testkit::random_image(7, 5, 1);
    EXPECT_EQ(crop(img, {0, 0, 7, 5}), img);
}

TEST(Crop, SinglePixelAtOrigin) {
    const auto img = testkit::random_image(7, 5, 2);
    const auto c = crop(img, {0, 0, 1, 1});
    EXPECT_EQ(c.size(), 1u);
    EXPECT_EQ(c.at(0, 0), img.at(0, 0));
}

TEST(Crop, InteriorOfRamp) {
    const auto img = testkit::ramp_image(4, 4);
    const auto c = crop(img, {1, 1, 2, 2});
    // ramp value at (x, y) is (y*4 + x)/15
    EXPECT_DOUBLE_EQ(c.at(0, 0), 5.0 / 15.0);
    EXPECT_DOUBLE_EQ(c.at(1, 0), 6.0 / 15.0);
    EXPECT_DOUBLE_EQ(c.at(0, 1), 9.0 / 15.0);
    EXPECT_DOUBLE_EQ(c.at(1, 1), 10.0 / 15.0);
}

TEST(Crop, OutOfBoundsNamesCoordinates) {
    const auto img = testkit::random_image(4, 4, 3);
    try {
        (void)crop(img, {3, 1, 2, 2});
        FAIL();
    } catch (const BoundsError& e) {
        EXPECT_NE(std::string(e.what()).find("(3,1,2,2)"), std::string::npos);
    }
    EXPECT_THROW((void)crop(img, {0, 0, 0, 1}), BoundsError);
}

TEST(GrayImage, RejectsOutOfRangeAndNaN) {
    EXPECT_THROW(GrayImage(1, 1, 1.5), ParameterError);
    EXPECT_THROW(GrayImage(1, 1, std::vector<double>{-0.1}), ParameterError);
    EXPECT_THROW(GrayImage(1, 1, std::vector<double>{std::nan("")}), ParameterError);
    EXPECT_THROW(GrayImage(2, 2, std::vector<double>{0.1}), ParameterError);
    EXPECT_THROW(GrayImage(0, 2), ParameterError);
    GrayImage ok(2, 2);
    EXPECT_THROW(ok.set(0, 0, 2.0), ParameterError);
}

TEST(GrayImage, ClampedAlwaysInUnitInterval) {
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(30);
        for (double& x : v) x = rng.uniform(-5.0, 5.0);
        const auto img = GrayImage::clamped(5, 6, v);
        for (double p : img.pixels()) {
            EXPECT_GE(p, 0.0);
            EXPECT_LE(p, 1.0);
        }
    }
}
