#include "fixtures.hpp"

#include "vai/error.hpp"
#include "vai/image_io.hpp"
#include "vai/raster.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace vai {
namespace {

TEST(Grayscale, WhiteBlackRed) {
    EXPECT_EQ(to_grayscale(fixtures::solid_rgb(1, 1, 255, 255, 255)).at(0, 0), 1.0);
    EXPECT_EQ(to_grayscale(fixtures::solid_rgb(1, 1, 0, 0, 0)).at(0, 0), 0.0);
    EXPECT_EQ(to_grayscale(fixtures::solid_rgb(1, 1, 255, 0, 0)).at(0, 0), 0.299);
}

TEST(Grayscale, ExhaustiveRangeOnCoarseGrid) {
    // Every 8-bit triple is in range; a stride of 3 covers 86^3 corners plus the extremes.
    for (int r = 0; r <= 255; r += 3)
        for (int g = 0; g <= 255; g += 3)
            for (int b = 0; b <= 255; b += 3) {
                const double v = luma(static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                      static_cast<std::uint8_t>(b));
                ASSERT_GE(v, 0.0);
                ASSERT_LE(v, 1.0);
            }
    EXPECT_EQ(luma(255, 255, 255), 1.0);
}

TEST(Grayscale, RejectsSingleChannel) {
    EXPECT_THROW(to_grayscale(PixelBuffer(2, 2, 1)), Error);
}

TEST(Hsv, WorkedExamples) {
    const Hsv red = rgb_to_hsv(255, 0, 0);
    EXPECT_EQ(red.h, 0.0);
    EXPECT_EQ(red.s, 1.0);
    EXPECT_EQ(red.v, 1.0);

    const Hsv grey = rgb_to_hsv(128, 128, 128);
    EXPECT_EQ(grey.h, 0.0);
    EXPECT_EQ(grey.s, 0.0);
    EXPECT_DOUBLE_EQ(grey.v, 128.0 / 255.0);

    const Hsv white = rgb_to_hsv(255, 255, 255);
    EXPECT_EQ(white.h, 0.0);
    EXPECT_EQ(white.s, 0.0);
    EXPECT_EQ(white.v, 1.0);
}

TEST(Hsv, RoundTripFromGrid) {
    // hexcone HSV -> RGB -> HSV: hue within 1 degree, s and v within 1/255.
    auto hsv_to_rgb = [](double h, double s, double v) {
        const double c = v * s;
        const double hp = h / 60.0;
        const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
        double r = 0, g = 0, b = 0;
        if (hp < 1) { r = c; g = x; }
        else if (hp < 2) { r = x; g = c; }
        else if (hp < 3) { g = c; b = x; }
        else if (hp < 4) { g = x; b = c; }
        else if (hp < 5) { r = x; b = c; }
        else { r = c; b = x; }
        const double m = v - c;
        auto q = [&](double u) { return static_cast<std::uint8_t>(std::lround((u + m) * 255.0)); };
        return std::array<std::uint8_t, 3>{q(r), q(g), q(b)};
    };
    for (int hi = 0; hi < 360; hi += 15)
        for (double s = 0.6; s <= 1.0; s += 0.2)
            for (double v = 0.6; v <= 1.0; v += 0.2) {
                const auto rgb = hsv_to_rgb(hi, s, v);
                const Hsv back = rgb_to_hsv(rgb[0], rgb[1], rgb[2]);
                double dh = std::fabs(back.h - hi);
                dh = std::min(dh, 360.0 - dh);
                EXPECT_LE(dh, 1.0) << hi << " " << s << " " << v;
                EXPECT_NEAR(back.s, s, 1.0 / 255 + 1e-12);
                EXPECT_NEAR(back.v, v, 1.0 / 255 + 1e-12);
            }
}

TEST(Hsv, HueAlwaysInRange) {
    std::mt19937_64 rng(7);
    const PixelBuffer img = fixtures::random_rgb(64, 64, rng);
    const HsvBuffer hsv = to_hsv(img);
    for (const Hsv& p : hsv.samples()) {
        ASSERT_GE(p.h, 0.0);
        ASSERT_LT(p.h, 360.0);
        ASSERT_GE(p.s, 0.0);
        ASSERT_LE(p.s, 1.0);
    }
}

TEST(Resize, IdentityIsBitExact) {
    std::mt19937_64 rng(1);
    const PixelBuffer img = fixtures::random_rgb(13, 7, rng);
    EXPECT_EQ(resize_bilinear(img, 13, 7), img);
}

TEST(Resize, ConstantStaysConstant) {
    const PixelBuffer img = fixtures::solid_rgb(5, 9, 17, 200, 3);
    for (auto [w, h] : {std::pair{1, 1}, {3, 20}, {40, 4}, {512, 300}}) {
        const PixelBuffer r = resize_bilinear(img, w, h);
        ASSERT_EQ(r.width(), w);
        ASSERT_EQ(r.height(), h);
        EXPECT_EQ(r, fixtures::solid_rgb(w, h, 17, 200, 3));
    }
}

TEST(Resize, TwoByTwoAverageRoundsHalfUp) {
    // Rows {0,0} and {255,255}: the 1x1 centre sample sits midway, 127.5 -> 128.
    PixelBuffer img(2, 2, 1, {0, 0, 255, 255});
    const PixelBuffer r = resize_bilinear(img, 1, 1);
    EXPECT_EQ(r.at(0, 0, 0), 128);
}

TEST(Resize, ZeroTargetIsAnError) {
    const PixelBuffer img = fixtures::solid_rgb(4, 4, 1, 2, 3);
    EXPECT_THROW(resize_bilinear(img, 0, 4), ArgumentError);
    EXPECT_THROW(resize_bilinear(img, 4, 0), ArgumentError);
}

TEST(Resize, LongestSidePreservesAspect) {
    const PixelBuffer img = fixtures::solid_rgb(400, 200, 9, 9, 9);
    const PixelBuffer r = resize_longest_side(img, 100);
    EXPECT_EQ(r.width(), 100);
    EXPECT_EQ(r.height(), 50);
    EXPECT_EQ(resize_longest_side(img, 0), img);
}

TEST(Geometry, TransposeAndFlipAreInvolutions) {
    std::mt19937_64 rng(3);
    const PixelBuffer img = fixtures::random_rgb(6, 4, rng);
    EXPECT_EQ(transpose(transpose(img)), img);
    EXPECT_EQ(flip_horizontal(flip_horizontal(img)), img);
    EXPECT_EQ(transpose(img).width(), 4);
}

TEST(Decode, WhitePixelPng) {
    const PixelBuffer white = fixtures::solid_rgb(1, 1, 255, 255, 255);
    const PixelBuffer back = decode_image(encode_png(white));
    EXPECT_EQ(back, PixelBuffer(1, 1, 3, {255, 255, 255}));
}

TEST(Decode, PngRoundTripIsLossless) {
    std::mt19937_64 rng(11);
    const PixelBuffer img = fixtures::random_rgb(37, 21, rng);
    EXPECT_EQ(decode_image(encode_png(img)), img);
}

TEST(Decode, GrayPngExpandsToRgb) {
    const PixelBuffer g(3, 2, 1, {0, 50, 100, 150, 200, 250});
    const PixelBuffer back = decode_image(encode_png(g));
    ASSERT_EQ(back.channels(), 3);
    EXPECT_EQ(back.at(2, 1, 0), 250);
    EXPECT_EQ(back.at(2, 1, 2), 250);
}

TEST(Decode, JpegKeepsDimensions) {
    std::mt19937_64 rng(5);
    const PixelBuffer img = fixtures::random_rgb(2, 3, rng);
    const PixelBuffer back = decode_image(encode_jpeg(img));
    EXPECT_EQ(back.width(), 2);
    EXPECT_EQ(back.height(), 3);
    EXPECT_EQ(back.channels(), 3);
}

TEST(Decode, TruncatedPngHeader) {
    const auto png = encode_png(fixtures::solid_rgb(1, 1, 255, 255, 255));
    const std::vector<std::uint8_t> head(png.begin(), png.begin() + 5);
    try {
        decode_image(head);
        FAIL() << "expected DecodeError";
    } catch (const DecodeError& e) {
        EXPECT_EQ(e.offset(), 5u);
    }
}

TEST(Decode, TruncatedPngBody) {
    const auto png = encode_png(fixtures::solid_rgb(16, 16, 1, 2, 3));
    const std::vector<std::uint8_t> cut(png.begin(), png.begin() + static_cast<long>(png.size() / 2));
    EXPECT_THROW(decode_image(cut), DecodeError);
}

TEST(Decode, TruncatedJpeg) {
    std::mt19937_64 rng(9);
    const auto jpg = encode_jpeg(fixtures::random_rgb(32, 32, rng));
    const std::vector<std::uint8_t> cut(jpg.begin(), jpg.begin() + static_cast<long>(jpg.size() / 2));
    EXPECT_THROW(decode_image(cut), DecodeError);
}

TEST(Decode, UnknownFormat) {
    const std::vector<std::uint8_t> gif = {'G', 'I', 'F', '8', '9', 'a', 0, 0};
    EXPECT_THROW(decode_image(gif), FormatError);
    EXPECT_THROW(decode_image(std::vector<std::uint8_t>{}), FormatError);
}

}  // namespace
}  // namespace vai
