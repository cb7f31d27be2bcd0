#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <png.h>

#include "test_util.hpp"
#include "texclass/errors.hpp"
#include "texclass/image.hpp"
#include "texclass/image_io.hpp"

using namespace texclass;

namespace {

std::string p6_bytes(int w, int h, const std::vector<std::uint8_t>& rgb) {
    std::string s = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    s.append(reinterpret_cast<const char*>(rgb.data()), rgb.size());
    return s;
}

void write_png_gray(const std::string& path, int w, int h, std::uint8_t value) {
    FILE* fp = std::fopen(path.c_str(), "wb");
    REQUIRE(fp != nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    REQUIRE(setjmp(png_jmpbuf(png)) == 0);
    png_init_io(png, fp);
    png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<std::uint8_t> row(w, value);
    for (int y = 0; y < h; ++y) png_write_row(png, row.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

void write_png_rgb(const std::string& path, const ColorImage& img) {
    FILE* fp = std::fopen(path.c_str(), "wb");
    REQUIRE(fp != nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    REQUIRE(setjmp(png_jmpbuf(png)) == 0);
    png_init_io(png, fp);
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) row[3 * x + c] = img.at(c, y, x);
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

}  // namespace

TEST_SUITE("image") {

TEST_CASE("ppm load round-trips exact channel values") {
    testutil::TempDir dir;
    const std::vector<std::uint8_t> rgb = {255, 0, 0, 0, 255, 0, 0, 0, 255, 255, 255, 255};
    testutil::write_file(dir.file("rgb.ppm"), p6_bytes(2, 2, rgb));

    const ColorImage img = load_image(dir.file("rgb.ppm"));
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    for (int i = 0; i < 4; ++i)
        for (int c = 0; c < 3; ++c) CHECK(img.planes[c][i] == rgb[3 * i + c]);
}

TEST_CASE("png dimensions and gray replication") {
    testutil::TempDir dir;
    write_png_gray(dir.file("big.png"), 512, 512, 77);
    const ColorImage img = load_image(dir.file("big.png"));
    CHECK(img.width == 512);
    CHECK(img.height == 512);
    CHECK(img.planes[0][0] == 77);
    CHECK(img.planes[1] == img.planes[0]);
    CHECK(img.planes[2] == img.planes[0]);
}

TEST_CASE("png rgb load round-trips exact channel values") {
    testutil::TempDir dir;
    std::mt19937_64 rng(11);
    ColorImage src(9, 7);
    for (auto& p : src.planes)
        for (auto& v : p) v = static_cast<std::uint8_t>(rng() & 0xff);
    write_png_rgb(dir.file("rgb.png"), src);

    const ColorImage img = load_image(dir.file("rgb.png"));
    REQUIRE(img.width == src.width);
    REQUIRE(img.height == src.height);
    for (int c = 0; c < 3; ++c) CHECK(img.planes[c] == src.planes[c]);
}

TEST_CASE("broken files are rejected with the path in the message") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("trunc.ppm"), "P6\n4 4\n255\nxx");  // payload cut short
    testutil::write_file(dir.file("junk.png"), "\x89PNGnot really");
    CHECK_THROWS_AS(load_image(dir.file("trunc.ppm")), DataError);
    CHECK_THROWS_AS(load_image(dir.file("junk.png")), DataError);
    CHECK_THROWS_WITH_AS(load_image(dir.file("absent.pgm")),
                         doctest::Contains("absent.pgm"), DataError);
}

TEST_CASE("pgm writer and mask io round-trip") {
    testutil::TempDir dir;
    std::mt19937_64 rng(5);
    GrayImage img = testutil::random_gray_int(rng, 13, 9);
    write_pgm(dir.file("img.pgm"), img);
    const GrayImage back = load_gray(dir.file("img.pgm"));
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) CHECK(back.data[i] == img.data[i]);

    BinaryMask mask(13, 9);
    for (auto& v : mask.data) v = (rng() & 1) ? 1 : 0;
    write_mask(dir.file("m.pgm"), mask);
    const BinaryMask mback = load_mask(dir.file("m.pgm"));
    CHECK(mback.data == mask.data);
}

TEST_CASE("subdivide cuts row-major tiles of a center crop") {
    ColorImage img(1024, 1024);
    for (int y = 0; y < 1024; ++y)
        for (int x = 0; x < 1024; ++x) img.at(0, y, x) = static_cast<std::uint8_t>((x ^ y) & 0xff);

    const auto tiles = subdivide(img, 512);
    REQUIRE(tiles.size() == 4);
    for (const auto& t : tiles) {
        CHECK(t.width == 512);
        CHECK(t.height == 512);
    }
    CHECK(tiles[1].at(0, 0, 0) == img.at(0, 0, 512));
    CHECK(tiles[2].at(0, 0, 0) == img.at(0, 512, 0));

    const auto identity = subdivide(tiles[0], 512);
    REQUIRE(identity.size() == 1);
    CHECK(identity[0].planes[0] == tiles[0].planes[0]);

    ColorImage small(100, 100);
    CHECK_THROWS_AS(subdivide(small, 512), std::invalid_argument);
}

TEST_CASE("subdivide tiles partition the truncated image") {
    std::mt19937_64 rng(17);
    ColorImage img(11, 7);
    for (auto& p : img.planes)
        for (auto& v : p) v = static_cast<std::uint8_t>(rng() & 0xff);

    const int tile = 3;
    const auto tiles = subdivide(img, tile);
    REQUIRE(tiles.size() == 3 * 2);
    const int x0 = (11 - 3 * tile) / 2, y0 = (7 - 2 * tile) / 2;
    for (int ty = 0; ty < 2; ++ty)
        for (int tx = 0; tx < 3; ++tx) {
            const ColorImage& t = tiles[static_cast<std::size_t>(ty) * 3 + tx];
            for (int c = 0; c < 3; ++c)
                for (int y = 0; y < tile; ++y)
                    for (int x = 0; x < tile; ++x)
                        CHECK(t.at(c, y, x) == img.at(c, y0 + ty * tile + y, x0 + tx * tile + x));
        }
}

TEST_CASE("quantize handles the degenerate and extreme cases") {
    GrayImage constant(6, 6, 42.0);
    const QuantizedImage qc = quantize(constant, 32);
    CHECK(std::all_of(qc.data.begin(), qc.data.end(), [](std::uint8_t v) { return v == 0; }));

    GrayImage two(2, 1);
    two.at(0, 0) = 0.0;
    two.at(0, 1) = 255.0;
    const QuantizedImage qt = quantize(two, 2);
    CHECK(qt.at(0, 0) == 0);
    CHECK(qt.at(0, 1) == 1);

    CHECK_THROWS_AS(quantize(constant, 1), std::invalid_argument);
    CHECK_THROWS_AS(quantize(constant, 257), std::invalid_argument);
}

TEST_CASE("quantize ramp matches a scalar binning oracle with equal populations") {
    GrayImage ramp(256, 1);
    for (int x = 0; x < 256; ++x) ramp.at(0, x) = x;
    const QuantizedImage q = quantize(ramp, 4);

    std::vector<int> pop(4, 0);
    for (int x = 0; x < 256; ++x) {
        const int expect = std::min(3, static_cast<int>((ramp.at(0, x) - 0.0) * 4 / 255.0));
        CHECK(q.at(0, x) == expect);
        ++pop[q.at(0, x)];
    }
    CHECK(pop == std::vector<int>{64, 64, 64, 64});
}

TEST_CASE("quantization is monotone in source intensity") {
    std::mt19937_64 rng(23);
    const GrayImage img = testutil::random_gray(rng, 17, 13);
    for (int levels : {2, 5, 32}) {
        const QuantizedImage q = quantize(img, levels);
        std::vector<std::pair<double, std::uint8_t>> pairs;
        for (std::size_t i = 0; i < img.data.size(); ++i) pairs.emplace_back(img.data[i], q.data[i]);
        std::sort(pairs.begin(), pairs.end());
        for (std::size_t i = 1; i < pairs.size(); ++i) CHECK(pairs[i - 1].second <= pairs[i].second);
        for (auto v : q.data) CHECK(v < levels);
    }
}

TEST_CASE("replicate_gray clamps and rounds into all planes") {
    GrayImage img(3, 1);
    img.at(0, 0) = -4.0;
    img.at(0, 1) = 99.6;
    img.at(0, 2) = 300.0;
    const ColorImage c = replicate_gray(img);
    for (int ch = 0; ch < 3; ++ch) {
        CHECK(c.at(ch, 0, 0) == 0);
        CHECK(c.at(ch, 0, 1) == 100);
        CHECK(c.at(ch, 0, 2) == 255);
    }
}

}  // TEST_SUITE
