#include "texclass/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include "texclass/errors.hpp"

namespace texclass {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw DataError(path + ": " + why);
}

// Skips whitespace and '#' comment lines between PNM header tokens.
int pnm_int(std::FILE* f, const std::string& path) {
    int c = std::fgetc(f);
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = std::fgetc(f);
        } else if (!std::isspace(c)) {
            break;
        }
        c = std::fgetc(f);
    }
    if (c == EOF || !std::isdigit(c)) fail(path, "malformed PNM header");
    int v = 0;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        if (v > 1 << 28) fail(path, "PNM header value out of range");
        c = std::fgetc(f);
    }
    return v;
}

ColorImage load_pnm(std::FILE* f, const std::string& path, bool color) {
    const int w = pnm_int(f, path);
    const int h = pnm_int(f, path);
    const int maxval = pnm_int(f, path);
    if (w < 1 || h < 1) fail(path, "degenerate PNM dimensions");
    if (maxval > 255) fail(path, "unsupported bit depth (maxval " + std::to_string(maxval) + ", want <= 255)");
    if (maxval < 1) fail(path, "invalid PNM maxval");

    const size_t n = static_cast<size_t>(w) * h;
    const size_t bytes = color ? n * 3 : n;
    std::vector<std::uint8_t> buf(bytes);
    if (std::fread(buf.data(), 1, bytes, f) != bytes) fail(path, "truncated PNM payload");

    ColorImage img(w, h);
    if (color) {
        for (size_t i = 0; i < n; ++i) {
            img.planes[0][i] = buf[3 * i];
            img.planes[1][i] = buf[3 * i + 1];
            img.planes[2][i] = buf[3 * i + 2];
        }
    } else {
        img.planes[0] = buf;
        img.planes[1] = buf;
        img.planes[2] = std::move(buf);
    }
    return img;
}

ColorImage load_png(std::FILE* f, const std::string& path) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail(path, "libpng init failed");
    }

    std::vector<std::uint8_t> pixels;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "PNG decode error (corrupt or truncated file)");
    }

    png_init_io(png, f);
    png_read_info(png, info);

    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    const int depth = png_get_bit_depth(png, info);
    const int type = png_get_color_type(png, info);

    if (depth == 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "unsupported bit depth (16-bit PNG)");
    }
    if (type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (type == PNG_COLOR_TYPE_GRAY || type == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const size_t stride = png_get_rowbytes(png, info);
    if (stride != static_cast<size_t>(w) * 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "unexpected PNG row layout after expansion");
    }

    pixels.resize(stride * h);
    rows.resize(h);
    for (int y = 0; y < h; ++y) rows[y] = pixels.data() + stride * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    ColorImage img(w, h);
    const size_t n = static_cast<size_t>(w) * h;
    for (size_t i = 0; i < n; ++i) {
        img.planes[0][i] = pixels[3 * i];
        img.planes[1][i] = pixels[3 * i + 1];
        img.planes[2][i] = pixels[3 * i + 2];
    }
    return img;
}

}  // namespace

ColorImage load_image(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) fail(path, "cannot open file");

    unsigned char magic[8] = {0};
    const size_t got = std::fread(magic, 1, sizeof magic, f.get());
    if (got < 2) fail(path, "file too short to identify");
    std::rewind(f.get());

    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    if (got == 8 && std::memcmp(magic, png_sig, 8) == 0) return load_png(f.get(), path);
    if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6')) {
        std::fseek(f.get(), 2, SEEK_SET);
        return load_pnm(f.get(), path, magic[1] == '6');
    }
    if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '3'))
        fail(path, "ASCII PNM is not supported (use binary P5/P6)");
    fail(path, "unrecognized image format (want PNG, PGM or PPM)");
}

void write_pgm(const std::string& path, const GrayImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path + ": cannot open for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<std::uint8_t> row(img.width);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double v = std::clamp(img.at(y, x), 0.0, 255.0);
            row[x] = static_cast<std::uint8_t>(std::lround(v));
        }
        out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
    if (!out) throw DataError(path + ": write failed");
}

GrayImage load_gray(const std::string& path) {
    const ColorImage c = load_image(path);
    GrayImage g(c.width, c.height);
    for (size_t i = 0; i < c.planes[0].size(); ++i) {
        if (c.planes[0][i] != c.planes[1][i] || c.planes[0][i] != c.planes[2][i])
            throw DataError(path + ": expected a grayscale image, found differing channels");
        g.data[i] = c.planes[0][i];
    }
    return g;
}

BinaryMask load_mask(const std::string& path) {
    const ColorImage c = load_image(path);
    BinaryMask m(c.width, c.height);
    for (size_t i = 0; i < c.planes[0].size(); ++i) m.data[i] = c.planes[0][i] >= 128 ? 1 : 0;
    return m;
}

void write_mask(const std::string& path, const BinaryMask& mask) {
    GrayImage g(mask.width, mask.height);
    for (size_t i = 0; i < mask.data.size(); ++i) g.data[i] = mask.data[i] ? 255.0 : 0.0;
    write_pgm(path, g);
}

}  // namespace texclass
