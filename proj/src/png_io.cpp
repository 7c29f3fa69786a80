// libpng glue. Readers normalize whatever arrives (palette, sub-8-bit gray,
// 16-bit, alpha) down to 8-bit gray or RGB; writers emit exactly what the
// buffer holds.

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>

#include "chaoslab/image.hpp"

namespace chaoslab {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports errors through longjmp; keep all C++ objects outside the
// setjmp region or trivially destructible inside it.
[[noreturn]] void throw_format(const char* what, const std::string& path) {
    throw ImageFormatError(std::string(what) + ": " + path);
}

}  // namespace

ImageBuffer read_png(const std::string& path) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) throw ImageIoError("cannot open " + path);

    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw ImageIoError("png: allocation failure");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw ImageIoError("png: allocation failure");
    }

    ImageBuffer img;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw_format("png: decode failed", path);
    }

    png_init_io(png, file.get());
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type & PNG_COLOR_MASK_ALPHA ||
        png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const png_byte out_channels = png_get_channels(png, info);
    if (out_channels != 1 && out_channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw_format("png: unsupported channel layout", path);
    }

    img = ImageBuffer::make(static_cast<int>(width), static_cast<int>(height),
                            out_channels);
    rows.resize(height);
    const std::size_t stride =
        static_cast<std::size_t>(width) * out_channels;
    for (png_uint_32 y = 0; y < height; ++y)
        rows[y] = img.data.data() + y * stride;

    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_png(const std::string& path, const ImageBuffer& img) {
    if (img.channels != 1 && img.channels != 3)
        throw ImageFormatError("png: unsupported channel count");

    FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file) throw ImageIoError("cannot write " + path);

    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw ImageIoError("png: allocation failure");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw ImageIoError("png: allocation failure");
    }

    // png_write_image wants non-const row pointers but never writes through
    // them.
    std::vector<png_bytep> rows(img.height);
    const std::size_t stride =
        static_cast<std::size_t>(img.width) * img.channels;
    for (int y = 0; y < img.height; ++y)
        rows[y] = const_cast<png_bytep>(img.data.data()) +
                  static_cast<std::size_t>(y) * stride;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw ImageIoError("png: encode failed: " + path);
    }

    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8,
                 img.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace chaoslab
