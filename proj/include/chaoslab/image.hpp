// 8-bit raster buffers and file I/O. Binary PPM (P6) / PGM (P5) are written
// byte-exactly (maxval 255, one whitespace after each header token); PNG
// read/write is handled through libpng and always delivered as 8-bit gray or
// RGB. Reads sniff the magic bytes, writes go by file extension.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaoslab {

// Unsupported or malformed image data (bad magic, truncated header, wrong
// maxval, short raster, undecodable PNG).
struct ImageFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem-level failure (missing file, unwritable path).
struct ImageIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ImageBuffer {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 (gray) or 3 (RGB)
    std::vector<std::uint8_t> data;  // row-major, channel-interleaved

    static ImageBuffer make(int width, int height, int channels);

    std::size_t size_bytes() const { return data.size(); }
    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    std::uint8_t& at(int x, int y, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    bool same_shape(const ImageBuffer& other) const {
        return width == other.width && height == other.height &&
               channels == other.channels;
    }
    bool operator==(const ImageBuffer& other) const = default;
};

// PPM/PGM
ImageBuffer read_pnm(const std::string& path);
void write_pnm(const std::string& path, const ImageBuffer& img);

// PNG (8-bit gray or RGB on disk; palette/16-bit/alpha inputs are converted)
ImageBuffer read_png(const std::string& path);
void write_png(const std::string& path, const ImageBuffer& img);

// Sniffs P5/P6/PNG magic. ImageFormatError on anything else.
ImageBuffer read_image(const std::string& path);

// Picks the container from the extension: .png -> PNG, .ppm/.pgm/.pnm -> PNM;
// anything else is an ImageFormatError.
void write_image(const std::string& path, const ImageBuffer& img);

// Deterministic photograph-like test image: smooth shaded gradients with a
// few soft shapes, so histograms are strongly non-uniform like a natural
// photo. Same (w, h, channels) always yields identical bytes.
ImageBuffer synthetic_photo(int width, int height, int channels);

}  // namespace chaoslab
