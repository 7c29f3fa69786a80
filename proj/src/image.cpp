#include "chaoslab/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "chaoslab/maps.hpp"  // kPi

namespace chaoslab {

ImageBuffer ImageBuffer::make(int width, int height, int channels) {
    if (width < 1 || height < 1 || (channels != 1 && channels != 3))
        throw std::invalid_argument("ImageBuffer: bad dimensions");
    ImageBuffer img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.data.assign(static_cast<std::size_t>(width) * height * channels, 0);
    return img;
}

// ---------------------------------------------------------------------------
// PNM (binary PPM/PGM)
// ---------------------------------------------------------------------------

namespace {

// Next whitespace-delimited header token, skipping '#' comments to EOL.
std::string pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    if (tok.empty()) throw ImageFormatError("pnm: truncated header");
    return tok;
}

int pnm_int(std::istream& in, const char* what) {
    const std::string tok = pnm_token(in);
    int value = 0;
    for (char ch : tok) {
        if (ch < '0' || ch > '9')
            throw ImageFormatError(std::string("pnm: bad ") + what + " '" + tok + "'");
        value = value * 10 + (ch - '0');
        if (value > 1 << 24) throw ImageFormatError(std::string("pnm: ") + what + " out of range");
    }
    return value;
}

}  // namespace

ImageBuffer read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ImageIoError("cannot open " + path);

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2 || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
        throw ImageFormatError("pnm: bad magic in " + path);
    const int channels = magic[1] == '6' ? 3 : 1;

    const int width = pnm_int(in, "width");
    const int height = pnm_int(in, "height");
    const int maxval = pnm_int(in, "maxval");
    if (width < 1 || height < 1)
        throw ImageFormatError("pnm: bad dimensions in " + path);
    if (maxval != 255)
        throw ImageFormatError("pnm: only maxval 255 supported, got " +
                               std::to_string(maxval));
    // pnm_int consumed exactly one whitespace after the maxval token, which
    // is the single separator before the raster.

    ImageBuffer img = ImageBuffer::make(width, height, channels);
    in.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.data.size())
        throw ImageFormatError("pnm: truncated raster in " + path);
    return img;
}

void write_pnm(const std::string& path, const ImageBuffer& img) {
    if (img.channels != 1 && img.channels != 3)
        throw ImageFormatError("pnm: unsupported channel count");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ImageIoError("cannot write " + path);
    out << (img.channels == 3 ? "P6" : "P5") << '\n'
        << img.width << ' ' << img.height << '\n'
        << "255" << '\n';
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
    if (!out) throw ImageIoError("short write to " + path);
}

// ---------------------------------------------------------------------------
// dispatchers
// ---------------------------------------------------------------------------

namespace {

bool has_png_magic(const unsigned char* bytes, std::size_t n) {
    static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    return n >= 8 && std::equal(sig, sig + 8, bytes);
}

std::string lower_ext(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

}  // namespace

ImageBuffer read_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ImageIoError("cannot open " + path);
    unsigned char head[8] = {};
    in.read(reinterpret_cast<char*>(head), 8);
    const auto got = static_cast<std::size_t>(in.gcount());
    in.close();

    if (has_png_magic(head, got)) return read_png(path);
    if (got >= 2 && head[0] == 'P' && (head[1] == '5' || head[1] == '6'))
        return read_pnm(path);
    throw ImageFormatError("unsupported image format: " + path);
}

void write_image(const std::string& path, const ImageBuffer& img) {
    const std::string ext = lower_ext(path);
    if (ext == "png") {
        write_png(path, img);
    } else if (ext == "ppm" || ext == "pgm" || ext == "pnm") {
        write_pnm(path, img);
    } else {
        throw ImageFormatError("unsupported output image extension: " + path);
    }
}

// ---------------------------------------------------------------------------
// synthetic test image
// ---------------------------------------------------------------------------

namespace {

double soft_disk(double fx, double fy, double cx, double cy, double radius) {
    const double dx = fx - cx;
    const double dy = fy - cy;
    const double d = std::sqrt(dx * dx + dy * dy);
    // smoothstep falloff across 20% of the radius
    const double t = std::clamp((radius - d) / (0.2 * radius), 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

}  // namespace

ImageBuffer synthetic_photo(int width, int height, int channels) {
    ImageBuffer img = ImageBuffer::make(width, height, channels);
    for (int y = 0; y < height; ++y) {
        const double fy = (y + 0.5) / height;
        for (int x = 0; x < width; ++x) {
            const double fx = (x + 0.5) / width;
            // sky-to-ground vertical gradient with a low-frequency swirl
            const double swirl =
                0.12 * std::sin(2.0 * kPi * (1.7 * fx + 0.6 * std::sin(2.0 * kPi * fy)));
            const double base = 0.72 - 0.45 * fy + swirl;
            // a bright disk ("sun") and two darker blobs
            const double sun = soft_disk(fx, fy, 0.72, 0.23, 0.13);
            const double rock1 = soft_disk(fx, fy, 0.30, 0.78, 0.22);
            const double rock2 = soft_disk(fx, fy, 0.62, 0.85, 0.16);
            // mild diagonal texture
            const double grain = 0.05 * std::sin(2.0 * kPi * (9.0 * fx + 7.0 * fy));

            double rgb[3];
            rgb[0] = base + 0.25 * sun - 0.30 * rock1 - 0.22 * rock2 + grain;
            rgb[1] = base * 0.92 + 0.22 * sun - 0.26 * rock1 - 0.25 * rock2 + grain;
            rgb[2] = base * 1.08 + 0.12 * sun - 0.34 * rock1 - 0.18 * rock2 - grain;

            for (int c = 0; c < channels; ++c) {
                const double v = channels == 1
                                     ? 0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2]
                                     : rgb[c];
                const double clamped = std::clamp(v, 0.0, 1.0);
                img.at(x, y, c) = static_cast<std::uint8_t>(
                    std::lround(clamped * 255.0));
            }
        }
    }
    return img;
}

}  // namespace chaoslab
