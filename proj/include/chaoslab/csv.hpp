// Minimal CSV output: comma separation, one header row, LF line endings,
// doubles printed shortest-round-trip.

#pragma once

#include <charconv>
#include <concepts>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chaoslab {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, std::initializer_list<std::string_view> header)
        : out_(path, std::ios::binary), path_(path) {
        if (!out_) throw IoError("cannot write " + path);
        bool first = true;
        for (std::string_view h : header) {
            if (!first) out_ << ',';
            out_ << h;
            first = false;
        }
        out_ << '\n';
    }

    template <typename... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        (write_cell(cells, first), ...);
        out_ << '\n';
    }

    void close() {
        out_.close();
        if (!out_) throw IoError("short write to " + path_);
    }

  private:
    template <typename T>
        requires std::integral<T>
    void write_cell(T v, bool& first) {
        put(std::to_string(v), first);
    }
    void write_cell(double v, bool& first) { put(format_double(v), first); }
    void write_cell(const std::string& v, bool& first) { put(v, first); }
    void write_cell(const char* v, bool& first) { put(v, first); }

    void put(std::string_view s, bool& first) {
        if (!first) out_ << ',';
        out_ << s;
        first = false;
    }

    std::ofstream out_;
    std::string path_;
};

}  // namespace chaoslab
