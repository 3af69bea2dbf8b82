#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace proteoknight {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Row-major 8-bit RGB raster.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // width * height * 3

    Image() = default;
    Image(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {}

    Rgb at(int x, int y) const {
        const std::size_t o = (static_cast<std::size_t>(y) * width + x) * 3;
        return {pixels[o], pixels[o + 1], pixels[o + 2]};
    }
    void set(int x, int y, Rgb c) {
        const std::size_t o = (static_cast<std::size_t>(y) * width + x) * 3;
        pixels[o] = c.r;
        pixels[o + 1] = c.g;
        pixels[o + 2] = c.b;
    }

    friend bool operator==(const Image&, const Image&) = default;
};

// 8-bit RGB, no alpha, non-interlaced. Throws DataError on I/O failure.
void write_png(const Image& image, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_png(const Image& image);
// Any PNG is converted to 8-bit RGB.
Image read_png(const std::filesystem::path& path);

}  // namespace proteoknight
