#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "glyphlab/geometry.hpp"

namespace glyphlab {

inline constexpr std::uint8_t kInk = 0;
inline constexpr std::uint8_t kBackground = 255;

/// 8-bit grayscale raster, row-major.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(int w, int h, std::uint8_t fill = kBackground)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill)
    {
    }

    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    BoundingBox bounds() const { return {0, 0, width, height}; }

    friend bool operator==(const Image&, const Image&) = default;
};

class ImageFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fills the part of `box` inside the image.
void fill_box(Image& image, const BoundingBox& box, std::uint8_t value);

/// 255 inside any of `boxes` (clipped to the image), 0 elsewhere.
std::vector<std::uint8_t> box_mask(int width, int height, std::span<const BoundingBox> boxes);

/// 0/255 mask: 0 where the pixel is darker than `threshold`.
Image binarize(const Image& image, std::uint8_t threshold = 128);

/// Binary PGM (P5, maxval 255).
std::vector<std::uint8_t> encode_pgm(const Image& image);
Image decode_pgm(std::span<const std::uint8_t> bytes);
void write_pgm(const std::filesystem::path& path, const Image& image);
Image read_pgm(const std::filesystem::path& path);

/// 8-bit grayscale PNG.
std::vector<std::uint8_t> encode_png(const Image& image);
void write_png(const std::filesystem::path& path, const Image& image);

} // namespace glyphlab
