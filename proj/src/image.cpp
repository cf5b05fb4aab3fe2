#include "glyphlab/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include <zlib.h>

#include "glyphlab/kernels.hpp"

namespace glyphlab {

namespace {

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v)
{
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char (&type)[5], const std::vector<std::uint8_t>& data)
{
    put_u32_be(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uLong crc = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
    put_u32_be(out, static_cast<std::uint32_t>(crc));
}

} // namespace

void fill_box(Image& image, const BoundingBox& box, std::uint8_t value)
{
    const BoundingBox clip = intersection(box, image.bounds());
    for (int y = clip.y0; y < clip.y1; ++y) {
        std::fill_n(image.pixels.begin() + static_cast<std::ptrdiff_t>(y) * image.width + clip.x0,
                    std::max(0, clip.x1 - clip.x0), value);
    }
}

std::vector<std::uint8_t> box_mask(int width, int height, std::span<const BoundingBox> boxes)
{
    Image mask(width, height, 0);
    for (const BoundingBox& b : boxes) {
        fill_box(mask, b, 255);
    }
    return std::move(mask.pixels);
}

Image binarize(const Image& image, std::uint8_t threshold)
{
    Image out(image.width, image.height, 0);
    kernels::threshold(image.pixels, out.pixels, threshold);
    return out;
}

std::vector<std::uint8_t> encode_pgm(const Image& image)
{
    const std::string header =
        "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.pixels.begin(), image.pixels.end());
    return out;
}

Image decode_pgm(std::span<const std::uint8_t> bytes)
{
    std::size_t pos = 0;
    const auto skip_space_and_comments = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') {
                    ++pos;
                }
            } else if (std::isspace(bytes[pos]) != 0) {
                ++pos;
            } else {
                break;
            }
        }
    };
    const auto read_int = [&]() -> long {
        skip_space_and_comments();
        long value = 0;
        std::size_t digits = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos]) != 0 && digits < 9) {
            value = value * 10 + (bytes[pos] - '0');
            ++pos;
            ++digits;
        }
        if (digits == 0) {
            throw ImageFormatError("malformed PGM header");
        }
        return value;
    };

    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw ImageFormatError("not a binary PGM (P5) image");
    }
    pos = 2;
    const long width = read_int();
    const long height = read_int();
    const long maxval = read_int();
    if (width <= 0 || height <= 0 || maxval != 255) {
        throw ImageFormatError("unsupported PGM: need positive size and maxval 255");
    }
    if (pos >= bytes.size() || std::isspace(bytes[pos]) == 0) {
        throw ImageFormatError("malformed PGM header");
    }
    ++pos;
    const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() - pos < count) {
        throw ImageFormatError("truncated PGM pixel data");
    }
    Image image(static_cast<int>(width), static_cast<int>(height));
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(pos), count, image.pixels.begin());
    return image;
}

void write_pgm(const std::filesystem::path& path, const Image& image) { write_bytes(path, encode_pgm(image)); }

Image read_pgm(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return decode_pgm(bytes);
}

std::vector<std::uint8_t> encode_png(const Image& image)
{
    std::vector<std::uint8_t> raw;
    raw.reserve(static_cast<std::size_t>(image.width + 1) * image.height);
    for (int y = 0; y < image.height; ++y) {
        raw.push_back(0); // filter: none
        const auto row = image.pixels.begin() + static_cast<std::ptrdiff_t>(y) * image.width;
        raw.insert(raw.end(), row, row + image.width);
    }
    uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> packed(packed_size);
    if (compress2(packed.data(), &packed_size, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK) {
        throw std::runtime_error("zlib compression failed");
    }
    packed.resize(packed_size);

    std::vector<std::uint8_t> out{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    std::vector<std::uint8_t> ihdr;
    put_u32_be(ihdr, static_cast<std::uint32_t>(image.width));
    put_u32_be(ihdr, static_cast<std::uint32_t>(image.height));
    ihdr.insert(ihdr.end(), {8, 0, 0, 0, 0}); // 8-bit grayscale
    put_chunk(out, "IHDR", ihdr);
    put_chunk(out, "IDAT", packed);
    put_chunk(out, "IEND", {});
    return out;
}

void write_png(const std::filesystem::path& path, const Image& image) { write_bytes(path, encode_png(image)); }

} // namespace glyphlab
