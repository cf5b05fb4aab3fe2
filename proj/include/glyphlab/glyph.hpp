#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "glyphlab/geometry.hpp"
#include "glyphlab/image.hpp"

namespace glyphlab {

/// Fixed-cell bitmap face. Each glyph is glyph_height rows of glyph_width
/// bits (bit x set = ink at column x). Characters are advanced by one blank
/// column after the glyph.
class FontFace {
public:
    static constexpr std::string_view kSyntheticBlock = "synthetic-block";

    /// Built-in 5x7 dot-matrix face covering printable ASCII.
    static const FontFace& synthetic_block();

    /// Monospace face from a JSON document:
    /// {"name": ..., "width": W, "height": H, "glyphs": {"A": ["..#..", ...], ...}}
    static FontFace load(const std::filesystem::path& path);

    /// "synthetic-block" or a path to a face document.
    static FontFace resolve(std::string_view spec);

    FontFace(std::string name, int glyph_width, int glyph_height);

    const std::string& name() const { return name_; }
    int glyph_width() const { return glyph_width_; }
    int glyph_height() const { return glyph_height_; }
    int cell_width() const { return glyph_width_ + 1; }
    int cell_height() const { return glyph_height_; }

    void set_glyph(unsigned char c, std::vector<std::uint32_t> rows);
    /// Rows for `c`; unknown characters use '?', or a hollow box if that is missing too.
    const std::vector<std::uint32_t>& rows(unsigned char c) const;

private:
    std::string name_;
    int glyph_width_;
    int glyph_height_;
    std::vector<std::vector<std::uint32_t>> glyphs_; // indexed by byte
    std::vector<std::uint32_t> fallback_;
};

/// Where a word lands inside its box.
struct TextPlacement {
    int scale = 0;
    int origin_x = 0;
    int origin_y = 0;
    bool clipped = false;
    BoundingBox word_region;
    std::vector<BoundingBox> char_regions;
};

/// Largest integer scale fitting `text` in `box`, centred. A box that holds
/// one cell but not the whole word gets scale 1 and is clipped. nullopt when
/// not even one cell fits (or the text is empty).
std::optional<TextPlacement> fit_text(std::string_view text, const BoundingBox& box, const FontFace& font);

/// Draws `text` into `image` at `placement`; ink never leaves `clip`.
void draw_text(Image& image, std::string_view text, const TextPlacement& placement, const BoundingBox& clip,
               const FontFace& font, std::uint8_t ink = kInk);

struct RenderedWord {
    std::size_t keyword_index = 0;
    std::string word;
    BoundingBox word_region;
    std::vector<BoundingBox> char_regions;
    bool clipped = false;
};

/// Whiteboard raster of a layout plus the rendered extents of each word.
struct GlyphImage {
    Image image;
    std::vector<RenderedWord> words;        ///< drawn words, in layout order
    std::vector<std::size_t> unrenderable;  ///< keywords whose box cannot hold a cell
};

GlyphImage render(const Layout& layout, const FontFace& font = FontFace::synthetic_block());

/// Draws only the keywords in `selected`; everything else stays blank.
/// Throws std::out_of_range for an index outside the layout.
GlyphImage render_correction(const Layout& layout, const std::set<std::size_t>& selected,
                             const FontFace& font = FontFace::synthetic_block());

} // namespace glyphlab
