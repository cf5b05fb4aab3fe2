#include "glyphlab/glyph.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace glyphlab {

namespace detail {
extern const std::array<std::array<std::uint8_t, 5>, 95> kFont5x7;
}

namespace {

std::vector<std::uint32_t> hollow_box(int width, int height)
{
    std::vector<std::uint32_t> rows(static_cast<std::size_t>(height));
    const std::uint32_t full = width >= 32 ? 0xffffffffu : (1u << width) - 1;
    const std::uint32_t sides = 1u | (1u << (width - 1));
    for (int r = 0; r < height; ++r) {
        rows[static_cast<std::size_t>(r)] = (r == 0 || r == height - 1) ? full : sides;
    }
    return rows;
}

FontFace build_synthetic_block()
{
    FontFace face(std::string(FontFace::kSyntheticBlock), 5, 7);
    for (std::size_t i = 0; i < detail::kFont5x7.size(); ++i) {
        const auto& columns = detail::kFont5x7[i];
        std::vector<std::uint32_t> rows(7, 0);
        for (int x = 0; x < 5; ++x) {
            for (int y = 0; y < 7; ++y) {
                if ((columns[static_cast<std::size_t>(x)] >> y) & 1u) {
                    rows[static_cast<std::size_t>(y)] |= 1u << x;
                }
            }
        }
        face.set_glyph(static_cast<unsigned char>(0x20 + i), std::move(rows));
    }
    return face;
}

} // namespace

FontFace::FontFace(std::string name, int glyph_width, int glyph_height)
    : name_(std::move(name)), glyph_width_(glyph_width), glyph_height_(glyph_height), glyphs_(256)
{
    if (glyph_width < 1 || glyph_width > 32 || glyph_height < 1) {
        throw std::invalid_argument("font cell must be 1..32 wide and at least 1 tall");
    }
    fallback_ = hollow_box(glyph_width, glyph_height);
}

const FontFace& FontFace::synthetic_block()
{
    static const FontFace face = build_synthetic_block();
    return face;
}

FontFace FontFace::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open font " + path.string());
    }
    const nlohmann::json doc = nlohmann::json::parse(in);
    FontFace face(doc.value("name", path.stem().string()), doc.at("width").get<int>(), doc.at("height").get<int>());
    for (const auto& [key, rows_doc] : doc.at("glyphs").items()) {
        if (key.size() != 1) {
            throw std::runtime_error("font glyph keys must be single characters, got '" + key + "'");
        }
        std::vector<std::uint32_t> rows;
        for (const auto& row_doc : rows_doc) {
            const auto row = row_doc.get<std::string>();
            if (static_cast<int>(row.size()) != face.glyph_width()) {
                throw std::runtime_error("glyph '" + key + "' has a row of the wrong width");
            }
            std::uint32_t bits = 0;
            for (std::size_t x = 0; x < row.size(); ++x) {
                if (row[x] != '.' && row[x] != ' ') {
                    bits |= 1u << x;
                }
            }
            rows.push_back(bits);
        }
        if (static_cast<int>(rows.size()) != face.glyph_height()) {
            throw std::runtime_error("glyph '" + key + "' has the wrong number of rows");
        }
        face.set_glyph(static_cast<unsigned char>(key[0]), std::move(rows));
    }
    return face;
}

FontFace FontFace::resolve(std::string_view spec)
{
    if (spec.empty() || spec == kSyntheticBlock) {
        return synthetic_block();
    }
    return load(std::filesystem::path(std::string(spec)));
}

void FontFace::set_glyph(unsigned char c, std::vector<std::uint32_t> rows)
{
    glyphs_[c] = std::move(rows);
}

const std::vector<std::uint32_t>& FontFace::rows(unsigned char c) const
{
    if (!glyphs_[c].empty()) {
        return glyphs_[c];
    }
    if (!glyphs_['?'].empty()) {
        return glyphs_['?'];
    }
    return fallback_;
}

std::optional<TextPlacement> fit_text(std::string_view text, const BoundingBox& box, const FontFace& font)
{
    const int n = static_cast<int>(text.size());
    if (n == 0 || box.width() < font.cell_width() || box.height() < font.cell_height()) {
        return std::nullopt;
    }
    TextPlacement p;
    p.scale = std::min(box.width() / (n * font.cell_width()), box.height() / font.cell_height());
    if (p.scale < 1) {
        p.scale = 1;
        p.clipped = true;
    }
    const int step = font.cell_width() * p.scale;
    const int full_width = n * step;
    const int full_height = font.cell_height() * p.scale;
    p.origin_x = box.x0 + std::max(0, (box.width() - full_width) / 2);
    p.origin_y = box.y0 + (box.height() - full_height) / 2;
    p.word_region = intersection({p.origin_x, p.origin_y, p.origin_x + full_width, p.origin_y + full_height}, box);
    for (int i = 0; i < n; ++i) {
        const int x = p.origin_x + i * step;
        const BoundingBox cell = intersection({x, p.origin_y, x + step, p.origin_y + full_height}, box);
        if (cell.valid()) {
            p.char_regions.push_back(cell);
        }
    }
    return p;
}

void draw_text(Image& image, std::string_view text, const TextPlacement& placement, const BoundingBox& clip,
               const FontFace& font, std::uint8_t ink)
{
    const BoundingBox limit = intersection(clip, image.bounds());
    const int s = placement.scale;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto& rows = font.rows(static_cast<unsigned char>(text[i]));
        const int cell_x = placement.origin_x + static_cast<int>(i) * font.cell_width() * s;
        for (int gy = 0; gy < font.glyph_height(); ++gy) {
            const std::uint32_t bits = rows[static_cast<std::size_t>(gy)];
            for (int gx = 0; gx < font.glyph_width(); ++gx) {
                if (((bits >> gx) & 1u) == 0) {
                    continue;
                }
                const int px = cell_x + gx * s;
                const int py = placement.origin_y + gy * s;
                fill_box(image, intersection({px, py, px + s, py + s}, limit), ink);
            }
        }
    }
}

namespace {

GlyphImage render_selected(const Layout& layout, const std::vector<bool>& selected, const FontFace& font)
{
    GlyphImage out;
    out.image = Image(layout.canvas_width, layout.canvas_height);
    for (std::size_t i = 0; i < layout.entries.size(); ++i) {
        if (!selected[i]) {
            continue;
        }
        const LayoutEntry& entry = layout.entries[i];
        const auto placement = fit_text(entry.word, entry.box, font);
        if (!placement) {
            out.unrenderable.push_back(i);
            continue;
        }
        draw_text(out.image, entry.word, *placement, entry.box, font);
        out.words.push_back({i, entry.word, placement->word_region, placement->char_regions, placement->clipped});
    }
    return out;
}

} // namespace

GlyphImage render(const Layout& layout, const FontFace& font)
{
    validate(layout);
    return render_selected(layout, std::vector<bool>(layout.entries.size(), true), font);
}

GlyphImage render_correction(const Layout& layout, const std::set<std::size_t>& selected, const FontFace& font)
{
    validate(layout);
    std::vector<bool> mask(layout.entries.size(), false);
    for (std::size_t i : selected) {
        if (i >= mask.size()) {
            throw std::out_of_range("keyword index " + std::to_string(i) + " outside a layout of " +
                                    std::to_string(mask.size()));
        }
        mask[i] = true;
    }
    return render_selected(layout, mask, font);
}

} // namespace glyphlab
