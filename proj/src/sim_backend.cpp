#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "glyphlab/kernels.hpp"
#include "glyphlab/pipeline.hpp"

namespace glyphlab {

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

// 3x3 mean filter restricted to `region`, reading from a copy.
void box_blur(Image& image, const BoundingBox& region)
{
    const BoundingBox r = intersection(region, image.bounds());
    if (!r.valid()) {
        return;
    }
    const Image src = image;
    for (int y = r.y0; y < r.y1; ++y) {
        for (int x = r.x0; x < r.x1; ++x) {
            int sum = 0;
            int n = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int sx = x + dx;
                    const int sy = y + dy;
                    if (sx >= 0 && sy >= 0 && sx < src.width && sy < src.height) {
                        sum += src.at(sx, sy);
                        ++n;
                    }
                }
            }
            image.at(x, y) = static_cast<std::uint8_t>(sum / n);
        }
    }
}

} // namespace

void NoiseModel::validate() const
{
    for (const double p : {p_missing_word, p_misspell, p_blur}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("noise probabilities must lie in [0,1]");
        }
    }
}

std::string corrupt_one_char(std::string_view word, Rng& rng)
{
    std::string out(word);
    if (out.empty()) {
        return out;
    }
    const std::size_t i = rng.below(out.size());
    const char c = out[i];
    if (is_upper(c) || is_lower(c)) {
        const char base = is_upper(c) ? 'A' : 'a';
        const auto k = static_cast<char>(rng.below(25));
        out[i] = static_cast<char>(base + (k >= c - base ? k + 1 : k));
    } else {
        out[i] = static_cast<char>('a' + rng.below(26));
    }
    return out;
}

GeneratedImage sim_generate(const Layout& layout, const GlyphImage& glyph, const GeneratedImage* prior,
                            std::span<const BoundingBox> mask, const NoiseModel& noise, Rng& rng,
                            const FontFace& font)
{
    noise.validate();
    GeneratedImage out{Image(layout.canvas_width, layout.canvas_height), RenderManifest{}};
    std::map<std::size_t, ManifestEntry> painted;
    std::set<std::size_t> repainted;
    for (const auto& w : glyph.words) {
        repainted.insert(w.keyword_index);
        if (rng.bernoulli(noise.p_missing_word)) {
            continue;
        }
        std::string text = w.word;
        if (rng.bernoulli(noise.p_misspell)) {
            text = corrupt_one_char(text, rng);
        }
        const bool blurred = rng.bernoulli(noise.p_blur);
        const BoundingBox& box = layout.entries.at(w.keyword_index).box;
        const auto placement = fit_text(text, box, font);
        if (!placement) {
            continue;
        }
        draw_text(out.image, text, *placement, box, font);
        if (blurred) {
            box_blur(out.image, placement->word_region);
        }
        painted[w.keyword_index] = {w.keyword_index, text, placement->word_region, blurred};
    }

    if (prior != nullptr) {
        if (prior->image.width != out.image.width || prior->image.height != out.image.height) {
            throw std::invalid_argument("prior image size does not match the layout canvas");
        }
        if (!mask.empty()) {
            const auto m = box_mask(out.image.width, out.image.height, mask);
            Image composed = prior->image;
            kernels::masked_copy(composed.pixels, out.image.pixels, m);
            out.image = std::move(composed);
        }
        if (prior->manifest) {
            for (const auto& e : prior->manifest->entries) {
                if (!repainted.contains(e.keyword_index)) {
                    painted.emplace(e.keyword_index, e);
                }
            }
        }
    }
    for (auto& [index, entry] : painted) {
        out.manifest->entries.push_back(std::move(entry));
    }
    return out;
}

OcrResult sim_ocr(const GeneratedImage& image, const SimOcrOptions& options, Rng& rng)
{
    if (!image.manifest) {
        throw BackendError("simulated OCR needs an image with a render manifest; use an external OCR command "
                           "(--ocr exec:<path>) for other images");
    }
    OcrResult result;
    for (const auto& e : image.manifest->entries) {
        OcrDetection d{e.text, e.region, 1.0};
        if (e.blurred) {
            d.word = corrupt_one_char(e.text, rng);
            d.confidence = 0.3;
        } else if (options.p_misread > 0.0 && rng.bernoulli(options.p_misread)) {
            d.word = corrupt_one_char(e.text, rng);
        }
        result.detections.push_back(std::move(d));
    }
    return result;
}

SimulatedGenerator::SimulatedGenerator(NoiseModel noise, std::uint64_t seed, FontFace font)
    : noise_(noise), rng_(seed), font_(std::move(font))
{
    noise_.validate();
}

GeneratedImage SimulatedGenerator::generate(const GenerateRequest& request)
{
    ++calls_;
    return sim_generate(request.layout, request.glyph, request.prior, request.mask, noise_, rng_, font_);
}

SimulatedOcr::SimulatedOcr(std::uint64_t seed, SimOcrOptions options) : options_(options), rng_(seed) {}

OcrResult SimulatedOcr::recognize(const GeneratedImage& image) { return sim_ocr(image, options_, rng_); }

} // namespace glyphlab
