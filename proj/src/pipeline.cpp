#include <algorithm>
#include <set>
#include <stdexcept>

#include "glyphlab/kernels.hpp"
#include "glyphlab/pipeline.hpp"

namespace glyphlab {

namespace {

template <typename Fn>
auto in_round(int round, std::string_view what, Fn&& fn)
{
    try {
        return fn();
    } catch (const std::exception& e) {
        throw BackendError("round " + std::to_string(round) + ": " + std::string(what) + " failed: " + e.what());
    }
}

std::string join_keywords(std::span<const std::string> keywords)
{
    std::string out;
    for (const auto& k : keywords) {
        if (!out.empty()) {
            out += ' ';
        }
        out += k;
    }
    return out;
}

} // namespace

RoundOutcome correction_round(std::string_view prompt, const Layout& layout, const GeneratedImage& image,
                              GeneratorBackend& generator, OcrBackend& ocr, const FontFace& font,
                              MaskSource mask_source, int round, const OcrResult* known_ocr)
{
    RoundOutcome out;
    out.ocr_before = known_ocr != nullptr ? *known_ocr : in_round(round, "OCR", [&] { return ocr.recognize(image); });
    out.flagged = detect_misspellings(layout, out.ocr_before, mask_source);
    out.before = ocr_word_metrics(layout, out.ocr_before);
    if (out.flagged.empty()) {
        out.image = image;
        out.ocr_after = out.ocr_before;
        out.after = out.before;
        return out;
    }

    std::set<std::size_t> selected;
    std::vector<BoundingBox> mask;
    for (const auto& f : out.flagged) {
        selected.insert(f.keyword_index);
        mask.push_back(f.region);
    }
    const GlyphImage glyph = render_correction(layout, selected, font);
    const GenerateRequest request{prompt, layout, glyph, &image, mask};
    out.image = in_round(round, "generation", [&] { return generator.generate(request); });
    out.backend_invoked = true;
    out.ocr_after = in_round(round, "OCR", [&] { return ocr.recognize(out.image); });
    out.after = ocr_word_metrics(layout, out.ocr_after);
    if (out.image.image.pixels.size() == image.image.pixels.size()) {
        out.pixels_changed = kernels::count_differences(out.image.image.pixels, image.image.pixels);
    } else {
        out.pixels_changed = out.image.image.pixels.size();
    }
    return out;
}

void PipelineConfig::validate() const
{
    if (iterations < 0) {
        throw std::invalid_argument("iterations must be >= 0");
    }
    if (canvas_width <= 0 || canvas_height <= 0 || canvas_width > kMaxCanvasDim || canvas_height > kMaxCanvasDim) {
        throw std::invalid_argument("canvas dimensions must lie in [1, " + std::to_string(kMaxCanvasDim) + "]");
    }
    anneal.validate();
    noise.validate();
}

Layout propose_layout(std::span<const std::string> keywords, int canvas_width, int canvas_height,
                      const FontFace& font, Rng& rng)
{
    Layout layout{canvas_width, canvas_height, {}};
    const int scale = std::max(1, canvas_height / 10 / font.cell_height());
    for (const auto& word : keywords) {
        const int h = std::min(canvas_height, font.cell_height() * scale);
        const auto cells = static_cast<int>(std::max<std::size_t>(word.size(), 1));
        const int w = std::min(canvas_width, cells * font.cell_width() * scale);
        const int x = static_cast<int>(rng.between(0, canvas_width - w));
        const int y = static_cast<int>(rng.between(0, canvas_height - h));
        layout.entries.push_back({word, {x, y, x + w, y + h}});
    }
    return layout;
}

PipelineResult run(std::string_view prompt, std::span<const std::string> keywords, const PipelineConfig& config,
                   GeneratorBackend& generator, OcrBackend& ocr, const std::optional<Layout>& initial_layout)
{
    config.validate();
    if (keywords.empty()) {
        throw std::invalid_argument("keyword list is empty");
    }
    const FontFace font = FontFace::resolve(config.font);

    PipelineResult result;
    if (initial_layout) {
        result.initial_layout = *initial_layout;
    } else {
        Rng rng(derive_seed(config.seed, std::uint64_t{0}));
        result.initial_layout = propose_layout(keywords, config.canvas_width, config.canvas_height, font, rng);
    }
    validate(result.initial_layout);

    if (config.optimize_layout) {
        AnnealConfig anneal = config.anneal;
        anneal.seed = derive_seed(config.seed, std::uint64_t{1});
        AnnealResult annealed = optimize(result.initial_layout, anneal);
        result.layout = std::move(annealed.layout);
        result.anneal = std::move(annealed.trace);
    } else {
        result.layout = result.initial_layout;
    }

    result.glyph = render(result.layout, font);
    result.unrenderable = result.glyph.unrenderable;
    result.initial_image =
        in_round(0, "generation", [&] { return generator.generate({prompt, result.layout, result.glyph, nullptr, {}}); });

    GeneratedImage current = result.initial_image;
    OcrResult current_ocr = in_round(0, "OCR", [&] { return ocr.recognize(current); });
    for (int r = 1; r <= config.iterations; ++r) {
        RoundOutcome outcome = correction_round(prompt, result.layout, current, generator, ocr, font,
                                                config.mask_source, r, &current_ocr);
        RoundTrace trace;
        trace.round = r;
        trace.flagged = outcome.flagged.size();
        trace.backend_invoked = outcome.backend_invoked;
        trace.f1_before = outcome.before.f1;
        trace.f1_candidate = outcome.after.f1;
        trace.pixels_changed = outcome.pixels_changed;
        trace.accepted = !config.accept_if_better || outcome.after.f1 >= outcome.before.f1;
        if (trace.accepted) {
            current = std::move(outcome.image);
            current_ocr = std::move(outcome.ocr_after);
        }
        trace.f1_retained = trace.accepted ? outcome.after.f1 : outcome.before.f1;
        result.rounds.push_back(trace);
    }

    result.final_image = std::move(current);
    result.final_ocr = std::move(current_ocr);
    result.metrics = evaluate_text(join_keywords(keywords), ocr_text(result.final_ocr));
    result.metrics.keyword_count = keywords.size();
    result.metrics.overlap_area = total_overlap_area(result.layout);
    result.metrics.overlap_energy = weighted_overlap_energy(result.layout);
    result.metrics.iou = layout_iou(result.layout);
    return result;
}

} // namespace glyphlab
