#pragma once

// OCR-aware recursive correction: generate an image from a glyph condition,
// read it back with OCR, and repaint only the words that came out wrong.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "glyphlab/annealer.hpp"
#include "glyphlab/geometry.hpp"
#include "glyphlab/glyph.hpp"
#include "glyphlab/image.hpp"
#include "glyphlab/rng.hpp"
#include "glyphlab/textmetrics.hpp"

namespace glyphlab {

struct OcrDetection {
    std::string word;
    BoundingBox box;
    double confidence = 1.0;

    friend bool operator==(const OcrDetection&, const OcrDetection&) = default;
};

struct OcrResult {
    std::vector<OcrDetection> detections;

    friend bool operator==(const OcrResult&, const OcrResult&) = default;
};

/// What a simulated generator actually painted for one keyword.
struct ManifestEntry {
    std::size_t keyword_index = 0;
    std::string text;
    BoundingBox region;
    bool blurred = false;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Sidecar of a simulated image: the words present, in keyword order.
struct RenderManifest {
    std::vector<ManifestEntry> entries;

    friend bool operator==(const RenderManifest&, const RenderManifest&) = default;
};

struct GeneratedImage {
    Image image;
    std::optional<RenderManifest> manifest; ///< simulated backends only

    friend bool operator==(const GeneratedImage&, const GeneratedImage&) = default;
};

struct GenerateRequest {
    std::string_view prompt;
    const Layout& layout;
    const GlyphImage& glyph;
    const GeneratedImage* prior = nullptr; ///< image being in-painted, if any
    std::span<const BoundingBox> mask;     ///< regions to repaint; empty means all
};

class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GeneratorBackend {
public:
    virtual ~GeneratorBackend() = default;
    virtual GeneratedImage generate(const GenerateRequest& request) = 0;
};

class OcrBackend {
public:
    virtual ~OcrBackend() = default;
    virtual OcrResult recognize(const GeneratedImage& image) = 0;
};

/// Failure modes of a text-to-image generator: dropped words, misspelled
/// words and blurry (unreadable) words.
struct NoiseModel {
    double p_missing_word = 0.0;
    double p_misspell = 0.0;
    double p_blur = 0.0;

    /// Throws std::invalid_argument for probabilities outside [0,1].
    void validate() const;
};

/// Substitutes one uniformly chosen character with a different letter
/// (same case). The result is always exactly one edit away.
std::string corrupt_one_char(std::string_view word, Rng& rng);

/// Simulated generator. Each glyph word is painted into its layout box,
/// dropped with p_missing_word, otherwise misspelled with p_misspell and
/// blurred with p_blur. With a prior image only `mask` pixels change.
GeneratedImage sim_generate(const Layout& layout, const GlyphImage& glyph, const GeneratedImage* prior,
                            std::span<const BoundingBox> mask, const NoiseModel& noise, Rng& rng,
                            const FontFace& font = FontFace::synthetic_block());

struct SimOcrOptions {
    double p_misread = 0.0; ///< extra single-character misreads of clean words
};

/// Reads the manifest back: clean words at confidence 1.0, blurred words
/// with a one-character misread at confidence 0.3. Throws BackendError when
/// the image carries no manifest.
OcrResult sim_ocr(const GeneratedImage& image, const SimOcrOptions& options, Rng& rng);

class SimulatedGenerator final : public GeneratorBackend {
public:
    SimulatedGenerator(NoiseModel noise, std::uint64_t seed, FontFace font = FontFace::synthetic_block());
    GeneratedImage generate(const GenerateRequest& request) override;
    std::size_t calls() const { return calls_; }

private:
    NoiseModel noise_;
    Rng rng_;
    FontFace font_;
    std::size_t calls_ = 0;
};

class SimulatedOcr final : public OcrBackend {
public:
    explicit SimulatedOcr(std::uint64_t seed, SimOcrOptions options = {});
    OcrResult recognize(const GeneratedImage& image) override;

private:
    SimOcrOptions options_;
    Rng rng_;
};

/// Runs a user-supplied program per request:
///   <program> <prompt.txt> <glyph.pgm> <prior.pgm|-> <mask.pgm> <out.pgm> <out.manifest.json>
/// The program must write out.pgm; out.manifest.json is optional.
class ExecGenerator final : public GeneratorBackend {
public:
    explicit ExecGenerator(std::filesystem::path program);
    GeneratedImage generate(const GenerateRequest& request) override;

private:
    std::filesystem::path program_;
};

/// Runs <program> <image.pgm> <out.jsonl>; each output line is
/// {"word", "x0", "y0", "x1", "y1", "confidence"}.
class ExecOcr final : public OcrBackend {
public:
    explicit ExecOcr(std::filesystem::path program);
    OcrResult recognize(const GeneratedImage& image) override;

private:
    std::filesystem::path program_;
};

/// Runs `argv` without a shell and returns its exit status.
int run_process(const std::vector<std::string>& argv);

enum class MaskSource {
    detected, ///< repaint the OCR box of a misread word
    layout,   ///< repaint the keyword's layout box
};

struct MisspellingFlag {
    std::size_t keyword_index = 0;
    BoundingBox region;
    std::optional<std::size_t> detection; ///< index into the OCR result, if assigned

    friend bool operator==(const MisspellingFlag&, const MisspellingFlag&) = default;
};

/// Minimum-cost assignment of `cost` rows to distinct columns (rows <= cols).
/// Returns the column of each row.
std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost);

/// Matches keywords to OCR words (max cardinality, minimum total edit
/// distance, ties broken by box-centre distance) and flags keywords that are
/// unmatched or read differently. Sorted by keyword index.
std::vector<MisspellingFlag> detect_misspellings(const Layout& truth, const OcrResult& ocr,
                                                 MaskSource mask_source = MaskSource::detected);

/// Word metrics of an OCR result against the layout keywords.
RatioMetrics ocr_word_metrics(const Layout& truth, const OcrResult& ocr);

/// OCR words joined in reading order as reported.
std::string ocr_text(const OcrResult& ocr);

struct RoundOutcome {
    GeneratedImage image;
    OcrResult ocr_before;
    OcrResult ocr_after;
    std::vector<MisspellingFlag> flagged;
    RatioMetrics before;
    RatioMetrics after;
    bool backend_invoked = false;
    std::size_t pixels_changed = 0;
};

/// One repaint pass. OCR is run on `image` unless `known_ocr` is given.
/// Backend failures are rethrown as BackendError naming the round.
RoundOutcome correction_round(std::string_view prompt, const Layout& layout, const GeneratedImage& image,
                              GeneratorBackend& generator, OcrBackend& ocr, const FontFace& font,
                              MaskSource mask_source = MaskSource::detected, int round = 1,
                              const OcrResult* known_ocr = nullptr);

struct PipelineConfig {
    int iterations = 2;
    bool accept_if_better = true;
    bool optimize_layout = true;
    AnnealConfig anneal;
    NoiseModel noise;
    MaskSource mask_source = MaskSource::detected;
    int canvas_width = 512;
    int canvas_height = 512;
    std::string font{FontFace::kSyntheticBlock};
    std::uint64_t seed = 0;

    void validate() const;
};

/// Naive layout generator stand-in: keyword boxes sized to the text at a
/// common scale, dropped at random positions (so they usually overlap).
Layout propose_layout(std::span<const std::string> keywords, int canvas_width, int canvas_height,
                      const FontFace& font, Rng& rng);

struct RoundTrace {
    int round = 0;
    std::size_t flagged = 0;
    bool backend_invoked = false;
    double f1_before = 0.0;
    double f1_candidate = 0.0;
    bool accepted = false;
    double f1_retained = 0.0;
    std::size_t pixels_changed = 0;
};

struct PipelineResult {
    Layout initial_layout;
    Layout layout;
    AnnealTrace anneal;
    GlyphImage glyph;
    GeneratedImage initial_image;
    GeneratedImage final_image;
    OcrResult final_ocr;
    std::vector<RoundTrace> rounds;
    RecordMetrics metrics;
    std::vector<std::size_t> unrenderable;
};

/// Layout -> annealing -> glyph -> generation -> `iterations` correction
/// rounds. With accept_if_better a round's image is kept only when its word
/// F1 does not drop.
PipelineResult run(std::string_view prompt, std::span<const std::string> keywords, const PipelineConfig& config,
                   GeneratorBackend& generator, OcrBackend& ocr,
                   const std::optional<Layout>& initial_layout = std::nullopt);

} // namespace glyphlab
