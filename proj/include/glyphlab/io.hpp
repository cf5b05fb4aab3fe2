#pragma once

// Document formats shared by the CLI and the external-process adapters.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "glyphlab/annealer.hpp"
#include "glyphlab/benchgen.hpp"
#include "glyphlab/geometry.hpp"
#include "glyphlab/glyph.hpp"
#include "glyphlab/pipeline.hpp"
#include "glyphlab/textmetrics.hpp"

namespace glyphlab::io {

// Insertion-ordered so documents keep their field order.
using json = nlohmann::ordered_json;

/// Input document problem, with a "source:line:col:" style location.
class DocumentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_text(const std::filesystem::path& path);
/// Writes to a sibling temporary and renames, so readers never see a partial file.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);

// Layout: {"canvas_width", "canvas_height", "boxes": [{"word", "x0", "y0", "x1", "y1"}]}
json layout_to_json(const Layout& layout);
Layout layout_from_json(const json& doc);
/// Parses and validates; errors carry the line of the offending entry.
Layout parse_layout(std::string_view text, std::string_view source = "<layout>");
Layout read_layout(const std::filesystem::path& path);

/// Row per annealing pass: iteration,temperature,energy_before,energy_after,accepted
std::string trace_csv(const AnnealTrace& trace);

/// Layout schema plus keyword_index and char_regions per drawn word.
json glyph_regions_to_json(const Layout& layout, const GlyphImage& glyph);

json manifest_to_json(const RenderManifest& manifest);
RenderManifest manifest_from_json(const json& doc);

json detection_to_json(const OcrDetection& detection);
OcrDetection detection_from_json(const json& doc);
std::string ocr_to_jsonl(const OcrResult& result);
OcrResult ocr_from_jsonl(std::string_view text, std::string_view source = "<ocr>");

json record_to_json(const BenchRecord& record);
BenchRecord record_from_json(const json& doc);
std::string records_to_jsonl(std::span<const BenchRecord> records);
std::vector<BenchRecord> records_from_jsonl(std::string_view text, std::string_view source = "<records>");

json stats_to_json(const BenchStats& stats);

json ratio_to_json(const RatioMetrics& m);
json record_metrics_to_json(const RecordMetrics& m);
json aggregate_to_json(const AggregateMetrics& a);
json report_to_json(const EvalReport& report);

/// Header, one row per record, then an "aggregate" row. Columns follow the
/// usual results-table order: CLIPScore, char P/R/F1/Acc, word P/R/F1/Acc, NLD.
std::string report_csv(const EvalReport& report);

/// Shortest round-trip decimal for a double.
std::string format_number(double value);

} // namespace glyphlab::io
