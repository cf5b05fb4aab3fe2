#include "glyphlab/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace glyphlab::io {

namespace {

struct TextPosition {
    std::size_t line = 1;
    std::size_t column = 1;
};

TextPosition position_of(std::string_view text, std::size_t offset)
{
    TextPosition p;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++p.line;
            p.column = 1;
        } else {
            ++p.column;
        }
    }
    return p;
}

std::string location(std::string_view source, std::string_view text, std::size_t offset)
{
    const TextPosition p = position_of(text, offset);
    return std::string(source) + ":" + std::to_string(p.line) + ":" + std::to_string(p.column);
}

// Byte offset of element `index` of the top-level array member `key`, or npos.
std::size_t array_element_offset(std::string_view text, std::string_view key, std::size_t index)
{
    int depth = 0;
    bool in_string = false;
    std::size_t string_start = 0;
    std::string_view last_string;
    int array_depth = -1; // depth inside the wanted array
    std::size_t element = 0;
    bool expect_element = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
                last_string = text.substr(string_start, i - string_start);
            }
            continue;
        }
        if (expect_element && c != ' ' && c != '\n' && c != '\r' && c != '\t') {
            if (element == index) {
                return i;
            }
            expect_element = false;
        }
        switch (c) {
        case '"':
            in_string = true;
            string_start = i + 1;
            break;
        case '{':
            ++depth;
            break;
        case '[':
            ++depth;
            if (array_depth < 0 && depth == 2 && last_string == key) {
                array_depth = depth;
                expect_element = true;
            }
            break;
        case '}':
        case ']':
            if (depth == array_depth) {
                return std::string_view::npos;
            }
            --depth;
            break;
        case ',':
            if (depth == array_depth) {
                ++element;
                expect_element = true;
            }
            break;
        default:
            break;
        }
    }
    return std::string_view::npos;
}

int integer_field(const json& doc, const char* name)
{
    const auto it = doc.find(name);
    if (it == doc.end()) {
        throw DocumentError(std::string("missing field \"") + name + "\"");
    }
    if (!it->is_number_integer()) {
        throw DocumentError(std::string("field \"") + name + "\" must be an integer");
    }
    return it->get<int>();
}

std::string string_field(const json& doc, const char* name)
{
    const auto it = doc.find(name);
    if (it == doc.end() || !it->is_string()) {
        throw DocumentError(std::string("field \"") + name + "\" must be a string");
    }
    return it->get<std::string>();
}

json box_fields(const BoundingBox& b)
{
    return {{"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}};
}

BoundingBox box_from(const json& doc)
{
    return {integer_field(doc, "x0"), integer_field(doc, "y0"), integer_field(doc, "x1"), integer_field(doc, "y1")};
}

template <typename Fn>
void for_each_line(std::string_view text, std::string_view source, Fn&& fn)
{
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.find_first_not_of(" \t") != std::string_view::npos) {
            try {
                fn(json::parse(line));
            } catch (const json::exception& e) {
                throw DocumentError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
            } catch (const DocumentError& e) {
                throw DocumentError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
            }
        }
        if (end == text.size()) {
            break;
        }
        start = end + 1;
    }
}

} // namespace

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) {
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

json layout_to_json(const Layout& layout)
{
    json boxes = json::array();
    for (const auto& e : layout.entries) {
        json entry = {{"word", e.word}};
        entry.update(box_fields(e.box));
        boxes.push_back(std::move(entry));
    }
    return {{"canvas_width", layout.canvas_width}, {"canvas_height", layout.canvas_height}, {"boxes", boxes}};
}

Layout layout_from_json(const json& doc)
{
    if (!doc.is_object()) {
        throw DocumentError("layout must be a JSON object");
    }
    Layout layout;
    layout.canvas_width = integer_field(doc, "canvas_width");
    layout.canvas_height = integer_field(doc, "canvas_height");
    const auto boxes = doc.find("boxes");
    if (boxes == doc.end() || !boxes->is_array()) {
        throw DocumentError("field \"boxes\" must be an array");
    }
    for (const auto& b : *boxes) {
        if (!b.is_object()) {
            throw DocumentError("box entries must be objects");
        }
        layout.entries.push_back({string_field(b, "word"), box_from(b)});
    }
    return layout;
}

Layout parse_layout(std::string_view text, std::string_view source)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
        throw DocumentError(location(source, text, offset) + ": malformed JSON: " + e.what());
    }
    // Validate entry by entry so the diagnostic can point at a line.
    Layout layout;
    try {
        Layout header = layout_from_json(json{{"canvas_width", doc.value("canvas_width", json())},
                                              {"canvas_height", doc.value("canvas_height", json())},
                                              {"boxes", json::array()}});
        layout = header;
    } catch (const DocumentError& e) {
        throw DocumentError(location(source, text, 0) + ": " + e.what());
    } catch (const json::exception& e) {
        throw DocumentError(location(source, text, 0) + ": layout must be a JSON object");
    }
    const auto boxes = doc.find("boxes");
    if (boxes == doc.end() || !boxes->is_array()) {
        throw DocumentError(location(source, text, 0) + ": field \"boxes\" must be an array");
    }
    for (std::size_t i = 0; i < boxes->size(); ++i) {
        const json& b = (*boxes)[i];
        const std::size_t offset = array_element_offset(text, "boxes", i);
        try {
            if (!b.is_object()) {
                throw DocumentError("box entries must be objects");
            }
            LayoutEntry entry{string_field(b, "word"), box_from(b)};
            layout.entries.push_back(entry);
            validate(layout);
        } catch (const std::exception& e) {
            throw DocumentError(location(source, text, offset == std::string_view::npos ? 0 : offset) + ": boxes[" +
                                std::to_string(i) + "]: " + e.what());
        }
    }
    try {
        validate(layout);
    } catch (const InvalidLayout& e) {
        throw DocumentError(location(source, text, 0) + ": " + e.what());
    }
    return layout;
}

Layout read_layout(const std::filesystem::path& path) { return parse_layout(read_text(path), path.string()); }

std::string format_number(double value)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) {
        return "nan";
    }
    return std::string(buf, end);
}

std::string trace_csv(const AnnealTrace& trace)
{
    std::string out = "iteration,temperature,energy_before,energy_after,accepted\n";
    for (const auto& s : trace.steps) {
        out += std::to_string(s.iteration) + "," + format_number(s.temperature) + "," +
               format_number(s.energy_before) + "," + format_number(s.energy_after) + "," +
               (s.accepted ? "1" : "0") + "\n";
    }
    return out;
}

json glyph_regions_to_json(const Layout& layout, const GlyphImage& glyph)
{
    json boxes = json::array();
    for (const auto& w : glyph.words) {
        json entry = {{"word", w.word}, {"keyword_index", w.keyword_index}, {"clipped", w.clipped}};
        entry.update(box_fields(w.word_region));
        json chars = json::array();
        for (const auto& c : w.char_regions) {
            chars.push_back({c.x0, c.y0, c.x1, c.y1});
        }
        entry["char_regions"] = std::move(chars);
        boxes.push_back(std::move(entry));
    }
    return {{"canvas_width", layout.canvas_width},
            {"canvas_height", layout.canvas_height},
            {"boxes", boxes},
            {"unrenderable", glyph.unrenderable}};
}

json manifest_to_json(const RenderManifest& manifest)
{
    json entries = json::array();
    for (const auto& e : manifest.entries) {
        json entry = {{"keyword_index", e.keyword_index}, {"text", e.text}, {"blurred", e.blurred}};
        entry.update(box_fields(e.region));
        entries.push_back(std::move(entry));
    }
    return {{"entries", entries}};
}

RenderManifest manifest_from_json(const json& doc)
{
    RenderManifest manifest;
    for (const auto& e : doc.at("entries")) {
        manifest.entries.push_back({e.at("keyword_index").get<std::size_t>(), string_field(e, "text"), box_from(e),
                                    e.value("blurred", false)});
    }
    return manifest;
}

json detection_to_json(const OcrDetection& d)
{
    json doc = {{"word", d.word}};
    doc.update(box_fields(d.box));
    doc["confidence"] = d.confidence;
    return doc;
}

OcrDetection detection_from_json(const json& doc)
{
    OcrDetection d{string_field(doc, "word"), box_from(doc), doc.value("confidence", 1.0)};
    if (d.confidence < 0.0 || d.confidence > 1.0) {
        throw DocumentError("confidence must lie in [0,1]");
    }
    return d;
}

std::string ocr_to_jsonl(const OcrResult& result)
{
    std::string out;
    for (const auto& d : result.detections) {
        out += detection_to_json(d).dump() + "\n";
    }
    return out;
}

OcrResult ocr_from_jsonl(std::string_view text, std::string_view source)
{
    OcrResult result;
    for_each_line(text, source, [&](const json& doc) { result.detections.push_back(detection_from_json(doc)); });
    return result;
}

json record_to_json(const BenchRecord& r)
{
    return {{"id", r.id},
            {"prompt", r.prompt},
            {"keywords", r.keywords},
            {"subset", to_string(r.subset)},
            {"augmentation", r.augmentation ? json(to_string(*r.augmentation)) : json()},
            {"seed", r.seed}};
}

BenchRecord record_from_json(const json& doc)
{
    BenchRecord r;
    r.id = string_field(doc, "id");
    r.prompt = doc.value("prompt", std::string());
    r.keywords = doc.at("keywords").get<std::vector<std::string>>();
    const auto subset = parse_subset(doc.value("subset", std::string("mario-hard")));
    if (!subset) {
        throw DocumentError("unknown subset in record " + r.id);
    }
    r.subset = *subset;
    if (const auto it = doc.find("augmentation"); it != doc.end() && !it->is_null()) {
        r.augmentation = parse_augmentation(it->get<std::string>());
        if (!r.augmentation) {
            throw DocumentError("unknown augmentation in record " + r.id);
        }
    }
    r.seed = doc.value("seed", std::uint64_t{0});
    return r;
}

std::string records_to_jsonl(std::span<const BenchRecord> records)
{
    std::string out;
    for (const auto& r : records) {
        out += record_to_json(r).dump() + "\n";
    }
    return out;
}

std::vector<BenchRecord> records_from_jsonl(std::string_view text, std::string_view source)
{
    std::vector<BenchRecord> records;
    for_each_line(text, source, [&](const json& doc) { records.push_back(record_from_json(doc)); });
    return records;
}

json stats_to_json(const BenchStats& s)
{
    // field order as in the usual dataset statistics table
    json doc = json::object();
    doc["size"] = s.size;
    doc["min_words"] = s.min_words;
    doc["max_words"] = s.max_words;
    doc["avg_words"] = s.avg_words;
    return doc;
}

json ratio_to_json(const RatioMetrics& m)
{
    return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"accuracy", m.accuracy}};
}

json record_metrics_to_json(const RecordMetrics& m)
{
    return {{"id", m.id},
            {"keyword_count", m.keyword_count},
            {"char", ratio_to_json(m.character)},
            {"word", ratio_to_json(m.word)},
            {"nld", m.nld},
            {"sentence_exact", m.sentence_exact},
            {"overlap_area", m.overlap_area},
            {"overlap_energy", m.overlap_energy},
            {"iou", m.iou}};
}

json aggregate_to_json(const AggregateMetrics& a)
{
    return {{"records", a.records},
            {"char", ratio_to_json(a.character)},
            {"word", ratio_to_json(a.word)},
            {"nld", a.nld},
            {"sentence_accuracy", a.sentence_accuracy},
            {"overlap_area", a.overlap_area},
            {"overlap_energy", a.overlap_energy},
            {"iou", a.iou}};
}

json report_to_json(const EvalReport& report)
{
    json records = json::array();
    for (const auto& r : report.records) {
        records.push_back(record_metrics_to_json(r));
    }
    return {{"clipscore", report.clipscore ? json(*report.clipscore) : json()},
            {"aggregate", aggregate_to_json(report.aggregate)},
            {"records", records}};
}

std::string report_csv(const EvalReport& report)
{
    const std::string clip = report.clipscore ? format_number(*report.clipscore) : "";
    const auto ratios = [](const RatioMetrics& m) {
        return format_number(m.precision) + "," + format_number(m.recall) + "," + format_number(m.f1) + "," +
               format_number(m.accuracy);
    };
    std::string out = "id,keyword_count,clipscore,char_precision,char_recall,char_f1,char_accuracy,"
                      "word_precision,word_recall,word_f1,word_accuracy,nld,sentence_exact,overlap_area,"
                      "overlap_energy,iou\n";
    for (const auto& r : report.records) {
        out += r.id + "," + std::to_string(r.keyword_count) + "," + clip + "," + ratios(r.character) + "," +
               ratios(r.word) + "," + format_number(r.nld) + "," + (r.sentence_exact ? "1" : "0") + "," +
               std::to_string(r.overlap_area) + "," + format_number(r.overlap_energy) + "," + format_number(r.iou) +
               "\n";
    }
    const AggregateMetrics& a = report.aggregate;
    out += "aggregate,," + clip + "," + ratios(a.character) + "," + ratios(a.word) + "," + format_number(a.nld) +
           "," + format_number(a.sentence_accuracy) + "," + format_number(a.overlap_area) + "," +
           format_number(a.overlap_energy) + "," + format_number(a.iou) + "\n";
    return out;
}

} // namespace glyphlab::io
