#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "glyphlab/annealer.hpp"
#include "glyphlab/benchgen.hpp"
#include "glyphlab/geometry.hpp"
#include "glyphlab/glyph.hpp"
#include "glyphlab/image.hpp"
#include "glyphlab/io.hpp"
#include "glyphlab/kernels.hpp"
#include "glyphlab/pipeline.hpp"
#include "glyphlab/rng.hpp"
#include "glyphlab/textmetrics.hpp"

namespace fs = std::filesystem;
using glyphlab::io::json;
using namespace glyphlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailures = 1;
constexpr int kExitUsage = 2;

/// Bad flags or unusable input files.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

struct Common {
    std::uint64_t seed = 0;
    std::string out_dir;
};

std::string default_out_dir()
{
    const char* env = std::getenv("GLYPHLAB_OUT_DIR");
    return env != nullptr && *env != '\0' ? env : "glyphlab-out";
}

std::string default_font()
{
    const char* env = std::getenv("GLYPHLAB_FONT");
    return env != nullptr && *env != '\0' ? std::string(env) : std::string(FontFace::kSyntheticBlock);
}

std::string read_input(const std::string& path)
{
    if (!fs::is_regular_file(path)) {
        throw UsageError(path + ": no such file");
    }
    return io::read_text(path);
}

void write_bytes_atomic(const fs::path& path, const std::vector<std::uint8_t>& bytes)
{
    io::write_text_atomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void write_json(const fs::path& path, const json& doc) { io::write_text_atomic(path, doc.dump(2) + "\n"); }

fs::path prepare_dir(const std::string& dir)
{
    const fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec || !fs::is_directory(p)) {
        throw UsageError(dir + ": cannot create output directory");
    }
    return p;
}

struct Manifest {
    std::string command;
    json config = json::object();
    std::uint64_t seed = 0;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    Clock::time_point start = Clock::now();

    void write(const fs::path& dir) const
    {
        const std::chrono::duration<double> elapsed = Clock::now() - start;
        json doc = json::object();
        doc["command"] = command;
        doc["tool_version"] = GLYPHLAB_VERSION;
        doc["seed"] = seed;
        doc["config"] = config;
        doc["inputs"] = inputs;
        doc["outputs"] = outputs;
        doc["simd"] = std::string(kernels::to_string(kernels::active_level()));
        doc["wall_clock_seconds"] = elapsed.count();
        write_json(dir / "manifest.json", doc);
    }
};

json anneal_config_json(const AnnealConfig& c)
{
    return {{"initial_temperature", c.initial_temperature},
            {"cooling_rate", c.cooling_rate},
            {"max_iterations", c.max_iterations},
            {"max_shift_fraction", c.max_shift_fraction},
            {"move_all_boxes", c.move_all_boxes}};
}

void add_anneal_flags(CLI::App* cmd, AnnealConfig& c)
{
    cmd->add_option("--max-iter", c.max_iterations, "Annealing passes")->capture_default_str();
    cmd->add_option("--cooling-rate", c.cooling_rate, "Temperature drop per pass")->capture_default_str();
    cmd->add_option("--init-temp", c.initial_temperature, "Initial temperature")->capture_default_str();
    cmd->add_option("--shift-fraction", c.max_shift_fraction, "Largest move as a fraction of the canvas side")
        ->capture_default_str();
    cmd->add_flag("--move-all", c.move_all_boxes, "Move every box on each pass");
}

json layout_metrics(const Layout& l)
{
    return {{"overlap_area", total_overlap_area(l)},
            {"iou", layout_iou(l)},
            {"energy", weighted_overlap_energy(l)}};
}

// optimize

struct OptimizeArgs {
    std::string layout;
    AnnealConfig anneal;
};

int cmd_optimize(const OptimizeArgs& a, const Common& common)
{
    Manifest m;
    m.command = "optimize";
    m.seed = common.seed;
    m.inputs = {a.layout};
    Layout input;
    try {
        input = io::parse_layout(read_input(a.layout), a.layout);
    } catch (const io::DocumentError& e) {
        throw UsageError(e.what());
    }
    AnnealConfig config = a.anneal;
    config.seed = common.seed;
    config.validate();
    const AnnealResult result = optimize(input, config);

    const fs::path dir = prepare_dir(common.out_dir);
    write_json(dir / "layout.json", io::layout_to_json(result.layout));
    io::write_text_atomic(dir / "trace.csv", io::trace_csv(result.trace));
    const json before = layout_metrics(input);
    const json after = layout_metrics(result.layout);
    json delta = json::object();
    for (const auto& [key, value] : after.items()) {
        delta[key] = value.get<double>() - before[key].get<double>();
    }
    write_json(dir / "summary.json",
               {{"before", before}, {"after", after}, {"delta", delta}, {"passes", result.trace.steps.size()}});

    m.config = anneal_config_json(config);
    m.outputs = {"layout.json", "trace.csv", "summary.json"};
    m.write(dir);
    std::cout << "overlap " << before["overlap_area"] << " -> " << after["overlap_area"] << ", IoU "
              << io::format_number(before["iou"].get<double>()) << " -> "
              << io::format_number(after["iou"].get<double>()) << "\n";
    return kExitOk;
}

// render

struct RenderArgs {
    std::string layout;
    std::string font;
};

int cmd_render(const RenderArgs& a, const Common& common)
{
    Manifest m;
    m.command = "render";
    m.seed = common.seed;
    m.inputs = {a.layout};
    Layout layout;
    try {
        layout = io::parse_layout(read_input(a.layout), a.layout);
    } catch (const io::DocumentError& e) {
        throw UsageError(e.what());
    }
    const FontFace font = FontFace::resolve(a.font);
    const GlyphImage glyph = render(layout, font);

    const fs::path dir = prepare_dir(common.out_dir);
    write_bytes_atomic(dir / "glyph.pgm", encode_pgm(glyph.image));
    write_bytes_atomic(dir / "glyph.png", encode_png(glyph.image));
    write_json(dir / "regions.json", io::glyph_regions_to_json(layout, glyph));
    m.config = {{"font", font.name()}};
    m.outputs = {"glyph.pgm", "glyph.png", "regions.json"};
    m.write(dir);
    for (const std::size_t i : glyph.unrenderable) {
        std::cerr << "warning: box " << i << " (" << layout.entries[i].word << ") is too small for one cell\n";
    }
    return kExitOk;
}

// genbench

struct GenbenchArgs {
    std::string subset;
    std::size_t count = 0;
    std::string source;
    std::string words;
    std::size_t min_keywords = 4;
    double aug_probability = 0.5;
    RwcOptions rwc;
};

std::vector<std::string> read_word_list(const std::string& path)
{
    std::istringstream in(read_input(path));
    std::vector<std::string> words;
    for (std::string line; std::getline(in, line);) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        const auto last = line.find_last_not_of(" \t\r");
        words.push_back(line.substr(first, last - first + 1));
    }
    if (words.empty()) {
        throw UsageError(path + ": word list is empty");
    }
    return words;
}

std::vector<BenchRecord> read_records(const std::string& path)
{
    try {
        return io::records_from_jsonl(read_input(path), path);
    } catch (const io::DocumentError& e) {
        throw UsageError(e.what());
    }
}

std::vector<BenchRecord> hard_records(const GenbenchArgs& a, std::uint64_t seed)
{
    if (!a.source.empty()) {
        std::vector<BenchRecord> hard = filter_hard(read_records(a.source), a.min_keywords);
        if (hard.size() > a.count) {
            hard.resize(a.count);
        }
        return hard;
    }
    // synthetic_source is prefix-stable, so growing the pool keeps earlier picks
    for (std::size_t pool = a.count * 2;; pool *= 2) {
        std::vector<BenchRecord> hard = filter_hard(synthetic_source(pool, seed), a.min_keywords);
        if (hard.size() >= a.count) {
            hard.resize(a.count);
            return hard;
        }
    }
}

int cmd_genbench(const GenbenchArgs& a, const Common& common)
{
    Manifest m;
    m.command = "genbench";
    m.seed = common.seed;
    const std::map<std::string, Subset> names{
        {"mario-hard-filter", Subset::mario_hard}, {"aug", Subset::aug_mario_hard}, {"rwc", Subset::rwc}};
    const auto found = names.find(a.subset);
    const std::optional<Subset> subset =
        found != names.end() ? std::optional(found->second) : parse_subset(a.subset);
    if (!subset) {
        throw UsageError("unknown subset '" + a.subset + "' (expected mario-hard-filter, aug or rwc)");
    }
    if (a.count == 0) {
        throw UsageError("--count must be at least 1");
    }
    if (!a.source.empty()) {
        m.inputs.push_back(a.source);
    }
    std::vector<BenchRecord> records;
    json config = {{"subset", a.subset}, {"count", a.count}};
    switch (*subset) {
    case Subset::mario_hard:
        records = hard_records(a, common.seed);
        config["min_keywords"] = a.min_keywords;
        break;
    case Subset::aug_mario_hard: {
        const std::vector<BenchRecord> hard = hard_records(a, common.seed);
        const std::uint64_t aug_seed = derive_seed(common.seed, "aug");
        AugmentOptions opts;
        opts.probability = a.aug_probability;
        for (std::size_t i = 0; i < hard.size(); ++i) {
            Rng rng(derive_seed(aug_seed, static_cast<std::uint64_t>(i)));
            records.push_back(augment_record(hard[i], opts, rng));
        }
        config["min_keywords"] = a.min_keywords;
        config["aug_probability"] = a.aug_probability;
        break;
    }
    case Subset::rwc: {
        std::vector<std::string> words;
        if (!a.words.empty()) {
            words = read_word_list(a.words);
            m.inputs.push_back(a.words);
        } else {
            Rng rng(derive_seed(common.seed, "words"));
            words = pseudo_words(2000, rng);
        }
        records = rwc_generate(a.count, words, a.rwc, common.seed);
        config["template"] = a.rwc.template_text;
        config["min_words"] = a.rwc.min_words;
        config["max_words"] = a.rwc.max_words;
        config["punctuation_probability"] = a.rwc.punctuation_probability;
        break;
    }
    }
    if (records.empty()) {
        std::cerr << "error: no records passed the filter\n";
        return kExitFailures;
    }
    if (records.size() < a.count) {
        std::cerr << "warning: only " << records.size() << " of " << a.count << " records available\n";
    }

    const fs::path dir = prepare_dir(common.out_dir);
    io::write_text_atomic(dir / "records.jsonl", io::records_to_jsonl(records));
    const BenchStats s = stats(records);
    write_json(dir / "stats.json", io::stats_to_json(s));
    m.config = config;
    m.outputs = {"records.jsonl", "stats.json"};
    m.write(dir);
    std::cout << "records " << s.size << ", words min " << s.min_words << " max " << s.max_words << " avg "
              << io::format_number(s.avg_words) << "\n";
    return kExitOk;
}

// pipeline

struct BackendSpec {
    std::string text = "sim";
    std::optional<fs::path> program; ///< exec:<path>
};

BackendSpec parse_backend(const std::string& text, const char* flag)
{
    BackendSpec spec;
    spec.text = text;
    if (text == "sim") {
        return spec;
    }
    if (text.starts_with("exec:") && text.size() > 5) {
        spec.program = text.substr(5);
        return spec;
    }
    throw UsageError(std::string(flag) + ": expected sim or exec:<path>, got '" + text + "'");
}

std::pair<int, int> parse_canvas(const std::string& text)
{
    int w = 0;
    int h = 0;
    char x = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%d%c%d%c", &w, &x, &h, &extra) != 3 || (x != 'x' && x != 'X') || w <= 0 ||
        h <= 0) {
        throw UsageError("--canvas: expected WxH, got '" + text + "'");
    }
    return {w, h};
}

void check_ids(const std::vector<BenchRecord>& records, const std::string& source)
{
    std::set<std::string> seen;
    for (const auto& r : records) {
        if (r.id.empty() || r.id == "." || r.id == ".." || r.id.find_first_of("/\\") != std::string::npos) {
            throw UsageError(source + ": record id '" + r.id + "' cannot name a directory");
        }
        if (!seen.insert(r.id).second) {
            throw UsageError(source + ": duplicate record id '" + r.id + "'");
        }
    }
}

struct PipelineArgs {
    std::string records;
    int jobs = 1;
    int iterations = 2;
    bool accept_if_better = true;
    bool no_optimize = false;
    AnnealConfig anneal;
    std::string canvas = "512x512";
    std::string font;
    std::string backend = "sim";
    std::string ocr = "sim";
    NoiseModel noise{0.1, 0.4, 0.0};
    double p_misread = 0.0;
    std::string mask_source = "detected";
};

struct RecordOutcome {
    std::optional<RecordMetrics> metrics;
    std::string error;
};

std::string rounds_csv(const std::vector<RoundTrace>& rounds)
{
    std::string out = "round,flagged,backend_invoked,f1_before,f1_candidate,accepted,f1_retained,pixels_changed\n";
    for (const auto& r : rounds) {
        out += std::to_string(r.round) + "," + std::to_string(r.flagged) + "," + (r.backend_invoked ? "1" : "0") +
               "," + io::format_number(r.f1_before) + "," + io::format_number(r.f1_candidate) + "," +
               (r.accepted ? "1" : "0") + "," + io::format_number(r.f1_retained) + "," +
               std::to_string(r.pixels_changed) + "\n";
    }
    return out;
}

RecordOutcome run_record(const BenchRecord& record, const PipelineConfig& base, const BackendSpec& gen_spec,
                         const BackendSpec& ocr_spec, double p_misread, std::uint64_t seed, const FontFace& font,
                         const fs::path& dir, const json& config_snapshot)
{
    Manifest m;
    m.command = "pipeline-record";
    m.config = config_snapshot;
    const std::uint64_t record_seed = derive_seed(seed, std::string_view(record.id));
    m.seed = record_seed;
    fs::create_directories(dir);

    RecordOutcome outcome;
    try {
        PipelineConfig config = base;
        config.seed = derive_seed(record_seed, "pipeline");
        std::unique_ptr<GeneratorBackend> generator;
        if (gen_spec.program) {
            generator = std::make_unique<ExecGenerator>(*gen_spec.program);
        } else {
            generator = std::make_unique<SimulatedGenerator>(config.noise, derive_seed(record_seed, "generator"), font);
        }
        std::unique_ptr<OcrBackend> ocr;
        if (ocr_spec.program) {
            ocr = std::make_unique<ExecOcr>(*ocr_spec.program);
        } else {
            ocr = std::make_unique<SimulatedOcr>(derive_seed(record_seed, "ocr"), SimOcrOptions{p_misread});
        }
        const PipelineResult r = run(record.prompt, record.keywords, config, *generator, *ocr);

        write_json(dir / "layout_initial.json", io::layout_to_json(r.initial_layout));
        write_json(dir / "layout.json", io::layout_to_json(r.layout));
        io::write_text_atomic(dir / "trace.csv", io::trace_csv(r.anneal));
        write_bytes_atomic(dir / "glyph.pgm", encode_pgm(r.glyph.image));
        write_bytes_atomic(dir / "initial.pgm", encode_pgm(r.initial_image.image));
        write_bytes_atomic(dir / "final.pgm", encode_pgm(r.final_image.image));
        write_bytes_atomic(dir / "final.png", encode_png(r.final_image.image));
        io::write_text_atomic(dir / "ocr.jsonl", io::ocr_to_jsonl(r.final_ocr));
        io::write_text_atomic(dir / "rounds.csv", rounds_csv(r.rounds));
        RecordMetrics metrics = r.metrics;
        metrics.id = record.id;
        metrics.keyword_count = record.keywords.size();
        write_json(dir / "report.json", io::record_metrics_to_json(metrics));
        m.outputs = {"layout_initial.json", "layout.json", "trace.csv",  "glyph.pgm",   "initial.pgm",
                     "final.pgm",           "final.png",   "ocr.jsonl",  "rounds.csv",  "report.json"};
        outcome.metrics = std::move(metrics);
    } catch (const std::exception& e) {
        outcome.error = e.what();
        io::write_text_atomic(dir / "error.txt", outcome.error + "\n");
        m.outputs = {"error.txt"};
    }
    m.write(dir);
    return outcome;
}

std::string f1_by_keyword_count_csv(const std::vector<RecordMetrics>& records)
{
    std::map<std::size_t, std::vector<RecordMetrics>> groups;
    for (const auto& r : records) {
        groups[r.keyword_count].push_back(r);
    }
    std::string out = "keyword_count,records,word_f1,char_f1,sentence_accuracy\n";
    for (const auto& [count, group] : groups) {
        const AggregateMetrics a = aggregate(group);
        out += std::to_string(count) + "," + std::to_string(group.size()) + "," + io::format_number(a.word.f1) +
               "," + io::format_number(a.character.f1) + "," + io::format_number(a.sentence_accuracy) + "\n";
    }
    return out;
}

void write_reports(const fs::path& dir, std::vector<RecordMetrics> records, std::optional<double> clipscore)
{
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    io::write_text_atomic(dir / "f1_by_keyword_count.csv", f1_by_keyword_count_csv(records));
    const EvalReport report = make_report(std::move(records), clipscore);
    write_json(dir / "report.json", io::report_to_json(report));
    io::write_text_atomic(dir / "report.csv", io::report_csv(report));
}

int cmd_pipeline(const PipelineArgs& a, const Common& common)
{
    Manifest m;
    m.command = "pipeline";
    m.seed = common.seed;
    m.inputs = {a.records};
    std::vector<BenchRecord> records = read_records(a.records);
    if (records.empty()) {
        throw UsageError(a.records + ": no records");
    }
    check_ids(records, a.records);
    if (a.jobs < 1) {
        throw UsageError("--jobs must be at least 1");
    }
    const BackendSpec gen_spec = parse_backend(a.backend, "--backend");
    const BackendSpec ocr_spec = parse_backend(a.ocr, "--ocr");
    if (!gen_spec.program && ocr_spec.program) {
        std::cerr << "note: the simulated generator writes PGM images an external OCR can read\n";
    }

    PipelineConfig config;
    config.iterations = a.iterations;
    config.accept_if_better = a.accept_if_better;
    config.optimize_layout = !a.no_optimize;
    config.anneal = a.anneal;
    config.noise = a.noise;
    if (a.mask_source == "detected") {
        config.mask_source = MaskSource::detected;
    } else if (a.mask_source == "layout") {
        config.mask_source = MaskSource::layout;
    } else {
        throw UsageError("--mask-source: expected detected or layout");
    }
    std::tie(config.canvas_width, config.canvas_height) = parse_canvas(a.canvas);
    config.font = a.font;
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const FontFace font = FontFace::resolve(a.font);

    json snapshot = {{"iterations", config.iterations},
                     {"accept_if_better", config.accept_if_better},
                     {"optimize_layout", config.optimize_layout},
                     {"anneal", anneal_config_json(config.anneal)},
                     {"noise",
                      {{"p_missing_word", config.noise.p_missing_word},
                       {"p_misspell", config.noise.p_misspell},
                       {"p_blur", config.noise.p_blur}}},
                     {"p_misread", a.p_misread},
                     {"mask_source", a.mask_source},
                     {"canvas", {config.canvas_width, config.canvas_height}},
                     {"font", font.name()},
                     {"backend", gen_spec.text},
                     {"ocr", ocr_spec.text}};

    const fs::path dir = prepare_dir(common.out_dir);
    const fs::path records_dir = dir / "records";
    std::vector<RecordOutcome> outcomes(records.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < records.size(); i = next++) {
            outcomes[i] = run_record(records[i], config, gen_spec, ocr_spec, a.p_misread, common.seed, font,
                                     records_dir / records[i].id, snapshot);
        }
    };
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(a.jobs), records.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }

    std::vector<RecordMetrics> done;
    json failures = json::array();
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return records[x].id < records[y].id; });
    for (const std::size_t i : order) {
        if (outcomes[i].metrics) {
            done.push_back(*outcomes[i].metrics);
        } else {
            failures.push_back({{"id", records[i].id}, {"error", outcomes[i].error}});
            std::cerr << "error: " << records[i].id << ": " << outcomes[i].error << "\n";
        }
    }
    write_json(dir / "failures.json", failures);
    m.outputs = {"records/", "failures.json"};
    if (!done.empty()) {
        write_reports(dir, done, std::nullopt);
        m.outputs.insert(m.outputs.end(), {"report.json", "report.csv", "f1_by_keyword_count.csv"});
    }
    m.config = snapshot;
    m.config["jobs"] = a.jobs;
    m.write(dir);

    std::cout << "records " << records.size() << ", failed " << failures.size();
    if (!done.empty()) {
        std::cout << ", word F1 " << io::format_number(aggregate(done).word.f1);
    }
    std::cout << "\n";
    return failures.empty() ? kExitOk : kExitFailures;
}

// evaluate

struct EvaluateArgs {
    std::string records;
    std::string predictions;
    std::optional<double> clipscore;
};

std::map<std::string, std::string> read_predictions(const std::string& path)
{
    std::map<std::string, std::string> out;
    const std::string text = read_input(path);
    std::istringstream in(text);
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const std::string where = path + ":" + std::to_string(line_no) + ": ";
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::parse_error& e) {
            throw UsageError(where + e.what());
        }
        if (!doc.is_object() || !doc.contains("id") || !doc["id"].is_string() || !doc.contains("text") ||
            !doc["text"].is_string()) {
            throw UsageError(where + "expected {\"id\": string, \"text\": string}");
        }
        const std::string id = doc["id"].get<std::string>();
        if (!out.emplace(id, doc["text"].get<std::string>()).second) {
            throw UsageError(where + "duplicate id '" + id + "'");
        }
    }
    return out;
}

std::string join_ids(const std::vector<std::string>& ids)
{
    std::string out;
    for (const auto& id : ids) {
        out += (out.empty() ? "" : ", ") + id;
    }
    return out;
}

int cmd_evaluate(const EvaluateArgs& a, const Common& common)
{
    Manifest m;
    m.command = "evaluate";
    m.seed = common.seed;
    m.inputs = {a.records, a.predictions};
    const std::vector<BenchRecord> records = read_records(a.records);
    if (records.empty()) {
        throw UsageError(a.records + ": no records");
    }
    std::set<std::string> truth_ids;
    for (const auto& r : records) {
        if (!truth_ids.insert(r.id).second) {
            throw UsageError(a.records + ": duplicate id '" + r.id + "'");
        }
    }
    const auto predictions = read_predictions(a.predictions);
    std::vector<std::string> missing;
    std::vector<std::string> orphans;
    for (const auto& r : records) {
        if (!predictions.contains(r.id)) {
            missing.push_back(r.id);
        }
    }
    for (const auto& [id, text] : predictions) {
        if (!truth_ids.contains(id)) {
            orphans.push_back(id);
        }
    }
    if (!missing.empty() || !orphans.empty()) {
        std::string msg = "records and predictions do not align";
        if (!missing.empty()) {
            msg += "; no prediction for: " + join_ids(missing);
        }
        if (!orphans.empty()) {
            msg += "; prediction without record: " + join_ids(orphans);
        }
        throw UsageError(msg);
    }

    std::vector<RecordMetrics> metrics;
    for (const auto& r : records) {
        std::string truth;
        for (const auto& k : r.keywords) {
            truth += (truth.empty() ? "" : " ") + k;
        }
        RecordMetrics rm = evaluate_text(truth, predictions.at(r.id));
        rm.id = r.id;
        rm.keyword_count = r.keywords.size();
        metrics.push_back(std::move(rm));
    }
    const fs::path dir = prepare_dir(common.out_dir);
    write_reports(dir, metrics, a.clipscore);
    m.config = {{"clipscore", a.clipscore ? json(*a.clipscore) : json()}};
    m.outputs = {"report.json", "report.csv", "f1_by_keyword_count.csv"};
    m.write(dir);
    const AggregateMetrics agg = aggregate(metrics);
    std::cout << "records " << agg.records << ", word F1 " << io::format_number(agg.word.f1) << ", char F1 "
              << io::format_number(agg.character.f1) << ", NLD " << io::format_number(agg.nld) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Layout optimization, glyph rendering and OCR-aware correction for visual text generation",
                 "glyphlab"};
    app.set_version_flag("--version", GLYPHLAB_VERSION);
    app.require_subcommand(1);

    Common common;
    common.out_dir = default_out_dir();
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", common.seed, "Root seed")->capture_default_str();
        cmd->add_option("-o,--out", common.out_dir, "Output directory (default $GLYPHLAB_OUT_DIR)")
            ->capture_default_str();
    };

    OptimizeArgs opt;
    auto* optimize_cmd = app.add_subcommand("optimize", "Reduce keyword box overlap with simulated annealing");
    optimize_cmd->add_option("layout", opt.layout, "Layout document")->required();
    add_common(optimize_cmd);
    add_anneal_flags(optimize_cmd, opt.anneal);

    RenderArgs ren;
    ren.font = default_font();
    auto* render_cmd = app.add_subcommand("render", "Draw a layout as a glyph image");
    render_cmd->add_option("layout", ren.layout, "Layout document")->required();
    render_cmd->add_option("--font", ren.font, "synthetic-block or a face document ($GLYPHLAB_FONT)")
        ->capture_default_str();
    add_common(render_cmd);

    GenbenchArgs gen;
    auto* genbench_cmd = app.add_subcommand("genbench", "Generate a benchmark subset");
    genbench_cmd->add_option("subset", gen.subset, "mario-hard-filter, aug or rwc")->required();
    genbench_cmd->add_option("--count", gen.count, "Records to emit")->required();
    genbench_cmd->add_option("--source", gen.source, "Captioned records to filter (default: synthetic)");
    genbench_cmd->add_option("--words", gen.words, "Word list for rwc, one per line (default: pseudo-words)");
    genbench_cmd->add_option("--min-keywords", gen.min_keywords, "Hard-filter threshold")->capture_default_str();
    genbench_cmd->add_option("--aug-probability", gen.aug_probability, "Per-keyword corruption probability")
        ->capture_default_str();
    genbench_cmd->add_option("--template", gen.rwc.template_text, "rwc prompt template with one {}")
        ->capture_default_str();
    genbench_cmd->add_option("--min-words", gen.rwc.min_words, "rwc minimum words")->capture_default_str();
    genbench_cmd->add_option("--max-words", gen.rwc.max_words, "rwc maximum words")->capture_default_str();
    genbench_cmd->add_option("--punctuation-probability", gen.rwc.punctuation_probability,
                             "rwc per-token punctuation probability")
        ->capture_default_str();
    add_common(genbench_cmd);

    PipelineArgs pipe;
    pipe.font = default_font();
    auto* pipeline_cmd = app.add_subcommand("pipeline", "Generate images for records and correct misread words");
    pipeline_cmd->add_option("records", pipe.records, "Records file (JSON lines)")->required();
    pipeline_cmd->add_option("--jobs", pipe.jobs, "Records processed in parallel")->capture_default_str();
    pipeline_cmd->add_option("--iterations", pipe.iterations, "Correction rounds")->capture_default_str();
    pipeline_cmd->add_option("--accept-if-better", pipe.accept_if_better, "Keep a round only if F1 does not drop")
        ->capture_default_str();
    pipeline_cmd->add_flag("--no-optimize", pipe.no_optimize, "Skip layout annealing");
    add_anneal_flags(pipeline_cmd, pipe.anneal);
    pipeline_cmd->add_option("--canvas", pipe.canvas, "Canvas size WxH")->capture_default_str();
    pipeline_cmd->add_option("--font", pipe.font, "synthetic-block or a face document ($GLYPHLAB_FONT)")
        ->capture_default_str();
    pipeline_cmd->add_option("--backend", pipe.backend, "Generator: sim or exec:<path>")->capture_default_str();
    pipeline_cmd->add_option("--ocr", pipe.ocr, "OCR: sim or exec:<path>")->capture_default_str();
    pipeline_cmd->add_option("--p-missing", pipe.noise.p_missing_word, "sim: word dropped")->capture_default_str();
    pipeline_cmd->add_option("--p-misspell", pipe.noise.p_misspell, "sim: word misspelled")->capture_default_str();
    pipeline_cmd->add_option("--p-blur", pipe.noise.p_blur, "sim: word blurred")->capture_default_str();
    pipeline_cmd->add_option("--p-misread", pipe.p_misread, "sim OCR: clean word misread")->capture_default_str();
    pipeline_cmd->add_option("--mask-source", pipe.mask_source, "Repaint region: detected or layout")
        ->capture_default_str();
    add_common(pipeline_cmd);

    EvaluateArgs ev;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predicted text against records");
    evaluate_cmd->add_option("records", ev.records, "Records file (JSON lines)")->required();
    evaluate_cmd->add_option("predictions", ev.predictions, "Predictions: {\"id\", \"text\"} per line")->required();
    evaluate_cmd->add_option("--clipscore", ev.clipscore, "Externally computed CLIPScore to carry in the report");
    add_common(evaluate_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*optimize_cmd) {
            return cmd_optimize(opt, common);
        }
        if (*render_cmd) {
            return cmd_render(ren, common);
        }
        if (*genbench_cmd) {
            return cmd_genbench(gen, common);
        }
        if (*pipeline_cmd) {
            return cmd_pipeline(pipe, common);
        }
        if (*evaluate_cmd) {
            return cmd_evaluate(ev, common);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailures;
    }
    return kExitUsage;
}
