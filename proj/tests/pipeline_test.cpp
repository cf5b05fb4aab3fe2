#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <tuple>

#include "glyphlab/io.hpp"
#include "glyphlab/pipeline.hpp"
#include "support.hpp"

using namespace glyphlab;

namespace {

Layout hello_world()
{
    return {256, 128, {{"HELLO", {0, 0, 128, 64}}, {"WORLD", {128, 64, 256, 128}}}};
}

std::vector<std::string> keywords_of(const Layout& l)
{
    std::vector<std::string> out;
    for (const auto& e : l.entries) {
        out.push_back(e.word);
    }
    return out;
}

// Flags derived by trying every keyword -> detection map (including "none").
std::vector<std::pair<std::size_t, BoundingBox>> oracle_flags(const Layout& truth, const OcrResult& ocr)
{
    const std::size_t n = truth.entries.size();
    const std::size_t m = ocr.detections.size();
    std::vector<std::size_t> best;
    bool have = false;
    std::vector<std::size_t> pick(n, m); // m = unassigned
    const auto cost_of = [&](const std::vector<std::size_t>& p) {
        std::size_t matched = 0;
        double edits = 0.0;
        double dist = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (p[i] == m) {
                continue;
            }
            ++matched;
            const auto& d = ocr.detections[p[i]];
            edits += static_cast<double>(oracle::levenshtein_table(fold_case(truth.entries[i].word), fold_case(d.word)));
            const auto& b = truth.entries[i].box;
            const double dx = ((b.x0 + b.x1) - (d.box.x0 + d.box.x1)) / 2.0;
            const double dy = ((b.y0 + b.y1) - (d.box.y0 + d.box.y1)) / 2.0;
            dist += std::sqrt(dx * dx + dy * dy);
        }
        return std::tuple<std::size_t, double, double>{matched, edits, dist};
    };
    std::tuple<std::size_t, double, double> best_key{};
    const auto recurse = [&](auto&& self, std::size_t i, std::vector<bool>& used) -> void {
        if (i == n) {
            const auto key = cost_of(pick);
            const bool better = !have || std::get<0>(key) > std::get<0>(best_key) ||
                                (std::get<0>(key) == std::get<0>(best_key) &&
                                 std::get<1>(key) * 1e7 + std::get<2>(key) <
                                     std::get<1>(best_key) * 1e7 + std::get<2>(best_key));
            if (better) {
                have = true;
                best_key = key;
                best = pick;
            }
            return;
        }
        for (std::size_t j = 0; j <= m; ++j) {
            if (j < m && used[j]) {
                continue;
            }
            pick[i] = j;
            if (j < m) {
                used[j] = true;
            }
            self(self, i + 1, used);
            if (j < m) {
                used[j] = false;
            }
        }
        pick[i] = m;
    };
    std::vector<bool> used(m, false);
    recurse(recurse, 0, used);

    std::vector<std::pair<std::size_t, BoundingBox>> flags;
    for (std::size_t i = 0; i < n; ++i) {
        if (best[i] == m) {
            flags.emplace_back(i, truth.entries[i].box);
        } else if (fold_case(ocr.detections[best[i]].word) != fold_case(truth.entries[i].word)) {
            flags.emplace_back(i, ocr.detections[best[i]].box);
        }
    }
    return flags;
}

std::vector<std::pair<std::size_t, BoundingBox>> plain(const std::vector<MisspellingFlag>& flags)
{
    std::vector<std::pair<std::size_t, BoundingBox>> out;
    for (const auto& f : flags) {
        out.emplace_back(f.keyword_index, f.region);
    }
    return out;
}

class CountingOcr final : public OcrBackend {
public:
    explicit CountingOcr(std::uint64_t seed) : inner_(seed) {}
    OcrResult recognize(const GeneratedImage& image) override
    {
        ++calls;
        return inner_.recognize(image);
    }
    int calls = 0;

private:
    SimulatedOcr inner_;
};

class FailingGenerator final : public GeneratorBackend {
public:
    GeneratedImage generate(const GenerateRequest&) override { throw std::runtime_error("device lost"); }
};

std::filesystem::path script(const std::filesystem::path& dir, const std::string& name, const std::string& body)
{
    const auto path = dir / name;
    std::ofstream(path) << "#!/bin/sh\n" << body;
    std::filesystem::permissions(path, std::filesystem::perms::owner_all);
    return path;
}

} // namespace

TEST_CASE("assignment agrees with exhaustive search")
{
    Rng rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(4);
        const std::size_t m = n + rng.below(3);
        std::vector<std::vector<double>> cost(n, std::vector<double>(m));
        for (auto& row : cost) {
            for (auto& c : row) {
                c = static_cast<double>(rng.below(10));
            }
        }
        const auto a = min_cost_assignment(cost);
        std::set<std::size_t> cols(a.begin(), a.end());
        CHECK(cols.size() == n);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            total += cost[i][a[i]];
        }
        CHECK(total == oracle::exhaustive_assignment(cost));
    }
    CHECK(min_cost_assignment({}).empty());
    CHECK_THROWS_AS(min_cost_assignment({{1.0}, {2.0}}), std::invalid_argument);
}

TEST_CASE("misspelling detection examples")
{
    const Layout l = hello_world();
    const OcrResult exact{{{"HELLO", {10, 10, 100, 50}, 1.0}, {"WORLD", {140, 70, 250, 120}, 1.0}}};
    CHECK(detect_misspellings(l, exact).empty());

    const BoundingBox B{12, 8, 90, 40};
    const BoundingBox C{150, 70, 240, 110};
    const OcrResult one_off{{{"HELO", B, 1.0}, {"WORLD", C, 1.0}}};
    const auto flags = detect_misspellings(l, one_off);
    CHECK(plain(flags) == oracle_flags(l, one_off));
    REQUIRE(flags.size() == 1);
    CHECK(flags[0].keyword_index == 0);
    CHECK(flags[0].region == B);
    CHECK(detect_misspellings(l, one_off, MaskSource::layout)[0].region == l.entries[0].box);

    const Layout solo{256, 128, {{"HELLO", {0, 0, 128, 64}}}};
    const auto missing = detect_misspellings(solo, {});
    REQUIRE(missing.size() == 1);
    CHECK(missing[0].region == solo.entries[0].box);
    CHECK_FALSE(missing[0].detection.has_value());

    // case is not an error
    CHECK(detect_misspellings(l, {{{"hello", B, 1.0}, {"world", C, 1.0}}}).empty());
}

TEST_CASE("misspelling detection matches the oracle and ignores detection order")
{
    Rng rng(14);
    const std::vector<std::string> vocab{"neon", "nean", "sign", "sigm", "open", "neon"};
    for (int trial = 0; trial < 300; ++trial) {
        Layout truth{256, 256, {}};
        for (std::size_t k = 1 + rng.below(4); k > 0; --k) {
            const int x = static_cast<int>(rng.below(200));
            const int y = static_cast<int>(rng.below(200));
            truth.entries.push_back({vocab[rng.below(vocab.size())], {x, y, x + 40, y + 20}});
        }
        OcrResult ocr;
        for (std::size_t k = rng.below(5); k > 0; --k) {
            const int x = static_cast<int>(rng.below(200));
            const int y = static_cast<int>(rng.below(200));
            ocr.detections.push_back({vocab[rng.below(vocab.size())], {x, y, x + 40, y + 20}, 1.0});
        }
        const auto flags = plain(detect_misspellings(truth, ocr));
        const auto expected = oracle_flags(truth, ocr);
        // the oracle may break exact cost ties differently; flagged keywords agree
        std::vector<std::size_t> a, b;
        for (const auto& f : flags) {
            a.push_back(f.first);
        }
        for (const auto& f : expected) {
            b.push_back(f.first);
        }
        CHECK(a == b);

        OcrResult shuffled = ocr;
        std::reverse(shuffled.detections.begin(), shuffled.detections.end());
        if (shuffled.detections.size() > 2) {
            std::swap(shuffled.detections[0], shuffled.detections[1]);
        }
        CHECK(plain(detect_misspellings(truth, shuffled)) == flags);
    }
}

TEST_CASE("noise model")
{
    NoiseModel bad{1.5, 0.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const std::string out = corrupt_one_char("NEON", rng);
        CHECK(oracle::levenshtein_table("NEON", out) == 1);
        CHECK(std::all_of(out.begin(), out.end(), [](char c) { return c >= 'A' && c <= 'Z'; }));
    }
    CHECK(corrupt_one_char("", rng).empty());
}

TEST_CASE("simulated generator")
{
    const Layout l = hello_world();
    const GlyphImage g = render(l);
    Rng rng(1);
    const auto clean = sim_generate(l, g, nullptr, {}, {}, rng);
    REQUIRE(clean.manifest);
    REQUIRE(clean.manifest->entries.size() == 2);
    CHECK(clean.manifest->entries[0].text == "HELLO");
    CHECK(clean.manifest->entries[1].text == "WORLD");
    CHECK(clean.image == g.image);

    Rng rng2(1);
    const auto gone = sim_generate(l, g, nullptr, {}, {1.0, 0.0, 0.0}, rng2);
    CHECK(gone.manifest->entries.empty());
    CHECK(gone.image == Image(256, 128));

    Rng a(77), b(77);
    const NoiseModel noisy{0.3, 0.3, 0.3};
    CHECK(sim_generate(l, g, nullptr, {}, noisy, a) == sim_generate(l, g, nullptr, {}, noisy, b));

    Rng o(3);
    CHECK(sim_ocr(clean, {}, o).detections.size() == 2);
    CHECK(ocr_text(sim_ocr(clean, {}, o)) == "HELLO WORLD");
    GeneratedImage blurred = clean;
    blurred.manifest->entries[0].text = "NEON";
    blurred.manifest->entries[0].blurred = true;
    const auto read = sim_ocr(blurred, {}, o);
    CHECK(read.detections[0].confidence == 0.3);
    CHECK(oracle::levenshtein_table("NEON", read.detections[0].word) == 1);
    CHECK(sim_ocr(GeneratedImage{Image(4, 4), RenderManifest{}}, {}, o).detections.empty());
    CHECK_THROWS_AS(sim_ocr(GeneratedImage{Image(4, 4), std::nullopt}, {}, o), BackendError);
}

TEST_CASE("correction round")
{
    const Layout l = hello_world();
    const GlyphImage g = render(l);
    Rng rng(2);
    const GeneratedImage clean = sim_generate(l, g, nullptr, {}, {}, rng);

    SimulatedGenerator gen({}, 5);
    SimulatedOcr ocr(6);
    const auto untouched = correction_round("p", l, clean, gen, ocr, FontFace::synthetic_block());
    CHECK(untouched.flagged.empty());
    CHECK_FALSE(untouched.backend_invoked);
    CHECK(gen.calls() == 0);
    CHECK(untouched.image == clean);

    // one misspelled word, zero-noise repaint
    GeneratedImage broken = clean;
    broken.manifest->entries[0].text = "HELO";
    const auto fixed = correction_round("p", l, broken, gen, ocr, FontFace::synthetic_block());
    CHECK(fixed.backend_invoked);
    CHECK(fixed.flagged.size() == 1);
    CHECK(fixed.before.f1 < 1.0);
    CHECK(fixed.after.f1 == 1.0);

    // pixels outside the flagged regions never change
    for (int y = 0; y < 128; ++y) {
        for (int x = 0; x < 256; ++x) {
            bool inside = false;
            for (const auto& f : fixed.flagged) {
                inside = inside || (x >= f.region.x0 && x < f.region.x1 && y >= f.region.y0 && y < f.region.y1);
            }
            if (!inside) {
                CHECK(fixed.image.image.at(x, y) == broken.image.at(x, y));
            }
        }
    }

    FailingGenerator failing;
    try {
        correction_round("p", l, broken, failing, ocr, FontFace::synthetic_block(), MaskSource::detected, 3);
        FAIL("expected a backend error");
    } catch (const BackendError& e) {
        CHECK(std::string(e.what()).find("round 3") != std::string::npos);
        CHECK(std::string(e.what()).find("device lost") != std::string::npos);
    }
}

TEST_CASE("pipeline runs")
{
    const std::vector<std::string> kw{"NEON", "SIGN", "OPEN", "LATE"};
    PipelineConfig cfg;
    cfg.seed = 9;

    SUBCASE("zero noise is perfect")
    {
        SimulatedGenerator gen({}, 1);
        SimulatedOcr ocr(2);
        const auto r = run("sign", kw, cfg, gen, ocr);
        CHECK(r.metrics.word.f1 == 1.0);
        CHECK(r.metrics.nld == 0.0);
        CHECK(r.metrics.sentence_exact);
        CHECK(gen.calls() == 1);
    }
    SUBCASE("zero iterations return the first generation")
    {
        cfg.iterations = 0;
        cfg.noise = {0.2, 0.4, 0.1};
        SimulatedGenerator gen(cfg.noise, 1);
        SimulatedOcr ocr(2);
        const auto r = run("sign", kw, cfg, gen, ocr);
        CHECK(r.rounds.empty());
        CHECK(r.final_image == r.initial_image);
    }
    SUBCASE("retained F1 never drops and runs reproduce")
    {
        cfg.noise = {0.1, 0.4, 0.1};
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            cfg.seed = seed;
            SimulatedGenerator gen(cfg.noise, seed + 100);
            SimulatedOcr ocr(seed + 200);
            const auto r = run("sign", kw, cfg, gen, ocr);
            double prev = r.rounds.empty() ? 0.0 : r.rounds.front().f1_before;
            for (const auto& t : r.rounds) {
                CHECK(t.f1_retained >= prev);
                prev = t.f1_retained;
            }
            SimulatedGenerator gen2(cfg.noise, seed + 100);
            SimulatedOcr ocr2(seed + 200);
            const auto again = run("sign", kw, cfg, gen2, ocr2);
            CHECK(again.final_image == r.final_image);
            CHECK(again.layout == r.layout);
        }
    }
    SUBCASE("bad input")
    {
        SimulatedGenerator gen({}, 1);
        SimulatedOcr ocr(2);
        CHECK_THROWS_AS(run("x", std::vector<std::string>{}, cfg, gen, ocr), std::invalid_argument);
        cfg.iterations = -1;
        CHECK_THROWS_AS(run("x", kw, cfg, gen, ocr), std::invalid_argument);
    }
    SUBCASE("unrenderable keywords are reported")
    {
        SimulatedGenerator gen({}, 1);
        SimulatedOcr ocr(2);
        cfg.optimize_layout = false;
        const Layout given{128, 128, {{"OK", {0, 0, 64, 64}}, {"NO", {100, 100, 103, 103}}}};
        const auto r = run("x", keywords_of(given), cfg, gen, ocr, given);
        CHECK(r.unrenderable == std::vector<std::size_t>{1});
        CHECK(r.metrics.word.recall == 0.5);
    }
}

TEST_CASE("external command adapters")
{
    const auto dir = std::filesystem::temp_directory_path() / "glyphlab_exec_test";
    std::filesystem::create_directories(dir);
    const Layout l = hello_world();
    const GlyphImage g = render(l);

    // generator echoes the glyph image; OCR reports a fixed result
    ExecGenerator gen(script(dir, "gen.sh", "cp \"$2\" \"$5\"\n"));
    ExecOcr ocr(script(dir, "ocr.sh",
                       "printf '%s\\n' '{\"word\":\"HELLO\",\"x0\":0,\"y0\":0,\"x1\":10,\"y1\":10,\"confidence\":0.9}' "
                       "> \"$2\"\n"));
    const GeneratedImage img = gen.generate({"prompt", l, g, nullptr, {}});
    CHECK(img.image == g.image);
    CHECK_FALSE(img.manifest.has_value());
    const OcrResult res = ocr.recognize(img);
    REQUIRE(res.detections.size() == 1);
    CHECK(res.detections[0].word == "HELLO");
    CHECK(res.detections[0].confidence == 0.9);

    ExecGenerator broken(script(dir, "fail.sh", "exit 3\n"));
    CHECK_THROWS_AS(broken.generate({"prompt", l, g, nullptr, {}}), BackendError);
    ExecOcr outside(script(dir, "far.sh",
                           "echo '{\"word\":\"X\",\"x0\":0,\"y0\":0,\"x1\":999,\"y1\":10}' > \"$2\"\n"));
    CHECK_THROWS_AS(outside.recognize(img), BackendError);
    ExecGenerator missing(dir / "does-not-exist");
    CHECK_THROWS_AS(missing.generate({"prompt", l, g, nullptr, {}}), BackendError);
    CHECK(run_process({"true"}) == 0);
    CHECK(run_process({"false"}) == 1);
    std::filesystem::remove_all(dir);
}
