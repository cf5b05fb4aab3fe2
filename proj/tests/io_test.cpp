#include <doctest.h>

#include <stdexcept>

#include "glyphlab/io.hpp"

using namespace glyphlab;

TEST_CASE("layout round trip")
{
    const Layout l{320, 200, {{"NEON", {0, 0, 50, 20}}, {"SIGN", {10, 30, 90, 60}}}};
    CHECK(io::layout_from_json(io::layout_to_json(l)) == l);
    CHECK(io::parse_layout(io::layout_to_json(l).dump(2)) == l);
}

TEST_CASE("layout diagnostics point at the line")
{
    const std::string bad_box = "{\n"
                                "  \"canvas_width\": 100,\n"
                                "  \"canvas_height\": 100,\n"
                                "  \"boxes\": [\n"
                                "    {\"word\": \"ok\", \"x0\": 0, \"y0\": 0, \"x1\": 10, \"y1\": 10},\n"
                                "    {\"word\": \"bad\", \"x0\": 5, \"y0\": 0, \"x1\": 5, \"y1\": 10}\n"
                                "  ]\n"
                                "}\n";
    try {
        io::parse_layout(bad_box, "in.json");
        FAIL("expected an error");
    } catch (const io::DocumentError& e) {
        const std::string what = e.what();
        CHECK(what.starts_with("in.json:6:5:"));
        CHECK(what.find("boxes[1]") != std::string::npos);
    }

    try {
        io::parse_layout("{\n  \"canvas_width\": 100,\n  oops\n}", "in.json");
        FAIL("expected an error");
    } catch (const io::DocumentError& e) {
        CHECK(std::string(e.what()).starts_with("in.json:3:"));
    }

    CHECK_THROWS_AS(io::parse_layout(R"({"canvas_width": 1.5, "canvas_height": 10, "boxes": []})"),
                    io::DocumentError);
    CHECK_THROWS_AS(io::parse_layout(R"({"canvas_width": 10, "canvas_height": 10})"), io::DocumentError);
    CHECK_THROWS_AS(io::parse_layout(R"({"canvas_width": 10, "canvas_height": 10, "boxes": [{"word": "a",
        "x0": 0, "y0": 0, "x1": 20, "y1": 5}]})"),
                    io::DocumentError);
}

TEST_CASE("records and OCR lines round trip")
{
    BenchRecord r{"rwc-000001", "A neon sign of x", {"x"}, Subset::rwc, std::nullopt, 77};
    BenchRecord s{"a", "'p q'", {"p", "q"}, Subset::aug_mario_hard, Augmentation::keyboard, 1};
    const std::vector<BenchRecord> records{r, s};
    CHECK(io::records_from_jsonl(io::records_to_jsonl(records)) == records);

    const OcrResult ocr{{{"HELLO", {1, 2, 3, 4}, 0.5}, {"W", {0, 0, 1, 1}, 1.0}}};
    CHECK(io::ocr_from_jsonl(io::ocr_to_jsonl(ocr)) == ocr);
    try {
        io::records_from_jsonl("{\"id\":\"a\",\"keywords\":[]}\n\nnot json\n", "r.jsonl");
        FAIL("expected an error");
    } catch (const io::DocumentError& e) {
        CHECK(std::string(e.what()).starts_with("r.jsonl:3:"));
    }

    const RenderManifest m{{{0, "HI", {0, 0, 5, 5}, true}}};
    CHECK(io::manifest_from_json(io::manifest_to_json(m)) == m);
}

TEST_CASE("report csv")
{
    RecordMetrics a = evaluate_text("neon sign", "neon sign");
    a.id = "r1";
    a.keyword_count = 2;
    const EvalReport report = make_report({a}, 0.25);
    const std::string csv = io::report_csv(report);
    CHECK(csv.starts_with("id,keyword_count,clipscore,char_precision"));
    CHECK(csv.find("\nr1,2,0.25,1,1,1,1,1,1,1,1,0,1,") != std::string::npos);
    CHECK(csv.find("\naggregate,,0.25,") != std::string::npos);
    CHECK(io::format_number(0.1) == "0.1");
}
