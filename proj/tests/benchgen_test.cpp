#include <doctest.h>

#include <cctype>
#include <stdexcept>
#include <cmath>
#include <set>

#include "glyphlab/benchgen.hpp"
#include "glyphlab/textmetrics.hpp"

using namespace glyphlab;

namespace {

BenchRecord with_keywords(std::size_t n)
{
    BenchRecord r;
    r.id = "r" + std::to_string(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.keywords.push_back("w" + std::to_string(i));
    }
    return r;
}

} // namespace

TEST_CASE("hard filter boundary")
{
    const std::vector<BenchRecord> in{with_keywords(3), with_keywords(4), with_keywords(14)};
    const auto out = filter_hard(in);
    REQUIRE(out.size() == 2);
    CHECK(out[0].keywords.size() == 4);
    CHECK(filter_hard(out) == out);
    CHECK(filter_hard(std::vector<BenchRecord>{}).empty());
}

TEST_CASE("keyboard adjacency")
{
    const auto& adj = keyboard_adjacency();
    CHECK(adj.size() == 26);
    CHECK(adj.at('c') == "dfvx");
    for (const auto& [letter, neighbours] : adj) {
        CHECK_FALSE(neighbours.empty());
        for (char n : neighbours) {
            CHECK(adj.at(n).find(letter) != std::string::npos);
        }
    }
}

TEST_CASE("spelling augmentation")
{
    Rng rng(1);
    for (int i = 0; i < 500; ++i) {
        const auto r = augment_spelling("player", rng);
        CHECK(r.applied);
        CHECK(r.text != "player");
        const auto d = levenshtein("player", r.text);
        CHECK((d == 1 || d == 2));
    }
    Rng a(5), b(5);
    CHECK(augment_spelling("player", a).text == augment_spelling("player", b).text);
    Rng c(2);
    const auto one = augment_spelling("a", c);
    CHECK_FALSE(one.applied);
    CHECK(one.text == "a");
    Rng d(3);
    CHECK(augment_spelling("zz", d).text != "zz");
}

TEST_CASE("keyboard augmentation")
{
    Rng rng(2);
    const std::set<std::string> c_variants{"xloud", "vloud", "dloud", "floud"};
    int hits = 0;
    for (int i = 0; i < 500; ++i) {
        const auto r = augment_keyboard("cloud", rng);
        CHECK(r.applied);
        CHECK(levenshtein("cloud", r.text) == 1);
        if (r.text.substr(1) == "loud") {
            CHECK(c_variants.contains(r.text));
            ++hits;
        }
    }
    CHECK(hits > 0);
    Rng up(4);
    for (int i = 0; i < 50; ++i) {
        const auto r = augment_keyboard("AB", up);
        CHECK(std::isupper(static_cast<unsigned char>(r.text[0])));
        CHECK(std::isupper(static_cast<unsigned char>(r.text[1])));
    }
    CHECK_FALSE(augment_keyboard("123", rng).applied);
}

TEST_CASE("split augmentation")
{
    CHECK(split_at("Amazon", 4) == std::pair<std::string, std::string>{"Amaz", "on"});
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto r = augment_split("Amazon", rng);
        CHECK(r.applied);
        CHECK(r.head + r.tail == "Amazon");
        CHECK_FALSE(r.head.empty());
        CHECK_FALSE(r.tail.empty());
    }
    const auto ab = augment_split("ab", rng);
    CHECK(ab.head == "a");
    CHECK(ab.tail == "b");
    CHECK_FALSE(augment_split("a", rng).applied);
}

TEST_CASE("record augmentation rewrites the prompt")
{
    BenchRecord r;
    r.id = "x";
    r.prompt = "'Amazon Cloud Player' on a poster";
    r.keywords = {"Amazon", "Cloud", "Player"};
    AugmentOptions opts;
    opts.probability = 1.0;
    opts.kinds = {Augmentation::splitting};
    Rng rng(8);
    const BenchRecord out = augment_record(r, opts, rng);
    CHECK(out.subset == Subset::aug_mario_hard);
    CHECK(out.augmentation == Augmentation::splitting);
    CHECK(out.keywords.size() == 6);
    for (const auto& k : out.keywords) {
        CHECK(out.prompt.find(k) != std::string::npos);
    }
    CHECK(out.prompt.ends_with("' on a poster"));
}

TEST_CASE("templates")
{
    CHECK(fill_template(kNeonSignTemplate, "quickbonook!") == "A neon sign of quickbonook!");
    CHECK(fill_template(kNeonSignSaysTemplate, "hi") == "A neon sign that says 'hi'");
    CHECK_THROWS_AS(fill_template("no placeholder", "x"), std::invalid_argument);
    CHECK_THROWS_AS(fill_template("{} and {}", "x"), std::invalid_argument);
}

TEST_CASE("random word combinations")
{
    Rng rng(4);
    const auto words = pseudo_words(50, rng);
    const auto records = rwc_generate(300, words, {}, 42);
    REQUIRE(records.size() == 300);
    for (const auto& r : records) {
        CHECK(r.keywords.size() >= 1);
        CHECK(r.keywords.size() <= 10);
        CHECK(r.subset == Subset::rwc);
        CHECK(r.prompt.starts_with("A neon sign of "));
        for (const auto& k : r.keywords) {
            CHECK(r.prompt.find(k) != std::string::npos);
        }
    }
    CHECK(rwc_generate(300, words, {}, 42) == records);
    // any record regenerates alone
    const auto again = rwc_generate(300, words, {}, 42);
    CHECK(again[123] == records[123]);
    CHECK_THROWS_AS(rwc_generate(0, words, {}, 42), std::invalid_argument);
    CHECK_THROWS_AS(rwc_generate(1, std::vector<std::string>{}, {}, 42), std::invalid_argument);
}

TEST_CASE("stats")
{
    const std::vector<BenchRecord> one{with_keywords(4)};
    const auto s = stats(one);
    CHECK(s.size == 1);
    CHECK(s.min_words == 4);
    CHECK(s.max_words == 4);
    CHECK(s.avg_words == 4.0);
    const std::vector<BenchRecord> two{with_keywords(4), with_keywords(14)};
    CHECK(stats(two).min_words == 4);
    CHECK(stats(two).max_words == 14);
    CHECK_THROWS_AS(stats(std::vector<BenchRecord>{}), std::invalid_argument);

    const auto source = synthetic_source(1000, 6);
    double sum = 0.0;
    for (const auto& r : source) {
        sum += static_cast<double>(r.keywords.size());
    }
    CHECK(std::abs(stats(source).avg_words - sum / 1000.0) < 1e-12);
    CHECK(synthetic_source(1000, 6) == source);
}
