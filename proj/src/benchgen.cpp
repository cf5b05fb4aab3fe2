#include "glyphlab/benchgen.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace glyphlab {

namespace {

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }
char upper(char c) { return static_cast<char>(std::toupper(static_cast<unsigned char>(c))); }

std::string join(std::span<const std::string> words)
{
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) {
            out += ' ';
        }
        out += w;
    }
    return out;
}

std::map<char, std::string> build_adjacency()
{
    const std::array<std::string_view, 3> rows{"qwertyuiop", "asdfghjkl", "zxcvbnm"};
    std::map<char, std::string> adjacency;
    const auto add = [&](char c, int row, int index) {
        if (row < 0 || row >= static_cast<int>(rows.size())) {
            return;
        }
        const auto& r = rows[static_cast<std::size_t>(row)];
        if (index >= 0 && index < static_cast<int>(r.size())) {
            adjacency[c] += r[static_cast<std::size_t>(index)];
        }
    };
    for (int row = 0; row < static_cast<int>(rows.size()); ++row) {
        const auto& r = rows[static_cast<std::size_t>(row)];
        for (int i = 0; i < static_cast<int>(r.size()); ++i) {
            const char c = r[static_cast<std::size_t>(i)];
            // rows are staggered right as they go down: key i sits under keys i and i+1
            add(c, row, i - 1);
            add(c, row, i + 1);
            add(c, row - 1, i);
            add(c, row - 1, i + 1);
            add(c, row + 1, i - 1);
            add(c, row + 1, i);
            std::sort(adjacency[c].begin(), adjacency[c].end());
        }
    }
    return adjacency;
}

std::string format_id(std::string_view prefix, std::size_t index)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06zu", index);
    return std::string(prefix) + "-" + buf;
}

} // namespace

std::string_view to_string(Subset subset)
{
    switch (subset) {
    case Subset::mario_hard: return "mario-hard";
    case Subset::aug_mario_hard: return "aug-mario-hard";
    case Subset::rwc: return "rwc";
    }
    return "unknown";
}

std::string_view to_string(Augmentation augmentation)
{
    switch (augmentation) {
    case Augmentation::spelling: return "spelling";
    case Augmentation::keyboard: return "keyboard";
    case Augmentation::splitting: return "splitting";
    }
    return "unknown";
}

std::optional<Subset> parse_subset(std::string_view name)
{
    for (Subset s : {Subset::mario_hard, Subset::aug_mario_hard, Subset::rwc}) {
        if (name == to_string(s)) {
            return s;
        }
    }
    return std::nullopt;
}

std::optional<Augmentation> parse_augmentation(std::string_view name)
{
    for (Augmentation a : {Augmentation::spelling, Augmentation::keyboard, Augmentation::splitting}) {
        if (name == to_string(a)) {
            return a;
        }
    }
    return std::nullopt;
}

const std::map<char, std::string>& keyboard_adjacency()
{
    static const std::map<char, std::string> adjacency = build_adjacency();
    return adjacency;
}

AugmentResult augment_spelling(std::string_view word, Rng& rng)
{
    std::string out(word);
    if (out.size() < 2) {
        return {out, false};
    }
    const bool transpose = rng.below(2) == 1;
    std::vector<std::size_t> swappable;
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        if (out[i] != out[i + 1]) {
            swappable.push_back(i);
        }
    }
    if (transpose && !swappable.empty()) {
        const std::size_t i = swappable[rng.below(swappable.size())];
        std::swap(out[i], out[i + 1]);
        return {out, true};
    }
    const std::size_t pos = rng.below(out.size());
    const char original = out[pos];
    // 25 letters other than the original (all 26 if it is not a letter)
    std::string pool;
    for (char c = 'a'; c <= 'z'; ++c) {
        if (c != lower(original)) {
            pool += c;
        }
    }
    const char replacement = pool[rng.below(pool.size())];
    out[pos] = is_upper(original) ? upper(replacement) : replacement;
    return {out, true};
}

AugmentResult augment_keyboard(std::string_view word, Rng& rng)
{
    std::string out(word);
    std::vector<std::size_t> letters;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (is_letter(out[i])) {
            letters.push_back(i);
        }
    }
    if (letters.empty()) {
        return {out, false};
    }
    const std::size_t pos = letters[rng.below(letters.size())];
    const std::string& neighbours = keyboard_adjacency().at(lower(out[pos]));
    const char replacement = neighbours[rng.below(neighbours.size())];
    out[pos] = is_upper(out[pos]) ? upper(replacement) : replacement;
    return {out, true};
}

std::pair<std::string, std::string> split_at(std::string_view word, std::size_t index)
{
    if (index == 0 || index >= word.size()) {
        throw std::out_of_range("split index must be interior to the word");
    }
    return {std::string(word.substr(0, index)), std::string(word.substr(index))};
}

SplitResult augment_split(std::string_view word, Rng& rng)
{
    if (word.size() < 2) {
        return {std::string(word), {}, false};
    }
    auto [head, tail] = split_at(word, 1 + rng.below(word.size() - 1));
    return {std::move(head), std::move(tail), true};
}

std::vector<BenchRecord> filter_hard(std::span<const BenchRecord> records, std::size_t min_keywords)
{
    std::vector<BenchRecord> out;
    std::copy_if(records.begin(), records.end(), std::back_inserter(out),
                 [&](const BenchRecord& r) { return r.keywords.size() >= min_keywords; });
    return out;
}

BenchRecord augment_record(const BenchRecord& record, const AugmentOptions& options, Rng& rng)
{
    if (options.kinds.empty()) {
        throw std::invalid_argument("at least one augmentation kind is required");
    }
    BenchRecord out = record;
    out.subset = Subset::aug_mario_hard;
    out.keywords.clear();
    out.augmentation.reset();

    std::size_t cursor = 0;
    for (const std::string& keyword : record.keywords) {
        std::vector<std::string> replacement{keyword};
        if (rng.bernoulli(options.probability)) {
            const Augmentation kind = options.kinds[rng.below(options.kinds.size())];
            bool applied = false;
            switch (kind) {
            case Augmentation::spelling: {
                auto r = augment_spelling(keyword, rng);
                applied = r.applied;
                replacement = {std::move(r.text)};
                break;
            }
            case Augmentation::keyboard: {
                auto r = augment_keyboard(keyword, rng);
                applied = r.applied;
                replacement = {std::move(r.text)};
                break;
            }
            case Augmentation::splitting: {
                auto r = augment_split(keyword, rng);
                applied = r.applied;
                replacement = applied ? std::vector<std::string>{r.head, r.tail} : std::vector<std::string>{r.head};
                break;
            }
            }
            if (applied && !out.augmentation) {
                out.augmentation = kind;
            }
        }

        const std::string text = join(replacement);
        const std::size_t at = out.prompt.find(keyword, cursor);
        if (at == std::string::npos) {
            throw std::invalid_argument("keyword '" + keyword + "' does not appear in the prompt of " + record.id);
        }
        out.prompt.replace(at, keyword.size(), text);
        cursor = at + text.size();
        out.keywords.insert(out.keywords.end(), replacement.begin(), replacement.end());
    }
    return out;
}

std::string fill_template(std::string_view tmpl, std::string_view text)
{
    const std::size_t at = tmpl.find(kPlaceholder);
    if (at == std::string_view::npos || tmpl.find(kPlaceholder, at + 1) != std::string_view::npos) {
        throw std::invalid_argument("template must contain exactly one {} placeholder: " + std::string(tmpl));
    }
    std::string out(tmpl.substr(0, at));
    out += text;
    out += tmpl.substr(at + kPlaceholder.size());
    return out;
}

std::vector<BenchRecord> rwc_generate(std::size_t count, std::span<const std::string> word_list,
                                      const RwcOptions& options, std::uint64_t seed)
{
    if (count == 0) {
        throw std::invalid_argument("record count must be at least 1");
    }
    if (word_list.empty()) {
        throw std::invalid_argument("word list is empty");
    }
    if (options.min_words < 1 || options.max_words < options.min_words) {
        throw std::invalid_argument("invalid keyword count range");
    }
    fill_template(options.template_text, ""); // validates the placeholder

    std::vector<BenchRecord> records;
    records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        BenchRecord r;
        r.id = format_id("rwc", i);
        r.subset = Subset::rwc;
        r.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
        Rng rng(r.seed);
        const auto n = static_cast<std::size_t>(
            rng.between(static_cast<std::int64_t>(options.min_words), static_cast<std::int64_t>(options.max_words)));
        for (std::size_t k = 0; k < n; ++k) {
            std::string token = word_list[rng.below(word_list.size())];
            if (!options.punctuation.empty() && rng.bernoulli(options.punctuation_probability)) {
                token += options.punctuation[rng.below(options.punctuation.size())];
            }
            r.keywords.push_back(std::move(token));
        }
        r.prompt = fill_template(options.template_text, join(r.keywords));
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<std::string> pseudo_words(std::size_t count, Rng& rng)
{
    static constexpr std::array<std::string_view, 33> onsets{
        "b", "c", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p", "qu", "r", "s", "t", "v",
        "w", "z", "bl", "br", "ch", "cl", "cr", "dr", "fl", "gr", "pl", "pr", "sh", "st", "th", "tr"};
    static constexpr std::array<std::string_view, 9> nuclei{"a", "e", "i", "o", "u", "oo", "ee", "ai", "ou"};
    static constexpr std::array<std::string_view, 10> codas{"", "", "k", "n", "m", "r", "s", "t", "ck", "nd"};

    std::vector<std::string> words;
    words.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::string w;
        const auto syllables = rng.between(2, 4);
        for (std::int64_t s = 0; s < syllables; ++s) {
            w += onsets[rng.below(onsets.size())];
            w += nuclei[rng.below(nuclei.size())];
            if (s + 1 == syllables || rng.bernoulli(0.3)) {
                w += codas[rng.below(codas.size())];
            }
        }
        words.push_back(std::move(w));
    }
    return words;
}

std::vector<BenchRecord> synthetic_source(std::size_t count, std::uint64_t seed)
{
    static constexpr std::array<std::string_view, 6> captions{"Music", "Poster", "Book cover", "Logo", "Sign",
                                                             "Album art"};
    std::vector<BenchRecord> records;
    records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        BenchRecord r;
        r.id = format_id("src", i);
        r.subset = Subset::mario_hard;
        r.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
        Rng rng(r.seed);
        std::size_t n = 1;
        while (n < 14 && rng.bernoulli(0.7)) {
            ++n;
        }
        r.keywords = pseudo_words(n, rng);
        for (auto& w : r.keywords) {
            if (rng.bernoulli(0.5)) {
                w[0] = upper(w[0]);
            }
        }
        r.prompt = "'" + join(r.keywords) + "' " + std::string(captions[rng.below(captions.size())]);
        records.push_back(std::move(r));
    }
    return records;
}

BenchStats stats(std::span<const BenchRecord> records)
{
    if (records.empty()) {
        throw std::invalid_argument("cannot compute statistics of an empty record set");
    }
    BenchStats s;
    s.size = records.size();
    s.min_words = records.front().keywords.size();
    s.max_words = s.min_words;
    std::size_t total = 0;
    for (const auto& r : records) {
        s.min_words = std::min(s.min_words, r.keywords.size());
        s.max_words = std::max(s.max_words, r.keywords.size());
        total += r.keywords.size();
    }
    s.avg_words = static_cast<double>(total) / static_cast<double>(s.size);
    return s;
}

} // namespace glyphlab
