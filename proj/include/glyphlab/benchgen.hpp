#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glyphlab/rng.hpp"

namespace glyphlab {

enum class Subset { mario_hard, aug_mario_hard, rwc };
enum class Augmentation { spelling, keyboard, splitting };

std::string_view to_string(Subset subset);
std::string_view to_string(Augmentation augmentation);
std::optional<Subset> parse_subset(std::string_view name);
std::optional<Augmentation> parse_augmentation(std::string_view name);

struct BenchRecord {
    std::string id;
    std::string prompt;
    std::vector<std::string> keywords;
    Subset subset = Subset::mario_hard;
    /// First augmentation applied to the record, if any.
    std::optional<Augmentation> augmentation;
    std::uint64_t seed = 0;

    friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

/// US QWERTY letter neighbours: same-row and diagonal keys. Symmetric.
const std::map<char, std::string>& keyboard_adjacency();

/// Result of a single-word corruption. `applied` is false when the word is
/// too short (or has no letters) and was returned unchanged.
struct AugmentResult {
    std::string text;
    bool applied = false;
};

/// One substitution (a different letter, same case) or one adjacent
/// transposition, chosen uniformly. The output always differs from the input.
AugmentResult augment_spelling(std::string_view word, Rng& rng);

/// Replaces one uniformly chosen letter by a keyboard neighbour, keeping case.
AugmentResult augment_keyboard(std::string_view word, Rng& rng);

/// `word` cut at `index` (1 <= index < size).
std::pair<std::string, std::string> split_at(std::string_view word, std::size_t index);

struct SplitResult {
    std::string head;
    std::string tail;
    bool applied = false;
};

/// Cuts at a uniformly chosen interior index.
SplitResult augment_split(std::string_view word, Rng& rng);

/// Keeps records with at least `min_keywords` keywords, in order.
std::vector<BenchRecord> filter_hard(std::span<const BenchRecord> records, std::size_t min_keywords = 4);

struct AugmentOptions {
    double probability = 0.5; ///< per keyword
    std::vector<Augmentation> kinds{Augmentation::spelling, Augmentation::keyboard, Augmentation::splitting};
};

/// Corrupts each keyword independently with `options.probability`, using a
/// uniformly chosen kind; the quoted keyword span of the prompt is rewritten.
BenchRecord augment_record(const BenchRecord& record, const AugmentOptions& options, Rng& rng);

inline constexpr std::string_view kPlaceholder = "{}";
inline constexpr std::string_view kNeonSignTemplate = "A neon sign of {}";
inline constexpr std::string_view kNeonSignSaysTemplate = "A neon sign that says '{}'";
inline constexpr std::string_view kRwcPunctuation = "!@%$&#*^";

/// Throws std::invalid_argument unless `tmpl` has exactly one placeholder.
std::string fill_template(std::string_view tmpl, std::string_view text);

struct RwcOptions {
    std::string template_text{kNeonSignTemplate};
    std::string punctuation{kRwcPunctuation};
    std::size_t min_words = 1;
    std::size_t max_words = 10;
    double punctuation_probability = 0.3; ///< per token
};

/// Random uncommon-word combinations. Record i is drawn from
/// derive_seed(seed, i), so any record can be regenerated alone.
std::vector<BenchRecord> rwc_generate(std::size_t count, std::span<const std::string> word_list,
                                      const RwcOptions& options, std::uint64_t seed);

/// Pronounceable pseudo-words from a syllable sampler ("quickbonook"-like).
std::vector<std::string> pseudo_words(std::size_t count, Rng& rng);

/// Stand-in for a captioned source corpus: quoted keyword spans of 1..14
/// pseudo-words, for running the hard filter and augmentations offline.
std::vector<BenchRecord> synthetic_source(std::size_t count, std::uint64_t seed);

struct BenchStats {
    std::size_t size = 0;
    std::size_t min_words = 0;
    std::size_t max_words = 0;
    double avg_words = 0.0;
};

/// Throws std::invalid_argument on an empty input.
BenchStats stats(std::span<const BenchRecord> records);

} // namespace glyphlab
