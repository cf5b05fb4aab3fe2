#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace glyphlab {

/// Case-folded, whitespace-split tokens; punctuation is kept.
using WordSet = std::vector<std::string>;

std::string fold_case(std::string_view text);

/// Tokenise for word-level comparison. Idempotent on its own output.
WordSet normalize_words(std::string_view text);

/// Case-folded with runs of whitespace collapsed to one space and trimmed.
std::string normalize_sentence(std::string_view text);

/// Unit-cost edit distance over bytes.
std::size_t levenshtein(std::string_view a, std::string_view b);

/// Normalized edit distance on a 0-100 scale: 100 * lev / max(|a|, |b|).
double nld(std::string_view truth, std::string_view pred);

struct RatioMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0; ///< multiset Jaccard: matched / (|truth| + |pred| - matched)
};

/// Size of the multiset intersection.
std::size_t multiset_matches(std::span<const std::string> truth, std::span<const std::string> pred);

/// Precision/recall/F1/accuracy from the match count and the two multiset sizes.
RatioMetrics ratio_metrics(std::size_t matched, std::size_t truth_size, std::size_t pred_size);

RatioMetrics word_metrics(const WordSet& truth, const WordSet& pred);

/// Order-insensitive character multisets of the case-folded texts with
/// whitespace removed.
RatioMetrics char_metrics(std::string_view truth, std::string_view pred);

bool sentence_exact(std::string_view truth, std::string_view pred);

/// Metrics for one benchmark record.
struct RecordMetrics {
    std::string id;
    std::size_t keyword_count = 0;
    RatioMetrics word;
    RatioMetrics character;
    bool sentence_exact = false;
    double nld = 0.0; ///< 0-100
    std::int64_t overlap_area = 0;
    double overlap_energy = 0.0;
    double iou = 0.0;
};

/// Word/char/sentence/NLD metrics of `pred` against `truth`. NLD is taken
/// over the normalized sentences.
RecordMetrics evaluate_text(std::string_view truth, std::string_view pred);

struct AggregateMetrics {
    std::size_t records = 0;
    RatioMetrics word;
    RatioMetrics character;
    double sentence_accuracy = 0.0;
    double nld = 0.0;
    double overlap_area = 0.0;
    double overlap_energy = 0.0;
    double iou = 0.0;
};

/// Running sums for the aggregate; merge() is associative so partial sums
/// from parallel workers combine in any grouping.
class MetricsAccumulator {
public:
    void add(const RecordMetrics& record);
    void merge(const MetricsAccumulator& other);
    std::size_t count() const { return count_; }
    /// Throws std::invalid_argument when empty.
    AggregateMetrics result() const;

private:
    std::size_t count_ = 0;
    std::size_t exact_ = 0;
    std::array<double, 12> sums_{};
};

struct EvalReport {
    std::vector<RecordMetrics> records;
    AggregateMetrics aggregate;
    std::optional<double> clipscore; ///< supplied externally, never computed here
};

/// Arithmetic means over records. Throws std::invalid_argument when empty.
AggregateMetrics aggregate(std::span<const RecordMetrics> records);

EvalReport make_report(std::vector<RecordMetrics> records, std::optional<double> clipscore = std::nullopt);

} // namespace glyphlab
