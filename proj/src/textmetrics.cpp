#include "glyphlab/textmetrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <stdexcept>

namespace glyphlab {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

template <typename Key>
std::size_t count_matches(const std::map<Key, std::size_t>& truth, const std::map<Key, std::size_t>& pred)
{
    std::size_t matched = 0;
    for (const auto& [key, n] : truth) {
        if (const auto it = pred.find(key); it != pred.end()) {
            matched += std::min(n, it->second);
        }
    }
    return matched;
}

enum Slot : std::size_t {
    kWordP, kWordR, kWordF1, kWordAcc,
    kCharP, kCharR, kCharF1, kCharAcc,
    kNld, kOverlap, kEnergy, kIou,
};

} // namespace

std::string fold_case(std::string_view text)
{
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

WordSet normalize_words(std::string_view text)
{
    WordSet words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) {
            ++i;
        }
        const std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) {
            ++i;
        }
        if (i > start) {
            words.push_back(fold_case(text.substr(start, i - start)));
        }
    }
    return words;
}

std::string normalize_sentence(std::string_view text)
{
    std::string out;
    for (const std::string& w : normalize_words(text)) {
        if (!out.empty()) {
            out += ' ';
        }
        out += w;
    }
    return out;
}

std::size_t levenshtein(std::string_view a, std::string_view b)
{
    if (a.size() < b.size()) {
        std::swap(a, b);
    }
    // one row over the shorter string
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) {
        row[j] = j;
    }
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diagonal = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t above = row[j];
            row[j] = std::min({above + 1, row[j - 1] + 1, diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diagonal = above;
        }
    }
    return row[b.size()];
}

double nld(std::string_view truth, std::string_view pred)
{
    const std::size_t longest = std::max(truth.size(), pred.size());
    if (longest == 0) {
        return 0.0;
    }
    return 100.0 * static_cast<double>(levenshtein(truth, pred)) / static_cast<double>(longest);
}

std::size_t multiset_matches(std::span<const std::string> truth, std::span<const std::string> pred)
{
    std::map<std::string, std::size_t> t;
    std::map<std::string, std::size_t> p;
    for (const auto& w : truth) {
        ++t[w];
    }
    for (const auto& w : pred) {
        ++p[w];
    }
    return count_matches(t, p);
}

RatioMetrics ratio_metrics(std::size_t matched, std::size_t truth_size, std::size_t pred_size)
{
    RatioMetrics m;
    m.precision = pred_size == 0 ? 0.0 : double(matched) / double(pred_size);
    m.recall = truth_size == 0 ? 0.0 : double(matched) / double(truth_size);
    const double pr = m.precision + m.recall;
    m.f1 = pr == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / pr;
    const std::size_t unioned = truth_size + pred_size - matched;
    m.accuracy = unioned == 0 ? 0.0 : double(matched) / double(unioned);
    return m;
}

RatioMetrics word_metrics(const WordSet& truth, const WordSet& pred)
{
    return ratio_metrics(multiset_matches(truth, pred), truth.size(), pred.size());
}

RatioMetrics char_metrics(std::string_view truth, std::string_view pred)
{
    const auto histogram = [](std::string_view text, std::size_t& size) {
        std::map<char, std::size_t> h;
        for (char c : fold_case(text)) {
            if (!is_space(c)) {
                ++h[c];
                ++size;
            }
        }
        return h;
    };
    std::size_t truth_size = 0;
    std::size_t pred_size = 0;
    const auto t = histogram(truth, truth_size);
    const auto p = histogram(pred, pred_size);
    return ratio_metrics(count_matches(t, p), truth_size, pred_size);
}

bool sentence_exact(std::string_view truth, std::string_view pred)
{
    return normalize_sentence(truth) == normalize_sentence(pred);
}

RecordMetrics evaluate_text(std::string_view truth, std::string_view pred)
{
    RecordMetrics r;
    const WordSet truth_words = normalize_words(truth);
    r.keyword_count = truth_words.size();
    r.word = word_metrics(truth_words, normalize_words(pred));
    r.character = char_metrics(truth, pred);
    r.sentence_exact = sentence_exact(truth, pred);
    r.nld = nld(normalize_sentence(truth), normalize_sentence(pred));
    return r;
}

void MetricsAccumulator::add(const RecordMetrics& r)
{
    ++count_;
    exact_ += r.sentence_exact ? 1 : 0;
    sums_[kWordP] += r.word.precision;
    sums_[kWordR] += r.word.recall;
    sums_[kWordF1] += r.word.f1;
    sums_[kWordAcc] += r.word.accuracy;
    sums_[kCharP] += r.character.precision;
    sums_[kCharR] += r.character.recall;
    sums_[kCharF1] += r.character.f1;
    sums_[kCharAcc] += r.character.accuracy;
    sums_[kNld] += r.nld;
    sums_[kOverlap] += static_cast<double>(r.overlap_area);
    sums_[kEnergy] += r.overlap_energy;
    sums_[kIou] += r.iou;
}

void MetricsAccumulator::merge(const MetricsAccumulator& other)
{
    count_ += other.count_;
    exact_ += other.exact_;
    for (std::size_t i = 0; i < sums_.size(); ++i) {
        sums_[i] += other.sums_[i];
    }
}

AggregateMetrics MetricsAccumulator::result() const
{
    if (count_ == 0) {
        throw std::invalid_argument("cannot aggregate an empty set of records");
    }
    const double n = static_cast<double>(count_);
    const auto mean = [&](Slot s) { return sums_[s] / n; };
    AggregateMetrics a;
    a.records = count_;
    a.word = {mean(kWordP), mean(kWordR), mean(kWordF1), mean(kWordAcc)};
    a.character = {mean(kCharP), mean(kCharR), mean(kCharF1), mean(kCharAcc)};
    a.sentence_accuracy = static_cast<double>(exact_) / n;
    a.nld = mean(kNld);
    a.overlap_area = mean(kOverlap);
    a.overlap_energy = mean(kEnergy);
    a.iou = mean(kIou);
    return a;
}

AggregateMetrics aggregate(std::span<const RecordMetrics> records)
{
    MetricsAccumulator acc;
    for (const auto& r : records) {
        acc.add(r);
    }
    return acc.result();
}

EvalReport make_report(std::vector<RecordMetrics> records, std::optional<double> clipscore)
{
    EvalReport report;
    report.aggregate = aggregate(records);
    report.records = std::move(records);
    report.clipscore = clipscore;
    return report;
}

} // namespace glyphlab
