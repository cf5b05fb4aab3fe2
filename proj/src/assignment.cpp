#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>
#include <stdexcept>

#include "glyphlab/pipeline.hpp"

namespace glyphlab {

namespace {

// Above any edit distance * kEditWeight a real pairing can reach.
constexpr double kEditWeight = 1e7;
constexpr double kUnassigned = 1e15;

double centre_distance(const BoundingBox& a, const BoundingBox& b)
{
    const double dx = (a.x0 + a.x1) - (b.x0 + b.x1);
    const double dy = (a.y0 + a.y1) - (b.y0 + b.y1);
    return 0.5 * std::sqrt(dx * dx + dy * dy);
}

bool detection_less(const OcrDetection& a, const OcrDetection& b)
{
    return std::tie(a.box.y0, a.box.x0, a.box.y1, a.box.x1, a.word, a.confidence) <
           std::tie(b.box.y0, b.box.x0, b.box.y1, b.box.x1, b.word, b.confidence);
}

std::string joined(const Layout& layout)
{
    std::string out;
    for (const auto& e : layout.entries) {
        if (!out.empty()) {
            out += ' ';
        }
        out += e.word;
    }
    return out;
}

} // namespace

// Shortest augmenting paths with potentials, O(rows^2 * cols).
std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost)
{
    const std::size_t n = cost.size();
    if (n == 0) {
        return {};
    }
    const std::size_t m = cost.front().size();
    if (n > m) {
        throw std::invalid_argument("min_cost_assignment needs rows <= cols");
    }
    for (const auto& row : cost) {
        if (row.size() != m) {
            throw std::invalid_argument("min_cost_assignment needs a rectangular matrix");
        }
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) {
                    continue;
                }
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> assignment(n, 0);
    for (std::size_t j = 1; j <= m; ++j) {
        if (p[j] != 0) {
            assignment[p[j] - 1] = j - 1;
        }
    }
    return assignment;
}

std::vector<MisspellingFlag> detect_misspellings(const Layout& truth, const OcrResult& ocr, MaskSource mask_source)
{
    const std::size_t n = truth.entries.size();
    if (n == 0) {
        return {};
    }
    std::vector<std::size_t> order(ocr.detections.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return detection_less(ocr.detections[a], ocr.detections[b]);
    });

    // Padding columns stand for "unassigned".
    const std::size_t m = std::max(n, order.size()) + n;
    std::vector<std::vector<double>> cost(n, std::vector<double>(m, kUnassigned));
    std::vector<std::string> keys(n);
    for (std::size_t i = 0; i < n; ++i) {
        keys[i] = fold_case(truth.entries[i].word);
        for (std::size_t j = 0; j < order.size(); ++j) {
            const OcrDetection& d = ocr.detections[order[j]];
            cost[i][j] = static_cast<double>(levenshtein(keys[i], fold_case(d.word))) * kEditWeight +
                         centre_distance(truth.entries[i].box, d.box);
        }
    }
    const auto assignment = min_cost_assignment(cost);

    std::vector<MisspellingFlag> flags;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = assignment[i];
        if (j >= order.size()) {
            flags.push_back({i, truth.entries[i].box, std::nullopt});
            continue;
        }
        const OcrDetection& d = ocr.detections[order[j]];
        if (fold_case(d.word) != keys[i]) {
            const BoundingBox region = mask_source == MaskSource::detected ? d.box : truth.entries[i].box;
            flags.push_back({i, region, order[j]});
        }
    }
    return flags;
}

std::string ocr_text(const OcrResult& ocr)
{
    std::string out;
    for (const auto& d : ocr.detections) {
        if (!out.empty()) {
            out += ' ';
        }
        out += d.word;
    }
    return out;
}

RatioMetrics ocr_word_metrics(const Layout& truth, const OcrResult& ocr)
{
    return word_metrics(normalize_words(joined(truth)), normalize_words(ocr_text(ocr)));
}

} // namespace glyphlab
