#pragma once

// Independent oracles and fixtures. Nothing here calls the code under test
// except for plain data types and the Rng.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "glyphlab/geometry.hpp"
#include "glyphlab/rng.hpp"

namespace oracle {

using glyphlab::BoundingBox;
using glyphlab::Layout;

/// Cell-by-cell counts over the canvas.
struct Raster {
    std::int64_t total_overlap = 0;
    std::int64_t union_cells = 0;
    std::vector<std::vector<std::int64_t>> pair; // upper triangle used
};

inline Raster rasterize(const Layout& layout)
{
    const std::size_t n = layout.entries.size();
    Raster r;
    r.pair.assign(n, std::vector<std::int64_t>(n, 0));
    std::vector<std::uint32_t> cover(static_cast<std::size_t>(layout.canvas_width) * layout.canvas_height, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const BoundingBox& b = layout.entries[i].box;
        for (int y = b.y0; y < b.y1; ++y) {
            for (int x = b.x0; x < b.x1; ++x) {
                cover[static_cast<std::size_t>(y) * layout.canvas_width + x] |= 1u << i;
            }
        }
    }
    for (const std::uint32_t bits : cover) {
        if (bits == 0) {
            continue;
        }
        ++r.union_cells;
        if ((bits & (bits - 1)) == 0) {
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!(bits >> i & 1u)) {
                continue;
            }
            for (std::size_t j = i + 1; j < n; ++j) {
                if (bits >> j & 1u) {
                    ++r.pair[i][j];
                    ++r.total_overlap;
                }
            }
        }
    }
    return r;
}

inline std::int64_t raster_pair(const BoundingBox& a, const BoundingBox& b)
{
    std::int64_t count = 0;
    for (int y = a.y0; y < a.y1; ++y) {
        for (int x = a.x0; x < a.x1; ++x) {
            count += (x >= b.x0 && x < b.x1 && y >= b.y0 && y < b.y1) ? 1 : 0;
        }
    }
    return count;
}

inline double weighted_energy(const Layout& layout)
{
    const auto area = [](const BoundingBox& b) { return std::int64_t(b.x1 - b.x0) * (b.y1 - b.y0); };
    const auto overlap = [](const BoundingBox& a, const BoundingBox& b) {
        const std::int64_t w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
        const std::int64_t h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
        return w > 0 && h > 0 ? w * h : 0;
    };
    std::int64_t num = 0;
    const auto& e = layout.entries;
    for (std::size_t i = 0; i < e.size(); ++i) {
        for (std::size_t j = i + 1; j < e.size(); ++j) {
            num += overlap(e[i].box, e[j].box) * (area(e[i].box) + area(e[j].box));
        }
    }
    return num == 0 ? 0.0 : double(num) / (double(layout.canvas_width) * layout.canvas_height);
}

/// Full (|a|+1) x (|b|+1) table.
inline std::size_t levenshtein_table(const std::string& a, const std::string& b)
{
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) {
        d[i][0] = i;
    }
    for (std::size_t j = 0; j <= b.size(); ++j) {
        d[0][j] = j;
    }
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        }
    }
    return d[a.size()][b.size()];
}

inline double nld_table(const std::string& a, const std::string& b)
{
    const std::size_t m = std::max(a.size(), b.size());
    return m == 0 ? 0.0 : 100.0 * static_cast<double>(levenshtein_table(a, b)) / static_cast<double>(m);
}

/// Minimum total over every injective row -> column map.
inline double exhaustive_assignment(const std::vector<std::vector<double>>& cost)
{
    const std::size_t n = cost.size();
    if (n == 0) {
        return 0.0;
    }
    const std::size_t m = cost[0].size();
    std::vector<std::size_t> cols(m);
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            total += cost[i][cols[i]];
        }
        best = std::min(best, total);
    } while (std::next_permutation(cols.begin(), cols.end()));
    return best;
}

inline std::string random_string(glyphlab::Rng& rng, std::size_t max_len, std::string_view alphabet = "abcd")
{
    std::string s(rng.below(max_len + 1), ' ');
    for (char& c : s) {
        c = alphabet[rng.below(alphabet.size())];
    }
    return s;
}

/// Uniform random boxes on the canvas (side 1..max_side).
inline Layout random_layout(glyphlab::Rng& rng, int canvas, std::size_t min_boxes, std::size_t max_boxes,
                            int max_side = 256)
{
    Layout layout{canvas, canvas, {}};
    const auto n = static_cast<std::size_t>(rng.between(std::int64_t(min_boxes), std::int64_t(max_boxes)));
    for (std::size_t i = 0; i < n; ++i) {
        const int w = static_cast<int>(rng.between(1, max_side));
        const int h = static_cast<int>(rng.between(1, max_side));
        const int x = static_cast<int>(rng.between(0, canvas - w));
        const int y = static_cast<int>(rng.between(0, canvas - h));
        layout.entries.push_back({"w" + std::to_string(i), {x, y, x + w, y + h}});
    }
    return layout;
}

/// Keyword-sized boxes scattered around a common centre, so most pairs overlap.
/// The spread gives a median starting IoU near 0.4.
inline Layout clustered_layout(glyphlab::Rng& rng, std::size_t min_boxes, std::size_t max_boxes)
{
    constexpr int kCanvas = 512;
    constexpr double kSigma = 55.0;
    Layout layout{kCanvas, kCanvas, {}};
    const auto n = static_cast<std::size_t>(rng.between(std::int64_t(min_boxes), std::int64_t(max_boxes)));
    for (std::size_t i = 0; i < n; ++i) {
        const int w = static_cast<int>(rng.between(48, 160));
        const int h = static_cast<int>(rng.between(24, 56));
        // Box-Muller
        const double u1 = 1.0 - rng.uniform01();
        const double u2 = rng.uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double cx = kCanvas / 2.0 + kSigma * r * std::cos(2.0 * M_PI * u2);
        const double cy = kCanvas / 2.0 + kSigma * r * std::sin(2.0 * M_PI * u2);
        const int x = std::clamp(static_cast<int>(std::lround(cx - w / 2.0)), 0, kCanvas - w);
        const int y = std::clamp(static_cast<int>(std::lround(cy - h / 2.0)), 0, kCanvas - h);
        layout.entries.push_back({"k" + std::to_string(i), {x, y, x + w, y + h}});
    }
    return layout;
}

inline double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace oracle
