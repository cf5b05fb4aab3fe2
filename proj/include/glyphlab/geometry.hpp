#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace glyphlab {

/// Limits that keep the weighted overlap numerator exact in 64-bit integers:
/// each pair term is at most 2^24 * 2^25 and there are fewer than 2^13 pairs.
inline constexpr int kMaxCanvasDim = 4096;
inline constexpr std::size_t kMaxLayoutEntries = 128;

/// Axis-aligned box on the pixel grid, half-open: [x0, x1) x [y0, y1).
struct BoundingBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    std::int64_t area() const { return std::int64_t(width()) * height(); }
    bool valid() const { return x0 < x1 && y0 < y1; }

    bool contains(const BoundingBox& other) const
    {
        return x0 <= other.x0 && y0 <= other.y0 && other.x1 <= x1 && other.y1 <= y1;
    }

    BoundingBox translated(int dx, int dy) const { return {x0 + dx, y0 + dy, x1 + dx, y1 + dy}; }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct LayoutEntry {
    std::string word;
    BoundingBox box;

    friend bool operator==(const LayoutEntry&, const LayoutEntry&) = default;
};

/// Keyword boxes on a canvas, in prompt order.
struct Layout {
    int canvas_width = 0;
    int canvas_height = 0;
    std::vector<LayoutEntry> entries;

    std::int64_t canvas_area() const { return std::int64_t(canvas_width) * canvas_height; }
    BoundingBox canvas_box() const { return {0, 0, canvas_width, canvas_height}; }

    friend bool operator==(const Layout&, const Layout&) = default;
};

class InvalidLayout : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InfeasiblePlacement : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws InvalidLayout when the canvas or any box breaks the layout invariants.
void validate(const Layout& layout);

std::int64_t pair_overlap_area(const BoundingBox& a, const BoundingBox& b);

/// Sum of pairwise intersections over unordered pairs.
std::int64_t total_overlap_area(const Layout& layout);

/// Area covered by at least one box.
std::int64_t union_area(const Layout& layout);

/// Integer numerator of the weighted overlap energy:
/// sum over pairs of overlap(i,j) * (area_i + area_j).
std::int64_t weighted_overlap_numerator(const Layout& layout);

/// Weighted overlap energy, numerator / canvas area. Zero iff no box pair
/// intersects; heavier for larger boxes.
double weighted_overlap_energy(const Layout& layout);

/// Sum of pairwise intersections over the union area; 0 for an empty layout.
/// Equals the usual IoU for two boxes and may exceed 1 for stacked layouts.
double layout_iou(const Layout& layout);

/// Minimal translation placing `box` inside the canvas. Throws
/// InfeasiblePlacement when the box is larger than the canvas.
BoundingBox clamp_to_canvas(const BoundingBox& box, int canvas_width, int canvas_height);

inline BoundingBox clamp_to_canvas(const BoundingBox& box, const Layout& layout)
{
    return clamp_to_canvas(box, layout.canvas_width, layout.canvas_height);
}

/// Intersection, or an invalid (empty) box when disjoint.
BoundingBox intersection(const BoundingBox& a, const BoundingBox& b);

} // namespace glyphlab
