#include "glyphlab/geometry.hpp"

#include <algorithm>
#include <string>

#include "glyphlab/kernels.hpp"

namespace glyphlab {

namespace {

// Sum of the overlap rows of each box against the boxes after it.
kernels::OverlapRow upper_triangle(const Layout& layout)
{
    const kernels::BoxLanes lanes(layout);
    const kernels::KernelTable& k = kernels::active();
    kernels::OverlapRow total;
    for (std::size_t i = 0; i + 1 < lanes.size(); ++i) {
        const std::size_t j = i + 1;
        const kernels::OverlapRow row =
            k.overlap_row(lanes.x0.data() + j, lanes.y0.data() + j, lanes.x1.data() + j, lanes.y1.data() + j,
                          lanes.area.data() + j, lanes.size() - j, layout.entries[i].box);
        total.raw += row.raw;
        total.weighted += row.weighted;
    }
    return total;
}

} // namespace

void validate(const Layout& layout)
{
    if (layout.canvas_width <= 0 || layout.canvas_height <= 0) {
        throw InvalidLayout("canvas dimensions must be positive");
    }
    if (layout.canvas_width > kMaxCanvasDim || layout.canvas_height > kMaxCanvasDim) {
        throw InvalidLayout("canvas dimensions must not exceed " + std::to_string(kMaxCanvasDim));
    }
    if (layout.entries.size() > kMaxLayoutEntries) {
        throw InvalidLayout("at most " + std::to_string(kMaxLayoutEntries) + " keywords per layout");
    }
    const BoundingBox canvas = layout.canvas_box();
    for (std::size_t i = 0; i < layout.entries.size(); ++i) {
        const BoundingBox& b = layout.entries[i].box;
        if (!b.valid()) {
            throw InvalidLayout("box " + std::to_string(i) + " (" + layout.entries[i].word +
                                ") has non-positive width or height");
        }
        if (!canvas.contains(b)) {
            throw InvalidLayout("box " + std::to_string(i) + " (" + layout.entries[i].word +
                                ") lies outside the canvas");
        }
    }
}

std::int64_t pair_overlap_area(const BoundingBox& a, const BoundingBox& b)
{
    const std::int64_t dx = std::int64_t(std::min(a.x1, b.x1)) - std::max(a.x0, b.x0);
    const std::int64_t dy = std::int64_t(std::min(a.y1, b.y1)) - std::max(a.y0, b.y0);
    return dx > 0 && dy > 0 ? dx * dy : 0;
}

std::int64_t total_overlap_area(const Layout& layout) { return upper_triangle(layout).raw; }

std::int64_t weighted_overlap_numerator(const Layout& layout) { return upper_triangle(layout).weighted; }

double weighted_overlap_energy(const Layout& layout)
{
    const std::int64_t numerator = weighted_overlap_numerator(layout);
    return numerator == 0 ? 0.0 : static_cast<double>(numerator) / static_cast<double>(layout.canvas_area());
}

std::int64_t union_area(const Layout& layout)
{
    // coordinate-compressed cell cover
    std::vector<int> xs;
    std::vector<int> ys;
    for (const auto& e : layout.entries) {
        xs.insert(xs.end(), {e.box.x0, e.box.x1});
        ys.insert(ys.end(), {e.box.y0, e.box.y1});
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    std::int64_t total = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
            const bool covered = std::any_of(layout.entries.begin(), layout.entries.end(), [&](const LayoutEntry& e) {
                return e.box.x0 <= xs[i] && xs[i + 1] <= e.box.x1 && e.box.y0 <= ys[j] && ys[j + 1] <= e.box.y1;
            });
            if (covered) {
                total += std::int64_t(xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
            }
        }
    }
    return total;
}

double layout_iou(const Layout& layout)
{
    const std::int64_t uni = union_area(layout);
    if (uni == 0) {
        return 0.0;
    }
    return static_cast<double>(total_overlap_area(layout)) / static_cast<double>(uni);
}

BoundingBox clamp_to_canvas(const BoundingBox& box, int canvas_width, int canvas_height)
{
    if (box.width() > canvas_width || box.height() > canvas_height) {
        throw InfeasiblePlacement("box of " + std::to_string(box.width()) + "x" + std::to_string(box.height()) +
                                  " does not fit a " + std::to_string(canvas_width) + "x" +
                                  std::to_string(canvas_height) + " canvas");
    }
    int dx = 0;
    int dy = 0;
    if (box.x0 < 0) {
        dx = -box.x0;
    } else if (box.x1 > canvas_width) {
        dx = canvas_width - box.x1;
    }
    if (box.y0 < 0) {
        dy = -box.y0;
    } else if (box.y1 > canvas_height) {
        dy = canvas_height - box.y1;
    }
    return box.translated(dx, dy);
}

BoundingBox intersection(const BoundingBox& a, const BoundingBox& b)
{
    return {std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1), std::min(a.y1, b.y1)};
}

} // namespace glyphlab
