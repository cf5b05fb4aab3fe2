#include <algorithm>

#include "kernel_impl.hpp"

namespace glyphlab::kernels::detail {

OverlapRow overlap_row_scalar(const std::int32_t* x0, const std::int32_t* y0, const std::int32_t* x1,
                              const std::int32_t* y1, const std::uint32_t* area, std::size_t n,
                              BoundingBox box)
{
    const auto box_area = static_cast<std::uint32_t>(box.area());
    OverlapRow row;
    for (std::size_t k = 0; k < n; ++k) {
        const std::int32_t dx = std::min(x1[k], box.x1) - std::max(x0[k], box.x0);
        const std::int32_t dy = std::min(y1[k], box.y1) - std::max(y0[k], box.y0);
        if (dx <= 0 || dy <= 0) {
            continue;
        }
        const auto overlap = static_cast<std::uint64_t>(dx) * static_cast<std::uint64_t>(dy);
        const std::uint32_t weight = box_area + area[k];
        row.raw += static_cast<std::int64_t>(overlap);
        row.weighted += static_cast<std::int64_t>(overlap * weight);
    }
    return row;
}

void masked_copy_scalar(std::uint8_t* dst, const std::uint8_t* src, const std::uint8_t* mask, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        if (mask[i] != 0) {
            dst[i] = src[i];
        }
    }
}

std::size_t count_differences_scalar(const std::uint8_t* a, const std::uint8_t* b, std::size_t n)
{
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        count += a[i] != b[i];
    }
    return count;
}

std::size_t count_below_scalar(const std::uint8_t* px, std::size_t n, std::uint8_t threshold)
{
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        count += px[i] < threshold;
    }
    return count;
}

void threshold_scalar(const std::uint8_t* src, std::uint8_t* dst, std::size_t n, std::uint8_t threshold)
{
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] = src[i] < threshold ? 0 : 255;
    }
}

} // namespace glyphlab::kernels::detail
