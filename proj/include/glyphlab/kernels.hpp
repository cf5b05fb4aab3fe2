#pragma once

// Data-parallel inner loops with scalar, AVX2 and NEON variants.
//
// Every variant computes bit-identical results (integer arithmetic only), so
// the selected instruction set never changes annealing trajectories or
// rendered pixels. The active table is picked at startup from the CPU and can
// be forced with GLYPHLAB_SIMD=scalar|avx2|neon.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "glyphlab/geometry.hpp"

namespace glyphlab::kernels {

enum class SimdLevel { scalar, avx2, neon };

std::string_view to_string(SimdLevel level);

/// Structure-of-arrays copy of layout boxes for the overlap row kernel.
struct BoxLanes {
    std::vector<std::int32_t> x0, y0, x1, y1;
    std::vector<std::uint32_t> area;

    BoxLanes() = default;
    explicit BoxLanes(const Layout& layout);

    std::size_t size() const { return x0.size(); }
    void set(std::size_t i, const BoundingBox& box);
    BoundingBox box(std::size_t i) const { return {x0[i], y0[i], x1[i], y1[i]}; }
};

/// Overlap sums of one box against a run of boxes.
struct OverlapRow {
    std::int64_t raw = 0;      ///< sum of intersection areas
    std::int64_t weighted = 0; ///< sum of intersection * (area_box + area_k)

    friend bool operator==(const OverlapRow&, const OverlapRow&) = default;
};

struct KernelTable {
    SimdLevel level;
    OverlapRow (*overlap_row)(const std::int32_t* x0, const std::int32_t* y0, const std::int32_t* x1,
                              const std::int32_t* y1, const std::uint32_t* area, std::size_t n,
                              BoundingBox box);
    void (*masked_copy)(std::uint8_t* dst, const std::uint8_t* src, const std::uint8_t* mask, std::size_t n);
    std::size_t (*count_differences)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
    std::size_t (*count_below)(const std::uint8_t* px, std::size_t n, std::uint8_t threshold);
    void (*threshold)(const std::uint8_t* src, std::uint8_t* dst, std::size_t n, std::uint8_t threshold);
};

const KernelTable& scalar_table();
/// nullptr when the variant is not compiled in or the CPU lacks it.
const KernelTable* avx2_table();
const KernelTable* neon_table();

/// Best supported level, honouring GLYPHLAB_SIMD.
SimdLevel detect_level();
SimdLevel active_level();
/// Returns false (and leaves the selection alone) if `level` is unsupported.
bool set_active_level(SimdLevel level);
const KernelTable& active();

// Convenience wrappers over the active table.

/// Overlap of `box` against every lane except `skip` (pass size() to skip none).
OverlapRow overlap_row(const BoxLanes& lanes, const BoundingBox& box, std::size_t skip);

/// dst[i] = src[i] wherever mask[i] != 0.
void masked_copy(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src,
                 std::span<const std::uint8_t> mask);

std::size_t count_differences(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// Number of pixels strictly darker than `threshold`.
std::size_t count_below(std::span<const std::uint8_t> px, std::uint8_t threshold);

/// dst[i] = src[i] < threshold ? 0 : 255.
void threshold(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst, std::uint8_t threshold);

} // namespace glyphlab::kernels
