#pragma once

#include "glyphlab/kernels.hpp"

namespace glyphlab::kernels::detail {

OverlapRow overlap_row_scalar(const std::int32_t* x0, const std::int32_t* y0, const std::int32_t* x1,
                              const std::int32_t* y1, const std::uint32_t* area, std::size_t n,
                              BoundingBox box);
void masked_copy_scalar(std::uint8_t* dst, const std::uint8_t* src, const std::uint8_t* mask, std::size_t n);
std::size_t count_differences_scalar(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
std::size_t count_below_scalar(const std::uint8_t* px, std::size_t n, std::uint8_t threshold);
void threshold_scalar(const std::uint8_t* src, std::uint8_t* dst, std::size_t n, std::uint8_t threshold);

// Defined only when the matching variant is compiled in.
const KernelTable* avx2_table_if_built();
const KernelTable* neon_table_if_built();

} // namespace glyphlab::kernels::detail
