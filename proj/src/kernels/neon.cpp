#include "kernel_impl.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#define GLYPHLAB_HAVE_NEON_VARIANT 1
#include <arm_neon.h>
#endif

namespace glyphlab::kernels::detail {

#if GLYPHLAB_HAVE_NEON_VARIANT

namespace {

OverlapRow overlap_row_neon(const std::int32_t* x0, const std::int32_t* y0, const std::int32_t* x1,
                            const std::int32_t* y1, const std::uint32_t* area, std::size_t n, BoundingBox box)
{
    const int32x4_t bx0 = vdupq_n_s32(box.x0);
    const int32x4_t by0 = vdupq_n_s32(box.y0);
    const int32x4_t bx1 = vdupq_n_s32(box.x1);
    const int32x4_t by1 = vdupq_n_s32(box.y1);
    const uint32x4_t barea = vdupq_n_u32(static_cast<std::uint32_t>(box.area()));
    const int32x4_t zero = vdupq_n_s32(0);

    uint64x2_t acc_raw = vdupq_n_u64(0);
    uint64x2_t acc_weighted = vdupq_n_u64(0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const int32x4_t dx = vmaxq_s32(vsubq_s32(vminq_s32(vld1q_s32(x1 + k), bx1), vmaxq_s32(vld1q_s32(x0 + k), bx0)), zero);
        const int32x4_t dy = vmaxq_s32(vsubq_s32(vminq_s32(vld1q_s32(y1 + k), by1), vmaxq_s32(vld1q_s32(y0 + k), by0)), zero);
        const uint32x4_t overlap = vreinterpretq_u32_s32(vmulq_s32(dx, dy));
        const uint32x4_t weight = vaddq_u32(barea, vld1q_u32(area + k));
        acc_weighted = vmlal_u32(acc_weighted, vget_low_u32(overlap), vget_low_u32(weight));
        acc_weighted = vmlal_u32(acc_weighted, vget_high_u32(overlap), vget_high_u32(weight));
        acc_raw = vaddq_u64(acc_raw, vmovl_u32(vget_low_u32(overlap)));
        acc_raw = vaddq_u64(acc_raw, vmovl_u32(vget_high_u32(overlap)));
    }
    OverlapRow row{static_cast<std::int64_t>(vaddvq_u64(acc_raw)), static_cast<std::int64_t>(vaddvq_u64(acc_weighted))};
    const OverlapRow tail = overlap_row_scalar(x0 + k, y0 + k, x1 + k, y1 + k, area + k, n - k, box);
    row.raw += tail.raw;
    row.weighted += tail.weighted;
    return row;
}

void masked_copy_neon(std::uint8_t* dst, const std::uint8_t* src, const std::uint8_t* mask, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const uint8x16_t keep = vceqq_u8(vld1q_u8(mask + i), vdupq_n_u8(0));
        vst1q_u8(dst + i, vbslq_u8(keep, vld1q_u8(dst + i), vld1q_u8(src + i)));
    }
    masked_copy_scalar(dst + i, src + i, mask + i, n - i);
}

std::size_t count_differences_neon(const std::uint8_t* a, const std::uint8_t* b, std::size_t n)
{
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const uint8x16_t equal = vceqq_u8(vld1q_u8(a + i), vld1q_u8(b + i));
        count += 16 - vaddvq_u8(vandq_u8(equal, vdupq_n_u8(1)));
    }
    return count + count_differences_scalar(a + i, b + i, n - i);
}

std::size_t count_below_neon(const std::uint8_t* px, std::size_t n, std::uint8_t threshold)
{
    const uint8x16_t t = vdupq_n_u8(threshold);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        count += vaddvq_u8(vandq_u8(vcltq_u8(vld1q_u8(px + i), t), vdupq_n_u8(1)));
    }
    return count + count_below_scalar(px + i, n - i, threshold);
}

void threshold_neon(const std::uint8_t* src, std::uint8_t* dst, std::size_t n, std::uint8_t threshold)
{
    const uint8x16_t t = vdupq_n_u8(threshold);
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        vst1q_u8(dst + i, vcgeq_u8(vld1q_u8(src + i), t));
    }
    threshold_scalar(src + i, dst + i, n - i, threshold);
}

const KernelTable kNeonTable{
    SimdLevel::neon,  overlap_row_neon, masked_copy_neon, count_differences_neon,
    count_below_neon, threshold_neon,
};

} // namespace

const KernelTable* neon_table_if_built() { return &kNeonTable; }

#else

const KernelTable* neon_table_if_built() { return nullptr; }

#endif

} // namespace glyphlab::kernels::detail
