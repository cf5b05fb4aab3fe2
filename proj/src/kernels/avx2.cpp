#include "kernel_impl.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define GLYPHLAB_HAVE_AVX2_VARIANT 1
#include <immintrin.h>
#endif

namespace glyphlab::kernels::detail {

#if GLYPHLAB_HAVE_AVX2_VARIANT

namespace {

#define AVX2_FN __attribute__((target("avx2,popcnt")))

AVX2_FN std::int64_t horizontal_sum_epi64(__m256i v)
{
    const __m128i lo = _mm256_castsi256_si128(v);
    const __m128i hi = _mm256_extracti128_si256(v, 1);
    const __m128i sum = _mm_add_epi64(lo, hi);
    return _mm_cvtsi128_si64(sum) + _mm_extract_epi64(sum, 1);
}

AVX2_FN OverlapRow overlap_row_avx2(const std::int32_t* x0, const std::int32_t* y0, const std::int32_t* x1,
                                    const std::int32_t* y1, const std::uint32_t* area, std::size_t n,
                                    BoundingBox box)
{
    const __m256i bx0 = _mm256_set1_epi32(box.x0);
    const __m256i by0 = _mm256_set1_epi32(box.y0);
    const __m256i bx1 = _mm256_set1_epi32(box.x1);
    const __m256i by1 = _mm256_set1_epi32(box.y1);
    const __m256i barea = _mm256_set1_epi32(static_cast<std::int32_t>(box.area()));
    const __m256i zero = _mm256_setzero_si256();
    const __m256i low32 = _mm256_set1_epi64x(0xffffffffLL);

    __m256i acc_raw = zero;
    __m256i acc_weighted = zero;
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        const __m256i vx0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x0 + k));
        const __m256i vy0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(y0 + k));
        const __m256i vx1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x1 + k));
        const __m256i vy1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(y1 + k));
        const __m256i dx = _mm256_max_epi32(
            _mm256_sub_epi32(_mm256_min_epi32(vx1, bx1), _mm256_max_epi32(vx0, bx0)), zero);
        const __m256i dy = _mm256_max_epi32(
            _mm256_sub_epi32(_mm256_min_epi32(vy1, by1), _mm256_max_epi32(vy0, by0)), zero);
        // dx, dy <= 2^12, so the product fits 32 bits
        const __m256i overlap = _mm256_mullo_epi32(dx, dy);
        const __m256i weight = _mm256_add_epi32(
            barea, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(area + k)));

        const __m256i w_even = _mm256_mul_epu32(overlap, weight);
        const __m256i w_odd = _mm256_mul_epu32(_mm256_srli_epi64(overlap, 32), _mm256_srli_epi64(weight, 32));
        acc_weighted = _mm256_add_epi64(acc_weighted, _mm256_add_epi64(w_even, w_odd));

        const __m256i r_even = _mm256_and_si256(overlap, low32);
        const __m256i r_odd = _mm256_srli_epi64(overlap, 32);
        acc_raw = _mm256_add_epi64(acc_raw, _mm256_add_epi64(r_even, r_odd));
    }

    OverlapRow row{horizontal_sum_epi64(acc_raw), horizontal_sum_epi64(acc_weighted)};
    const OverlapRow tail = overlap_row_scalar(x0 + k, y0 + k, x1 + k, y1 + k, area + k, n - k, box);
    row.raw += tail.raw;
    row.weighted += tail.weighted;
    return row;
}

AVX2_FN void masked_copy_avx2(std::uint8_t* dst, const std::uint8_t* src, const std::uint8_t* mask, std::size_t n)
{
    const __m256i zero = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        const __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mask + i));
        const __m256i keep = _mm256_cmpeq_epi8(m, zero);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_blendv_epi8(s, d, keep));
    }
    masked_copy_scalar(dst + i, src + i, mask + i, n - i);
}

AVX2_FN std::size_t count_differences_avx2(const std::uint8_t* a, const std::uint8_t* b, std::size_t n)
{
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const auto equal = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb)));
        count += 32 - static_cast<std::size_t>(_mm_popcnt_u32(equal));
    }
    return count + count_differences_scalar(a + i, b + i, n - i);
}

AVX2_FN std::size_t count_below_avx2(const std::uint8_t* px, std::size_t n, std::uint8_t threshold)
{
    const __m256i t = _mm256_set1_epi8(static_cast<char>(threshold));
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(px + i));
        // v >= t  <=>  max(v, t) == v
        const __m256i at_least = _mm256_cmpeq_epi8(_mm256_max_epu8(v, t), v);
        const auto bits = static_cast<std::uint32_t>(_mm256_movemask_epi8(at_least));
        count += 32 - static_cast<std::size_t>(_mm_popcnt_u32(bits));
    }
    return count + count_below_scalar(px + i, n - i, threshold);
}

AVX2_FN void threshold_avx2(const std::uint8_t* src, std::uint8_t* dst, std::size_t n, std::uint8_t threshold)
{
    const __m256i t = _mm256_set1_epi8(static_cast<char>(threshold));
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_cmpeq_epi8(_mm256_max_epu8(v, t), v));
    }
    threshold_scalar(src + i, dst + i, n - i, threshold);
}

#undef AVX2_FN

const KernelTable kAvx2Table{
    SimdLevel::avx2,     overlap_row_avx2, masked_copy_avx2, count_differences_avx2,
    count_below_avx2,    threshold_avx2,
};

} // namespace

const KernelTable* avx2_table_if_built()
{
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt") ? &kAvx2Table : nullptr;
}

#else

const KernelTable* avx2_table_if_built() { return nullptr; }

#endif

} // namespace glyphlab::kernels::detail
