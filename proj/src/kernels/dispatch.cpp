#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string>

#include "kernel_impl.hpp"

namespace glyphlab::kernels {

namespace {

const KernelTable kScalarTable{
    SimdLevel::scalar,
    detail::overlap_row_scalar,
    detail::masked_copy_scalar,
    detail::count_differences_scalar,
    detail::count_below_scalar,
    detail::threshold_scalar,
};

const KernelTable* table_for(SimdLevel level)
{
    switch (level) {
    case SimdLevel::scalar: return &kScalarTable;
    case SimdLevel::avx2: return detail::avx2_table_if_built();
    case SimdLevel::neon: return detail::neon_table_if_built();
    }
    return nullptr;
}

std::atomic<const KernelTable*>& current()
{
    static std::atomic<const KernelTable*> table{table_for(detect_level())};
    return table;
}

} // namespace

std::string_view to_string(SimdLevel level)
{
    switch (level) {
    case SimdLevel::scalar: return "scalar";
    case SimdLevel::avx2: return "avx2";
    case SimdLevel::neon: return "neon";
    }
    return "unknown";
}

BoxLanes::BoxLanes(const Layout& layout)
{
    const std::size_t n = layout.entries.size();
    x0.resize(n);
    y0.resize(n);
    x1.resize(n);
    y1.resize(n);
    area.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        set(i, layout.entries[i].box);
    }
}

void BoxLanes::set(std::size_t i, const BoundingBox& box)
{
    x0[i] = box.x0;
    y0[i] = box.y0;
    x1[i] = box.x1;
    y1[i] = box.y1;
    area[i] = static_cast<std::uint32_t>(box.area());
}

const KernelTable& scalar_table() { return kScalarTable; }
const KernelTable* avx2_table() { return detail::avx2_table_if_built(); }
const KernelTable* neon_table() { return detail::neon_table_if_built(); }

SimdLevel detect_level()
{
    if (const char* forced = std::getenv("GLYPHLAB_SIMD")) {
        const std::string name(forced);
        for (SimdLevel level : {SimdLevel::scalar, SimdLevel::avx2, SimdLevel::neon}) {
            if (name == to_string(level) && table_for(level) != nullptr) {
                return level;
            }
        }
    }
    if (avx2_table() != nullptr) {
        return SimdLevel::avx2;
    }
    if (neon_table() != nullptr) {
        return SimdLevel::neon;
    }
    return SimdLevel::scalar;
}

SimdLevel active_level() { return active().level; }

bool set_active_level(SimdLevel level)
{
    const KernelTable* table = table_for(level);
    if (table == nullptr) {
        return false;
    }
    current().store(table);
    return true;
}

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

OverlapRow overlap_row(const BoxLanes& lanes, const BoundingBox& box, std::size_t skip)
{
    const KernelTable& k = active();
    const std::size_t n = lanes.size();
    if (skip >= n) {
        return k.overlap_row(lanes.x0.data(), lanes.y0.data(), lanes.x1.data(), lanes.y1.data(),
                             lanes.area.data(), n, box);
    }
    OverlapRow row = k.overlap_row(lanes.x0.data(), lanes.y0.data(), lanes.x1.data(), lanes.y1.data(),
                                   lanes.area.data(), skip, box);
    const std::size_t rest = skip + 1;
    const OverlapRow after = k.overlap_row(lanes.x0.data() + rest, lanes.y0.data() + rest,
                                           lanes.x1.data() + rest, lanes.y1.data() + rest,
                                           lanes.area.data() + rest, n - rest, box);
    row.raw += after.raw;
    row.weighted += after.weighted;
    return row;
}

void masked_copy(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src,
                 std::span<const std::uint8_t> mask)
{
    assert(src.size() == dst.size() && mask.size() == dst.size());
    active().masked_copy(dst.data(), src.data(), mask.data(), dst.size());
}

std::size_t count_differences(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b)
{
    assert(a.size() == b.size());
    return active().count_differences(a.data(), b.data(), a.size());
}

std::size_t count_below(std::span<const std::uint8_t> px, std::uint8_t threshold)
{
    return active().count_below(px.data(), px.size(), threshold);
}

void threshold(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst, std::uint8_t threshold)
{
    assert(src.size() == dst.size());
    active().threshold(src.data(), dst.data(), src.size(), threshold);
}

} // namespace glyphlab::kernels
