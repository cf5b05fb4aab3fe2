#include <doctest.h>

#include <stdexcept>

#include <vector>

#include "glyphlab/kernels.hpp"
#include "support.hpp"

using namespace glyphlab;
using namespace glyphlab::kernels;

namespace {

std::vector<const KernelTable*> variants()
{
    std::vector<const KernelTable*> out{&scalar_table()};
    if (const auto* t = avx2_table()) {
        out.push_back(t);
    }
    if (const auto* t = neon_table()) {
        out.push_back(t);
    }
    return out;
}

std::vector<std::uint8_t> random_bytes(Rng& rng, std::size_t n)
{
    std::vector<std::uint8_t> v(n);
    for (auto& b : v) {
        b = static_cast<std::uint8_t>(rng.below(256));
    }
    return v;
}

// Reference written against plain boxes.
OverlapRow reference_row(const Layout& l, const BoundingBox& box, std::size_t skip)
{
    OverlapRow r;
    for (std::size_t k = 0; k < l.entries.size(); ++k) {
        if (k == skip) {
            continue;
        }
        const std::int64_t o = oracle::raster_pair(box, l.entries[k].box);
        r.raw += o;
        r.weighted += o * (box.area() + l.entries[k].box.area());
    }
    return r;
}

} // namespace

TEST_CASE("overlap row variants agree with the reference")
{
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        // sizes straddle every vector width so tails are exercised
        const Layout l = oracle::random_layout(rng, 96, 0, 21, 48);
        const BoxLanes lanes(l);
        const int w = static_cast<int>(rng.between(1, 48));
        const int h = static_cast<int>(rng.between(1, 48));
        const int x = static_cast<int>(rng.between(0, 96 - w));
        const int y = static_cast<int>(rng.between(0, 96 - h));
        const BoundingBox probe{x, y, x + w, y + h};
        const std::size_t skip = l.entries.empty() ? 0 : rng.below(l.entries.size() + 1);
        const OverlapRow expected = reference_row(l, probe, skip);
        for (const auto* t : variants()) {
            CAPTURE(to_string(t->level));
            OverlapRow got;
            if (skip < lanes.size()) {
                const OverlapRow a = t->overlap_row(lanes.x0.data(), lanes.y0.data(), lanes.x1.data(),
                                                    lanes.y1.data(), lanes.area.data(), skip, probe);
                const std::size_t rest = lanes.size() - skip - 1;
                const OverlapRow b = t->overlap_row(lanes.x0.data() + skip + 1, lanes.y0.data() + skip + 1,
                                                    lanes.x1.data() + skip + 1, lanes.y1.data() + skip + 1,
                                                    lanes.area.data() + skip + 1, rest, probe);
                got = {a.raw + b.raw, a.weighted + b.weighted};
            } else {
                got = t->overlap_row(lanes.x0.data(), lanes.y0.data(), lanes.x1.data(), lanes.y1.data(),
                                     lanes.area.data(), lanes.size(), probe);
            }
            CHECK(got == expected);
        }
        CHECK(overlap_row(lanes, probe, skip) == expected);
    }
}

TEST_CASE("overlap row handles large weights without overflow")
{
    Layout l{4096, 4096, {}};
    for (int i = 0; i < 40; ++i) {
        l.entries.push_back({"w", {0, 0, 4096, 4096}});
    }
    const BoxLanes lanes(l);
    for (const auto* t : variants()) {
        const OverlapRow r = t->overlap_row(lanes.x0.data(), lanes.y0.data(), lanes.x1.data(), lanes.y1.data(),
                                            lanes.area.data(), lanes.size(), {0, 0, 4096, 4096});
        CHECK(r.raw == 40LL * 4096 * 4096);
        CHECK(r.weighted == 40LL * 4096 * 4096 * 2 * 4096 * 4096);
    }
}

TEST_CASE("pixel kernels agree across variants")
{
    Rng rng(5);
    for (std::size_t n : {0u, 1u, 7u, 31u, 32u, 33u, 63u, 64u, 65u, 1000u, 4099u}) {
        const auto a = random_bytes(rng, n);
        auto b = a;
        for (auto& v : b) {
            if (rng.bernoulli(0.3)) {
                v = static_cast<std::uint8_t>(rng.below(256));
            }
        }
        auto mask = random_bytes(rng, n);
        for (auto& m : mask) {
            m = rng.bernoulli(0.5) ? m : 0;
        }
        const auto threshold_value = static_cast<std::uint8_t>(rng.below(256));

        std::size_t diffs = 0;
        std::size_t below = 0;
        std::vector<std::uint8_t> copied = a;
        std::vector<std::uint8_t> thresholded(n);
        for (std::size_t i = 0; i < n; ++i) {
            diffs += a[i] != b[i];
            below += a[i] < threshold_value;
            if (mask[i] != 0) {
                copied[i] = b[i];
            }
            thresholded[i] = a[i] < threshold_value ? 0 : 255;
        }

        for (const auto* t : variants()) {
            CAPTURE(to_string(t->level));
            CAPTURE(n);
            CHECK(t->count_differences(a.data(), b.data(), n) == diffs);
            CHECK(t->count_below(a.data(), n, threshold_value) == below);
            std::vector<std::uint8_t> dst = a;
            t->masked_copy(dst.data(), b.data(), mask.data(), n);
            CHECK(dst == copied);
            std::vector<std::uint8_t> out(n, 7);
            t->threshold(a.data(), out.data(), n, threshold_value);
            CHECK(out == thresholded);
        }
    }
}

TEST_CASE("level selection")
{
    const SimdLevel original = active_level();
    CHECK(set_active_level(SimdLevel::scalar));
    CHECK(active().level == SimdLevel::scalar);
    if (avx2_table() == nullptr) {
        CHECK_FALSE(set_active_level(SimdLevel::avx2));
        CHECK(active_level() == SimdLevel::scalar);
    }
    CHECK(set_active_level(original));
    CHECK(to_string(SimdLevel::avx2) == "avx2");
}
