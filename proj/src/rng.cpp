#include "glyphlab/rng.hpp"

namespace glyphlab {

std::uint64_t Rng::below(std::uint64_t n)
{
    // rejection sampling over the largest multiple of n
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) {
        x = engine_();
    }
    return x % n;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index)
{
    return splitmix64(splitmix64(seed) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view key)
{
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (unsigned char c : key) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return derive_seed(seed, h);
}

} // namespace glyphlab
