#pragma once

#include <cstdint>
#include <string_view>

namespace arcmig {

/// SplitMix64 finaliser.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seed of the independent stream `stream` derived from a master seed:
/// splitmix64(master ^ fnv1a(stream)). Each consumer (noise, identity sweep)
/// owns one named stream, so adding consumers never shifts another's draws.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stream)
{
    return splitmix64(master ^ fnv1a(stream));
}

} // namespace arcmig
