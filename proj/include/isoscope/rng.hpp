#pragma once

#include <cstdint>
#include <vector>

namespace isoscope {

// splitmix64 (Steele/Lea/Vigna). Chosen over std::mt19937 because the
// output sequence is fully pinned by the published constants, so any
// reimplementation reproduces the same shuffles from the same seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// In-place Fisher-Yates, iterating i = n-1 .. 1 with j = next() % (i+1).
// The modulo draw is part of the pinned shuffle contract.
template <typename T>
void fisher_yates(std::vector<T>& v, SplitMix64& gen) {
    if (v.size() < 2) return;
    for (std::size_t i = v.size() - 1; i >= 1; --i) {
        std::size_t j = static_cast<std::size_t>(gen.next() % (i + 1));
        std::swap(v[i], v[j]);
    }
}

inline std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    SplitMix64 gen(seed);
    fisher_yates(idx, gen);
    return idx;
}

} // namespace isoscope
