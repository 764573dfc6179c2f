#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace flowcast {

// 64-bit FNV-1a. Also the basis for text feature hashing and the
// label-noise coin in the executor.
inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Derives a named child seed from a root seed. All randomness in the
// pipeline flows from one root through named channels so that partial
// re-runs stay coherent.
inline uint64_t sub_seed(uint64_t root, std::string_view name) {
    uint64_t h = fnv1a64(name) ^ root;
    // splitmix64 finalizer
    h += 0x9e3779b97f4a7c15ULL;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
    return h ^ (h >> 31);
}

// Deterministic RNG wrapper. mt19937_64 output is pinned by the standard;
// the transforms below avoid std::*_distribution, whose results are
// implementation-defined, so streams are identical across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1), 53 bits
    double next_unit() { return (gen_() >> 11) * 0x1.0p-53; }

    // uniform in [0, n)
    uint64_t next_below(uint64_t n) { return gen_() % n; }

    // uniform integer in [lo, hi] inclusive
    int next_int(int lo, int hi) {
        return lo + static_cast<int>(next_below(static_cast<uint64_t>(hi - lo + 1)));
    }

    // uniform in [lo, hi)
    double next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    bool next_bool(double p_true) { return next_unit() < p_true; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = next_below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices from [0, n), order randomized
    std::vector<size_t> sample_indices(size_t n, size_t k) {
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        shuffle(idx);
        idx.resize(k < n ? k : n);
        return idx;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace flowcast
