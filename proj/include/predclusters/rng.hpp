#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace predclusters {

// Seeded random stream. All bounded draws go through uniform_index, which
// uses rejection sampling so the sequence of values depends only on the
// seed, not on the standard library's distribution internals.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, n). n must be > 0.
    std::size_t uniform_index(std::size_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return static_cast<std::size_t>(v % n);
    }

    // Uniform allele in [1, n], matching the 1-based gene convention.
    int uniform_allele(int n) { return static_cast<int>(uniform_index(static_cast<std::size_t>(n))) + 1; }

    bool coin() { return (engine_() & 1u) != 0; }

    // Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Two distinct indices in [0, n), uniform over ordered pairs. n >= 2.
    std::pair<std::size_t, std::size_t> distinct_pair(std::size_t n) {
        std::size_t i = uniform_index(n);
        std::size_t j = uniform_index(n - 1);
        if (j >= i) ++j;
        return {i, j};
    }

    // First k entries of a Fisher-Yates pass over 0..n-1.
    std::vector<int> sample_without_replacement(int n, int k) {
        std::vector<int> ids(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
        for (int i = 0; i < k; ++i) {
            const std::size_t j = i + uniform_index(static_cast<std::size_t>(n - i));
            std::swap(ids[static_cast<std::size_t>(i)], ids[j]);
        }
        ids.resize(static_cast<std::size_t>(k));
        return ids;
    }

    // In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace predclusters
