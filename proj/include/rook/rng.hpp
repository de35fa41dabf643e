#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace rook {

// Thin wrapper around mt19937_64. All sampling goes through next()/below()
// so that the draw sequence is pinned by the standard-specified engine and
// results reproduce across runs for a fixed seed.
class Rng {
   public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    // uniform-ish draw in [0, n); modulo bias is irrelevant at desk scale
    uint64_t below(uint64_t n) { return n <= 1 ? 0 : next() % n; }

   private:
    std::mt19937_64 eng_;
};

// Partial Fisher-Yates: m distinct indices out of [0, n), returned sorted.
inline std::vector<int> sample_subset(Rng& rng, int n, int m) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < m; ++i) {
        int j = i + static_cast<int>(rng.below(static_cast<uint64_t>(n - i)));
        std::swap(pool[i], pool[j]);
    }
    std::vector<int> out(pool.begin(), pool.begin() + m);
    std::sort(out.begin(), out.end());
    return out;
}

// full shuffle of [0, n)
inline std::vector<int> shuffled_indices(Rng& rng, int n) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i + 1 < n; ++i) {
        int j = i + static_cast<int>(rng.below(static_cast<uint64_t>(n - i)));
        std::swap(pool[i], pool[j]);
    }
    return pool;
}

// Lexicographic m-combinations of [0, n). Returns false when exhausted.
inline bool next_combination(std::vector<int>& c, int n) {
    int m = static_cast<int>(c.size());
    for (int i = m - 1; i >= 0; --i) {
        if (c[i] < n - m + i) {
            ++c[i];
            for (int j = i + 1; j < m; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

inline std::vector<int> first_combination(int m) {
    std::vector<int> c(m);
    for (int i = 0; i < m; ++i) c[i] = i;
    return c;
}

// C(n, m) with saturation, for search-space guards
inline uint64_t binomial(int n, int m) {
    if (m < 0 || m > n) return 0;
    m = std::min(m, n - m);
    uint64_t r = 1;
    for (int i = 1; i <= m; ++i) {
        r = r * static_cast<uint64_t>(n - m + i) / static_cast<uint64_t>(i);
        if (r > (1ull << 40)) return 1ull << 40;  // saturate well above any guard
    }
    return r;
}

}  // namespace rook
