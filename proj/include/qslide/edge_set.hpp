#pragma once
// Fixed-width edge bitvector over the cube edge universe. 128 bits covers
// n <= 5 (n*2^(n-1) = 80 edges); tree-valued operations are gated well below
// that anyway.

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace qslide {

struct EdgeSet {
    std::array<std::uint64_t, 2> w{0, 0};

    static constexpr int capacity = 128;

    bool test(int e) const { return (w[e >> 6] >> (e & 63)) & 1; }
    void set(int e) { w[e >> 6] |= std::uint64_t{1} << (e & 63); }
    void reset(int e) { w[e >> 6] &= ~(std::uint64_t{1} << (e & 63)); }
    void clear() { w = {0, 0}; }

    int count() const { return std::popcount(w[0]) + std::popcount(w[1]); }
    bool empty() const { return w[0] == 0 && w[1] == 0; }

    bool operator==(const EdgeSet&) const = default;
    auto operator<=>(const EdgeSet& o) const {
        // lexicographic with w[1] (high word) leading, so order matches the
        // 128-bit integer value
        if (auto c = w[1] <=> o.w[1]; c != 0) return c;
        return w[0] <=> o.w[0];
    }

    EdgeSet operator|(const EdgeSet& o) const { return EdgeSet{{w[0] | o.w[0], w[1] | o.w[1]}}; }
    EdgeSet operator&(const EdgeSet& o) const { return EdgeSet{{w[0] & o.w[0], w[1] & o.w[1]}}; }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (int word = 0; word < 2; ++word) {
            std::uint64_t bits = w[word];
            while (bits) {
                int b = std::countr_zero(bits);
                fn(word * 64 + b);
                bits &= bits - 1;
            }
        }
    }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct EdgeSetHash {
    std::size_t operator()(const EdgeSet& s) const {
        return splitmix64(s.w[0] ^ splitmix64(s.w[1]));
    }
};

inline void check_edge_capacity(int edge_count) {
    if (edge_count > EdgeSet::capacity)
        throw std::invalid_argument("edge universe exceeds EdgeSet capacity (n > 5)");
}

}  // namespace qslide
