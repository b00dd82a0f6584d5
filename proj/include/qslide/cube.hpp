#pragma once
// The hypercube Q_n as an indexed universe of vertices and edges.
//
// Vertices are subsets of {1,..,n} stored as bitmasks (element i <-> bit i-1,
// so directions are 0-indexed internally and 1-indexed in all I/O).
// An edge in direction i is identified by its endpoint with bit i clear:
//   edge id = i * 2^(n-1) + rank of that endpoint among masks with bit i clear.
// This direction-major indexing packs an edge set for n=4 into 32 bits and
// n=5 into 80 bits.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qslide {

using Vertex = std::uint32_t;  // bitmask over directions 0..n-1
using EdgeId = int;

// endpoint with the direction bit clear, plus the direction
struct Edge {
    Vertex lo = 0;
    int dir = 0;

    Vertex hi() const { return lo | (Vertex{1} << dir); }
    bool operator==(const Edge&) const = default;
};

// removes bit i from the mask, shifting higher bits down
inline std::uint32_t drop_bit(std::uint32_t m, int i) {
    return (m & ((std::uint32_t{1} << i) - 1)) | ((m >> (i + 1)) << i);
}

// inverse of drop_bit: inserts a clear bit at position i
inline std::uint32_t insert_bit(std::uint32_t m, int i) {
    return (m & ((std::uint32_t{1} << i) - 1)) | ((m >> i) << (i + 1));
}

// extracts the bits of m selected by keep, packed low (pext)
inline std::uint32_t compress_mask(std::uint32_t m, std::uint32_t keep) {
    std::uint32_t out = 0;
    int pos = 0;
    while (keep) {
        int b = std::countr_zero(keep);
        if (m & (std::uint32_t{1} << b)) out |= std::uint32_t{1} << pos;
        ++pos;
        keep &= keep - 1;
    }
    return out;
}

// scatters the low bits of m into the positions selected by keep (pdep)
inline std::uint32_t expand_mask(std::uint32_t m, std::uint32_t keep) {
    std::uint32_t out = 0;
    int pos = 0;
    while (keep) {
        int b = std::countr_zero(keep);
        if (m & (std::uint32_t{1} << pos)) out |= std::uint32_t{1} << b;
        ++pos;
        keep &= keep - 1;
    }
    return out;
}

// rank of direction i among the set bits of keep (i must be in keep)
inline int compress_dir(int i, std::uint32_t keep) {
    return std::popcount(keep & ((std::uint32_t{1} << i) - 1));
}

// j-th smallest direction in keep
inline int expand_dir(int j, std::uint32_t keep) {
    for (int b = 0; keep; ++b, keep >>= 1)
        if (keep & 1)
            if (j-- == 0) return b;
    throw std::out_of_range("expand_dir: index beyond set size");
}

struct CubeContext {
    int n;
    Vertex vertex_count;  // 2^n
    int edge_count;       // n * 2^(n-1)
    int half;             // 2^(n-1)

    explicit CubeContext(int dimension) : n(dimension) {
        if (n < 1 || n > 16) throw std::invalid_argument("cube dimension must be in [1,16]");
        vertex_count = Vertex{1} << n;
        half = 1 << (n - 1);
        edge_count = n * half;
    }

    std::uint32_t full_mask() const { return vertex_count - 1; }

    void check_dir(int i) const {
        if (i < 0 || i >= n) throw std::out_of_range("direction out of range");
    }

    // canonical id; edge_index(v, i) == edge_index(v ^ {i}, i)
    EdgeId edge_index(Vertex v, int i) const {
        check_dir(i);
        return i * half + static_cast<EdgeId>(drop_bit(v & ~(Vertex{1} << i), i));
    }

    Edge edge_of(EdgeId e) const {
        if (e < 0 || e >= edge_count) throw std::out_of_range("edge id out of range");
        int i = e / half;
        return Edge{insert_bit(static_cast<Vertex>(e % half), i), i};
    }

    int edge_dir(EdgeId e) const { return e / half; }

    // image of e under the automorphism v -> v ^ {i}; sigma(e, dir(e)) == e
    EdgeId sigma(EdgeId e, int i) const {
        check_dir(i);
        Edge ed = edge_of(e);
        if (i == ed.dir) return e;
        return edge_index(ed.lo ^ (Vertex{1} << i), ed.dir);
    }
};

// the subcube Q_n(R, X): vertices W with W & R == X, an (n-|R|)-cube
struct SubcubeId {
    std::uint32_t R = 0;
    std::uint32_t X = 0;
    bool operator==(const SubcubeId&) const = default;
};

inline SubcubeId subcube_of(const CubeContext& ctx, Vertex v, std::uint32_t R) {
    return SubcubeId{R, v & R & ctx.full_mask()};
}

// "{1,3}" notation, 1-indexed; empty set prints as "{}"
std::string vertex_name(Vertex v);

}  // namespace qslide
