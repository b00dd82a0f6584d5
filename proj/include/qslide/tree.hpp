#pragma once
// Spanning trees of Q_n and of the contraction multigraph Q_n/R-bar:
// streaming enumeration, signatures, restriction to subcubes, contraction,
// projection, and the decomposition bijection for reducing trees.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qslide/cube.hpp"
#include "qslide/edge_set.hpp"
#include "qslide/signature.hpp"

namespace qslide {

struct ReductionRequired : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Signature tree_signature(const CubeContext& ctx, const EdgeSet& t);

// naive oracle: 2^n - 1 edges and connected, checked from scratch
bool is_spanning_tree(const CubeContext& ctx, const EdgeSet& t);

// closed-form count 2^(2^n - n - 1) * prod_k k^C(n,k); exact for any n
std::string spanning_tree_count_formula(int n);
// same value as u64; n <= 4 only (overflows beyond)
std::uint64_t spanning_tree_count_u64(int n);

using TreeSink = std::function<void(const EdgeSet&)>;

// Streams every spanning tree exactly once via recursive contraction/deletion
// over the canonical edge order, pruning branches that disconnect the
// remaining graph. Returns the total count. Refuses n >= 5 unless allow_large.
std::uint64_t enumerate_spanning_trees(const CubeContext& ctx, const TreeSink& sink,
                                       bool allow_large = false);

// Same walk restricted by per-direction budgets; streams exactly the trees
// with the given signature.
std::uint64_t trees_with_signature(const CubeContext& ctx, const Signature& s,
                                   const TreeSink& sink, bool allow_large = false);

bool reduces_over(const CubeContext& ctx, const EdgeSet& t, std::uint32_t R);

// T restricted to the subcube Q_n(R, X), reported in the coordinates of
// Q_(n-r): vertex bits and directions are the elements of [n]-R in
// increasing order. is_tree is data, not an error: it is the structural
// signal distinguishing reducing from non-reducing trees.
struct SubcubeForest {
    std::uint32_t R = 0;
    std::uint32_t X = 0;       // subset of R (ambient bits)
    EdgeSet edges;             // over the (n-r)-cube universe
    bool is_tree = false;
    Signature sig;             // per compressed direction (= ambient order)
};

SubcubeForest restrict_to_subcube(const CubeContext& ctx, const EdgeSet& t,
                                  std::uint32_t R, std::uint32_t X);

// image of T in Q_n/R-bar: one labelled edge per tree edge in an R-direction
struct ContractionTree {
    std::uint32_t R = 0;
    struct LabelledEdge {
        Vertex lo = 0;             // subset of R, direction bit clear
        int dir = 0;               // ambient direction, in R
        std::uint32_t label = 0;   // subset of [n]-R
        bool operator==(const LabelledEdge&) const = default;
        auto operator<=>(const LabelledEdge&) const = default;
    };
    std::vector<LabelledEdge> edges;  // sorted
    bool is_tree = false;             // exactly 2^|R| - 1 edges

    bool operator==(const ContractionTree&) const = default;
};

ContractionTree contract(const CubeContext& ctx, const EdgeSet& t, std::uint32_t R);

// projection of T to the underlying simple cube Q_R, in compressed
// coordinates; spanning tree of Q_|R| whenever T reduces over R
struct ProjectedGraph {
    int r = 0;
    EdgeSet edges;           // over the r-cube universe, duplicates collapsed
    int multigraph_edges = 0;  // edge count before collapsing parallel copies
    bool is_spanning_tree = false;
};

ProjectedGraph project(const CubeContext& ctx, const EdgeSet& t, std::uint32_t R);

// the decomposition of a reducing tree: contraction tree plus one spanning
// tree of Q_(n-r) per subset X of R (parts indexed by compressed X)
struct Decomposition {
    std::uint32_t R = 0;
    ContractionTree contraction;
    std::vector<EdgeSet> parts;

    bool operator==(const Decomposition&) const = default;
};

// throws ReductionRequired when !reduces_over(ctx, t, R)
Decomposition decompose(const CubeContext& ctx, const EdgeSet& t, std::uint32_t R);

// inverse: validates the pieces and reassembles the ambient tree
EdgeSet recompose(const CubeContext& ctx, const Decomposition& d);

// serialisation: JSON list of edges [[lower-vertex-as-sorted-int-list, dir]]
// with 1-indexed directions, ascending edge id; compact binary form is the
// little-endian edge bitvector, ceil(edge_count/8) bytes
std::string tree_to_json(const CubeContext& ctx, const EdgeSet& t);
EdgeSet tree_from_json(const CubeContext& ctx, const std::string& text);
std::vector<std::uint8_t> tree_to_bytes(const CubeContext& ctx, const EdgeSet& t);
EdgeSet tree_from_bytes(const CubeContext& ctx, const std::vector<std::uint8_t>& bytes);

// applies a direction permutation (newdir = perm[olddir]) as a cube
// automorphism
EdgeSet relabel_tree(const CubeContext& ctx, const EdgeSet& t, const std::vector<int>& perm);

}  // namespace qslide
