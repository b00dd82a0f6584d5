#pragma once
// Sections of the nonempty power set (equivalently upright spanning trees),
// and Hall-style matching machinery for building sections with a prescribed
// signature and prescribed values.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "qslide/cube.hpp"
#include "qslide/edge_set.hpp"
#include "qslide/signature.hpp"

namespace qslide {

// choice[X] in X for every nonempty X subset of [n]; directions 0-indexed
struct Section {
    int n = 0;
    std::vector<std::uint8_t> choice;  // indexed by mask, entries valid for mask >= 1

    int operator()(std::uint32_t mask) const { return choice[mask]; }
};

Signature section_signature(const Section& s);

EdgeSet section_to_tree(const CubeContext& ctx, const Section& s);

struct NonUpright {
    Vertex witness = 0;  // smallest vertex whose tree-path to {} has length != |X|
};

std::variant<Section, NonUpright> tree_to_section(const CubeContext& ctx, const EdgeSet& t);

// The bipartite matching graph G_S: left side A = nonempty subsets of [n],
// right side B = a_i interchangeable copies of label i. Copies are collapsed
// to per-label capacities; the expanded-graph quantities stay available as
// queries.
struct MatchingGraph {
    int n = 0;
    Signature caps;  // a_i per label (0-indexed)

    std::int64_t side_size() const;                       // |A| = |B| = 2^n - 1
    std::int64_t left_degree(std::uint32_t mask) const;   // sum of caps over mask
    std::int64_t neighborhood_size(std::uint32_t support) const;
    // Hall check for the family of all nonempty subsets of a support set
    bool hall_holds_for_support(std::uint32_t support) const;
};

MatchingGraph build_matching_graph(const Signature& s);

struct SectionConstraint {
    std::uint32_t subset = 0;  // nonempty vertex mask
    int element = 0;           // 0-indexed direction, must lie in subset
};

// A section with signature s and the prescribed values, when one exists;
// found by augmenting-path maximum matching with the constrained pairs
// pre-matched. Throws on malformed constraints (x not in X, duplicates).
std::optional<Section> find_section(const Signature& s,
                                    const std::vector<SectionConstraint>& constraints);

// exact number of sections with signature s, by capacity-vector DP over the
// left vertices in decreasing-subset-size order; refuses n > 5 unless
// allow_large
std::uint64_t count_upright(const Signature& s, bool allow_large = false);

// streams every section with signature s (same gate as count_upright)
void sections_with_signature(const Signature& s,
                             const std::function<void(const Section&)>& sink,
                             bool allow_large = false);

// streams all sections of the nonempty power set of [n]; n <= 4
void for_each_section(int n, const std::function<void(const Section&)>& sink);

// JSON object {"1,3": 3, ...}: keys are comma-joined sorted elements,
// values 1-indexed chosen elements
std::string section_to_json(const Section& s);

}  // namespace qslide
