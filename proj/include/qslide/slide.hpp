#pragma once
// The edge slide relation and its component analysis: slide moves, BFS over
// the implicit slide graph of a signature, slide graphs of the contraction
// multigraph, the product-isomorphism verification for reducing trees,
// disconnection witnesses for strictly reducible signatures, and the
// empirical connectivity harness.

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qslide/cube.hpp"
#include "qslide/edge_set.hpp"
#include "qslide/run_config.hpp"
#include "qslide/signature.hpp"
#include "qslide/simple_graph.hpp"
#include "qslide/tree.hpp"

namespace qslide {

struct SlideMove {
    EdgeId edge = 0;  // edge of T being slid
    int dir = 0;      // slide direction, != dir(edge)
    EdgeSet result;   // T - edge + sigma_dir(edge)
};

// fundamental-cycle route: sigma_i(e) not in T and the cycle closed by adding
// it passes through e. Throws if e is not in T or i == dir(e).
bool is_slidable(const CubeContext& ctx, const EdgeSet& t, EdgeId e, int dir);

// independent route: rebuild T - e + sigma_i(e) and re-verify it is a
// spanning tree from scratch
bool is_slidable_naive(const CubeContext& ctx, const EdgeSet& t, EdgeId e, int dir);

std::vector<SlideMove> slide_neighbors(const CubeContext& ctx, const EdgeSet& t);

// per-subcube signatures (compressed (n-r)-tuples), indexed by compressed X;
// constant along any slide path. Throws ReductionRequired.
std::vector<Signature> subtree_fingerprint(const CubeContext& ctx, const EdgeSet& t,
                                           std::uint32_t R);

struct ComponentInfo {
    std::uint64_t size = 0;
    EdgeSet representative;  // smallest edge bitvector in the component
    // reducing set -> per-subcube signatures of the representative
    std::map<std::uint32_t, std::vector<Signature>> fingerprints;
    std::optional<int> hypercube_k;  // set when the component is certified = Q_k
};

struct ComponentReport {
    int n = 0;
    Signature signature;
    std::vector<ComponentInfo> components;
    std::uint64_t explored = 0;
    bool exhaustive = false;
    bool packed_states = false;  // contraction reports store state codes, not trees
    std::string note;

    std::uint64_t component_count() const { return components.size(); }
};

enum class ExploreMode { Exhaustive, FromUpright };

struct ExploreOptions {
    ExploreMode mode = ExploreMode::Exhaustive;
    std::uint64_t cert_max_vertices = 1 << 16;  // adjacency re-walk gate
    bool want_certificates = true;
    int abort_after_levels = -1;              // test hook for checkpoint resumption
    const std::atomic<bool>* stop = nullptr;  // cooperative interrupt: flush and return partial
};

ComponentReport explore_signature(const CubeContext& ctx, const Signature& s,
                                  const ExploreOptions& opt, const RunConfig& cfg);

// extracts a component's slide graph as a SimpleGraph (vertices in discovery
// order from the representative); gated by max_vertices
std::optional<SimpleGraph> component_graph(const CubeContext& ctx, const EdgeSet& member,
                                           std::uint64_t max_vertices);

// Slide graph of the contraction multigraph Q_n/R-bar restricted to spanning
// trees whose underlying Q_R tree has signature sig_r (an |R|-tuple over the
// directions of R in increasing order). States are (tree of Q_R, one label
// per edge); label toggles are always slides, R-direction slides are
// label-preserving.
ComponentReport contraction_slide_graph(const CubeContext& ctx, std::uint32_t R,
                                        const Signature& sig_r, const RunConfig& cfg);

struct IsoCheck {
    bool ok = true;
    std::uint64_t vertices_checked = 0;
    std::uint64_t pairs_checked = 0;
    std::string counterexample;  // empty when ok
};

// Verifies that the decomposition map is a graph isomorphism from the slide
// graph on trees reducing over R onto the Cartesian product of the
// contraction slide graph with the per-subcube slide graphs: bijectivity plus
// edge preservation in both directions. Exhaustive for n <= 3, sampled above.
IsoCheck verify_product_isomorphism(const CubeContext& ctx, std::uint32_t R,
                                    const RunConfig& cfg);

struct DisconnectionWitness {
    EdgeSet tree_a;
    EdgeSet tree_b;
    std::uint32_t R = 0;  // ambient reducing set used for the separation
    std::vector<Signature> fingerprint_a;  // indexed by compressed X
    std::vector<Signature> fingerprint_b;
    int differing_subcube = 0;  // compressed X where the fingerprints differ
};

// Constructs two trees with the given strictly reducible signature whose
// per-subcube signatures differ, hence lying in distinct slide components.
DisconnectionWitness disconnection_witness(const Signature& s);

struct ConjectureRow {
    Signature signature;
    SignatureKind kind = SignatureKind::Irreducible;
    std::uint64_t components = 0;
    std::uint64_t trees = 0;
    bool skipped = false;  // resource-gated, never silently omitted
    bool consistent = false;
};

struct SaturatedCheckRow {
    Signature signature;        // saturated, of Q_n
    Signature truncation;       // its first r entries, of Q_r
    bool connected_full = false;
    bool connected_truncated = false;
    bool agree = false;
};

struct ConjectureReport {
    int n = 0;
    std::vector<ConjectureRow> rows;
    std::vector<SaturatedCheckRow> saturated_checks;
    bool all_consistent = false;
    bool any_skipped = false;
    std::string note = "empirical, n <= 4; connectivity conjecture is not claimed";
};

ConjectureReport test_conjecture(int n, const RunConfig& cfg);

// component report serialisation
std::string component_report_to_json(const CubeContext& ctx, const ComponentReport& r);

}  // namespace qslide
