#pragma once
// Plain undirected graph over abstract vertex ids, used for edge slide
// graphs, Cartesian products and hypercube recognition.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qslide {

struct SimpleGraph {
    int nv = 0;
    std::vector<std::pair<int, int>> edges;  // stored with u < v
    std::vector<std::vector<int>> adj;

    SimpleGraph() = default;
    explicit SimpleGraph(int vertices) : nv(vertices), adj(vertices) {}

    void add_edge(int u, int v);
    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    bool is_regular(int* deg_out = nullptr) const;

    // the k-cube on vertex masks 0..2^k-1 (k = 0 gives a single vertex)
    static SimpleGraph cube(int k);
};

SimpleGraph cartesian_product(const SimpleGraph& g, const SimpleGraph& h);
SimpleGraph disjoint_union(const SimpleGraph& g, const SimpleGraph& h);

std::vector<std::vector<int>> connected_components(const SimpleGraph& g);

// Constructive coordinatisation: assigns a k-bit mask to every vertex so that
// edges connect masks at Hamming distance 1, or fails. Succeeds exactly when
// g is isomorphic to Q_k.
std::optional<std::vector<std::uint32_t>> hypercube_coordinates(const SimpleGraph& g, int k);

inline bool is_hypercube(const SimpleGraph& g, int k) {
    return hypercube_coordinates(g, k).has_value();
}

// DOT/JSON export; name(v) supplies vertex labels
std::string graph_to_dot(const SimpleGraph& g, const std::string& graph_name,
                         const std::function<std::string(int)>& name);
std::string graph_to_json(const SimpleGraph& g, int n_hint,
                          const std::function<std::string(int)>& name);

}  // namespace qslide
