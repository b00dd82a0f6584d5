#include "qslide/simple_graph.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace qslide {

void SimpleGraph::add_edge(int u, int v) {
    if (u == v) throw std::invalid_argument("self-loops are not allowed");
    if (u < 0 || v < 0 || u >= nv || v >= nv) throw std::out_of_range("vertex id out of range");
    if (u > v) std::swap(u, v);
    edges.emplace_back(u, v);
    adj[u].push_back(v);
    adj[v].push_back(u);
}

bool SimpleGraph::is_regular(int* deg_out) const {
    if (nv == 0) return true;
    int d = degree(0);
    for (int v = 1; v < nv; ++v)
        if (degree(v) != d) return false;
    if (deg_out) *deg_out = d;
    return true;
}

SimpleGraph SimpleGraph::cube(int k) {
    if (k < 0 || k > 20) throw std::invalid_argument("cube dimension out of range");
    SimpleGraph g(1 << k);
    for (int v = 0; v < (1 << k); ++v)
        for (int i = 0; i < k; ++i)
            if (!((v >> i) & 1)) g.add_edge(v, v | (1 << i));
    return g;
}

SimpleGraph cartesian_product(const SimpleGraph& g, const SimpleGraph& h) {
    SimpleGraph p(g.nv * h.nv);
    auto id = [&](int a, int b) { return a * h.nv + b; };
    for (const auto& [u, v] : g.edges)
        for (int b = 0; b < h.nv; ++b) p.add_edge(id(u, b), id(v, b));
    for (const auto& [u, v] : h.edges)
        for (int a = 0; a < g.nv; ++a) p.add_edge(id(a, u), id(a, v));
    return p;
}

SimpleGraph disjoint_union(const SimpleGraph& g, const SimpleGraph& h) {
    SimpleGraph u(g.nv + h.nv);
    for (const auto& [a, b] : g.edges) u.add_edge(a, b);
    for (const auto& [a, b] : h.edges) u.add_edge(g.nv + a, g.nv + b);
    return u;
}

std::vector<std::vector<int>> connected_components(const SimpleGraph& g) {
    std::vector<std::vector<int>> comps;
    std::vector<char> seen(g.nv, 0);
    for (int s = 0; s < g.nv; ++s) {
        if (seen[s]) continue;
        std::vector<int> comp{s};
        seen[s] = 1;
        for (std::size_t head = 0; head < comp.size(); ++head)
            for (int w : g.adj[comp[head]])
                if (!seen[w]) {
                    seen[w] = 1;
                    comp.push_back(w);
                }
        comps.push_back(std::move(comp));
    }
    return comps;
}

std::optional<std::vector<std::uint32_t>> hypercube_coordinates(const SimpleGraph& g, int k) {
    if (k < 0) throw std::invalid_argument("k must be nonnegative");
    if (k >= 31) return std::nullopt;
    const std::uint32_t want = std::uint32_t{1} << k;
    if (static_cast<std::uint32_t>(g.nv) != want) return std::nullopt;
    if (g.edges.size() != static_cast<std::size_t>(k) * (want >> 1)) return std::nullopt;
    for (int v = 0; v < g.nv; ++v)
        if (g.degree(v) != k) return std::nullopt;
    if (k == 0) return std::vector<std::uint32_t>{0};

    // BFS distances from vertex 0
    std::vector<int> dist(g.nv, -1);
    std::vector<int> order;
    order.reserve(g.nv);
    dist[0] = 0;
    order.push_back(0);
    for (std::size_t head = 0; head < order.size(); ++head) {
        int u = order[head];
        for (int w : g.adj[u])
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                order.push_back(w);
            }
    }
    if (order.size() != static_cast<std::size_t>(g.nv)) return std::nullopt;  // disconnected

    std::vector<std::uint32_t> mask(g.nv, 0);
    std::vector<char> labelled(g.nv, 0), used(want, 0);
    labelled[0] = 1;
    used[0] = 1;
    // the root's edges fix the direction labels
    int next_dir = 0;
    for (int w : g.adj[0]) {
        mask[w] = std::uint32_t{1} << next_dir++;
        labelled[w] = 1;
        used[mask[w]] = 1;
    }
    // every further vertex mask is forced by the unique-square-completion
    // property: the union of any two distance-(d-1) neighbours
    for (int u : order) {
        int d = dist[u];
        if (d < 2) continue;
        std::uint32_t m = 0;
        int down = 0;
        std::uint32_t first = 0;
        for (int w : g.adj[u]) {
            if (dist[w] != d - 1) continue;
            if (!labelled[w]) return std::nullopt;
            if (down == 0)
                first = mask[w];
            else
                m = first | mask[w];
            ++down;
        }
        if (down != d) return std::nullopt;
        if (std::popcount(m) != d) return std::nullopt;
        if (used[m]) return std::nullopt;
        mask[u] = m;
        labelled[u] = 1;
        used[m] = 1;
        for (int w : g.adj[u])
            if (labelled[w] && std::popcount(mask[u] ^ mask[w]) != 1) return std::nullopt;
    }
    // final pass: every edge must join masks at Hamming distance 1
    for (const auto& [u, v] : g.edges)
        if (std::popcount(mask[u] ^ mask[v]) != 1) return std::nullopt;
    return mask;
}

std::string graph_to_dot(const SimpleGraph& g, const std::string& graph_name,
                         const std::function<std::string(int)>& name) {
    std::ostringstream os;
    os << "graph " << graph_name << " {\n";
    for (const auto& [u, v] : g.edges) os << "  \"" << name(u) << "\" -- \"" << name(v) << "\";\n";
    os << "}\n";
    return os.str();
}

std::string graph_to_json(const SimpleGraph& g, int n_hint,
                          const std::function<std::string(int)>& name) {
    std::ostringstream os;
    os << "{\"n\":" << n_hint << ",\"vertices\":[";
    for (int v = 0; v < g.nv; ++v) os << (v ? "," : "") << "\"" << name(v) << "\"";
    os << "],\"edges\":[";
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        os << (i ? "," : "") << "[" << g.edges[i].first << "," << g.edges[i].second << "]";
    os << "]}";
    return os.str();
}

}  // namespace qslide
