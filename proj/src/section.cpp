#include "qslide/section.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace qslide {

Signature section_signature(const Section& s) {
    Signature sig(s.n, 0);
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << s.n); ++mask) ++sig[s.choice[mask]];
    return sig;
}

EdgeSet section_to_tree(const CubeContext& ctx, const Section& s) {
    if (s.n != ctx.n) throw std::invalid_argument("section dimension mismatch");
    check_edge_capacity(ctx.edge_count);
    EdgeSet t;
    for (std::uint32_t mask = 1; mask < ctx.vertex_count; ++mask) {
        int i = s.choice[mask];
        if (!(mask & (std::uint32_t{1} << i))) throw std::invalid_argument("invalid section");
        t.set(ctx.edge_index(mask & ~(std::uint32_t{1} << i), i));
    }
    return t;
}

std::variant<Section, NonUpright> tree_to_section(const CubeContext& ctx, const EdgeSet& t) {
    if (!is_spanning_tree(ctx, t)) throw std::invalid_argument("not a spanning tree");
    // BFS from the root; a tree is upright iff every vertex sits at depth |X|
    std::vector<int> dist(ctx.vertex_count, -1);
    std::vector<int> parent_dir(ctx.vertex_count, -1);
    std::vector<Vertex> queue{0};
    dist[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        Vertex v = queue[head];
        for (int i = 0; i < ctx.n; ++i) {
            if (!t.test(ctx.edge_index(v, i))) continue;
            Vertex w = v ^ (Vertex{1} << i);
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                parent_dir[w] = i;
                queue.push_back(w);
            }
        }
    }
    for (std::uint32_t mask = 1; mask < ctx.vertex_count; ++mask)
        if (dist[mask] != std::popcount(mask)) return NonUpright{mask};
    Section s;
    s.n = ctx.n;
    s.choice.assign(ctx.vertex_count, 0);
    for (std::uint32_t mask = 1; mask < ctx.vertex_count; ++mask)
        s.choice[mask] = static_cast<std::uint8_t>(parent_dir[mask]);
    return s;
}

std::int64_t MatchingGraph::side_size() const { return (std::int64_t{1} << n) - 1; }

std::int64_t MatchingGraph::left_degree(std::uint32_t mask) const {
    std::int64_t d = 0;
    for (int i = 0; i < n; ++i)
        if (mask & (std::uint32_t{1} << i)) d += caps[i];
    return d;
}

std::int64_t MatchingGraph::neighborhood_size(std::uint32_t support) const {
    return left_degree(support);
}

bool MatchingGraph::hall_holds_for_support(std::uint32_t support) const {
    // |Y| <= 2^|support| - 1 for Y inside the power set of the support, and
    // |N(Y)| = sum of caps over the support
    return neighborhood_size(support) >= (std::int64_t{1} << std::popcount(support)) - 1;
}

MatchingGraph build_matching_graph(const Signature& s) {
    int n = static_cast<int>(s.size());
    if (n < 1 || n > 20) throw std::invalid_argument("matching graph supports n in [1,20]");
    long long sum = 0;
    for (int a : s) {
        if (a < 0) throw std::invalid_argument("matching graph needs nonnegative entries");
        sum += a;
    }
    if (sum != (1LL << n) - 1)
        throw std::invalid_argument("matching graph needs entries summing to 2^n - 1");
    return MatchingGraph{n, s};
}

namespace {

// Kuhn's augmenting-path matching with the B side collapsed to per-label
// capacities (copies of one label are interchangeable). assigned[i] lists
// the left masks currently matched to label i.
struct CapacityMatcher {
    int n;
    std::vector<long long> cap;
    std::vector<std::vector<std::uint32_t>> assigned;
    std::unordered_map<std::uint32_t, int> match;  // left mask -> label
    std::vector<char> visited;

    explicit CapacityMatcher(const Signature& caps)
        : n(static_cast<int>(caps.size())),
          cap(caps.begin(), caps.end()),
          assigned(caps.size()),
          visited(caps.size(), 0) {}

    bool augment(std::uint32_t mask) {
        for (int i = 0; i < n; ++i) {
            if (!(mask & (std::uint32_t{1} << i)) || visited[i]) continue;
            visited[i] = 1;
            if (static_cast<long long>(assigned[i].size()) < cap[i]) {
                place(mask, i);
                return true;
            }
            for (std::size_t k = 0; k < assigned[i].size(); ++k) {
                std::uint32_t other = assigned[i][k];
                if (augment(other)) {
                    // other moved to a different label; take its slot
                    assigned[i].erase(std::find(assigned[i].begin(), assigned[i].end(), other));
                    place(mask, i);
                    return true;
                }
            }
        }
        return false;
    }

    void place(std::uint32_t mask, int label) {
        assigned[label].push_back(mask);
        match[mask] = label;
    }

    bool try_match(std::uint32_t mask) {
        std::fill(visited.begin(), visited.end(), 0);
        return augment(mask);
    }
};

}  // namespace

std::optional<Section> find_section(const Signature& s,
                                    const std::vector<SectionConstraint>& constraints) {
    MatchingGraph g = build_matching_graph(s);
    int n = g.n;
    std::uint32_t top = (std::uint32_t{1} << n) - 1;

    std::vector<char> constrained(top + 1, 0);
    CapacityMatcher matcher(s);
    for (const auto& c : constraints) {
        if (c.subset == 0 || c.subset > top) throw std::invalid_argument("constraint subset out of range");
        if (c.element < 0 || c.element >= n || !(c.subset & (std::uint32_t{1} << c.element)))
            throw std::invalid_argument("constraint element not in subset");
        if (constrained[c.subset]) throw std::invalid_argument("duplicate constraint subset");
        constrained[c.subset] = 1;
        // pre-match the pair; if the label is already saturated no extension exists
        if (static_cast<long long>(matcher.assigned[c.element].size()) >= matcher.cap[c.element])
            return std::nullopt;
        matcher.place(c.subset, c.element);
    }

    // larger subsets have more options; matching the tight vertices first
    // keeps augmenting paths short
    std::vector<std::uint32_t> order;
    order.reserve(top);
    for (std::uint32_t mask = 1; mask <= top; ++mask)
        if (!constrained[mask]) order.push_back(mask);
    std::sort(order.begin(), order.end(), [](std::uint32_t a, std::uint32_t b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    for (std::uint32_t mask : order)
        if (!matcher.try_match(mask)) return std::nullopt;

    Section out;
    out.n = n;
    out.choice.assign(top + 1, 0);
    for (const auto& [mask, label] : matcher.match) out.choice[mask] = static_cast<std::uint8_t>(label);
    return out;
}

namespace {

void check_upright_gate(int n, bool allow_large) {
    if (n > 5 && !allow_large)
        throw std::invalid_argument("upright-tree enumeration is gated to n <= 5");
    if (n < 1 || n > 8) throw std::invalid_argument("upright-tree enumeration supports n <= 8");
}

std::vector<std::uint32_t> masks_by_decreasing_size(int n) {
    std::vector<std::uint32_t> masks;
    std::uint32_t top = (std::uint32_t{1} << n) - 1;
    for (std::uint32_t m = 1; m <= top; ++m) masks.push_back(m);
    std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa > pb : a < b;
    });
    return masks;
}

std::uint64_t pack_caps(const std::vector<int>& caps, int bits) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < caps.size(); ++i)
        key |= static_cast<std::uint64_t>(caps[i]) << (bits * i);
    return key;
}

}  // namespace

std::uint64_t count_upright(const Signature& s, bool allow_large) {
    int n = static_cast<int>(s.size());
    check_upright_gate(n, allow_large);
    long long sum = std::accumulate(s.begin(), s.end(), 0LL);
    if (sum != (1LL << n) - 1) return 0;
    for (int a : s)
        if (a < 0) return 0;

    auto masks = masks_by_decreasing_size(n);
    int bits = 8;  // caps are < 256 for n <= 8
    std::vector<int> caps(s.begin(), s.end());
    // memo per position: remaining-capacity vector -> completions
    std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> memo(masks.size() + 1);
    auto rec = [&](auto&& self, std::size_t pos) -> std::uint64_t {
        if (pos == masks.size()) return 1;
        std::uint64_t key = pack_caps(caps, bits);
        auto& table = memo[pos];
        if (auto it = table.find(key); it != table.end()) return it->second;
        std::uint64_t total = 0;
        std::uint32_t mask = masks[pos];
        for (int i = 0; i < n; ++i) {
            if (!(mask & (std::uint32_t{1} << i)) || caps[i] == 0) continue;
            --caps[i];
            total += self(self, pos + 1);
            ++caps[i];
        }
        table.emplace(key, total);
        return total;
    };
    return rec(rec, 0);
}

void sections_with_signature(const Signature& s, const std::function<void(const Section&)>& sink,
                             bool allow_large) {
    int n = static_cast<int>(s.size());
    check_upright_gate(n, allow_large);
    long long sum = std::accumulate(s.begin(), s.end(), 0LL);
    if (sum != (1LL << n) - 1) return;
    for (int a : s)
        if (a < 0) return;

    auto masks = masks_by_decreasing_size(n);
    std::vector<int> caps(s.begin(), s.end());
    Section cur;
    cur.n = n;
    cur.choice.assign(std::size_t{1} << n, 0);
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == masks.size()) {
            sink(cur);
            return;
        }
        std::uint32_t mask = masks[pos];
        for (int i = 0; i < n; ++i) {
            if (!(mask & (std::uint32_t{1} << i)) || caps[i] == 0) continue;
            --caps[i];
            cur.choice[mask] = static_cast<std::uint8_t>(i);
            self(self, pos + 1);
            ++caps[i];
        }
    };
    rec(rec, 0);
}

void for_each_section(int n, const std::function<void(const Section&)>& sink) {
    if (n < 1 || n > 4) throw std::invalid_argument("full section enumeration supports n <= 4");
    std::uint32_t top = (std::uint32_t{1} << n) - 1;
    Section cur;
    cur.n = n;
    cur.choice.assign(top + 1, 0);
    auto rec = [&](auto&& self, std::uint32_t mask) -> void {
        if (mask > top) {
            sink(cur);
            return;
        }
        for (int i = 0; i < n; ++i) {
            if (!(mask & (std::uint32_t{1} << i))) continue;
            cur.choice[mask] = static_cast<std::uint8_t>(i);
            self(self, mask + 1);
        }
    };
    rec(rec, 1);
}

std::string section_to_json(const Section& s) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << s.n); ++mask) {
        if (!first) os << ",";
        first = false;
        os << "\"";
        bool inner = true;
        for (int i = 0; i < s.n; ++i)
            if (mask & (std::uint32_t{1} << i)) {
                if (!inner) os << ",";
                inner = false;
                os << (i + 1);
            }
        os << "\":" << (s.choice[mask] + 1);
    }
    os << "}";
    return os.str();
}

}  // namespace qslide
