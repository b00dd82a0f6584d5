#include "qslide/tree.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

namespace qslide {

Signature tree_signature(const CubeContext& ctx, const EdgeSet& t) {
    Signature sig(ctx.n, 0);
    t.for_each([&](int e) { ++sig[e / ctx.half]; });
    return sig;
}

bool is_spanning_tree(const CubeContext& ctx, const EdgeSet& t) {
    if (t.count() != static_cast<int>(ctx.vertex_count) - 1) return false;
    // BFS from vertex 0 over the edges present
    std::vector<char> seen(ctx.vertex_count, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    Vertex reached = 1;
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (int i = 0; i < ctx.n; ++i) {
            if (!t.test(ctx.edge_index(v, i))) continue;
            Vertex w = v ^ (Vertex{1} << i);
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == ctx.vertex_count;
}

std::string spanning_tree_count_formula(int n) {
    if (n < 1 || n > 16) throw std::invalid_argument("count formula supports n in [1,16]");
    using boost::multiprecision::cpp_int;
    cpp_int total = cpp_int(1) << ((1 << n) - n - 1);
    long long binom = 1;
    for (int k = 1; k <= n; ++k) {
        binom = binom * (n - k + 1) / k;  // C(n,k), exact at every step
        total *= boost::multiprecision::pow(cpp_int(k), static_cast<unsigned>(binom));
    }
    return total.str();
}

std::uint64_t spanning_tree_count_u64(int n) {
    if (n < 1 || n > 4) throw std::invalid_argument("u64 count only for n <= 4");
    static constexpr std::uint64_t values[5] = {0, 1, 4, 384, 42467328};
    return values[n];
}

namespace {

// Recursive contraction/deletion over the canonical edge order. Including an
// edge merges its endpoints' components; excluding one is allowed only when
// the remaining edges can still connect the current components, so every
// branch entered contains at least one tree.
struct Enumerator {
    struct UndoRec {
        int child;
        bool rank_bumped;
    };

    const CubeContext& ctx;
    const TreeSink* sink;
    int V, m;
    std::vector<int> lo, hi, dir;
    std::vector<int> parent, rank_, scratch;
    std::vector<UndoRec> undo;
    int comps;
    EdgeSet current;
    std::uint64_t count = 0;
    bool budgeted = false;
    std::array<int, 16> budget{};

    explicit Enumerator(const CubeContext& c, const TreeSink* s)
        : ctx(c), sink(s), V(static_cast<int>(c.vertex_count)), m(c.edge_count) {
        lo.resize(m);
        hi.resize(m);
        dir.resize(m);
        for (int e = 0; e < m; ++e) {
            Edge ed = ctx.edge_of(e);
            lo[e] = static_cast<int>(ed.lo);
            hi[e] = static_cast<int>(ed.hi());
            dir[e] = ed.dir;
        }
        parent.resize(V);
        std::iota(parent.begin(), parent.end(), 0);
        rank_.assign(V, 0);
        scratch.resize(V);
        comps = V;
    }

    int find(int v) const {
        while (parent[v] != v) v = parent[v];
        return v;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] > rank_[b]) std::swap(a, b);
        bool bumped = rank_[a] == rank_[b];
        if (bumped) ++rank_[b];
        parent[a] = b;
        undo.push_back({a, bumped});
        --comps;
        return true;
    }

    void undo_unite() {
        UndoRec rec = undo.back();
        undo.pop_back();
        if (rec.rank_bumped) --rank_[parent[rec.child]];
        parent[rec.child] = rec.child;
        ++comps;
    }

    // can the edges from idx onward (in live directions) still connect the
    // current components?
    bool remaining_connects(int idx) {
        if (comps == 1) return true;
        int c = comps;
        for (int v = 0; v < V; ++v) scratch[v] = find(v);
        auto find2 = [&](int v) {
            while (scratch[v] != v) {
                scratch[v] = scratch[scratch[v]];
                v = scratch[v];
            }
            return v;
        };
        for (int k = idx; k < m && c > 1; ++k) {
            if (budgeted && budget[dir[k]] == 0) continue;
            int a = find2(lo[k]), b = find2(hi[k]);
            if (a != b) {
                scratch[a] = b;
                --c;
            }
        }
        return c == 1;
    }

    bool budget_supply_ok(int idx) const {
        // direction-major ids make per-direction suffix supply arithmetic
        for (int d = 0; d < ctx.n; ++d) {
            int seg_start = d * ctx.half, seg_end = seg_start + ctx.half;
            int supply = std::max(0, seg_end - std::max(idx, seg_start));
            if (budget[d] > supply) return false;
        }
        return true;
    }

    void rec(int idx) {
        if (comps == 1) {
            ++count;
            if (sink) (*sink)(current);
            return;
        }
        if (m - idx < comps - 1) return;
        if (budgeted && !budget_supply_ok(idx)) return;
        int d = dir[idx];
        bool can_include = (!budgeted || budget[d] > 0) && find(lo[idx]) != find(hi[idx]);
        if (can_include) {
            unite(lo[idx], hi[idx]);
            if (budgeted) --budget[d];
            current.set(idx);
            rec(idx + 1);
            current.reset(idx);
            if (budgeted) ++budget[d];
            undo_unite();
        }
        if (remaining_connects(idx + 1)) rec(idx + 1);
    }
};

void check_enumeration_gate(const CubeContext& ctx, bool allow_large) {
    if (ctx.n > 4 && !allow_large)
        throw std::invalid_argument(
            "tree enumeration is gated to n <= 4 (the n = 5 census has ~2.1e19 trees; "
            "pass the override to proceed anyway)");
    check_edge_capacity(ctx.edge_count);
}

}  // namespace

std::uint64_t enumerate_spanning_trees(const CubeContext& ctx, const TreeSink& sink,
                                       bool allow_large) {
    check_enumeration_gate(ctx, allow_large);
    Enumerator en(ctx, sink ? &sink : nullptr);
    en.rec(0);
    return en.count;
}

std::uint64_t trees_with_signature(const CubeContext& ctx, const Signature& s,
                                   const TreeSink& sink, bool allow_large) {
    check_enumeration_gate(ctx, allow_large);
    if (static_cast<int>(s.size()) != ctx.n)
        throw std::invalid_argument("signature length does not match dimension");
    require_signature(s);
    Enumerator en(ctx, sink ? &sink : nullptr);
    en.budgeted = true;
    for (int d = 0; d < ctx.n; ++d) en.budget[d] = s[d];
    en.rec(0);
    return en.count;
}

namespace {

void check_reducing_mask(const CubeContext& ctx, std::uint32_t R) {
    if (R == 0 || (R & ~ctx.full_mask()) != 0 || R == ctx.full_mask())
        throw std::invalid_argument("R must be a proper nonempty subset of the directions");
}

}  // namespace

bool reduces_over(const CubeContext& ctx, const EdgeSet& t, std::uint32_t R) {
    check_reducing_mask(ctx, R);
    Signature sig = tree_signature(ctx, t);
    long long sum = 0;
    for (int i = 0; i < ctx.n; ++i)
        if (R & (std::uint32_t{1} << i)) sum += sig[i];
    return sum == (1LL << std::popcount(R)) - 1;
}

SubcubeForest restrict_to_subcube(const CubeContext& ctx, const EdgeSet& t, std::uint32_t R,
                                  std::uint32_t X) {
    check_reducing_mask(ctx, R);
    if ((X & ~R) != 0) throw std::invalid_argument("X must be a subset of R");
    int sub_n = ctx.n - std::popcount(R);
    std::uint32_t notR = ctx.full_mask() & ~R;
    CubeContext sub(sub_n);

    SubcubeForest out;
    out.R = R;
    out.X = X;
    out.sig.assign(sub_n, 0);
    t.for_each([&](int e) {
        Edge ed = ctx.edge_of(e);
        if (R & (std::uint32_t{1} << ed.dir)) return;
        if ((ed.lo & R) != X) return;
        int dc = compress_dir(ed.dir, notR);
        Vertex w = compress_mask(ed.lo, notR);
        out.edges.set(sub.edge_index(w, dc));
        ++out.sig[dc];
    });
    out.is_tree = is_spanning_tree(sub, out.edges);
    return out;
}

ContractionTree contract(const CubeContext& ctx, const EdgeSet& t, std::uint32_t R) {
    check_reducing_mask(ctx, R);
    std::uint32_t notR = ctx.full_mask() & ~R;
    ContractionTree out;
    out.R = R;
    t.for_each([&](int e) {
        Edge ed = ctx.edge_of(e);
        if (!(R & (std::uint32_t{1} << ed.dir))) return;
        out.edges.push_back({ed.lo & R, ed.dir, ed.lo & notR});
    });
    std::sort(out.edges.begin(), out.edges.end());
    out.is_tree = out.edges.size() == (std::size_t{1} << std::popcount(R)) - 1;
    return out;
}

ProjectedGraph project(const CubeContext& ctx, const EdgeSet& t, std::uint32_t R) {
    ContractionTree c = contract(ctx, t, R);
    int r = std::popcount(R);
    CubeContext sub(r);
    ProjectedGraph out;
    out.r = r;
    out.multigraph_edges = static_cast<int>(c.edges.size());
    for (const auto& le : c.edges)
        out.edges.set(sub.edge_index(compress_mask(le.lo, R), compress_dir(le.dir, R)));
    out.is_spanning_tree = is_spanning_tree(sub, out.edges);
    return out;
}

Decomposition decompose(const CubeContext& ctx, const EdgeSet& t, std::uint32_t R) {
    check_reducing_mask(ctx, R);
    if (!reduces_over(ctx, t, R))
        throw ReductionRequired("tree does not reduce over " + vertex_name(R));
    Decomposition d;
    d.R = R;
    d.contraction = contract(ctx, t, R);
    int r = std::popcount(R);
    d.parts.resize(std::size_t{1} << r);
    for (std::uint32_t xc = 0; xc < d.parts.size(); ++xc) {
        SubcubeForest f = restrict_to_subcube(ctx, t, R, expand_mask(xc, R));
        d.parts[xc] = f.edges;
    }
    return d;
}

EdgeSet recompose(const CubeContext& ctx, const Decomposition& d) {
    check_reducing_mask(ctx, d.R);
    int r = std::popcount(d.R);
    int sub_n = ctx.n - r;
    std::uint32_t notR = ctx.full_mask() & ~d.R;
    if (d.parts.size() != (std::size_t{1} << r))
        throw std::invalid_argument("decomposition needs one part per subset of R");
    CubeContext part_ctx(sub_n);
    for (const auto& p : d.parts)
        if (!is_spanning_tree(part_ctx, p))
            throw std::invalid_argument("decomposition part is not a spanning tree");
    if (d.contraction.R != d.R) throw std::invalid_argument("contraction R mismatch");
    if (d.contraction.edges.size() != (std::size_t{1} << r) - 1)
        throw std::invalid_argument("contraction tree has wrong edge count");
    CubeContext top(r);
    EdgeSet proj;
    for (const auto& le : d.contraction.edges) {
        if (!(d.R & (std::uint32_t{1} << le.dir)) || (le.lo & ~d.R) != 0 ||
            (le.lo & (std::uint32_t{1} << le.dir)) != 0 || (le.label & ~notR) != 0)
            throw std::invalid_argument("malformed contraction edge");
        proj.set(top.edge_index(compress_mask(le.lo, d.R), compress_dir(le.dir, d.R)));
    }
    if (!is_spanning_tree(top, proj))
        throw std::invalid_argument("contraction tree does not project to a spanning tree");

    EdgeSet out;
    for (std::uint32_t xc = 0; xc < d.parts.size(); ++xc) {
        std::uint32_t X = expand_mask(xc, d.R);
        d.parts[xc].for_each([&](int e) {
            Edge ed = part_ctx.edge_of(e);
            Vertex lo = expand_mask(ed.lo, notR) | X;
            out.set(ctx.edge_index(lo, expand_dir(ed.dir, notR)));
        });
    }
    for (const auto& le : d.contraction.edges) out.set(ctx.edge_index(le.lo | le.label, le.dir));
    if (!is_spanning_tree(ctx, out))
        throw std::logic_error("recompose produced a non-tree");  // unreachable for valid input
    return out;
}

std::string tree_to_json(const CubeContext& ctx, const EdgeSet& t) {
    nlohmann::json arr = nlohmann::json::array();
    t.for_each([&](int e) {
        Edge ed = ctx.edge_of(e);
        nlohmann::json verts = nlohmann::json::array();
        for (int i = 0; i < ctx.n; ++i)
            if (ed.lo & (Vertex{1} << i)) verts.push_back(i + 1);
        arr.push_back(nlohmann::json::array({verts, ed.dir + 1}));
    });
    return arr.dump();
}

EdgeSet tree_from_json(const CubeContext& ctx, const std::string& text) {
    nlohmann::json arr = nlohmann::json::parse(text);
    if (!arr.is_array()) throw std::invalid_argument("tree JSON must be an array of edges");
    EdgeSet out;
    for (const auto& item : arr) {
        if (!item.is_array() || item.size() != 2)
            throw std::invalid_argument("each edge must be [vertex, direction]");
        Vertex lo = 0;
        for (const auto& el : item[0]) {
            int v = el.get<int>();
            if (v < 1 || v > ctx.n) throw std::invalid_argument("vertex element out of range");
            lo |= Vertex{1} << (v - 1);
        }
        int dir = item[1].get<int>() - 1;
        ctx.check_dir(dir);
        out.set(ctx.edge_index(lo, dir));
    }
    return out;
}

std::vector<std::uint8_t> tree_to_bytes(const CubeContext& ctx, const EdgeSet& t) {
    std::vector<std::uint8_t> out((ctx.edge_count + 7) / 8, 0);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(t.w[i / 8] >> ((i % 8) * 8));
    return out;
}

EdgeSet tree_from_bytes(const CubeContext& ctx, const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() != static_cast<std::size_t>((ctx.edge_count + 7) / 8))
        throw std::invalid_argument("tree byte width does not match dimension");
    EdgeSet out;
    for (std::size_t i = 0; i < bytes.size(); ++i)
        out.w[i / 8] |= std::uint64_t{bytes[i]} << ((i % 8) * 8);
    return out;
}

EdgeSet relabel_tree(const CubeContext& ctx, const EdgeSet& t, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != ctx.n) throw std::invalid_argument("permutation length");
    EdgeSet out;
    t.for_each([&](int e) {
        Edge ed = ctx.edge_of(e);
        Vertex lo = 0;
        for (int i = 0; i < ctx.n; ++i)
            if (ed.lo & (Vertex{1} << i)) lo |= Vertex{1} << perm[i];
        out.set(ctx.edge_index(lo, perm[ed.dir]));
    });
    return out;
}

}  // namespace qslide
