// Higher-level slide-graph analysis: slide graphs of the contraction
// multigraph, the product-isomorphism verification, disconnection witnesses
// for strictly reducible signatures, and the connectivity harness.

#include <algorithm>
#include <bit>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "qslide/section.hpp"
#include "qslide/slide.hpp"

namespace qslide {

namespace {

void check_proper_mask(const CubeContext& ctx, std::uint32_t R) {
    if (R == 0 || (R & ~ctx.full_mask()) != 0 || R == ctx.full_mask())
        throw std::invalid_argument("R must be a proper nonempty subset of the directions");
}

// ---------------------------------------------------------------------------
// contraction multigraph states: (spanning tree of Q_r, one label per edge)
// packed into 64 bits; tree bits low, then per-edge labels in ascending
// tree-edge order, q = n - r bits each
// ---------------------------------------------------------------------------

struct ContractionCodec {
    CubeContext qr;
    int q;        // label bits per edge
    int m;        // tree edge universe bits
    int tree_edges;

    ContractionCodec(int r, int n) : qr(r), q(n - r), m(qr.edge_count), tree_edges((1 << r) - 1) {
        if (m + tree_edges * q > 62) throw std::invalid_argument("contraction state too wide");
    }

    std::uint64_t encode(const EdgeSet& tree, const std::vector<std::uint32_t>& labels) const {
        std::uint64_t code = tree.w[0];
        int pos = m, idx = 0;
        tree.for_each([&](int) {
            code |= static_cast<std::uint64_t>(labels[idx++]) << pos;
            pos += q;
        });
        return code;
    }

    void decode(std::uint64_t code, EdgeSet& tree, std::vector<std::uint32_t>& labels) const {
        tree.clear();
        tree.w[0] = code & ((std::uint64_t{1} << m) - 1);
        labels.assign(tree_edges, 0);
        int pos = m, idx = 0;
        tree.for_each([&](int) {
            labels[idx++] = static_cast<std::uint32_t>((code >> pos) & ((1u << q) - 1));
            pos += q;
        });
    }

    template <typename Fn>
    void for_each_move(std::uint64_t code, Fn&& fn) const {
        EdgeSet tree;
        std::vector<std::uint32_t> labels;
        decode(code, tree, labels);
        // label toggles: every edge slides in every direction outside R
        int idx = 0;
        tree.for_each([&](int e) {
            (void)e;
            for (int b = 0; b < q; ++b) {
                auto next = labels;
                next[idx] ^= 1u << b;
                fn(encode(tree, next));
            }
            ++idx;
        });
        // label-preserving slides of the underlying Q_r tree
        std::vector<std::pair<int, std::uint32_t>> labelled;
        idx = 0;
        tree.for_each([&](int e) { labelled.emplace_back(e, labels[idx++]); });
        for (const auto& [e, lab] : labelled) {
            for (int i = 0; i < qr.n; ++i) {
                if (i == qr.edge_dir(e)) continue;
                if (!is_slidable(qr, tree, e, i)) continue;
                EdgeId f = qr.sigma(e, i);
                EdgeSet nt = tree;
                nt.reset(e);
                nt.set(f);
                std::vector<std::pair<int, std::uint32_t>> moved;
                for (const auto& le : labelled) moved.push_back(le.first == e ? std::make_pair(f, lab) : le);
                std::sort(moved.begin(), moved.end());
                std::vector<std::uint32_t> nl;
                for (const auto& le : moved) nl.push_back(le.second);
                fn(encode(nt, nl));
            }
        }
    }
};

SimpleGraph state_graph(const ContractionCodec& codec, const std::vector<std::uint64_t>& states) {
    std::unordered_map<std::uint64_t, int> index;
    for (std::size_t i = 0; i < states.size(); ++i) index.emplace(states[i], static_cast<int>(i));
    SimpleGraph g(static_cast<int>(states.size()));
    std::set<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < states.size(); ++i)
        codec.for_each_move(states[i], [&](std::uint64_t to) {
            auto it = index.find(to);
            if (it == index.end()) throw std::logic_error("contraction move left the signature class");
            int u = static_cast<int>(i), v = it->second;
            if (u > v) std::swap(u, v);
            if (u != v && seen.insert({u, v}).second) g.add_edge(u, v);
        });
    return g;
}

}  // namespace

ComponentReport contraction_slide_graph(const CubeContext& ctx, std::uint32_t R,
                                        const Signature& sig_r, const RunConfig& cfg) {
    check_proper_mask(ctx, R);
    int r = std::popcount(R);
    if (r > 3) throw std::invalid_argument("contraction slide graphs are exhaustive for |R| <= 3");
    if (static_cast<int>(sig_r.size()) != r)
        throw std::invalid_argument("signature length must equal |R|");
    require_signature(sig_r);
    ContractionCodec codec(r, ctx.n);

    std::vector<EdgeSet> base_trees;
    trees_with_signature(codec.qr, sig_r, [&](const EdgeSet& t) { base_trees.push_back(t); });
    std::uint64_t label_words = std::uint64_t{1} << (codec.q * codec.tree_edges);

    std::vector<std::uint64_t> states;
    states.reserve(base_trees.size() * label_words);
    std::vector<std::uint32_t> labels(codec.tree_edges);
    for (const EdgeSet& t : base_trees)
        for (std::uint64_t word = 0; word < label_words; ++word) {
            for (int i = 0; i < codec.tree_edges; ++i)
                labels[i] = static_cast<std::uint32_t>((word >> (i * codec.q)) & ((1u << codec.q) - 1));
            states.push_back(codec.encode(t, labels));
        }
    std::sort(states.begin(), states.end());

    if (states.size() * 32 > cfg.memory_cap_bytes) {
        ComponentReport out;
        out.n = ctx.n;
        out.signature = sig_r;
        out.exhaustive = false;
        out.packed_states = true;
        out.note = "skipped: contraction state space exceeds the memory cap";
        return out;
    }

    SimpleGraph g = state_graph(codec, states);
    auto comps = connected_components(g);

    ComponentReport out;
    out.n = ctx.n;
    out.signature = sig_r;
    out.exhaustive = true;
    out.packed_states = true;
    out.explored = states.size();
    for (auto& comp : comps) {
        ComponentInfo info;
        info.size = comp.size();
        std::uint64_t min_code = ~std::uint64_t{0};
        for (int v : comp) min_code = std::min(min_code, states[v]);
        info.representative.w[0] = min_code;  // packed contraction state, not an ambient tree
        if ((info.size & (info.size - 1)) == 0) {
            int k = std::countr_zero(info.size);
            SimpleGraph sub(static_cast<int>(comp.size()));
            std::unordered_map<int, int> local;
            for (std::size_t i = 0; i < comp.size(); ++i) local.emplace(comp[i], static_cast<int>(i));
            for (const auto& [u, v] : g.edges) {
                auto iu = local.find(u), iv = local.find(v);
                if (iu != local.end() && iv != local.end()) sub.add_edge(iu->second, iv->second);
            }
            int deg = 0;
            if (sub.is_regular(&deg) && deg == k && is_hypercube(sub, k)) info.hypercube_k = k;
        }
        out.components.push_back(std::move(info));
    }
    std::sort(out.components.begin(), out.components.end(),
              [](const ComponentInfo& a, const ComponentInfo& b) {
                  return a.representative < b.representative;
              });

    // cross-check against the simple-cube slide graph of the same signature
    ExploreOptions opt;
    opt.want_certificates = false;
    ComponentReport plain = explore_signature(codec.qr, sig_r, opt, cfg);
    std::ostringstream note;
    note << "states are packed (tree,labels) codes; component count "
         << (plain.component_count() == out.component_count() ? "matches" : "MISMATCHES")
         << " the Q_" << r << " slide graph of the same signature";
    out.note = note.str();
    return out;
}

// ---------------------------------------------------------------------------
// product isomorphism verification
// ---------------------------------------------------------------------------

namespace {

// canonical key for a decomposition: contraction state code then the parts
std::vector<std::uint64_t> decomposition_key(const ContractionCodec& codec, const CubeContext& ctx,
                                             const Decomposition& d) {
    std::vector<std::uint64_t> key;
    EdgeSet tree;
    std::vector<std::uint32_t> labels;
    std::vector<std::pair<int, std::uint32_t>> labelled;
    std::uint32_t notR = ctx.full_mask() & ~d.R;
    for (const auto& le : d.contraction.edges)
        labelled.emplace_back(codec.qr.edge_index(compress_mask(le.lo, d.R), compress_dir(le.dir, d.R)),
                              compress_mask(le.label, notR));
    std::sort(labelled.begin(), labelled.end());
    EdgeSet qt;
    for (const auto& [e, lab] : labelled) {
        qt.set(e);
        labels.push_back(lab);
    }
    key.push_back(codec.encode(qt, labels));
    for (const auto& p : d.parts) {
        key.push_back(p.w[0]);
        key.push_back(p.w[1]);
    }
    return key;
}

std::string explain_pair(const CubeContext& ctx, const EdgeSet& a, const EdgeSet& b,
                         const char* what) {
    std::ostringstream os;
    os << what << ": " << tree_to_json(ctx, a) << " vs " << tree_to_json(ctx, b);
    return os.str();
}

}  // namespace

IsoCheck verify_product_isomorphism(const CubeContext& ctx, std::uint32_t R, const RunConfig& cfg) {
    check_proper_mask(ctx, R);
    int r = std::popcount(R);
    int sub_n = ctx.n - r;
    ContractionCodec codec(r, ctx.n);
    CubeContext sub(sub_n);
    IsoCheck out;

    if (ctx.n <= 3) {
        // exhaustive: every tree reducing over R, all pairs both ways
        std::vector<EdgeSet> reducing;
        enumerate_spanning_trees(ctx, [&](const EdgeSet& t) {
            if (reduces_over(ctx, t, R)) reducing.push_back(t);
        });
        std::map<std::vector<std::uint64_t>, int> images;
        std::vector<Decomposition> decs(reducing.size());
        for (std::size_t i = 0; i < reducing.size(); ++i) {
            decs[i] = decompose(ctx, reducing[i], R);
            auto [it, fresh] = images.emplace(decomposition_key(codec, ctx, decs[i]), i);
            if (!fresh) {
                out.ok = false;
                out.counterexample = explain_pair(ctx, reducing[it->second], reducing[i],
                                                  "decomposition collision");
                return out;
            }
            if (!(recompose(ctx, decs[i]) == reducing[i])) {
                out.ok = false;
                out.counterexample =
                    explain_pair(ctx, reducing[i], recompose(ctx, decs[i]), "recompose mismatch");
                return out;
            }
        }
        // surjectivity by counting the codomain
        std::uint64_t label_words = std::uint64_t{1} << (codec.q * codec.tree_edges);
        std::uint64_t contraction_states = spanning_tree_count_u64(r) * label_words;
        std::uint64_t parts_total = 1;
        for (std::uint32_t x = 0; x < (std::uint32_t{1} << r); ++x)
            parts_total *= spanning_tree_count_u64(sub_n);
        if (contraction_states * parts_total != reducing.size()) {
            out.ok = false;
            out.counterexample = "codomain size mismatch: " +
                                 std::to_string(contraction_states * parts_total) + " vs " +
                                 std::to_string(reducing.size());
            return out;
        }
        out.vertices_checked = reducing.size();

        std::vector<std::set<EdgeSet>> nbrs(reducing.size());
        for (std::size_t i = 0; i < reducing.size(); ++i)
            for (const auto& mv : slide_neighbors(ctx, reducing[i])) nbrs[i].insert(mv.result);

        auto contraction_adjacent = [&](std::uint64_t a, std::uint64_t b) {
            bool adj = false;
            codec.for_each_move(a, [&](std::uint64_t to) { adj |= to == b; });
            return adj;
        };
        auto part_adjacent = [&](const EdgeSet& a, const EdgeSet& b) {
            for (const auto& mv : slide_neighbors(sub, a))
                if (mv.result == b) return true;
            return false;
        };

        for (std::size_t i = 0; i < reducing.size(); ++i) {
            auto ki = decomposition_key(codec, ctx, decs[i]);
            for (std::size_t j = i + 1; j < reducing.size(); ++j) {
                auto kj = decomposition_key(codec, ctx, decs[j]);
                int differing = -1;
                bool multiple = false;
                for (std::size_t c = 0; c < ki.size() && !multiple; ++c)
                    if (ki[c] != kj[c]) {
                        // parts occupy two words each; normalise to a coordinate index
                        int coord = c == 0 ? 0 : 1 + static_cast<int>((c - 1) / 2);
                        if (differing < 0)
                            differing = coord;
                        else if (differing != coord)
                            multiple = true;
                    }
                bool product_adj = false;
                if (!multiple && differing >= 0) {
                    if (differing == 0)
                        product_adj = contraction_adjacent(ki[0], kj[0]);
                    else
                        product_adj = part_adjacent(decs[i].parts[differing - 1],
                                                    decs[j].parts[differing - 1]);
                }
                bool slide_adj = nbrs[i].count(reducing[j]) > 0;
                ++out.pairs_checked;
                if (slide_adj != product_adj) {
                    out.ok = false;
                    out.counterexample = explain_pair(ctx, reducing[i], reducing[j],
                                                      slide_adj ? "slide edge missing in product"
                                                                : "product edge missing in slide graph");
                    return out;
                }
            }
        }
        return out;
    }

    // sampled mode: random decompositions, local move-set bijection both ways
    std::vector<EdgeSet> sub_trees, top_trees;
    enumerate_spanning_trees(sub, [&](const EdgeSet& t) { sub_trees.push_back(t); });
    enumerate_spanning_trees(codec.qr, [&](const EdgeSet& t) { top_trees.push_back(t); });
    std::mt19937_64 rng(cfg.rng_seed);
    std::uint64_t label_words = std::uint64_t{1} << (codec.q * codec.tree_edges);

    for (int it = 0; it < cfg.sample_count; ++it) {
        Decomposition d;
        d.R = R;
        EdgeSet qt = top_trees[rng() % top_trees.size()];
        std::uint64_t word = rng() % label_words;
        std::vector<std::uint32_t> labels(codec.tree_edges);
        for (int i = 0; i < codec.tree_edges; ++i)
            labels[i] = static_cast<std::uint32_t>((word >> (i * codec.q)) & ((1u << codec.q) - 1));
        d.contraction.R = R;
        d.contraction.is_tree = true;
        int idx = 0;
        std::uint32_t notR = ctx.full_mask() & ~R;
        qt.for_each([&](int e) {
            Edge ed = codec.qr.edge_of(e);
            d.contraction.edges.push_back({expand_mask(ed.lo, R), expand_dir(ed.dir, R),
                                           expand_mask(labels[idx++], notR)});
        });
        std::sort(d.contraction.edges.begin(), d.contraction.edges.end());
        for (std::uint32_t x = 0; x < (std::uint32_t{1} << r); ++x)
            d.parts.push_back(sub_trees[rng() % sub_trees.size()]);

        EdgeSet t = recompose(ctx, d);
        ++out.vertices_checked;

        std::set<EdgeSet> lhs;
        for (const auto& mv : slide_neighbors(ctx, t)) lhs.insert(mv.result);

        std::set<EdgeSet> rhs;
        auto k0 = decomposition_key(codec, ctx, d);
        codec.for_each_move(k0[0], [&](std::uint64_t to) {
            Decomposition d2 = d;
            EdgeSet nt;
            std::vector<std::uint32_t> nl;
            codec.decode(to, nt, nl);
            d2.contraction.edges.clear();
            int li = 0;
            nt.for_each([&](int e) {
                Edge ed = codec.qr.edge_of(e);
                d2.contraction.edges.push_back({expand_mask(ed.lo, R), expand_dir(ed.dir, R),
                                                expand_mask(nl[li++], notR)});
            });
            std::sort(d2.contraction.edges.begin(), d2.contraction.edges.end());
            rhs.insert(recompose(ctx, d2));
        });
        for (std::uint32_t x = 0; x < (std::uint32_t{1} << r); ++x)
            for (const auto& mv : slide_neighbors(sub, d.parts[x])) {
                Decomposition d2 = d;
                d2.parts[x] = mv.result;
                rhs.insert(recompose(ctx, d2));
            }
        ++out.pairs_checked;
        if (lhs != rhs) {
            out.ok = false;
            out.counterexample = "move sets differ at " + tree_to_json(ctx, t);
            return out;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// disconnection witnesses
// ---------------------------------------------------------------------------

DisconnectionWitness disconnection_witness(const Signature& s) {
    Classification cls = classify(s);
    if (cls.kind != SignatureKind::StrictlyReducible)
        throw std::invalid_argument("disconnection witnesses exist only for strictly reducible signatures");
    int n = static_cast<int>(s.size());
    CubeContext ctx(n);
    check_edge_capacity(ctx.edge_count);

    // work in sorted coordinates; sorted_idx[i] = original position of the
    // i-th smallest entry
    std::vector<int> sorted_idx(n);
    for (int i = 0; i < n; ++i) sorted_idx[i] = i;
    std::stable_sort(sorted_idx.begin(), sorted_idx.end(), [&](int a, int b) { return s[a] < s[b]; });
    Signature sorted(n);
    for (int i = 0; i < n; ++i) sorted[i] = s[sorted_idx[i]];

    // r = largest t < s_len with a reducing prefix [t]
    int s_len = classify(sorted).unsaturated_len;
    int r = 0;
    long long prefix = 0;
    for (int t = 1; t < s_len; ++t) {
        prefix += sorted[t - 1];
        if (prefix == (1LL << t) - 1) r = t;
    }
    if (r == 0) throw std::logic_error("strictly reducible signature without a reducing prefix");
    std::uint32_t R = (std::uint32_t{1} << r) - 1;

    auto upright = find_section(sorted, {});
    if (!upright) throw std::logic_error("no section for a valid signature");
    EdgeSet base = section_to_tree(ctx, *upright);
    Decomposition d = decompose(ctx, base, R);

    auto part_sig = [&](const EdgeSet& p) { return tree_signature(CubeContext(n - r), p); };
    std::vector<Signature> sigs;
    for (const auto& p : d.parts) sigs.push_back(part_sig(p));

    if (sigs[0] == sigs[1]) {
        std::size_t z = 0;
        for (std::size_t i = 2; i < sigs.size(); ++i)
            if (sigs[i] != sigs[0]) {
                z = i;
                break;
            }
        if (z != 0) {
            std::swap(d.parts[1], d.parts[z]);
        } else {
            // all subcube signatures equal some U; split U into U1 + U2 = 2U
            Signature u = sigs[0];
            if (u.size() < 2 || u[0] < 2)
                throw std::logic_error("common subcube signature cannot be split");
            Signature u1 = u, u2 = u;
            u1[0] -= 1;
            u1[1] += 1;
            u2[0] += 1;
            u2[1] -= 1;
            require_signature(u1);
            require_signature(u2);
            auto s1 = find_section(u1, {});
            auto s2 = find_section(u2, {});
            if (!s1 || !s2) throw std::logic_error("no section for a split signature");
            CubeContext subctx(n - r);
            d.parts[0] = section_to_tree(subctx, *s1);
            d.parts[1] = section_to_tree(subctx, *s2);
        }
    }

    EdgeSet tree_a = recompose(ctx, d);
    std::swap(d.parts[0], d.parts[1]);
    EdgeSet tree_b = recompose(ctx, d);

    // map back to the original (unsorted) direction labels
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = sorted_idx[i];
    DisconnectionWitness w;
    w.tree_a = relabel_tree(ctx, tree_a, perm);
    w.tree_b = relabel_tree(ctx, tree_b, perm);
    w.R = 0;
    for (int i = 0; i < r; ++i) w.R |= std::uint32_t{1} << sorted_idx[i];
    w.fingerprint_a = subtree_fingerprint(ctx, w.tree_a, w.R);
    w.fingerprint_b = subtree_fingerprint(ctx, w.tree_b, w.R);
    w.differing_subcube = -1;
    for (std::size_t i = 0; i < w.fingerprint_a.size(); ++i)
        if (w.fingerprint_a[i] != w.fingerprint_b[i]) {
            w.differing_subcube = static_cast<int>(i);
            break;
        }
    if (w.differing_subcube < 0) throw std::logic_error("witness fingerprints coincide");
    if (tree_signature(ctx, w.tree_a) != s || tree_signature(ctx, w.tree_b) != s)
        throw std::logic_error("witness signature mismatch");
    return w;
}

// ---------------------------------------------------------------------------
// connectivity harness
// ---------------------------------------------------------------------------

ConjectureReport test_conjecture(int n, const RunConfig& cfg) {
    if (n < 1 || n > 4) throw std::invalid_argument("connectivity harness supports n <= 4");
    CubeContext ctx(n);
    ConjectureReport report;
    report.n = n;
    report.all_consistent = true;

    ExploreOptions opt;
    opt.want_certificates = false;
    for (const Signature& s : enumerate_ordered_signatures(n)) {
        ConjectureRow row;
        row.signature = s;
        row.kind = classify(s).kind;
        ComponentReport comp = explore_signature(ctx, s, opt, cfg);
        if (!comp.exhaustive) {
            row.skipped = true;
            report.any_skipped = true;
        } else {
            row.components = comp.component_count();
            row.trees = comp.explored;
            bool expect_connected = row.kind != SignatureKind::StrictlyReducible;
            row.consistent = (row.components == 1) == expect_connected;
            if (!row.consistent) report.all_consistent = false;
        }
        report.rows.push_back(std::move(row));
    }

    // saturated signatures stand or fall with their truncations
    for (const Signature& s : enumerate_ordered_signatures(n)) {
        Classification cls = classify(s);
        if (!cls.saturated_above) continue;
        int r = *cls.saturated_above;
        Signature trunc(s.begin(), s.begin() + r);
        SaturatedCheckRow row;
        row.signature = s;
        row.truncation = trunc;
        ComponentReport full = explore_signature(ctx, s, opt, cfg);
        CubeContext rctx(r);
        ComponentReport cut = explore_signature(rctx, trunc, opt, cfg);
        if (!full.exhaustive || !cut.exhaustive) continue;
        row.connected_full = full.component_count() == 1;
        row.connected_truncated = cut.component_count() == 1;
        row.agree = row.connected_full == row.connected_truncated;
        if (!row.agree) report.all_consistent = false;
        report.saturated_checks.push_back(std::move(row));
    }
    return report;
}

// ---------------------------------------------------------------------------
// JSON rendering
// ---------------------------------------------------------------------------

std::string component_report_to_json(const CubeContext& ctx, const ComponentReport& r) {
    nlohmann::json j;
    j["n"] = r.n;
    j["signature"] = r.signature;
    j["explored"] = r.explored;
    j["exhaustive"] = r.exhaustive;
    if (!r.note.empty()) j["note"] = r.note;
    j["components"] = nlohmann::json::array();
    for (const auto& c : r.components) {
        nlohmann::json cj;
        cj["size"] = c.size;
        if (r.packed_states) {
            std::ostringstream hex;
            hex << "0x" << std::hex << c.representative.w[0];
            cj["representative_state"] = hex.str();
        } else {
            cj["representative"] = nlohmann::json::parse(tree_to_json(ctx, c.representative));
        }
        if (c.hypercube_k) cj["hypercube_k"] = *c.hypercube_k;
        if (!c.fingerprints.empty()) {
            nlohmann::json fp = nlohmann::json::object();
            for (const auto& [R, sigs] : c.fingerprints) {
                nlohmann::json per = nlohmann::json::array();
                for (const auto& s : sigs) per.push_back(s);
                fp[vertex_name(R)] = per;
            }
            cj["fingerprints"] = fp;
        }
        j["components"].push_back(cj);
    }
    return j.dump(2);
}

}  // namespace qslide
