#include "qslide/slide.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "qslide/section.hpp"

namespace qslide {

namespace {

constexpr int kMaxVertices = 32;  // 2^n for n <= 5

// rooted view of a spanning tree: parent direction and depth per vertex
struct RootedTree {
    std::array<std::int8_t, kMaxVertices> parent_dir;
    std::array<std::int8_t, kMaxVertices> depth;
};

void root_tree(const CubeContext& ctx, const EdgeSet& t, RootedTree& rt) {
    std::array<std::uint8_t, kMaxVertices> queue;
    std::array<bool, kMaxVertices> seen{};
    rt.parent_dir[0] = -1;
    rt.depth[0] = 0;
    seen[0] = true;
    int head = 0, tail = 0;
    queue[tail++] = 0;
    while (head < tail) {
        Vertex v = queue[head++];
        for (int i = 0; i < ctx.n; ++i) {
            if (!t.test(ctx.edge_index(v, i))) continue;
            Vertex w = v ^ (Vertex{1} << i);
            if (seen[w]) continue;
            seen[w] = true;
            rt.parent_dir[w] = static_cast<std::int8_t>(i);
            rt.depth[w] = static_cast<std::int8_t>(rt.depth[v] + 1);
            queue[tail++] = static_cast<std::uint8_t>(w);
        }
    }
}

// does edge e lie on the tree path between a and b? (climb both ends to the LCA)
bool path_contains(const CubeContext& ctx, const RootedTree& rt, EdgeId e, Vertex a, Vertex b) {
    while (a != b) {
        Vertex* x = rt.depth[a] >= rt.depth[b] ? &a : &b;
        int pd = rt.parent_dir[*x];
        if (ctx.edge_index(*x, pd) == e) return true;
        *x ^= Vertex{1} << pd;
    }
    return false;
}

template <typename Fn>
void for_each_slide(const CubeContext& ctx, const EdgeSet& t, Fn&& fn) {
    RootedTree rt;
    root_tree(ctx, t, rt);
    t.for_each([&](int e) {
        Edge ed = ctx.edge_of(e);
        for (int i = 0; i < ctx.n; ++i) {
            if (i == ed.dir) continue;
            Vertex a = ed.lo ^ (Vertex{1} << i);  // endpoints of sigma_i(e)
            EdgeId f = ctx.edge_index(a, ed.dir);
            if (t.test(f)) continue;
            if (!path_contains(ctx, rt, e, a, a | (Vertex{1} << ed.dir))) continue;
            fn(e, i, f);
        }
    });
}

void require_tree_edge(const CubeContext& ctx, const EdgeSet& t, EdgeId e, int dir) {
    if (e < 0 || e >= ctx.edge_count) throw std::out_of_range("edge id out of range");
    if (!t.test(e)) throw std::invalid_argument("edge is not in the tree");
    ctx.check_dir(dir);
    if (dir == ctx.edge_dir(e))
        throw std::invalid_argument("slide direction equals the edge's own direction");
}

}  // namespace

bool is_slidable(const CubeContext& ctx, const EdgeSet& t, EdgeId e, int dir) {
    require_tree_edge(ctx, t, e, dir);
    Edge ed = ctx.edge_of(e);
    Vertex a = ed.lo ^ (Vertex{1} << dir);
    EdgeId f = ctx.edge_index(a, ed.dir);
    if (t.test(f)) return false;
    RootedTree rt;
    root_tree(ctx, t, rt);
    return path_contains(ctx, rt, e, a, a | (Vertex{1} << ed.dir));
}

bool is_slidable_naive(const CubeContext& ctx, const EdgeSet& t, EdgeId e, int dir) {
    require_tree_edge(ctx, t, e, dir);
    EdgeId f = ctx.sigma(e, dir);
    if (t.test(f)) return false;
    EdgeSet moved = t;
    moved.reset(e);
    moved.set(f);
    return is_spanning_tree(ctx, moved);
}

std::vector<SlideMove> slide_neighbors(const CubeContext& ctx, const EdgeSet& t) {
    std::vector<SlideMove> out;
    for_each_slide(ctx, t, [&](EdgeId e, int i, EdgeId f) {
        EdgeSet nb = t;
        nb.reset(e);
        nb.set(f);
        out.push_back(SlideMove{e, i, nb});
    });
    return out;
}

std::vector<Signature> subtree_fingerprint(const CubeContext& ctx, const EdgeSet& t,
                                           std::uint32_t R) {
    if (!reduces_over(ctx, t, R))
        throw ReductionRequired("fingerprint needs a tree reducing over " + vertex_name(R));
    int r = std::popcount(R);
    std::vector<Signature> out(std::size_t{1} << r);
    for (std::uint32_t xc = 0; xc < out.size(); ++xc)
        out[xc] = restrict_to_subcube(ctx, t, R, expand_mask(xc, R)).sig;
    return out;
}

// ---------------------------------------------------------------------------
// visited set: open-addressing shards keyed by the canonical edge bitvector
// ---------------------------------------------------------------------------

namespace {

constexpr EdgeSet kEmptySlot{{~std::uint64_t{0}, ~std::uint64_t{0}}};

struct FlatSet {
    std::vector<EdgeSet> slots;
    std::size_t mask = 0;
    std::size_t count = 0;

    explicit FlatSet(std::size_t initial_pow2 = 1 << 10) {
        slots.assign(initial_pow2, kEmptySlot);
        mask = initial_pow2 - 1;
    }

    static std::size_t hash(const EdgeSet& k) {
        return splitmix64(k.w[0] ^ splitmix64(k.w[1] + 0x5851f42d4c957f2dULL));
    }

    bool insert(const EdgeSet& k) {
        if ((count + 1) * 2 > slots.size()) grow();
        std::size_t i = hash(k) & mask;
        while (!(slots[i] == kEmptySlot)) {
            if (slots[i] == k) return false;
            i = (i + 1) & mask;
        }
        slots[i] = k;
        ++count;
        return true;
    }

    void grow() {
        std::vector<EdgeSet> old = std::move(slots);
        slots.assign(old.size() * 2, kEmptySlot);
        mask = slots.size() - 1;
        for (const EdgeSet& k : old)
            if (!(k == kEmptySlot)) {
                std::size_t i = hash(k) & mask;
                while (!(slots[i] == kEmptySlot)) i = (i + 1) & mask;
                slots[i] = k;
            }
    }

    std::uint64_t memory_bytes() const { return slots.size() * sizeof(EdgeSet); }
};

struct ShardedVisited {
    int shard_bits;
    std::vector<FlatSet> shards;
    std::vector<std::mutex> locks;

    explicit ShardedVisited(int bits) : shard_bits(bits), shards(), locks(std::size_t{1} << bits) {
        shards.reserve(std::size_t{1} << bits);
        for (std::size_t i = 0; i < (std::size_t{1} << bits); ++i) shards.emplace_back();
    }

    int shard_of(const EdgeSet& k) const {
        // top hash bits pick the shard; FlatSet probes with the low bits
        return static_cast<int>((FlatSet::hash(k) >> 48) & ((std::size_t{1} << shard_bits) - 1));
    }

    bool insert(const EdgeSet& k) {
        int s = shard_of(k);
        std::lock_guard<std::mutex> g(locks[s]);
        return shards[s].insert(k);
    }

    std::uint64_t count() const {
        std::uint64_t total = 0;
        for (const auto& s : shards) total += s.count;
        return total;
    }

    std::uint64_t memory_bytes() const {
        std::uint64_t total = 0;
        for (const auto& s : shards) total += s.memory_bytes();
        return total;
    }

    std::vector<EdgeSet> sorted_keys() const {
        std::vector<EdgeSet> keys;
        keys.reserve(count());
        for (const auto& s : shards)
            for (const EdgeSet& k : s.slots)
                if (!(k == kEmptySlot)) keys.push_back(k);
        std::sort(keys.begin(), keys.end());
        return keys;
    }
};

struct AbortStreaming {};  // unwinds the seed enumeration on interrupt

// -------------------------------------------------------------------------
// checkpoint file: header (n, signature, shard count) + sorted key runs
// -------------------------------------------------------------------------

constexpr std::uint64_t kCheckpointMagic = 0x3154504b434c5351ULL;  // "QSLCKPT1"

struct CheckpointState {
    std::uint64_t seeds_consumed = 0;
    std::vector<ComponentInfo> completed;  // sizes + representatives only
    bool flood_active = false;
    std::uint64_t flood_size = 0;
    EdgeSet flood_min;
    std::vector<EdgeSet> frontier;
    std::vector<EdgeSet> visited_keys;
};

void write_u64(std::ofstream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::ifstream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw std::runtime_error("truncated checkpoint");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
    return v;
}

void write_key(std::ofstream& os, const EdgeSet& k) {
    write_u64(os, k.w[0]);
    write_u64(os, k.w[1]);
}

EdgeSet read_key(std::ifstream& is) {
    EdgeSet k;
    k.w[0] = read_u64(is);
    k.w[1] = read_u64(is);
    return k;
}

void save_checkpoint(const std::string& path, const CubeContext& ctx, const Signature& sig,
                     int shard_bits, const CheckpointState& st) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write checkpoint: " + path);
        write_u64(os, kCheckpointMagic);
        write_u64(os, 1);  // version
        write_u64(os, static_cast<std::uint64_t>(ctx.n));
        write_u64(os, sig.size());
        for (int a : sig) write_u64(os, static_cast<std::uint64_t>(a));
        write_u64(os, static_cast<std::uint64_t>(shard_bits));
        write_u64(os, st.seeds_consumed);
        write_u64(os, st.completed.size());
        for (const auto& c : st.completed) {
            write_u64(os, c.size);
            write_key(os, c.representative);
        }
        write_u64(os, st.flood_active ? 1 : 0);
        if (st.flood_active) {
            write_u64(os, st.flood_size);
            write_key(os, st.flood_min);
            write_u64(os, st.frontier.size());
            for (const auto& k : st.frontier) write_key(os, k);
        }
        write_u64(os, st.visited_keys.size());
        for (const auto& k : st.visited_keys) write_key(os, k);
    }
    std::rename(tmp.c_str(), path.c_str());
}

bool load_checkpoint(const std::string& path, const CubeContext& ctx, const Signature& sig,
                     int shard_bits, CheckpointState& st) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return false;
    if (read_u64(is) != kCheckpointMagic) throw std::runtime_error("bad checkpoint magic");
    if (read_u64(is) != 1) throw std::runtime_error("unsupported checkpoint version");
    if (read_u64(is) != static_cast<std::uint64_t>(ctx.n))
        throw std::runtime_error("checkpoint dimension mismatch");
    std::uint64_t len = read_u64(is);
    if (len != sig.size()) throw std::runtime_error("checkpoint signature mismatch");
    for (std::uint64_t i = 0; i < len; ++i)
        if (read_u64(is) != static_cast<std::uint64_t>(sig[i]))
            throw std::runtime_error("checkpoint signature mismatch");
    if (read_u64(is) != static_cast<std::uint64_t>(shard_bits))
        throw std::runtime_error("checkpoint shard count mismatch");
    st.seeds_consumed = read_u64(is);
    std::uint64_t ncomp = read_u64(is);
    st.completed.resize(ncomp);
    for (auto& c : st.completed) {
        c.size = read_u64(is);
        c.representative = read_key(is);
    }
    st.flood_active = read_u64(is) != 0;
    if (st.flood_active) {
        st.flood_size = read_u64(is);
        st.flood_min = read_key(is);
        st.frontier.resize(read_u64(is));
        for (auto& k : st.frontier) k = read_key(is);
    }
    st.visited_keys.resize(read_u64(is));
    for (auto& k : st.visited_keys) k = read_key(is);
    return true;
}

// -------------------------------------------------------------------------
// BFS engine over the implicit slide graph
// -------------------------------------------------------------------------

struct Explorer {
    const CubeContext& ctx;
    Signature sig;
    ExploreOptions opt;
    RunConfig cfg;
    int shard_bits;
    ShardedVisited visited;
    ComponentReport report;
    CheckpointState ckpt;
    bool interrupted = false;
    int levels_done = 0;

    Explorer(const CubeContext& c, const Signature& s, const ExploreOptions& o, const RunConfig& f)
        : ctx(c), sig(s), opt(o), cfg(f), shard_bits(f.workers > 1 ? 4 : 0), visited(shard_bits) {
        report.n = ctx.n;
        report.signature = sig;
        report.exhaustive = opt.mode == ExploreMode::Exhaustive;
    }

    bool should_stop() {
        if (opt.stop && opt.stop->load(std::memory_order_relaxed)) return true;
        if (opt.abort_after_levels >= 0 && levels_done >= opt.abort_after_levels) return true;
        return false;
    }

    bool over_cap() { return visited.memory_bytes() > cfg.memory_cap_bytes; }

    // expand one frontier level, returning newly visited trees
    std::vector<EdgeSet> expand_level(const std::vector<EdgeSet>& frontier) {
        std::vector<EdgeSet> next;
        auto work = [&](std::size_t begin, std::size_t end, std::vector<EdgeSet>& out) {
            for (std::size_t i = begin; i < end; ++i)
                for_each_slide(ctx, frontier[i], [&](EdgeId e, int, EdgeId f) {
                    EdgeSet nb = frontier[i];
                    nb.reset(e);
                    nb.set(f);
                    if (visited.insert(nb)) out.push_back(nb);
                });
        };
        int workers = std::max(1, cfg.workers);
        if (workers == 1 || frontier.size() < 256) {
            work(0, frontier.size(), next);
        } else {
            std::vector<std::vector<EdgeSet>> parts(workers);
            std::vector<std::thread> threads;
            std::size_t chunk = (frontier.size() + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                std::size_t b = std::min(frontier.size(), w * chunk);
                std::size_t e = std::min(frontier.size(), b + chunk);
                threads.emplace_back(work, b, e, std::ref(parts[w]));
            }
            for (auto& t : threads) t.join();
            for (auto& p : parts) next.insert(next.end(), p.begin(), p.end());
        }
        ++levels_done;
        return next;
    }

    void maybe_save_checkpoint(const std::vector<EdgeSet>& frontier, bool active,
                               std::uint64_t size, const EdgeSet& min_key) {
        if (cfg.checkpoint_path.empty()) return;
        ckpt.flood_active = active;
        ckpt.flood_size = size;
        ckpt.flood_min = min_key;
        ckpt.frontier = frontier;
        std::sort(ckpt.frontier.begin(), ckpt.frontier.end());
        ckpt.visited_keys = visited.sorted_keys();
        save_checkpoint(cfg.checkpoint_path, ctx, sig, shard_bits, ckpt);
    }

    // flood one component; frontier already inserted into visited
    void flood(std::vector<EdgeSet> frontier, std::uint64_t size, EdgeSet min_key) {
        while (!frontier.empty()) {
            if (should_stop() || over_cap()) {
                maybe_save_checkpoint(frontier, true, size, min_key);
                interrupted = true;
                report.exhaustive = false;
                report.note = over_cap() ? "aborted: memory cap exceeded mid-flood"
                                         : "interrupted; checkpoint saved if path configured";
                throw AbortStreaming{};
            }
            std::vector<EdgeSet> next = expand_level(frontier);
            for (const EdgeSet& k : next) {
                ++size;
                if (k < min_key) min_key = k;
            }
            frontier = std::move(next);
            if (!frontier.empty()) maybe_save_checkpoint(frontier, true, size, min_key);
        }
        ComponentInfo info;
        info.size = size;
        info.representative = min_key;
        ckpt.completed.push_back(info);
        ++ckpt.seeds_consumed;
        maybe_save_checkpoint({}, false, 0, EdgeSet{});
    }

    void process_seed(const EdgeSet& seed) {
        if (!visited.insert(seed)) {
            ++ckpt.seeds_consumed;
            return;
        }
        flood({seed}, 1, seed);
    }

    ComponentReport run() {
        // pre-size from the expected census: each signature's tree total is
        // its upright count shifted by 2^n - n - 1 (sizing hint only; the
        // stream itself is authoritative)
        if (opt.mode == ExploreMode::Exhaustive) {
            std::uint64_t expected = count_upright(sig) << ((1 << ctx.n) - ctx.n - 1);
            report.explored = 0;
            if (expected * 2 * sizeof(EdgeSet) > cfg.memory_cap_bytes) {
                report.exhaustive = false;
                report.note = "skipped: estimated " + std::to_string(expected) +
                              " trees exceed the memory cap";
                return report;
            }
        }

        std::uint64_t resume_seeds = 0;
        if (!cfg.checkpoint_path.empty()) {
            CheckpointState loaded;
            if (load_checkpoint(cfg.checkpoint_path, ctx, sig, shard_bits, loaded)) {
                for (const auto& k : loaded.visited_keys) visited.insert(k);
                ckpt.completed = loaded.completed;
                ckpt.seeds_consumed = loaded.seeds_consumed;
                resume_seeds = loaded.seeds_consumed;
                if (loaded.flood_active) {
                    try {
                        flood(loaded.frontier, loaded.flood_size, loaded.flood_min);
                        ++resume_seeds;  // the interrupted seed is now complete
                    } catch (const AbortStreaming&) {
                        return finish();
                    }
                }
            }
        }

        std::uint64_t seed_index = 0;
        auto seed_sink = [&](const EdgeSet& t) {
            if (seed_index++ < resume_seeds) return;
            process_seed(t);
        };
        try {
            if (opt.mode == ExploreMode::Exhaustive) {
                trees_with_signature(ctx, sig, seed_sink, cfg.allow_large);
            } else {
                sections_with_signature(
                    sig, [&](const Section& s) { seed_sink(section_to_tree(ctx, s)); },
                    cfg.allow_large);
            }
        } catch (const AbortStreaming&) {
        }
        return finish();
    }

    ComponentReport finish() {
        report.components = std::move(ckpt.completed);
        std::sort(report.components.begin(), report.components.end(),
                  [](const ComponentInfo& a, const ComponentInfo& b) {
                      return a.representative < b.representative;
                  });
        report.explored = 0;
        for (const auto& c : report.components) report.explored += c.size;
        if (interrupted) report.exhaustive = false;

        auto rsets = reducing_sets(sig);
        for (auto& c : report.components) {
            for (std::uint32_t R : rsets)
                c.fingerprints[R] = subtree_fingerprint(ctx, c.representative, R);
            if (opt.want_certificates && !interrupted) attach_certificate(c);
        }
        return report;
    }

    void attach_certificate(ComponentInfo& c) {
        // only components whose order is a power of two can be cubes, and the
        // required degree is forced; anything else is skipped silently
        if (c.size == 0 || (c.size & (c.size - 1)) != 0) return;
        if (c.size > opt.cert_max_vertices) return;
        int k = std::countr_zero(c.size);
        auto g = component_graph(ctx, c.representative, c.size);
        if (!g) return;
        int deg = 0;
        if (!g->is_regular(&deg) || deg != k) return;
        if (is_hypercube(*g, k)) c.hypercube_k = k;
    }
};

}  // namespace

ComponentReport explore_signature(const CubeContext& ctx, const Signature& s,
                                  const ExploreOptions& opt, const RunConfig& cfg) {
    if (static_cast<int>(s.size()) != ctx.n)
        throw std::invalid_argument("signature length does not match dimension");
    require_signature(s);
    if (opt.mode == ExploreMode::Exhaustive && ctx.n > 4 && !cfg.allow_large)
        throw std::invalid_argument("exhaustive exploration is gated to n <= 4");
    check_edge_capacity(ctx.edge_count);
    Explorer ex(ctx, s, opt, cfg);
    return ex.run();
}

std::optional<SimpleGraph> component_graph(const CubeContext& ctx, const EdgeSet& member,
                                           std::uint64_t max_vertices) {
    if (!is_spanning_tree(ctx, member)) throw std::invalid_argument("not a spanning tree");
    std::unordered_map<EdgeSet, int, EdgeSetHash> index;
    std::vector<EdgeSet> order{member};
    index.emplace(member, 0);
    std::vector<std::pair<int, int>> edges;
    for (std::size_t head = 0; head < order.size(); ++head) {
        EdgeSet cur = order[head];
        for_each_slide(ctx, cur, [&](EdgeId e, int d, EdgeId f) {
            (void)d;
            EdgeSet nb = cur;
            nb.reset(e);
            nb.set(f);
            auto [it, fresh] = index.emplace(nb, static_cast<int>(order.size()));
            if (fresh) {
                order.push_back(nb);
                if (order.size() > max_vertices) return;
            }
            if (static_cast<int>(head) < it->second) edges.emplace_back(head, it->second);
        });
        if (order.size() > max_vertices) return std::nullopt;
    }
    SimpleGraph g(static_cast<int>(order.size()));
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

}  // namespace qslide
