#include "twodist/enumerate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstring>
#include <deque>
#include <exception>
#include <limits>
#include <mutex>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "twodist/errors.hpp"

namespace twodist {

namespace {

void require_searchable(const DualGraph& g) {
    if (g.n() < 2) throw StructureError("enumeration requires at least 2 units");
    if (!g.connected) throw StructureError("enumeration requires a connected graph");
}

// Constraints compiled to integer tests usable in the search hot loop.
struct CompiledConstraints {
    std::int64_t pop_lo = 0;
    std::int64_t pop_hi = std::numeric_limits<std::int64_t>::max();
    int er_cap = std::numeric_limits<int>::max();  // exclusive
};

CompiledConstraints compile_constraints(const DualGraph& g, const ConstraintSet& c) {
    CompiledConstraints cc;
    const std::int64_t total = g.total_population();
    cc.pop_hi = total;
    if (c.max_pop_dev) {
        auto [lo, hi] = population_bounds(total, *c.max_pop_dev);
        cc.pop_lo = lo;
        cc.pop_hi = hi;
    }
    if (c.max_er) {
        if (*c.max_er < 1) throw ConfigError("max_er must be a positive integer");
        cc.er_cap = *c.max_er;
    }
    return cc;
}

// ---------------------------------------------------------------------
// Search engine: grows district 0 as a connected set containing unit 0;
// the forbidden set F makes each vertex set visited exactly once.
// ---------------------------------------------------------------------

struct SearchCtx {
    const std::vector<NodeSet>* adj = nullptr;
    std::vector<std::int64_t> pop;
    std::vector<int> deg;
    NodeSet all;
    int n = 0;
    std::int64_t total = 0;
    CompiledConstraints cc;
};

SearchCtx make_ctx(const DualGraph& g, const ConstraintSet& c) {
    SearchCtx ctx;
    ctx.adj = &g.adj;
    ctx.n = g.n();
    ctx.all = NodeSet::full(ctx.n);
    ctx.pop.resize(ctx.n);
    ctx.deg.resize(ctx.n);
    for (int i = 0; i < ctx.n; ++i) {
        ctx.pop[i] = g.units[i].population;
        ctx.deg[i] = g.adj[i].count();
    }
    ctx.total = g.total_population();
    ctx.cc = compile_constraints(g, c);
    return ctx;
}

struct SearchNode {
    NodeSet s;      // district 0 so far (connected, contains unit 0)
    NodeSet f;      // vertices pinned to district 1
    NodeSet nbhd;   // union of adj over s (may include s itself)
    std::int64_t pop_s = 0;
    std::int64_t pop_f = 0;
    int cut = 0;    // edges between s and the rest
};

SearchNode root_node(const SearchCtx& ctx) {
    SearchNode nd;
    nd.s = NodeSet::single(0);
    nd.nbhd = (*ctx.adj)[0];
    nd.pop_s = ctx.pop[0];
    nd.cut = ctx.deg[0];
    return nd;
}

template <typename Emit>
inline void try_emit(const SearchCtx& ctx, const SearchNode& nd, Emit& emit) {
    if (nd.pop_s < ctx.cc.pop_lo || nd.pop_s > ctx.cc.pop_hi || nd.cut >= ctx.cc.er_cap) return;
    NodeSet comp = ctx.all - nd.s;
    if (comp.empty() || !is_connected_within(*ctx.adj, comp)) return;
    emit(nd.s, nd.pop_s, nd.cut);
}

// Children of a node: for the i-th candidate, the earlier candidates become
// forbidden, so every connected superset is reached exactly once. Two prunes:
// population bounds (district populations only grow along a branch) and the
// forbidden-split test (all of F must stay in one piece of the remainder,
// or the final complement cannot be connected).
template <typename Fn>
inline void for_each_child(const SearchCtx& ctx, const SearchNode& nd, Fn&& fn) {
    const auto& adj = *ctx.adj;
    NodeSet cands = (nd.nbhd - nd.s) - nd.f;
    NodeSet f = nd.f;
    std::int64_t pop_f = nd.pop_f;
    bool alive = true;
    cands.for_each([&](int u) {
        if (!alive) return;
        const std::int64_t pop2 = nd.pop_s + ctx.pop[u];
        if (pop2 <= ctx.cc.pop_hi) {
            NodeSet s2 = nd.s;
            s2.set(u);
            bool ok = true;
            if (f.any()) {
                NodeSet rest = ctx.all - s2;
                ok = f.is_subset_of(reach_within(adj, rest, f.lowest()));
            }
            if (ok) {
                SearchNode child;
                child.s = s2;
                child.f = f;
                child.nbhd = nd.nbhd | adj[u];
                child.pop_s = pop2;
                child.pop_f = pop_f;
                child.cut = nd.cut + ctx.deg[u] - 2 * (adj[u] & nd.s).count();
                fn(child);
            }
        }
        f.set(u);
        pop_f += ctx.pop[u];
        // everything still assignable to district 0 can no longer reach pop_lo
        if (ctx.total - pop_f < ctx.cc.pop_lo) alive = false;
    });
}

template <typename Emit>
void search_rec(const SearchCtx& ctx, const SearchNode& nd, Emit& emit,
                const std::atomic<bool>* stop) {
    if (stop && stop->load(std::memory_order_relaxed)) return;
    try_emit(ctx, nd, emit);
    for_each_child(ctx, nd, [&](const SearchNode& ch) { search_rec(ctx, ch, emit, stop); });
}

// Breadth-first expansion into independent subtree tasks; nodes consumed
// during generation are emitted here (serially).
template <typename Emit>
std::vector<SearchNode> make_tasks(const SearchCtx& ctx, const SearchNode& root, Emit& emit,
                                   std::size_t target) {
    std::vector<SearchNode> frontier{root};
    while (frontier.size() < target) {
        std::vector<SearchNode> next;
        for (const auto& nd : frontier) {
            try_emit(ctx, nd, emit);
            for_each_child(ctx, nd, [&](const SearchNode& ch) { next.push_back(ch); });
        }
        if (next.empty()) return {};
        frontier = std::move(next);
    }
    return frontier;
}

}  // namespace

std::pair<std::int64_t, std::int64_t> population_bounds(std::int64_t total_pop,
                                                        double max_pop_dev) {
    if (!std::isfinite(max_pop_dev) || !(max_pop_dev > 0.0) || !(max_pop_dev <= 1.0))
        throw ConfigError("max_pop_dev must lie in (0, 1]");
    if (total_pop <= 0)
        throw DomainError("population deviation bound needs a positive total population");

    // take the double at its exact binary value: max_pop_dev = mant / 2^k
    int exp2;
    const double frac = std::frexp(max_pop_dev, &exp2);
    const std::int64_t mant = std::llround(std::ldexp(frac, 53));
    const unsigned k = static_cast<unsigned>(53 - exp2);

    // deviation < max_pop_dev  <=>  |total - 2p| * 2^k < mant * total
    const BigInt total_b(total_pop);
    const BigInt scaled = total_b << k;
    const BigInt band = BigInt(mant) * total_b;
    const BigInt den = BigInt::pow2(k + 1);
    const BigInt lo = BigInt::floor_div(scaled - band, den) + BigInt(1);
    const BigInt hi = -BigInt::floor_div(-(scaled + band), den) - BigInt(1);

    std::int64_t plo = lo <= BigInt(0) ? 0 : lo.to_int64();
    std::int64_t phi = hi >= total_b ? total_pop : hi.to_int64();
    return {plo, phi};
}

std::uint64_t count_plans_search(const DualGraph& g, const ConstraintSet& c, int threads) {
    require_searchable(g);
    const SearchCtx ctx = make_ctx(g, c);
    const SearchNode root = root_node(ctx);
    threads = std::max(1, threads);

#ifdef _OPENMP
    if (threads > 1) {
        std::uint64_t shallow = 0;
        auto count_shallow = [&](const NodeSet&, std::int64_t, int) { ++shallow; };
        std::vector<SearchNode> tasks =
            make_tasks(ctx, root, count_shallow, static_cast<std::size_t>(threads) * 64);
        std::uint64_t deep = 0;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : deep) num_threads(threads)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tasks.size()); ++i) {
            std::uint64_t local = 0;
            auto em = [&](const NodeSet&, std::int64_t, int) { ++local; };
            search_rec(ctx, tasks[i], em, nullptr);
            deep += local;
        }
        return shallow + deep;
    }
#endif
    std::uint64_t count = 0;
    auto em = [&](const NodeSet&, std::int64_t, int) { ++count; };
    search_rec(ctx, root, em, nullptr);
    return count;
}

std::uint64_t enumerate_plans(const DualGraph& g, const ConstraintSet& c, const PlanSink& sink,
                              const EnumerateOptions& opts) {
    require_searchable(g);
    const SearchCtx ctx = make_ctx(g, c);
    const SearchNode root = root_node(ctx);

    std::atomic<bool> stop{false};
    std::atomic<std::uint64_t> emitted{0};
    std::mutex ex_mu;
    std::exception_ptr first_ex;
    auto guarded = [&](const NodeSet& s, std::int64_t pop, int cut) {
        if (stop.load(std::memory_order_relaxed)) return;  // sink already failed
        PlanView view{s, ctx.n, pop, cut};
        try {
            sink(view);
            emitted.fetch_add(1, std::memory_order_relaxed);
        } catch (...) {
            {
                std::lock_guard lk(ex_mu);
                if (!first_ex) first_ex = std::current_exception();
            }
            stop.store(true, std::memory_order_relaxed);
        }
    };

    const int threads = std::max(1, opts.threads);
#ifdef _OPENMP
    if (threads > 1) {
        std::vector<SearchNode> tasks =
            make_tasks(ctx, root, guarded, static_cast<std::size_t>(threads) * 64);
        std::mutex sink_mu;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tasks.size()); ++i) {
            if (opts.concurrent_sink) {
                search_rec(ctx, tasks[i], guarded, &stop);
            } else {
                auto locked = [&](const NodeSet& s, std::int64_t pop, int cut) {
                    std::lock_guard lk(sink_mu);
                    guarded(s, pop, cut);
                };
                search_rec(ctx, tasks[i], locked, &stop);
            }
        }
    } else
#endif
    {
        search_rec(ctx, root, guarded, &stop);
    }

    if (first_ex) {
        try {
            std::rethrow_exception(first_ex);
        } catch (const std::exception& e) {
            throw SinkError(e.what(), emitted.load());
        } catch (...) {
            throw SinkError("plan sink failed", emitted.load());
        }
    }
    return emitted.load();
}

std::vector<Plan> brute_force_plans(const DualGraph& g, const ConstraintSet& c) {
    require_searchable(g);
    if (g.n() > 25)
        throw SizeError("brute_force_plans is capped at n <= 25, got n=" + std::to_string(g.n()));
    const CompiledConstraints cc = compile_constraints(g, c);
    const int n = g.n();
    const NodeSet all = NodeSet::full(n);

    std::vector<Plan> out;
    const std::uint64_t lim = std::uint64_t{1} << (n - 1);
    for (std::uint64_t x = 0; x < lim; ++x) {
        const std::uint64_t bits = (x << 1) | 1;
        NodeSet d0;
        d0.w[0] = bits;
        NodeSet d1 = all - d0;
        if (d1.empty()) continue;

        std::int64_t pop0 = 0;
        d0.for_each([&](int i) { pop0 += g.units[i].population; });
        if (pop0 < cc.pop_lo || pop0 > cc.pop_hi) continue;

        int er = 0;
        for (const auto& e : g.edges) er += d0.test(e.a) != d0.test(e.b);
        if (er >= cc.er_cap) continue;

        if (!is_connected_within(g.adj, d0)) continue;
        if (!is_connected_within(g.adj, d1)) continue;
        out.push_back(Plan{d0, n});
    }
    return out;
}

// ---------------------------------------------------------------------
// Frontier counter: stream vertices in a low-width order; a state records,
// for each frontier vertex, its district and which same-district block it
// belongs to, plus a flag per district marking a finished component. Valid
// completions end with exactly one finished component per district.
// ---------------------------------------------------------------------

namespace {

constexpr int kMaxWidth = 25;        // intermediate frontier cap
constexpr std::uint8_t kNewBlock = 25;  // placeholder id, relabeled on canon

struct DpKey {
    // [0..f-1]: block_id | district << 5;  [26]: done flags;  [27]: cut count
    std::array<std::uint8_t, 28> b{};
    bool operator==(const DpKey&) const = default;
};

struct DpKeyHash {
    std::size_t operator()(const DpKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint8_t c : k.b) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

struct StepPlan {
    int v = 0;
    bool force_district0 = false;
    int fb = 0;                  // frontier size before this step
    int fa = 0;                  // frontier size after
    std::vector<int> enbr_pos;   // slots of v's already-processed neighbors
    std::vector<int> keep_pos;   // intermediate slots surviving this step
    std::vector<int> drop_pos;   // intermediate slots leaving this step
};

struct FrontierLayout {
    std::vector<int> order;
    int width = 0;
};

int layout_width(const DualGraph& g, const std::vector<int>& order) {
    const int n = g.n();
    std::vector<int> pos(n);
    for (int t = 0; t < n; ++t) pos[order[t]] = t;
    std::vector<int> delta(n + 1, 0);
    for (int u = 0; u < n; ++u) {
        int last = pos[u];
        for (int w : g.nbrs[u]) last = std::max(last, pos[w]);
        delta[pos[u]] += 1;
        delta[last + 1] -= 1;
    }
    int width = 0, cur = 0;
    for (int t = 0; t < n; ++t) {
        cur += delta[t];
        width = std::max(width, cur);
    }
    return width;
}

FrontierLayout best_frontier_order(const DualGraph& g) {
    const int n = g.n();
    // neighbors in ascending degree keeps BFS frontiers narrow on meshes
    std::vector<std::vector<int>> by_deg = g.nbrs;
    for (auto& lst : by_deg)
        std::sort(lst.begin(), lst.end(), [&](int a, int b) {
            return std::pair(g.adj[a].count(), a) < std::pair(g.adj[b].count(), b);
        });

    FrontierLayout best;
    best.width = std::numeric_limits<int>::max();
    for (int s = 0; s < n; ++s) {
        std::vector<int> order;
        order.reserve(n);
        std::vector<char> vis(n, 0);
        std::deque<int> q{s};
        vis[s] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            order.push_back(v);
            for (int w : by_deg[v])
                if (!vis[w]) {
                    vis[w] = 1;
                    q.push_back(w);
                }
        }
        int width = layout_width(g, order);
        if (width < best.width) {
            best.width = width;
            best.order = std::move(order);
        }
    }
    return best;
}

std::vector<StepPlan> build_steps(const DualGraph& g, const std::vector<int>& order) {
    const int n = g.n();
    std::vector<int> pos(n);
    for (int t = 0; t < n; ++t) pos[order[t]] = t;
    std::vector<int> last(n);
    for (int u = 0; u < n; ++u) {
        last[u] = pos[u];
        for (int w : g.nbrs[u]) last[u] = std::max(last[u], pos[w]);
    }

    std::vector<StepPlan> steps(n);
    std::vector<int> frontier;  // vertex ids in slot order
    for (int t = 0; t < n; ++t) {
        StepPlan& sp = steps[t];
        sp.v = order[t];
        sp.force_district0 = sp.v == 0;
        sp.fb = static_cast<int>(frontier.size());
        for (int w : g.nbrs[sp.v]) {
            if (pos[w] < t) {
                auto it = std::find(frontier.begin(), frontier.end(), w);
                sp.enbr_pos.push_back(static_cast<int>(it - frontier.begin()));
            }
        }
        frontier.push_back(sp.v);
        std::vector<int> kept;
        for (int i = 0; i < static_cast<int>(frontier.size()); ++i) {
            if (last[frontier[i]] > t) {
                sp.keep_pos.push_back(i);
                kept.push_back(frontier[i]);
            } else {
                sp.drop_pos.push_back(i);
            }
        }
        sp.fa = static_cast<int>(sp.keep_pos.size());
        frontier = std::move(kept);
    }
    return steps;
}

}  // namespace

BigInt count_plans_frontier(const DualGraph& g, std::optional<int> max_er) {
    require_searchable(g);
    if (max_er) {
        if (*max_er < 1) throw ConfigError("max_er must be a positive integer");
        if (*max_er > g.m()) max_er.reset();  // vacuous bound
        else if (*max_er > 255) throw SizeError("frontier counter tracks cuts up to 255");
    }
    const bool track = max_er.has_value();
    const int er_cap = track ? *max_er : 0;

    FrontierLayout layout = best_frontier_order(g);
    if (layout.width > kMaxWidth)
        throw SizeError("graph frontier too wide for the streaming counter (" +
                        std::to_string(layout.width) + " > " + std::to_string(kMaxWidth) + ")");
    const std::vector<StepPlan> steps = build_steps(g, layout.order);

    std::unordered_map<DpKey, BigInt, DpKeyHash> cur, next;
    cur.emplace(DpKey{}, BigInt(1));

    for (const StepPlan& sp : steps) {
        next.clear();
        next.reserve(cur.size() * 2);
        for (const auto& [key, cnt] : cur) {
            const std::uint8_t done = key.b[26];
            const std::uint8_t cut = key.b[27];
            for (int c = 0; c < 2; ++c) {
                if (sp.force_district0 && c == 1) break;

                std::uint32_t merge_set = 0;
                int cross = 0;
                for (int p : sp.enbr_pos) {
                    if (((key.b[p] >> 5) & 1) == static_cast<unsigned>(c))
                        merge_set |= 1u << (key.b[p] & 31);
                    else
                        ++cross;
                }
                const int new_cut = cut + cross;
                if (track && new_cut >= er_cap) continue;

                std::uint8_t slots[32];
                std::memcpy(slots, key.b.data(), sp.fb);
                const std::uint8_t cbit = static_cast<std::uint8_t>(c << 5);
                if (merge_set == 0) {
                    // a brand-new component: dead once this district is done
                    if ((done >> c) & 1) continue;
                    slots[sp.fb] = kNewBlock | cbit;
                } else {
                    const std::uint8_t target =
                        static_cast<std::uint8_t>(std::countr_zero(merge_set));
                    for (int i = 0; i < sp.fb; ++i)
                        if ((merge_set >> (slots[i] & 31)) & 1) slots[i] = target | cbit;
                    slots[sp.fb] = target | cbit;
                }

                // retire leaving slots; a block with no surviving slot seals
                // its district's component
                std::uint8_t done2 = done;
                bool dead = false;
                std::uint32_t kept_blocks = 0;
                std::uint8_t out[32];
                for (int i = 0; i < sp.fa; ++i) {
                    out[i] = slots[sp.keep_pos[i]];
                    kept_blocks |= 1u << (out[i] & 31);
                }
                std::uint32_t sealed = 0;
                for (int p : sp.drop_pos) {
                    const std::uint8_t bid = slots[p] & 31;
                    if ((kept_blocks >> bid) & 1) continue;
                    if ((sealed >> bid) & 1) continue;
                    sealed |= 1u << bid;
                    const int bcol = (slots[p] >> 5) & 1;
                    if ((done2 >> bcol) & 1) {
                        dead = true;  // a second finished component
                        break;
                    }
                    done2 |= static_cast<std::uint8_t>(1 << bcol);
                }
                if (dead) continue;
                for (int i = 0; i < sp.fa; ++i)
                    if ((done2 >> ((out[i] >> 5) & 1)) & 1) {
                        dead = true;  // live block can never rejoin a finished district
                        break;
                    }
                if (dead) continue;

                // canonical block ids by first occurrence
                DpKey k2{};
                std::uint8_t remap[32];
                std::memset(remap, 0xFF, sizeof remap);
                std::uint8_t nb = 0;
                for (int i = 0; i < sp.fa; ++i) {
                    const std::uint8_t bid = out[i] & 31;
                    if (remap[bid] == 0xFF) remap[bid] = nb++;
                    k2.b[i] = remap[bid] | (out[i] & 0x20);
                }
                k2.b[26] = done2;
                k2.b[27] = track ? static_cast<std::uint8_t>(new_cut) : 0;
                next[k2] += cnt;
            }
        }
        cur.swap(next);
    }

    BigInt total;
    for (const auto& [key, cnt] : cur)
        if (key.b[26] == 3) total += cnt;
    return total;
}

BigInt count_plans(const DualGraph& g, const ConstraintSet& c, int threads) {
    require_searchable(g);
    if (c.max_pop_dev) return BigInt(count_plans_search(g, c, threads));
    if (c.max_er && *c.max_er > 255 && *c.max_er <= g.m())
        return BigInt(count_plans_search(g, c, threads));
    try {
        return count_plans_frontier(g, c.max_er);
    } catch (const SizeError&) {
        return BigInt(count_plans_search(g, c, threads));
    }
}

}  // namespace twodist
