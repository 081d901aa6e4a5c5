#include "adm/buchi.hpp"

#include <algorithm>
#include <deque>
#include <exception>
#include <unordered_map>
#include <utility>

#include "adm/errors.hpp"

namespace adm {

bool BuchiLevelProduct::in_D(Vertex p, int m) const {
    if (base[p] == kNoBase) return false;
    if (m == 0) return true;
    return (events[p] >> stage_of_D.at(static_cast<std::size_t>(m))) & 1u;
}

bool BuchiLevelProduct::in_E(Vertex p, int m) const {
    if (base[p] == kNoBase || m < 1) return false;
    return (events[p] >> stage_of_E.at(static_cast<std::size_t>(m))) & 1u;
}

BuchiEngine::BuchiEngine(const Game& g, BuchiOptions opt) : g_(g), opt_(opt), values_(g.num_players(), g.num_vertices()) {
    require_valid(g_);
    for (Player i = 0; i < g_.num_players(); ++i)
        if (g_.objectives[i].kind != ObjectiveKind::Buchi)
            fail(ErrorKind::Unsupported, "Büchi engine needs Büchi objectives; player '" + g_.players[i] + "' has " +
                                             to_string(g_.objectives[i].kind));
    dom_.resize(g_.num_vertices());
    for (Vertex v = 0; v < g_.num_vertices(); ++v) dom_[v].assign(g_.succ[v].size(), GeneralKernel::kNever);
}

VertexSet BuchiEngine::help(int n, Player i) const {
    if (n < 0) return VertexSet(g_.num_vertices());
    return help_.at(n).at(i);
}

bool BuchiEngine::edge_alive(Vertex v, Vertex w, int n) const {
    const auto& s = g_.succ[v];
    auto it = std::lower_bound(s.begin(), s.end(), w);
    if (it == s.end() || *it != w) return false;
    auto d = dom_[v][static_cast<std::size_t>(it - s.begin())];
    return d == GeneralKernel::kNever || d >= static_cast<std::uint32_t>(n);
}

std::vector<std::vector<Vertex>> BuchiEngine::pruned(int n) const {
    std::vector<std::vector<Vertex>> out(g_.num_vertices());
    for (Vertex v = 0; v < g_.num_vertices(); ++v)
        for (std::size_t k = 0; k < g_.succ[v].size(); ++k)
            if (dom_[v][k] == GeneralKernel::kNever || dom_[v][k] >= static_cast<std::uint32_t>(n))
                out[v].push_back(g_.succ[v][k]);
    return out;
}

VertexSet BuchiEngine::k_set(Player i, int n) const {
    if (n < 1 || n > levels()) fail(ErrorKind::Internal, "K-set requested for an uncomputed level");
    const VertexSet& f = g_.objectives[i].set;
    VertexSet h = help(n - 1, i);
    VertexSet k(g_.num_vertices());
    for (Vertex v = 0; v < g_.num_vertices(); ++v) {
        int x = values_.at(n - 1, i, v);
        if (x == -1 || (x == 1 && f.test(v)) || (x == 0 && (f.test(v) || h.test(v)))) k.set(v);
    }
    return k;
}

BuchiLevelProduct BuchiEngine::level_product(Player i, int n) const {
    const std::size_t nv = g_.num_vertices();
    const std::size_t np = g_.num_players();
    BuchiLevelProduct p;
    p.players = np;
    p.level = n;
    for (int m = 1; m <= n; ++m) {
        p.sequence.push_back(k_set(i, m));
        for (Player j = 0; j < np; ++j)
            if (j != i) p.sequence.push_back(k_set(j, m));
    }
    p.sequence.push_back(g_.objectives[i].set);

    // Stages: one per distinct prefix length among the E^m and D^m conditions.
    std::vector<std::size_t> lengths;
    for (int m = 1; m <= n; ++m) {
        lengths.push_back(std::size_t(m - 1) * np + 1);
        lengths.push_back(std::size_t(m) * np);
    }
    std::sort(lengths.begin(), lengths.end());
    lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
    const std::size_t k = lengths.size();
    if (k > 62) fail(ErrorKind::Guard, "level product needs more than 62 stages");
    auto stage = [&](std::size_t len) {
        return static_cast<int>(std::lower_bound(lengths.begin(), lengths.end(), len) - lengths.begin());
    };
    p.stages = k;
    p.stage_of_D.assign(std::size_t(n) + 1, -1);
    p.stage_of_E.assign(std::size_t(n) + 1, -1);
    for (int m = 1; m <= n; ++m) {
        p.stage_of_E[m] = stage(std::size_t(m - 1) * np + 1);
        p.stage_of_D[m] = stage(std::size_t(m) * np);
    }
    // Stage t owns sequence positions [first[t], lengths[t]); its counter ranges over
    // 0..width[t], the last value meaning "own sets done, waiting for the stage below".
    std::vector<std::size_t> first(k), width(k);
    std::vector<std::uint64_t> radix(k);
    std::uint64_t combos = 1;
    for (std::size_t t = 0; t < k; ++t) {
        first[t] = t == 0 ? 0 : lengths[t - 1];
        width[t] = lengths[t] - first[t];
        radix[t] = t == 0 ? width[t] : width[t] + 1;
        if (combos > (std::uint64_t(1) << 40) / radix[t]) fail(ErrorKind::Guard, "level product memory is too large");
        combos *= radix[t];
    }

    // Base arena of the level: own dominated moves deleted, dominated opponent moves to the sink.
    std::vector<std::vector<Vertex>> succ(nv);
    std::vector<char> to_sink(nv, 0);
    for (Vertex v = 0; v < nv; ++v)
        for (std::size_t e = 0; e < g_.succ[v].size(); ++e) {
            bool alive = dom_[v][e] == GeneralKernel::kNever || dom_[v][e] >= static_cast<std::uint32_t>(n);
            if (alive)
                succ[v].push_back(g_.succ[v][e]);
            else if (g_.owner[v] != i)
                to_sink[v] = 1;
        }

    // One step of the memory on reading v. Returns the new encoded counters and the completed stages.
    auto advance = [&](std::uint64_t code, Vertex v) {
        std::uint64_t out = 0, mul = 1, done = 0;
        for (std::size_t t = 0; t < k; ++t) {
            std::size_t c = static_cast<std::size_t>(code % radix[t]);
            code /= radix[t];
            while (c < width[t] && p.sequence[first[t] + c].test(v)) ++c;
            if (c == width[t] && (t == 0 || ((done >> (t - 1)) & 1u))) {
                done |= std::uint64_t(1) << t;
                c = 0;
            }
            out += c * mul;
            mul *= radix[t];
        }
        return std::pair<std::uint64_t, std::uint64_t>(out, done);
    };

    constexpr std::size_t kMaxProduct = 20'000'000;
    struct Key {
        Vertex v;
        std::uint64_t state, done;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& x) const {
            std::uint64_t h = x.state * 0x9E3779B97F4A7C15ull ^ (x.done + 0x632BE59BD9B4E019ull + (h_seed(x.v) << 6));
            return static_cast<std::size_t>(h ^ (h >> 31));
        }
        static std::uint64_t h_seed(Vertex v) { return std::uint64_t(v) * 0xBF58476D1CE4E5B9ull; }
    };
    std::unordered_map<Key, Vertex, KeyHash> index;
    std::vector<std::vector<Vertex>> psucc;
    std::deque<Vertex> queue;
    auto get = [&](Vertex v, std::pair<std::uint64_t, std::uint64_t> sd) {
        auto [it, fresh] = index.try_emplace(Key{v, sd.first, sd.second}, static_cast<Vertex>(p.base.size()));
        if (!fresh) return it->second;
        if (p.base.size() >= kMaxProduct) fail(ErrorKind::Guard, "level product exceeds 20000000 vertices");
        p.base.push_back(v);
        p.state.push_back(sd.first);
        p.events.push_back(sd.second);
        psucc.emplace_back();
        queue.push_back(it->second);
        return it->second;
    };
    p.start.resize(nv);
    for (Vertex v = 0; v < nv; ++v) p.start[v] = get(v, advance(0, v));
    while (!queue.empty()) {
        Vertex x = queue.front();
        queue.pop_front();
        Vertex v = p.base[x];
        std::uint64_t c = p.state[x];
        for (auto w : succ[v]) {
            Vertex y = get(w, advance(c, w));
            psucc[x].push_back(y);
        }
    }
    const Vertex sink = static_cast<Vertex>(p.base.size());
    p.sink = sink;
    p.base.push_back(BuchiLevelProduct::kNoBase);
    p.state.push_back(0);
    p.events.push_back(0);
    psucc.push_back({sink});
    for (Vertex x = 0; x < sink; ++x)
        if (to_sink[p.base[x]]) psucc[x].push_back(sink);
    for (auto& s : psucc) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }

    const std::uint32_t top = 2u * static_cast<std::uint32_t>(n) + 2u;
    const VertexSet& f = g_.objectives[i].set;
    VertexSet eve(psucc.size());
    p.colors.assign(psucc.size(), 0);
    for (Vertex x = 0; x < sink; ++x) {
        if (g_.owner[p.base[x]] == i) eve.set(x);
        if (f.test(p.base[x])) {
            p.colors[x] = top;
            continue;
        }
        std::uint32_t c = 0;
        for (int m = 0; m <= n; ++m)
            if (p.in_D(x, m)) c = std::max(c, 2u * static_cast<std::uint32_t>(m) + 1u);
        for (int m = 1; m <= n; ++m)
            if (p.in_E(x, m)) c = std::max(c, 2u * static_cast<std::uint32_t>(m));
        p.colors[x] = c;
    }
    p.colors[sink] = top;
    eve.set(sink);
    p.arena = Arena(std::move(psucc), eve);
    return p;
}

VertexSet BuchiEngine::value_pos_region(Player i, int n) const {
    BuchiLevelProduct p = level_product(i, n);
    ParityResult r = solve_parity(p.arena, p.colors);
    VertexSet out(g_.num_vertices());
    for (Vertex v = 0; v < g_.num_vertices(); ++v)
        if (r.eve.test(p.start[v])) out.set(v);
    return out;
}

bool BuchiEngine::value_pos_buchi(Vertex s, Player i, int n) const { return value_pos_region(i, n).test(s); }

VertexSet BuchiEngine::value_neg_region(Player i, int n) const {
    const std::size_t nv = g_.num_vertices();
    auto succ = pruned(n);
    std::vector<VertexSet> sets;
    for (int m = 1; m <= n; ++m)
        for (Player j = 0; j < g_.num_players(); ++j) sets.push_back(k_set(j, m));
    sets.push_back(g_.objectives[i].set);
    VertexSet good(nv);
    for (const auto& comp : scc_decomposition(succ, VertexSet(nv, true))) {
        bool loop = comp.size() > 1 || std::find(succ[comp[0]].begin(), succ[comp[0]].end(), comp[0]) != succ[comp[0]].end();
        if (!loop) continue;
        VertexSet c(nv);
        for (auto v : comp) c.set(v);
        bool all = true;
        for (const auto& s : sets)
            if (!s.intersects(c)) all = false;
        if (all) good |= c;
    }
    return backward_reach(succ, good, VertexSet(nv, true)).complement();
}

void BuchiEngine::step() {
    const int n = levels();
    const std::size_t nv = g_.num_vertices();
    const std::size_t np = g_.num_players();
    for (Vertex v = 0; v < nv; ++v) {
        bool any = false;
        for (std::size_t k = 0; k < g_.succ[v].size(); ++k)
            if (dom_[v][k] == GeneralKernel::kNever || dom_[v][k] >= static_cast<std::uint32_t>(n)) any = true;
        if (!any) fail(ErrorKind::Internal, "vertex '" + g_.names[v] + "' has no surviving successor");
    }
    std::vector<VertexSet> neg(np), pos(np);
    std::exception_ptr error;
    const long count = static_cast<long>(np);
#if defined(ADM_HAVE_OPENMP)
    const bool parallel = opt_.policy == ExecutionPolicy::Parallel && np > 1;
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
#endif
    for (long q = 0; q < count; ++q) {
        try {
            neg[q] = value_neg_region(static_cast<Player>(q), n);
            pos[q] = value_pos_region(static_cast<Player>(q), n);
        } catch (...) {
#if defined(ADM_HAVE_OPENMP)
#pragma omp critical(adm_buchi_error)
#endif
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    values_.push_level();
    for (Player i = 0; i < np; ++i)
        for (Vertex v = 0; v < nv; ++v) {
            if (pos[i].test(v) && neg[i].test(v))
                fail(ErrorKind::Internal, "vertex '" + g_.names[v] + "' forced winning without a winning outcome");
            values_.set(n, i, v, pos[i].test(v) ? 1 : (neg[i].test(v) ? -1 : 0));
        }
    for (Vertex v = 0; v < nv; ++v) {
        Player o = g_.owner[v];
        for (std::size_t k = 0; k < g_.succ[v].size(); ++k) {
            auto& d = dom_[v][k];
            if (d != GeneralKernel::kNever && d < static_cast<std::uint32_t>(n)) continue;
            if (values_.at(n, o, v) > values_.at(n, o, g_.succ[v][k])) d = static_cast<std::uint32_t>(n);
        }
    }
    std::vector<VertexSet> h(np);
    for (Player i = 0; i < np; ++i)
        h[i] = help_states(g_.succ, g_.owner, values_, n, i, [&](Vertex s, Vertex w) { return edge_alive(s, w, n); });
    help_.push_back(std::move(h));
}

bool BuchiEngine::stable() const {
    int l = levels();
    return l >= 2 && values_.level_equal(l - 1, l - 2) && help_[l - 1] == help_[l - 2];
}

MonitorAutomaton generalized_buchi_monitor(const Game& g, std::vector<std::vector<VertexSet>>& sets) {
    const std::size_t nv = g.num_vertices();
    sets.assign(g.num_players(), {});
    for (Player p = 0; p < g.num_players(); ++p) {
        const Objective& o = g.objectives[p];
        if (o.kind == ObjectiveKind::Buchi) {
            sets[p] = {o.set};
        } else if (o.kind == ObjectiveKind::Muller) {
            auto cnf = as_literal_cnf(o.circuit, nv);
            if (!cnf || cnf->forbidden.any() || cnf->unsatisfiable)
                fail(ErrorKind::Unsupported, "objective of player '" + g.players[p] +
                                                 "' is not a conjunction of Büchi conditions");
            sets[p] = cnf->clauses;
        } else {
            fail(ErrorKind::Unsupported, "Büchi engine cannot handle the " + std::string(to_string(o.kind)) +
                                             " objective of player '" + g.players[p] + "'");
        }
    }
    std::vector<std::uint32_t> radix(g.num_players());
    std::uint64_t states = 1;
    for (Player p = 0; p < g.num_players(); ++p) {
        radix[p] = static_cast<std::uint32_t>(sets[p].size()) + 1;
        states *= radix[p];
        if (states > 4096) fail(ErrorKind::Guard, "generalized Büchi monitor exceeds 4096 states");
    }
    MonitorAutomaton m;
    m.states = static_cast<std::uint32_t>(states);
    m.initial = 0;
    m.delta.assign(m.states, std::vector<std::uint32_t>(nv, 0));
    m.label.assign(m.states, 0);
    for (std::uint32_t q = 0; q < m.states; ++q) {
        for (Vertex v = 0; v < nv; ++v) {
            std::uint32_t rest = q, out = 0, mul = 1;
            for (Player p = 0; p < g.num_players(); ++p) {
                std::uint32_t k = static_cast<std::uint32_t>(sets[p].size());
                std::uint32_t c = rest % radix[p];
                rest /= radix[p];
                if (c == k) c = 0;
                while (c < k && sets[p][c].test(v)) ++c;
                out += c * mul;
                mul *= radix[p];
            }
            m.delta[q][v] = out;
        }
    }
    return m;
}

std::optional<Product> compile_generalized_buchi(const Game& g) {
    bool plain = true;
    for (const auto& o : g.objectives)
        if (o.kind != ObjectiveKind::Buchi) plain = false;
    if (plain) return std::nullopt;
    std::vector<std::vector<VertexSet>> sets;
    MonitorAutomaton m = generalized_buchi_monitor(g, sets);
    Product p = product(g, m);
    const std::size_t n = p.game.num_vertices();
    for (Player i = 0; i < g.num_players(); ++i) {
        std::uint32_t div = 1;
        for (Player j = 0; j < i; ++j) div *= static_cast<std::uint32_t>(sets[j].size()) + 1;
        const std::uint32_t k = static_cast<std::uint32_t>(sets[i].size());
        VertexSet acc(n);
        for (Vertex w = 0; w < n; ++w)
            if ((p.mstate[w] / div) % (k + 1) == k) acc.set(w);
        p.game.objectives[i] = Objective::buchi(acc);
    }
    return p;
}

BuchiIteration run_buchi(const Game& g, const BuchiOptions& opt) {
    require_valid(g);
    std::optional<Product> compiled = compile_generalized_buchi(g);
    BuchiIteration it{BuchiEngine(compiled ? compiled->game : g, opt), std::move(compiled), ValueTable(), 0, 0};
    BuchiEngine& e = it.engine;
    const std::size_t bound = e.game().num_players() * e.game().num_vertices();
    while (true) {
        e.step();
        if (e.stable()) break;
        if (opt.max_levels && static_cast<std::size_t>(e.levels()) >= opt.max_levels) break;
        if (static_cast<std::size_t>(e.levels()) > bound + 2) fail(ErrorKind::Internal, "iteration bound exceeded");
    }
    if (!it.compiled) {
        it.values = e.values();
    } else {
        const Product& p = *it.compiled;
        it.values = ValueTable(g.num_players(), g.num_vertices());
        for (int n = 0; n < e.levels(); ++n) {
            it.values.push_level();
            std::vector<char> seen(g.num_vertices(), 0);
            for (Vertex w = 0; w < p.game.num_vertices(); ++w) {
                Vertex v = p.base[w];
                for (Player i = 0; i < g.num_players(); ++i) {
                    int x = e.values().at(n, i, w);
                    if (seen[v] && it.values.at(n, i, v) != x)
                        fail(ErrorKind::Internal, "monitor copies of '" + g.names[v] + "' disagree on a value");
                    it.values.set(n, i, v, x);
                }
                seen[v] = 1;
            }
        }
    }
    int last = it.values.levels() - 1;
    it.stable_level = last;
    it.fixpoint_at = last;
    while (it.fixpoint_at > 0 && it.values.level_equal(it.fixpoint_at - 1, last)) --it.fixpoint_at;
    return it;
}

}  // namespace adm
