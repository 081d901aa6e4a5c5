#include "adm/weak.hpp"

#include <algorithm>
#include <deque>

#include "adm/errors.hpp"

namespace adm {

namespace {

GeneralOptions kernel_options(const WeakOptions& opt) {
    GeneralOptions k;
    k.policy = opt.policy;
    k.muller = opt.muller;
    k.emptiness = opt.emptiness;
    return k;
}

}  // namespace

WeakEngine::WeakEngine(const Game& g, WeakOptions opt) : g_(g), opt_(opt) {
    require_valid(g_);
    for (Player i = 0; i < g_.num_players(); ++i)
        if (!g_.objectives[i].occurrence_based())
            fail(ErrorKind::Unsupported, "weak engine needs occurrence-based objectives; player '" + g_.players[i] +
                                             "' has " + to_string(g_.objectives[i].kind));
    std::vector<Vertex> starts;
    if (g_.init)
        starts.push_back(*g_.init);
    else
        for (Vertex v = 0; v < g_.num_vertices(); ++v) starts.push_back(v);
    u_ = unfold_visited(g_, starts, opt_.visited);

    std::map<VertexSet, std::vector<Vertex>> groups;
    for (Vertex x = 0; x < u_.game.num_vertices(); ++x) groups[u_.tag[x]].push_back(x);
    std::vector<const std::pair<const VertexSet, std::vector<Vertex>>*> order;
    for (const auto& e : groups) order.push_back(&e);
    std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->first.count() > b->first.count(); });

    where_.assign(u_.game.num_vertices(), {0, 0});
    std::vector<std::pair<VertexSet, std::vector<Vertex>>> layout;
    for (std::size_t s = 0; s < order.size(); ++s) {
        by_visited_[order[s]->first] = s;
        const auto& states = order[s]->second;
        for (std::size_t k = 0; k < states.size(); ++k) where_[states[k]] = {s, static_cast<Vertex>(k)};
        layout.emplace_back(order[s]->first, states);
    }
    for (std::size_t s = 0; s < layout.size(); ++s) {
        std::vector<Vertex> exits;
        for (auto x : layout[s].second)
            for (auto y : u_.game.succ[x])
                if (u_.tag[y] != layout[s].first && std::find(exits.begin(), exits.end(), y) == exits.end())
                    exits.push_back(y);
        strata_.push_back(Stratum{layout[s].first, layout[s].second, std::move(exits), GeneralKernel(KernelArena{})});
        strata_.back().kernel = GeneralKernel(stratum_arena(s), kernel_options(opt_));
    }
}

KernelArena WeakEngine::stratum_arena(std::size_t s) const {
    const Stratum& st = strata_[s];
    const std::size_t inner = st.states.size();
    const std::size_t n = inner + st.exits.size();
    KernelArena a;
    a.succ.resize(n);
    a.owner.resize(n);
    a.players = g_.num_players();
    a.pinned = VertexSet(n);
    for (std::size_t k = 0; k < inner; ++k) {
        Vertex x = st.states[k];
        a.owner[k] = u_.game.owner[x];
        for (auto y : u_.game.succ[x]) {
            if (u_.tag[y] == st.visited) {
                a.succ[k].push_back(where_[y].second);
            } else {
                auto it = std::find(st.exits.begin(), st.exits.end(), y);
                a.succ[k].push_back(static_cast<Vertex>(inner + (it - st.exits.begin())));
            }
        }
        std::sort(a.succ[k].begin(), a.succ[k].end());
    }
    for (std::size_t e = 0; e < st.exits.size(); ++e) {
        a.owner[inner + e] = u_.game.owner[st.exits[e]];
        a.succ[inner + e] = {static_cast<Vertex>(inner + e)};
        a.pinned.set(inner + e);
    }
    for (Player i = 0; i < g_.num_players(); ++i)
        a.win.push_back(Circuit::constant(occ_circuit(g_.objectives[i], g_.num_vertices()).eval(st.visited)));
    return a;
}

std::optional<std::size_t> WeakEngine::find_stratum(const VertexSet& r) const {
    auto it = by_visited_.find(r);
    if (it == by_visited_.end()) return std::nullopt;
    return it->second;
}

int WeakEngine::value(int n, Player i, Vertex x) const {
    if (n < 0) return 0;
    const auto& [s, k] = where_[x];
    return strata_[s].kernel.value(n, i, k);
}

bool WeakEngine::help(int n, Player i, Vertex x) const {
    const auto& [s, k] = where_[x];
    return strata_[s].kernel.help(n, i).test(k);
}

bool WeakEngine::wins(Player i, Vertex x) const {
    return occ_circuit(g_.objectives[i], g_.num_vertices()).eval(u_.tag[x]);
}

std::uint32_t WeakEngine::dominated_at(Vertex x, Vertex y) const {
    const Stratum& st = strata_[where_[x].first];
    if (!u_.game.has_edge(x, y)) fail(ErrorKind::Input, "not an edge of the unfolding");
    Vertex ly;
    if (u_.tag[y] == st.visited) {
        ly = where_[y].second;
    } else {
        auto it = std::find(st.exits.begin(), st.exits.end(), y);
        ly = static_cast<Vertex>(st.states.size() + (it - st.exits.begin()));
    }
    return st.kernel.dominated_at(where_[x].second, ly);
}

bool WeakEngine::edge_alive(Vertex x, Vertex y, int n) const {
    if (x >= u_.game.num_vertices() || y >= u_.game.num_vertices() || !u_.game.has_edge(x, y)) return false;
    std::uint32_t d = dominated_at(x, y);
    return d == GeneralKernel::kNever || d >= static_cast<std::uint32_t>(n);
}

void WeakEngine::step() {
    const int n = levels_;
    for (auto& st : strata_) {
        const std::size_t inner = st.states.size();
        // Exits belong to strata with larger visited sets, already stepped to level n.
        st.kernel.step([&](Player i, Vertex t) { return value(n, i, st.exits[t - inner]); });
    }
    ++levels_;
}

void WeakEngine::ensure(int n) {
    while (levels_ <= n) step();
}

bool WeakEngine::stable() const {
    for (const auto& st : strata_)
        if (!st.kernel.stable()) return false;
    return levels_ >= 2;
}

std::vector<std::vector<int>> WeakEngine::proc_values(const VertexSet& r, int n) {
    auto s = find_stratum(r);
    if (!s) fail(ErrorKind::Input, "visited set is not reachable in the unfolding");
    ensure(n);
    const Stratum& st = strata_[*s];
    std::vector<std::vector<int>> out(g_.num_players(), std::vector<int>(st.states.size()));
    for (Player i = 0; i < g_.num_players(); ++i)
        for (std::size_t k = 0; k < st.states.size(); ++k) out[i][k] = st.kernel.value(n, i, static_cast<Vertex>(k));
    return out;
}

ValueTable WeakEngine::recompute_stratum(std::size_t s, int n) const {
    if (n >= levels_) fail(ErrorKind::Internal, "stratum recomputation beyond the computed levels");
    const Stratum& st = strata_[s];
    const std::size_t inner = st.states.size();
    GeneralKernel k(stratum_arena(s), kernel_options(opt_));
    for (int m = 0; m <= n; ++m) k.step([&](Player i, Vertex t) { return value(m, i, st.exits[t - inner]); });
    return k.values();
}

ValueTable WeakEngine::base_values() const {
    ValueTable t(g_.num_players(), g_.num_vertices());
    for (int n = 0; n < levels_; ++n) {
        t.push_level();
        for (Vertex v = 0; v < g_.num_vertices(); ++v) {
            VertexSet r(g_.num_vertices());
            r.set(v);
            auto s = find_stratum(r);
            if (!s) continue;
            for (const auto& x : strata_[*s].states)
                if (u_.base[x] == v)
                    for (Player i = 0; i < g_.num_players(); ++i) t.set(n, i, v, value(n, i, x));
        }
    }
    return t;
}

WeakIteration run_weak(const Game& g, const WeakOptions& opt) {
    WeakIteration it{WeakEngine(g, opt), 0, 0};
    WeakEngine& e = it.engine;
    const std::size_t bound = g.num_players() * e.unfolding().game.num_vertices();
    while (true) {
        e.step();
        if (e.stable()) break;
        if (opt.max_levels && static_cast<std::size_t>(e.levels()) >= opt.max_levels) break;
        if (static_cast<std::size_t>(e.levels()) > bound + 2) fail(ErrorKind::Internal, "iteration bound exceeded");
    }
    int last = e.levels() - 1;
    it.stable_level = last;
    it.fixpoint_at = last;
    auto same = [&](int a) {
        for (const auto& st : e.strata())
            if (!st.kernel.values().level_equal(a, last)) return false;
        return true;
    };
    while (it.fixpoint_at > 0 && same(it.fixpoint_at - 1)) --it.fixpoint_at;
    return it;
}

CoalitionAnswer coalition_weak(const WeakIteration& it, const VertexSet& win, const VertexSet& lose) {
    const WeakEngine& e = it.engine;
    const Game& g = e.game();
    if (win.universe() != g.num_players() || lose.universe() != g.num_players())
        fail(ErrorKind::Input, "coalition player sets do not match the game");
    if (win.intersects(lose)) fail(ErrorKind::Input, "a player cannot be required both to win and to lose");
    const int n = it.stable_level;
    const Unfolding& u = e.unfolding();
    const std::size_t nu = u.game.num_vertices();

    // Good states: internal states of a W/L-compatible stratum with an Out(S*) lasso inside it.
    VertexSet good(nu);
    std::vector<VertexSet> local_good(e.strata().size());
    for (std::size_t s = 0; s < e.strata().size(); ++s) {
        const Stratum& st = e.strata()[s];
        bool ok = true;
        for (Player i = 0; i < g.num_players(); ++i) {
            bool w = e.wins(i, st.states.front());
            if ((win.test(i) && !w) || (lose.test(i) && w)) ok = false;
        }
        if (!ok) continue;
        local_good[s] = cooperative_region(st.kernel.pruned(n), st.kernel.outcome_condition(n),
                                           st.kernel.options().emptiness);
        for (std::size_t k = 0; k < st.states.size(); ++k)
            if (local_good[s].test(k)) good.set(st.states[k]);
    }

    CoalitionAnswer ans;
    ans.iterations = it.fixpoint_at;
    const Vertex start = u.game.initial();
    std::vector<Vertex> parent(nu, Product::kNoVertex);
    std::vector<char> seen(nu, 0);
    std::deque<Vertex> queue{start};
    seen[start] = 1;
    std::optional<Vertex> hit;
    while (!queue.empty()) {
        Vertex x = queue.front();
        queue.pop_front();
        if (good.test(x)) {
            hit = x;
            break;
        }
        for (auto y : u.game.succ[x])
            if (!seen[y] && e.edge_alive(x, y, n)) {
                seen[y] = 1;
                parent[y] = x;
                queue.push_back(y);
            }
    }
    if (!hit) return ans;
    std::vector<Vertex> stem;
    for (Vertex x = *hit; x != start;) {
        x = parent[x];
        stem.push_back(x);
    }
    std::reverse(stem.begin(), stem.end());
    const std::size_t s = e.stratum_of(*hit);
    const Stratum& st = e.strata()[s];
    auto local = cooperative_emptiness(st.kernel.pruned(n), st.kernel.outcome_condition(n), e.local_of(*hit),
                                       st.kernel.options().emptiness);
    if (!local) fail(ErrorKind::Internal, "good state without an accepting lasso");
    Lasso l;
    l.stem = stem;
    for (auto k : local->stem) l.stem.push_back(st.states.at(k));
    for (auto k : local->cycle) l.cycle.push_back(st.states.at(k));
    ans.yes = true;
    ans.arena_witness = l;
    ans.witness = u.project(l);
    return ans;
}

CoalitionAnswer coalition_weak(const Game& g, const VertexSet& win, const VertexSet& lose, const WeakOptions& opt) {
    return coalition_weak(run_weak(g, opt), win, lose);
}

std::optional<std::string> weak_rejection(const WeakEngine& e, const Lasso& l, int n) {
    const Unfolding& u = e.unfolding();
    const Game& g = e.game();
    if (auto bad = l.check(u.game)) return bad;
    std::optional<std::string> bad;
    l.for_each_edge([&](Vertex x, Vertex y) {
        if (bad) return;
        std::uint32_t d = e.dominated_at(x, y);
        if (d != GeneralKernel::kNever && d < static_cast<std::uint32_t>(n))
            bad = "edge " + u.game.names[x] + " -> " + u.game.names[y] + " removed at iteration " + std::to_string(d);
    });
    if (bad) return bad;
    const Vertex last = l.cycle.front();
    for (int m = 1; m <= n; ++m)
        for (Player j = 0; j < g.num_players(); ++j) {
            auto cls = lasso_value_sequence(l, [&](Vertex x) { return e.value(m - 1, j, x); });
            bool ok = false;
            switch (cls) {
            case ValueClass::ZeroThenMinusOne: ok = true; break;
            case ValueClass::ZeroThenOne: ok = e.wins(j, last); break;
            case ValueClass::AllZero: {
                ok = e.wins(j, last);
                for (auto x : l.cycle)
                    if (e.help(m - 1, j, x)) ok = true;
                break;
            }
            case ValueClass::Other: ok = false; break;
            }
            if (!ok)
                return "A-condition of player " + g.players[j] + " at iteration " + std::to_string(m) +
                       " rejects (value class " + to_string(cls) + " at iteration " + std::to_string(m - 1) + ")";
        }
    return std::nullopt;
}

}  // namespace adm
