#include "adm/safety.hpp"

#include <algorithm>

#include "adm/errors.hpp"
#include "adm/zerosum.hpp"

namespace adm {

EdgeLevels EdgeLevels::none(const Game& g) {
    EdgeLevels e;
    e.removed.resize(g.num_vertices());
    for (Vertex v = 0; v < g.num_vertices(); ++v) e.removed[v].assign(g.succ[v].size(), kNever);
    return e;
}

bool EdgeLevels::alive(const Game& g, Vertex v, Vertex w, int n) const {
    const auto& s = g.succ[v];
    auto it = std::lower_bound(s.begin(), s.end(), w);
    if (it == s.end() || *it != w) return false;
    std::uint32_t r = removed[v][static_cast<std::size_t>(it - s.begin())];
    return r == kNever || r >= static_cast<std::uint32_t>(n);
}

std::vector<std::vector<Vertex>> EdgeLevels::surviving(const Game& g, int n) const {
    std::vector<std::vector<Vertex>> out(g.num_vertices());
    for (Vertex v = 0; v < g.num_vertices(); ++v)
        for (std::size_t k = 0; k < g.succ[v].size(); ++k)
            if (removed[v][k] == kNever || removed[v][k] >= static_cast<std::uint32_t>(n))
                out[v].push_back(g.succ[v][k]);
    return out;
}

ValueSlice safety_values(const Game& arena, const EdgeLevels& edges, int n) {
    const std::size_t nv = arena.num_vertices();
    auto succ = edges.surviving(arena, n);
    for (Vertex v = 0; v < nv; ++v)
        if (succ[v].empty())
            fail(ErrorKind::Structural, "vertex '" + arena.names[v] + "' has no successor left after removing dominated transitions");
    ValueSlice out(arena.num_players(), std::vector<int>(nv, 0));
    for (Player i = 0; i < arena.num_players(); ++i) {
        const VertexSet& bad = arena.objectives[i].set;
        Arena a(succ, arena.vertices_of(i));
        VertexSet wins = solve_safety(a, bad);
        // Some infinite path avoids the lost states: reach a cycle inside the safe part.
        VertexSet safe = bad.complement();
        VertexSet on_cycle(nv);
        for (const auto& comp : scc_decomposition(succ, safe)) {
            bool loop = comp.size() > 1 || std::find(succ[comp[0]].begin(), succ[comp[0]].end(), comp[0]) != succ[comp[0]].end();
            if (loop)
                for (auto v : comp) on_cycle.set(v);
        }
        VertexSet survive = backward_reach(succ, on_cycle, safe);
        for (Vertex v = 0; v < nv; ++v) out[i][v] = wins.test(v) ? 1 : (survive.test(v) ? 0 : -1);
    }
    return out;
}

std::vector<std::pair<Vertex, Vertex>> dominated_transitions(const Game& arena, const ValueSlice& values,
                                                             EdgeLevels& edges, int n) {
    std::vector<std::pair<Vertex, Vertex>> added;
    for (Vertex v = 0; v < arena.num_vertices(); ++v) {
        Player o = arena.owner[v];
        for (std::size_t k = 0; k < arena.succ[v].size(); ++k) {
            auto& r = edges.removed[v][k];
            if (r != EdgeLevels::kNever && r < static_cast<std::uint32_t>(n)) continue;
            Vertex w = arena.succ[v][k];
            if (values[o][v] > values[o][w]) {
                r = static_cast<std::uint32_t>(n);
                added.emplace_back(v, w);
            }
        }
    }
    return added;
}

Game SafetyIteration::pruned() const {
    Game p = unfolding.game;
    auto succ = edges.surviving(unfolding.game, final_level() + 1);
    p.succ = succ;
    return p;
}

SafetyIteration iterate_safety(const Game& g) {
    require_valid(g);
    SafetyIteration it;
    it.source = g;
    std::vector<Vertex> starts;
    if (g.init)
        starts.push_back(*g.init);
    else
        for (Vertex v = 0; v < g.num_vertices(); ++v) starts.push_back(v);
    it.unfolding = unfold_lost(g, starts);
    const Game& a = it.unfolding.game;
    it.values = ValueTable(a.num_players(), a.num_vertices());
    it.edges = EdgeLevels::none(a);
    const std::size_t bound = a.num_players() * a.num_edges() + 1;
    for (int n = 0;; ++n) {
        if (static_cast<std::size_t>(n) > bound) fail(ErrorKind::Internal, "safety elimination exceeded |P|*|E| rounds");
        ValueSlice vals = safety_values(a, it.edges, n);
        it.values.push_level();
        for (Player i = 0; i < a.num_players(); ++i)
            for (Vertex v = 0; v < a.num_vertices(); ++v) it.values.set(n, i, v, vals[i][v]);
        auto added = dominated_transitions(a, vals, it.edges, n);
        if (!added.empty()) ++it.elimination_rounds;
        bool done = added.empty();
        it.rounds.push_back(std::move(added));
        if (done) break;
    }
    int last = it.final_level();
    it.fixpoint_at = last;
    while (it.fixpoint_at > 0 && it.values.level_equal(it.fixpoint_at - 1, last)) --it.fixpoint_at;
    return it;
}

CoalitionAnswer coalition_safety(const SafetyIteration& it, const VertexSet& win, const VertexSet& lose) {
    const Game& a = it.arena();
    if (win.universe() != a.num_players() || lose.universe() != a.num_players())
        fail(ErrorKind::Input, "coalition player sets do not match the game");
    if (win.intersects(lose)) fail(ErrorKind::Input, "a player cannot be required both to win and to lose");
    const std::size_t nv = a.num_vertices();
    VertexSet outside(nv);
    for (Vertex w = 0; w < nv; ++w) {
        const VertexSet& lost = it.unfolding.tag[w];
        if (lost.intersects(win) || !lose.subset_of(lost)) outside.set(w);
    }
    auto succ = it.edges.surviving(a, it.final_level() + 1);
    CoalitionAnswer ans;
    ans.iterations = it.fixpoint_at;
    auto l = cooperative_emptiness(succ, Circuit::none_of(outside), LassoMode::Inf, a.initial());
    if (!l) return ans;
    ans.yes = true;
    ans.arena_witness = *l;
    ans.witness = it.unfolding.project(*l);
    return ans;
}

CoalitionAnswer coalition_safety(const Game& g, const VertexSet& win, const VertexSet& lose) {
    return coalition_safety(iterate_safety(g), win, lose);
}

}  // namespace adm
