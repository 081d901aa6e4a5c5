#include "adm/unfold.hpp"

#include <deque>
#include <map>

#include "adm/errors.hpp"

namespace adm {

namespace {

// Follows a base lasso through a deterministic derived arena. `start` maps the first base vertex
// to a derived vertex, `next` a derived vertex and base successor to the next derived vertex;
// either may return nullopt when the derived state does not exist.
template <class Start, class Next>
std::optional<Lasso> lift_deterministic(const Lasso& l, Start&& start, Next&& next) {
    if (l.cycle.empty()) return std::nullopt;
    Lasso out;
    std::optional<Vertex> cur = start(l.first());
    if (!cur) return std::nullopt;
    std::vector<Vertex> seq;  // derived vertices in order
    seq.push_back(*cur);
    std::size_t idx = 1;
    auto at = [&](std::size_t k) { return k < l.stem.size() ? l.stem[k] : l.cycle[(k - l.stem.size()) % l.cycle.size()]; };
    // Walk to the first cycle position.
    for (; idx < l.stem.size() + 1; ++idx) {
        cur = next(*cur, at(idx));
        if (!cur) return std::nullopt;
        seq.push_back(*cur);
    }
    // seq.back() is the derived vertex at the first cycle position; iterate whole cycles until
    // that position repeats.
    std::map<Vertex, std::size_t> seen;
    std::size_t cycle_start = l.stem.size();
    seen[seq[cycle_start]] = cycle_start;
    for (std::size_t rep = 0; rep < 1u << 20; ++rep) {
        for (std::size_t k = 1; k <= l.cycle.size(); ++k) {
            cur = next(*cur, l.cycle[k % l.cycle.size()]);
            if (!cur) return std::nullopt;
            seq.push_back(*cur);
        }
        std::size_t pos = seq.size() - 1;
        auto it = seen.find(seq[pos]);
        if (it != seen.end()) {
            out.stem.assign(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(it->second));
            out.cycle.assign(seq.begin() + static_cast<std::ptrdiff_t>(it->second), seq.begin() + static_cast<std::ptrdiff_t>(pos));
            return out;
        }
        seen[seq[pos]] = pos;
    }
    return std::nullopt;
}

struct TagKey {
    VertexSet tag;
    Vertex v;
    bool operator<(const TagKey& o) const { return v != o.v ? v < o.v : tag < o.tag; }
};

}  // namespace

std::optional<Vertex> Unfolding::find(const VertexSet& t, Vertex b) const {
    for (std::size_t k = 0; k < base.size(); ++k)
        if (base[k] == b && tag[k] == t) return static_cast<Vertex>(k);
    return std::nullopt;
}

std::optional<Lasso> Unfolding::lift(const Lasso& l, const std::function<VertexSet(Vertex)>& start_tag,
                                     const std::function<VertexSet(const VertexSet&, Vertex)>& step) const {
    std::map<TagKey, Vertex> idx;
    for (std::size_t k = 0; k < base.size(); ++k) idx[{tag[k], base[k]}] = static_cast<Vertex>(k);
    auto lookup = [&](const VertexSet& t, Vertex b) -> std::optional<Vertex> {
        auto it = idx.find({t, b});
        if (it == idx.end()) return std::nullopt;
        return it->second;
    };
    return lift_deterministic(
        l, [&](Vertex b) { return lookup(start_tag(b), b); },
        [&](Vertex u, Vertex b) -> std::optional<Vertex> {
            auto w = lookup(step(tag[u], b), b);
            if (!w || !game.has_edge(u, *w)) return std::nullopt;
            return w;
        });
}

Lasso Unfolding::project(const Lasso& l) const {
    Lasso r;
    for (auto v : l.stem) r.stem.push_back(base[v]);
    for (auto v : l.cycle) r.cycle.push_back(base[v]);
    return r;
}

VertexSet lost_at(const Game& g, Vertex v) {
    VertexSet l(g.num_players());
    for (std::size_t p = 0; p < g.num_players(); ++p)
        if (g.objectives[p].kind == ObjectiveKind::Safety && g.objectives[p].set.test(v)) l.set(p);
    return l;
}

Unfolding unfold_lost(const Game& g, const std::vector<Vertex>& starts) {
    for (std::size_t p = 0; p < g.num_players(); ++p)
        if (g.objectives[p].kind != ObjectiveKind::Safety)
            fail(ErrorKind::Unsupported, "lost-set unfolding needs safety objectives; player '" + g.players[p] + "' has " +
                                             to_string(g.objectives[p].kind));
    Unfolding u;
    for (const auto& p : g.players) u.game.add_player(p);
    std::map<TagKey, Vertex> idx;
    std::deque<Vertex> queue;
    auto get = [&](const VertexSet& t, Vertex b) {
        auto it = idx.find({t, b});
        if (it != idx.end()) return it->second;
        std::string name = g.names[b];
        if (t.any()) name += "@" + player_set_name(g, t);
        Vertex w = u.game.add_vertex(name, g.owner[b]);
        u.base.push_back(b);
        u.tag.push_back(t);
        idx.emplace(TagKey{t, b}, w);
        queue.push_back(w);
        return w;
    };
    for (auto s : starts) get(lost_at(g, s), s);
    while (!queue.empty()) {
        Vertex w = queue.front();
        queue.pop_front();
        const Vertex b = u.base[w];
        for (auto b2 : g.succ[b]) {
            VertexSet t = u.tag[w] | lost_at(g, b2);
            Vertex w2 = get(t, b2);
            u.game.add_edge(w, w2);
        }
    }
    const std::size_t n = u.game.num_vertices();
    for (std::size_t p = 0; p < g.num_players(); ++p) {
        VertexSet bad(n);
        for (std::size_t w = 0; w < n; ++w)
            if (u.tag[w].test(p)) bad.set(w);
        u.game.objectives[p] = Objective::safety(bad);
    }
    if (g.init) {
        auto it = idx.find({lost_at(g, *g.init), *g.init});
        if (it != idx.end()) u.game.init = it->second;
    }
    return u;
}

std::optional<Lasso> lift_lost(const Unfolding& u, const Game& g, const Lasso& l) {
    return u.lift(
        l, [&](Vertex b) { return lost_at(g, b); }, [&](const VertexSet& t, Vertex b) { return t | lost_at(g, b); });
}

Unfolding unfold_visited(const Game& g, const std::vector<Vertex>& starts, const VisitedOptions& opt) {
    const std::size_t nb = g.num_vertices();
    if (nb > opt.max_vertices)
        fail(ErrorKind::Guard, "visited-set unfolding refused: " + std::to_string(nb) + " vertices exceed the guard of " +
                                   std::to_string(opt.max_vertices));
    Unfolding u;
    for (const auto& p : g.players) u.game.add_player(p);
    std::map<TagKey, Vertex> idx;
    std::deque<Vertex> queue;
    auto get = [&](const VertexSet& t, Vertex b) {
        auto it = idx.find({t, b});
        if (it != idx.end()) return it->second;
        if (u.base.size() >= opt.max_states)
            fail(ErrorKind::Guard, "visited-set unfolding exceeds " + std::to_string(opt.max_states) + " states");
        std::string name = g.names[b] + "@";
        bool first = true;
        t.for_each([&](std::size_t x) {
            name += (first ? "" : "+") + g.names[x];
            first = false;
        });
        Vertex w = u.game.add_vertex(name, g.owner[b]);
        u.base.push_back(b);
        u.tag.push_back(t);
        idx.emplace(TagKey{t, b}, w);
        queue.push_back(w);
        return w;
    };
    for (auto s : starts) {
        VertexSet t(nb);
        t.set(s);
        get(t, s);
    }
    while (!queue.empty()) {
        Vertex w = queue.front();
        queue.pop_front();
        const Vertex b = u.base[w];
        for (auto b2 : g.succ[b]) {
            VertexSet t = u.tag[w];
            t.set(b2);
            u.game.add_edge(w, get(t, b2));
        }
    }
    const std::size_t n = u.game.num_vertices();
    for (std::size_t p = 0; p < g.num_players(); ++p) {
        const Objective& o = g.objectives[p];
        VertexSet acc(n);
        if (o.occurrence_based()) {
            Circuit c = occ_circuit(o, nb);
            for (std::size_t w = 0; w < n; ++w)
                if (c.eval(u.tag[w])) acc.set(w);
            u.game.objectives[p] = Objective::buchi(acc);
        } else {
            u.game.objectives[p] = lift_objective(o, u.base, nb);
        }
    }
    if (g.init) {
        VertexSet t(nb);
        t.set(*g.init);
        auto it = idx.find({t, *g.init});
        if (it != idx.end()) u.game.init = it->second;
    }
    return u;
}

std::optional<Lasso> lift_visited(const Unfolding& u, const Lasso& l) {
    const std::size_t nb = u.tag.empty() ? 0 : u.tag.front().universe();
    return u.lift(
        l,
        [&](Vertex b) {
            VertexSet t(nb);
            t.set(b);
            return t;
        },
        [&](const VertexSet& t, Vertex b) {
            VertexSet r = t;
            r.set(b);
            return r;
        });
}

MonitorAutomaton MonitorAutomaton::trivial(std::size_t n) {
    MonitorAutomaton m;
    m.states = 1;
    m.initial = 0;
    m.delta.assign(1, std::vector<std::uint32_t>(n, 0));
    m.label.assign(1, 0);
    return m;
}

Objective lift_objective(const Objective& o, const std::vector<Vertex>& base, std::size_t n_base) {
    const std::size_t n = base.size();
    auto lift_set = [&](const VertexSet& s) {
        VertexSet r(n);
        for (std::size_t w = 0; w < n; ++w)
            if (s.test(base[w])) r.set(w);
        return r;
    };
    Objective r;
    r.kind = o.kind;
    switch (o.kind) {
    case ObjectiveKind::Safety:
    case ObjectiveKind::Reachability:
    case ObjectiveKind::Buchi: r.set = lift_set(o.set); break;
    case ObjectiveKind::Parity:
        for (std::size_t w = 0; w < n; ++w) r.colors.push_back(o.colors[base[w]]);
        break;
    case ObjectiveKind::Muller:
    case ObjectiveKind::WeakMuller: {
        std::vector<VertexSet> copies(n_base, VertexSet(n));
        for (std::size_t w = 0; w < n; ++w) copies[base[w]].set(w);
        CircuitBuilder b;
        auto out = b.embed(o.circuit, [&](std::uint32_t a) { return b.any_of(copies[a]); });
        r.circuit = b.finish(out);
        break;
    }
    case ObjectiveKind::None: break;
    }
    return r;
}

Product product(const Game& g, const MonitorAutomaton& m) {
    for (std::uint32_t q = 0; q < m.states; ++q)
        if (m.delta.size() <= q || m.delta[q].size() != g.num_vertices())
            fail(ErrorKind::Input, "monitor transition function is not total");
    Product p;
    for (const auto& pl : g.players) p.game.add_player(pl);
    p.index.assign(g.num_vertices(), std::vector<Vertex>(m.states, Product::kNoVertex));
    std::deque<Vertex> queue;
    auto get = [&](Vertex v, std::uint32_t q) {
        Vertex& slot = p.index[v][q];
        if (slot != Product::kNoVertex) return slot;
        std::string name = m.states == 1 ? g.names[v] : g.names[v] + "#" + std::to_string(q);
        slot = p.game.add_vertex(name, g.owner[v]);
        p.base.push_back(v);
        p.mstate.push_back(q);
        queue.push_back(slot);
        return slot;
    };
    for (Vertex v = 0; v < g.num_vertices(); ++v) get(v, m.step(m.initial, v));
    while (!queue.empty()) {
        Vertex w = queue.front();
        queue.pop_front();
        for (auto v2 : g.succ[p.base[w]]) {
            Vertex w2 = get(v2, m.step(p.mstate[w], v2));
            p.game.add_edge(w, w2);
        }
    }
    for (std::size_t i = 0; i < g.num_players(); ++i)
        p.game.objectives[i] = lift_objective(g.objectives[i], p.base, g.num_vertices());
    if (g.init) p.game.init = p.start(*g.init, m);
    return p;
}

std::optional<Lasso> Product::lift(const Lasso& l, const MonitorAutomaton& m) const {
    return lift_deterministic(
        l,
        [&](Vertex b) -> std::optional<Vertex> {
            if (b >= index.size()) return std::nullopt;
            return start(b, m);
        },
        [&](Vertex u, Vertex b) -> std::optional<Vertex> {
            if (b >= index.size()) return std::nullopt;
            Vertex w = index[b][m.step(mstate[u], b)];
            if (w == kNoVertex || !game.has_edge(u, w)) return std::nullopt;
            return w;
        });
}

Lasso Product::project(const Lasso& l) const {
    Lasso r;
    for (auto v : l.stem) r.stem.push_back(base[v]);
    for (auto v : l.cycle) r.cycle.push_back(base[v]);
    return r;
}

}  // namespace adm
