#include "adm/zerosum.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_set>

#include "adm/errors.hpp"

namespace adm {

Arena::Arena(std::vector<std::vector<Vertex>> s, VertexSet e) : succ(std::move(s)), eve(std::move(e)) {
    pred.assign(succ.size(), {});
    for (Vertex v = 0; v < succ.size(); ++v)
        for (auto w : succ[v]) pred[w].push_back(v);
}

TwoPlayerView make_view(const Game& g, Player protagonist) {
    if (protagonist >= g.num_players()) fail(ErrorKind::Input, "unknown protagonist");
    return {Arena(g.succ, g.vertices_of(protagonist)), protagonist};
}

VertexSet attractor(const Arena& a, const VertexSet& target, bool eve_side, const VertexSet& alive,
                    std::vector<Vertex>* strategy) {
    const std::size_t n = a.size();
    VertexSet in = target & alive;
    std::vector<std::uint32_t> count(n, 0), rank(n, 0);
    std::deque<Vertex> queue;
    in.for_each([&](std::size_t v) { queue.push_back(static_cast<Vertex>(v)); });
    alive.for_each([&](std::size_t v) {
        for (auto w : a.succ[v])
            if (alive.test(w)) ++count[v];
    });
    while (!queue.empty()) {
        Vertex w = queue.front();
        queue.pop_front();
        for (auto p : a.pred[w]) {
            if (!alive.test(p) || in.test(p)) continue;
            bool mine = a.eve.test(p) == eve_side;
            if (mine || --count[p] == 0) {
                in.set(p);
                rank[p] = rank[w] + 1;
                queue.push_back(p);
            }
        }
    }
    if (strategy) {
        (in - target).for_each([&](std::size_t v) {
            if (a.eve.test(v) != eve_side) return;
            for (auto w : a.succ[v])
                if (alive.test(w) && in.test(w) && rank[w] < rank[v]) {
                    (*strategy)[v] = w;
                    break;
                }
        });
    }
    return in;
}

VertexSet attractor(const TwoPlayerView& view, const VertexSet& target) {
    return attractor(view.arena, target, true, view.arena.all());
}

VertexSet solve_safety(const Arena& a, const VertexSet& bad) { return attractor(a, bad, false, a.all()).complement(); }
VertexSet solve_safety(const TwoPlayerView& view, const VertexSet& bad) { return solve_safety(view.arena, bad); }

VertexSet solve_buchi(const Arena& a, const VertexSet& accepting) {
    VertexSet alive = a.all();
    while (true) {
        VertexSet reach = attractor(a, accepting, true, alive);
        VertexSet trap = alive - reach;
        if (trap.none()) return alive;
        alive -= attractor(a, trap, false, alive);
    }
}
VertexSet solve_buchi(const TwoPlayerView& view, const VertexSet& accepting) { return solve_buchi(view.arena, accepting); }

namespace {

struct Zielonka {
    const Arena& a;
    const std::vector<std::uint32_t>& colors;
    std::vector<Vertex>& strategy;

    // Returns Eve's region inside `alive`; Adam wins the rest.
    VertexSet solve(const VertexSet& alive) {
        const std::size_t n = a.size();
        if (alive.none()) return VertexSet(n);
        std::uint32_t d = 0;
        alive.for_each([&](std::size_t v) { d = std::max(d, colors[v]); });
        const bool p_is_eve = d % 2 == 0;
        VertexSet top(n);
        alive.for_each([&](std::size_t v) {
            if (colors[v] == d) top.set(v);
        });
        VertexSet A = attractor(a, top, p_is_eve, alive, &strategy);
        VertexSet sub_eve = solve(alive - A);
        VertexSet sub_opp = p_is_eve ? (alive - A) - sub_eve : sub_eve;
        VertexSet eve(n);
        if (sub_opp.none()) {
            // p wins everywhere; top-colored p vertices may move anywhere inside alive.
            top.for_each([&](std::size_t v) {
                if (a.eve.test(v) != p_is_eve) return;
                for (auto w : a.succ[v])
                    if (alive.test(w)) {
                        strategy[v] = w;
                        break;
                    }
            });
            eve = p_is_eve ? alive : VertexSet(n);
        } else {
            VertexSet B = attractor(a, sub_opp, !p_is_eve, alive, &strategy);
            VertexSet rest_eve = solve(alive - B);
            eve = p_is_eve ? rest_eve : (rest_eve | B);
        }
        alive.for_each([&](std::size_t v) {
            if (a.eve.test(v) != eve.test(v)) strategy[v] = ParityResult::kNone;
        });
        return eve;
    }
};

}  // namespace

ParityResult solve_parity(const Arena& a, const std::vector<std::uint32_t>& colors) {
    ParityResult r;
    r.strategy.assign(a.size(), ParityResult::kNone);
    Zielonka z{a, colors, r.strategy};
    r.eve = z.solve(a.all());
    r.adam = r.eve.complement();
    return r;
}
ParityResult solve_parity(const TwoPlayerView& view, const std::vector<std::uint32_t>& colors) {
    return solve_parity(view.arena, colors);
}

std::vector<std::vector<Vertex>> scc_decomposition(const std::vector<std::vector<Vertex>>& succ, const VertexSet& alive) {
    const std::size_t n = succ.size();
    constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> index(n, kUnset), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<Vertex> stack;
    std::vector<std::vector<Vertex>> out;
    std::uint32_t counter = 0;
    struct Frame {
        Vertex v;
        std::size_t next;
    };
    alive.for_each([&](std::size_t root) {
        if (index[root] != kUnset) return;
        std::vector<Frame> call{{static_cast<Vertex>(root), 0}};
        index[root] = low[root] = counter++;
        stack.push_back(static_cast<Vertex>(root));
        on_stack[root] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            const auto& s = succ[f.v];
            if (f.next < s.size()) {
                Vertex w = s[f.next++];
                if (!alive.test(w)) continue;
                if (index[w] == kUnset) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                Vertex v = f.v;
                call.pop_back();
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
                if (low[v] == index[v]) {
                    std::vector<Vertex> comp;
                    Vertex w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp.push_back(w);
                    } while (w != v);
                    std::sort(comp.begin(), comp.end());
                    out.push_back(std::move(comp));
                }
            }
        }
    });
    return out;
}

VertexSet backward_reach(const std::vector<std::vector<Vertex>>& succ, const VertexSet& target, const VertexSet& alive) {
    const std::size_t n = succ.size();
    std::vector<std::vector<Vertex>> pred(n);
    for (Vertex v = 0; v < n; ++v)
        if (alive.test(v))
            for (auto w : succ[v])
                if (alive.test(w)) pred[w].push_back(v);
    VertexSet r = target & alive;
    std::deque<Vertex> q;
    r.for_each([&](std::size_t v) { q.push_back(static_cast<Vertex>(v)); });
    while (!q.empty()) {
        Vertex w = q.front();
        q.pop_front();
        for (auto p : pred[w])
            if (!r.test(p)) {
                r.set(p);
                q.push_back(p);
            }
    }
    return r;
}

namespace {

VertexSet to_set(const std::vector<Vertex>& vs, std::size_t n) {
    VertexSet s(n);
    for (auto v : vs) s.set(v);
    return s;
}

bool nontrivial(const std::vector<std::vector<Vertex>>& succ, const std::vector<Vertex>& comp) {
    if (comp.size() > 1) return true;
    const auto& s = succ[comp[0]];
    return std::find(s.begin(), s.end(), comp[0]) != s.end();
}

// Maximal subsets of `colors` whose circuit value differs from that of `colors`.
std::vector<VertexSet> maximal_opposite(const Circuit& c, const VertexSet& colors, bool pol, std::size_t budget) {
    std::vector<VertexSet> found;
    std::unordered_set<VertexSet, VertexSetHash> seen;
    std::vector<VertexSet> stack{colors};
    seen.insert(colors);
    while (!stack.empty()) {
        VertexSet s = std::move(stack.back());
        stack.pop_back();
        s.for_each([&](std::size_t x) {
            VertexSet t = s;
            t.reset(x);
            if (!seen.insert(t).second) return;
            if (seen.size() > budget)
                fail(ErrorKind::Guard, "Muller condition too large: more than " + std::to_string(budget) +
                                           " color subsets explored");
            if (c.eval(t) != pol)
                found.push_back(t);
            else
                stack.push_back(std::move(t));
        });
    }
    std::vector<VertexSet> maximal;
    for (std::size_t i = 0; i < found.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < found.size() && !dominated; ++j)
            if (i != j && found[i].subset_of(found[j]) && !(found[i] == found[j])) dominated = true;
        if (!dominated) maximal.push_back(found[i]);
    }
    std::sort(maximal.begin(), maximal.end());
    maximal.erase(std::unique(maximal.begin(), maximal.end()), maximal.end());
    return maximal;
}

struct MullerSolver {
    const Arena& a;
    const LabeledCondition& c;
    VertexSet inputs;
    std::vector<VertexSet> read;  // labels of each vertex that the circuit reads
    std::size_t budget;

    VertexSet colors_of(const VertexSet& alive) const {
        VertexSet u(c.atoms);
        alive.for_each([&](std::size_t v) { u |= read[v]; });
        return u;
    }

    // Eve's region inside the subgame `alive`.
    VertexSet solve(const VertexSet& alive) {
        const std::size_t n = a.size();
        if (alive.none()) return VertexSet(n);
        auto sccs = scc_decomposition(a.succ, alive);
        if (sccs.size() == 1) return solve_connected(alive);
        VertexSet eve(n), rest = alive;
        for (const auto& comp : sccs) {
            VertexSet x = to_set(comp, n) & rest;
            if (x.none()) continue;
            VertexSet w0 = x.count() == comp.size() ? solve_connected(x) : solve(x);
            VertexSet w1 = x - w0;
            VertexSet a0 = attractor(a, w0, true, rest);
            eve |= a0;
            rest -= a0;
            rest -= attractor(a, w1 & rest, false, rest);
        }
        return eve;
    }

    VertexSet solve_connected(const VertexSet& alive) {
        const std::size_t n = a.size();
        VertexSet colors = colors_of(alive);
        const bool pol = c.circuit.eval(colors);  // true: Eve wins when everything recurs
        for (const auto& d : maximal_opposite(c.circuit, colors, pol, budget)) {
            VertexSet outside(n);
            alive.for_each([&](std::size_t v) {
                if (!read[v].subset_of(d)) outside.set(v);
            });
            VertexSet a_d = attractor(a, outside, pol, alive);
            VertexSet sub = alive - a_d;
            VertexSet sub_eve = solve(sub);
            VertexSet opp = pol ? sub - sub_eve : sub_eve;
            if (opp.any()) {
                VertexSet b = attractor(a, opp, !pol, alive);
                VertexSet rest_eve = solve(alive - b);
                return pol ? rest_eve : (rest_eve | b);
            }
        }
        return pol ? alive : VertexSet(n);
    }
};

}  // namespace

LabeledCondition LabeledCondition::identity(const Circuit& c, std::size_t n) {
    LabeledCondition l{c, std::vector<VertexSet>(n, VertexSet(n)), n};
    for (std::size_t v = 0; v < n; ++v) l.labels[v].set(v);
    return l;
}

VertexSet LabeledCondition::label_union(const VertexSet& vertices) const {
    VertexSet u(atoms);
    vertices.for_each([&](std::size_t v) { u |= labels[v]; });
    return u;
}

VertexSet LabeledCondition::carriers(std::uint32_t a) const {
    VertexSet s(labels.size());
    for (std::size_t v = 0; v < labels.size(); ++v)
        if (labels[v].test(a)) s.set(v);
    return s;
}

Circuit LabeledCondition::over_vertices() const {
    CircuitBuilder b;
    auto out = b.embed(circuit, [&](std::uint32_t a) { return b.any_of(carriers(a)); });
    return b.finish(out);
}

VertexSet solve_muller(const Arena& a, const LabeledCondition& c, const MullerOptions& opt) {
    if (c.labels.size() != a.size()) fail(ErrorKind::Internal, "labeled condition does not match the arena");
    MullerSolver s{a, c, c.circuit.inputs(c.atoms), {}, opt.max_subset_states};
    s.read.reserve(a.size());
    for (const auto& l : c.labels) s.read.push_back(l & s.inputs);
    return s.solve(a.all());
}

VertexSet solve_muller(const Arena& a, const Circuit& c, const MullerOptions& opt) {
    return solve_muller(a, LabeledCondition::identity(c, a.size()), opt);
}

LarReduction reduce_muller_to_parity(const Arena& a, const Circuit& c, std::size_t max_inputs) {
    const std::size_t n = a.size();
    VertexSet in = c.inputs(n);
    const std::size_t k = in.count();
    if (k > max_inputs)
        fail(ErrorKind::Guard, "LAR reduction refused: " + std::to_string(k) + " circuit inputs exceed the guard of " +
                                   std::to_string(max_inputs));
    std::vector<Vertex> atoms;
    in.for_each([&](std::size_t v) { atoms.push_back(static_cast<Vertex>(v)); });
    std::vector<int> atom_index(n, -1);
    for (std::size_t j = 0; j < k; ++j) atom_index[atoms[j]] = static_cast<int>(j);

    LarReduction r;
    std::vector<std::vector<Vertex>> succ;
    std::vector<char> eve;
    std::map<std::string, Vertex> index;
    std::vector<std::string> keys;
    std::deque<Vertex> queue;

    // Record = permutation of atom indices followed by the hit position + 1.
    auto visit = [&](std::string perm, Vertex v) {
        int hit = -1;
        if (atom_index[v] >= 0) {
            char j = static_cast<char>(atom_index[v]);
            auto pos = perm.find(j);
            hit = static_cast<int>(pos);
            perm.erase(pos, 1);
            perm.insert(perm.begin(), j);
        }
        return std::pair<std::string, int>(perm, hit);
    };
    auto get = [&](Vertex v, const std::string& perm, int hit) {
        std::string key = perm;
        key.push_back(static_cast<char>(hit + 1));
        key.append(reinterpret_cast<const char*>(&v), sizeof v);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        Vertex id = static_cast<Vertex>(r.base.size());
        index.emplace(key, id);
        r.base.push_back(v);
        keys.push_back(perm);
        succ.emplace_back();
        eve.push_back(a.eve.test(v));
        VertexSet prefix(n);
        for (int j = 0; j <= hit; ++j) prefix.set(atoms[static_cast<unsigned char>(perm[j])]);
        r.colors.push_back(static_cast<std::uint32_t>(2 * (hit + 1) + (c.eval(prefix) ? 0 : 1)));
        queue.push_back(id);
        return id;
    };
    std::string identity;
    for (std::size_t j = 0; j < k; ++j) identity.push_back(static_cast<char>(j));
    r.start.resize(n);
    for (Vertex v = 0; v < n; ++v) {
        auto [perm, hit] = visit(identity, v);
        r.start[v] = get(v, perm, hit);
    }
    while (!queue.empty()) {
        Vertex id = queue.front();
        queue.pop_front();
        Vertex v = r.base[id];
        for (auto w : a.succ[v]) {
            auto [perm, hit] = visit(keys[id], w);
            Vertex t = get(w, perm, hit);
            succ[id].push_back(t);
        }
    }
    VertexSet eve_set(r.base.size());
    for (std::size_t id = 0; id < eve.size(); ++id)
        if (eve[id]) eve_set.set(id);
    for (auto& s : succ) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    r.arena = Arena(std::move(succ), eve_set);
    return r;
}

TwoPlayerView reduce_muller_to_parity(const TwoPlayerView& view, const Circuit& c, std::vector<std::uint32_t>& colors,
                                      std::size_t max_inputs) {
    LarReduction r = reduce_muller_to_parity(view.arena, c, max_inputs);
    colors = r.colors;
    return {std::move(r.arena), view.protagonist};
}

VertexSet solve_muller_lar(const Arena& a, const Circuit& c, std::size_t max_inputs) {
    LarReduction r = reduce_muller_to_parity(a, c, max_inputs);
    ParityResult p = solve_parity(r.arena, r.colors);
    VertexSet out(a.size());
    for (Vertex v = 0; v < a.size(); ++v)
        if (p.eve.test(r.start[v])) out.set(v);
    return out;
}

namespace {

// Searches a strongly connected set `x` for a strongly connected subset satisfying the condition.
struct SubsetSearch {
    const std::vector<std::vector<Vertex>>& succ;
    const LabeledCondition& c;
    VertexSet inputs;
    std::vector<VertexSet> carriers;
    std::size_t guard;
    std::unordered_set<VertexSet, VertexSetHash> failed;

    std::optional<VertexSet> find(const VertexSet& x) {
        VertexSet u = c.label_union(x);
        if (c.circuit.eval(u)) return x;
        if (!failed.insert(x).second) return std::nullopt;
        VertexSet present = u & inputs;
        if (present.count() > guard)
            fail(ErrorKind::Guard, "emptiness check refused: SCC with " + std::to_string(x.count()) + " vertices and " +
                                       std::to_string(present.count()) + " condition inputs exceeds the guard of " +
                                       std::to_string(guard) + " (first vertex " + std::to_string(x.first()) + ")");
        std::optional<VertexSet> hit;
        present.for_each([&](std::size_t a) {
            if (hit) return;
            VertexSet y = x - carriers[a];
            for (const auto& comp : scc_decomposition(succ, y)) {
                if (!nontrivial(succ, comp)) continue;
                if (auto r = find(to_set(comp, succ.size()))) {
                    hit = r;
                    return;
                }
            }
        });
        return hit;
    }
};

// Good strongly connected vertex sets inside `alive`: one satisfying set per SCC that has one.
std::vector<VertexSet> good_sets(const std::vector<std::vector<Vertex>>& succ, const LabeledCondition& c,
                                 const VertexSet& alive, const EmptinessOptions& opt) {
    const std::size_t n = succ.size();
    std::vector<VertexSet> carriers;
    carriers.reserve(c.atoms);
    for (std::uint32_t a = 0; a < c.atoms; ++a) carriers.push_back(c.carriers(a));
    std::vector<VertexSet> out;
    if (auto cnf = as_literal_cnf(c.circuit, c.atoms)) {
        if (cnf->unsatisfiable) return out;
        auto spread = [&](const VertexSet& atoms) {
            VertexSet s(n);
            atoms.for_each([&](std::size_t a) { s |= carriers[a]; });
            return s;
        };
        VertexSet forbidden = spread(cnf->forbidden);
        std::vector<VertexSet> clauses;
        for (const auto& cl : cnf->clauses) clauses.push_back(spread(cl));
        for (const auto& comp : scc_decomposition(succ, alive - forbidden)) {
            if (!nontrivial(succ, comp)) continue;
            VertexSet x = to_set(comp, n);
            bool ok = true;
            for (const auto& cl : clauses)
                if (!cl.intersects(x)) ok = false;
            if (ok) out.push_back(x);
        }
        return out;
    }
    SubsetSearch s{succ, c, c.circuit.inputs(c.atoms), std::move(carriers), opt.max_scc_inputs, {}};
    for (const auto& comp : scc_decomposition(succ, alive)) {
        if (!nontrivial(succ, comp)) continue;
        if (auto r = s.find(to_set(comp, n))) out.push_back(*r);
    }
    return out;
}

// Shortest path from `from` to `to` inside `alive`, excluding `from`, including `to`.
std::vector<Vertex> bfs_path(const std::vector<std::vector<Vertex>>& succ, Vertex from, Vertex to, const VertexSet& alive,
                             bool allow_empty) {
    const std::size_t n = succ.size();
    if (from == to && allow_empty) return {};
    std::vector<Vertex> parent(n, std::numeric_limits<Vertex>::max());
    std::vector<char> seen(n, 0);
    std::deque<Vertex> q{from};
    // When searching a cycle back to `from`, `from` itself is not marked as seen.
    if (from != to) seen[from] = 1;
    while (!q.empty()) {
        Vertex v = q.front();
        q.pop_front();
        for (auto w : succ[v]) {
            if (!alive.test(w) || seen[w]) continue;
            seen[w] = 1;
            parent[w] = v;
            if (w == to) {
                std::vector<Vertex> path{to};
                for (Vertex x = v; x != from; x = parent[x]) path.push_back(x);
                std::reverse(path.begin(), path.end());
                return path;
            }
            q.push_back(w);
        }
    }
    return {};
}

std::vector<std::uint32_t> bfs_dist(const std::vector<std::vector<Vertex>>& succ, Vertex start) {
    std::vector<std::uint32_t> d(succ.size(), std::numeric_limits<std::uint32_t>::max());
    std::deque<Vertex> q{start};
    d[start] = 0;
    while (!q.empty()) {
        Vertex v = q.front();
        q.pop_front();
        for (auto w : succ[v])
            if (d[w] == std::numeric_limits<std::uint32_t>::max()) {
                d[w] = d[v] + 1;
                q.push_back(w);
            }
    }
    return d;
}

// Closed walk from `y` that visits every vertex of the strongly connected set `ys` and stays in it.
std::vector<Vertex> covering_cycle(const std::vector<std::vector<Vertex>>& succ, Vertex y, const VertexSet& ys) {
    std::vector<Vertex> cyc{y};
    VertexSet visited(succ.size());
    visited.set(y);
    Vertex cur = y;
    ys.for_each([&](std::size_t t) {
        if (visited.test(t)) return;
        for (auto v : bfs_path(succ, cur, static_cast<Vertex>(t), ys, true)) {
            cyc.push_back(v);
            visited.set(v);
        }
        cur = static_cast<Vertex>(t);
    });
    auto back = bfs_path(succ, cur, y, ys, false);
    if (!back.empty()) back.pop_back();
    cyc.insert(cyc.end(), back.begin(), back.end());
    return cyc;
}

}  // namespace

VertexSet cooperative_region(const std::vector<std::vector<Vertex>>& succ, const LabeledCondition& c,
                             const EmptinessOptions& opt) {
    const std::size_t n = succ.size();
    VertexSet all(n, true), good(n);
    for (const auto& s : good_sets(succ, c, all, opt)) good |= s;
    return backward_reach(succ, good, all);
}

VertexSet cooperative_region(const std::vector<std::vector<Vertex>>& succ, const Circuit& c, const EmptinessOptions& opt) {
    return cooperative_region(succ, LabeledCondition::identity(c, succ.size()), opt);
}

std::optional<Lasso> cooperative_emptiness(const std::vector<std::vector<Vertex>>& succ, const LabeledCondition& c,
                                           Vertex start, const EmptinessOptions& opt) {
    const std::size_t n = succ.size();
    if (start >= n) fail(ErrorKind::Input, "start vertex out of range");
    auto dist = bfs_dist(succ, start);
    VertexSet reach(n);
    for (Vertex v = 0; v < n; ++v)
        if (dist[v] != std::numeric_limits<std::uint32_t>::max()) reach.set(v);
    std::optional<VertexSet> best;
    Vertex best_v = 0;
    for (const auto& s : good_sets(succ, c, reach, opt)) {
        Vertex v = 0;
        std::uint32_t dv = std::numeric_limits<std::uint32_t>::max();
        s.for_each([&](std::size_t x) {
            if (dist[x] < dv) {
                dv = dist[x];
                v = static_cast<Vertex>(x);
            }
        });
        if (!best || dv < dist[best_v] || (dv == dist[best_v] && v < best_v)) {
            best = s;
            best_v = v;
        }
    }
    if (!best) return std::nullopt;
    Lasso l;
    auto path = bfs_path(succ, start, best_v, VertexSet(n, true), true);
    l.stem.push_back(start);
    l.stem.insert(l.stem.end(), path.begin(), path.end());
    l.stem.pop_back();  // best_v opens the cycle
    l.cycle = covering_cycle(succ, best_v, *best);
    return l;
}

std::optional<Lasso> cooperative_emptiness(const std::vector<std::vector<Vertex>>& succ, const Circuit& c,
                                           LassoMode mode, Vertex start, const EmptinessOptions& opt) {
    const std::size_t n = succ.size();
    if (start >= n) fail(ErrorKind::Input, "start vertex out of range");
    if (mode == LassoMode::Inf) return cooperative_emptiness(succ, LabeledCondition::identity(c, n), start, opt);

    // Occ mode: search (visited set, vertex) pairs.
    struct Node {
        VertexSet r;
        Vertex v;
        std::uint32_t parent;
    };
    std::vector<Node> nodes;
    std::map<std::pair<Vertex, VertexSet>, std::uint32_t> seen;
    std::map<VertexSet, VertexSet> cycle_ok;  // vertices of R that can stay in R forever
    auto can_stay = [&](const VertexSet& r) -> const VertexSet& {
        auto it = cycle_ok.find(r);
        if (it != cycle_ok.end()) return it->second;
        VertexSet on_cycle(n);
        for (const auto& comp : scc_decomposition(succ, r))
            if (nontrivial(succ, comp))
                for (auto v : comp) on_cycle.set(v);
        return cycle_ok.emplace(r, backward_reach(succ, on_cycle, r)).first->second;
    };
    VertexSet r0(n);
    r0.set(start);
    nodes.push_back({r0, start, std::numeric_limits<std::uint32_t>::max()});
    seen[{start, r0}] = 0;
    for (std::uint32_t k = 0; k < nodes.size(); ++k) {
        const VertexSet r = nodes[k].r;
        const Vertex v = nodes[k].v;
        if (c.eval(r) && can_stay(r).test(v)) {
            Lasso l;
            for (std::uint32_t x = k; x != std::numeric_limits<std::uint32_t>::max(); x = nodes[x].parent)
                l.stem.push_back(nodes[x].v);
            std::reverse(l.stem.begin(), l.stem.end());
            // Continue inside R to a vertex lying on a cycle of R, then loop.
            VertexSet on_cycle(n);
            for (const auto& comp : scc_decomposition(succ, r))
                if (nontrivial(succ, comp))
                    for (auto u : comp) on_cycle.set(u);
            Vertex y = v;
            if (!on_cycle.test(v)) {
                // Nearest vertex of R lying on a cycle of R, lowest id on ties.
                constexpr std::uint32_t kFar = std::numeric_limits<std::uint32_t>::max();
                std::deque<Vertex> q{v};
                std::vector<std::uint32_t> dr(n, kFar);
                dr[v] = 0;
                while (!q.empty()) {
                    Vertex x = q.front();
                    q.pop_front();
                    for (auto w : succ[x])
                        if (r.test(w) && dr[w] == kFar) {
                            dr[w] = dr[x] + 1;
                            q.push_back(w);
                        }
                }
                std::uint32_t bd = kFar;
                on_cycle.for_each([&](std::size_t u) {
                    if (dr[u] < bd) {
                        bd = dr[u];
                        y = static_cast<Vertex>(u);
                    }
                });
                auto path = bfs_path(succ, v, y, r, true);
                l.stem.insert(l.stem.end(), path.begin(), path.end());
            }
            l.stem.pop_back();  // y opens the cycle
            auto back = bfs_path(succ, y, y, r, false);
            l.cycle.push_back(y);
            back.pop_back();
            l.cycle.insert(l.cycle.end(), back.begin(), back.end());
            return l;
        }
        for (auto w : succ[v]) {
            VertexSet r2 = r;
            r2.set(w);
            auto key = std::make_pair(w, r2);
            if (seen.count(key)) continue;
            if (nodes.size() >= opt.max_occ_states)
                fail(ErrorKind::Guard, "occurrence emptiness exceeds " + std::to_string(opt.max_occ_states) + " states");
            seen[key] = static_cast<std::uint32_t>(nodes.size());
            nodes.push_back({r2, w, k});
        }
    }
    return std::nullopt;
}

std::optional<Lasso> cooperative_emptiness(const Game& g, const Circuit& c, LassoMode mode, Vertex start,
                                           const EmptinessOptions& opt) {
    return cooperative_emptiness(g.succ, c, mode, start, opt);
}

}  // namespace adm
