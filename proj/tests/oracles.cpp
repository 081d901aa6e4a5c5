#include "oracles.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace oracle {

namespace {

/// Successor chosen by each vertex under a mixed-radix strategy index.
std::vector<Vertex> decode(const Succ& succ, const std::vector<Vertex>& owned, std::uint64_t code,
                           std::vector<Vertex> choice) {
    for (auto v : owned) {
        choice[v] = succ[v][code % succ[v].size()];
        code /= succ[v].size();
    }
    return choice;
}

std::uint64_t strategy_count(const Succ& succ, const std::vector<Vertex>& owned) {
    std::uint64_t c = 1;
    for (auto v : owned) c *= succ[v].size();
    return c;
}

/// Eve wins the play of a positional profile starting at v.
bool eve_wins_play(const std::vector<Vertex>& choice, const std::vector<std::uint32_t>& colors, Vertex v) {
    std::vector<int> seen(choice.size(), -1);
    std::vector<Vertex> path;
    while (seen[v] < 0) {
        seen[v] = static_cast<int>(path.size());
        path.push_back(v);
        v = choice[v];
    }
    std::uint32_t top = 0;
    for (std::size_t k = static_cast<std::size_t>(seen[v]); k < path.size(); ++k) top = std::max(top, colors[path[k]]);
    return top % 2 == 0;
}

VertexSet reach_within(const Succ& succ, Vertex from, const VertexSet& within) {
    VertexSet r(succ.size());
    std::vector<Vertex> stack{from};
    r.set(from);
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (auto w : succ[v])
            if (within.test(w) && !r.test(w)) {
                r.set(w);
                stack.push_back(w);
            }
    }
    return r;
}

Succ reversed(const Succ& succ) {
    Succ pred(succ.size());
    for (Vertex v = 0; v < succ.size(); ++v)
        for (auto w : succ[v]) pred[w].push_back(v);
    return pred;
}

bool has_edge(const Succ& succ, Vertex a, Vertex b) {
    return std::find(succ[a].begin(), succ[a].end(), b) != succ[a].end();
}

VertexSet from_mask(std::uint64_t mask, std::size_t n) {
    VertexSet s(n);
    for (std::size_t v = 0; v < n; ++v)
        if (mask >> v & 1u) s.set(v);
    return s;
}

bool eval_gates(const adm::Circuit& c, const VertexSet& s) {
    const auto& gs = c.gates();
    std::vector<bool> val(gs.size());
    for (std::size_t k = 0; k < gs.size(); ++k) {
        const auto& g = gs[k];
        switch (g.op) {
        case adm::Circuit::Op::Input: val[k] = g.a < s.universe() && s.test(g.a); break;
        case adm::Circuit::Op::Const: val[k] = g.a != 0; break;
        case adm::Circuit::Op::Not: val[k] = !val[g.a]; break;
        case adm::Circuit::Op::And: val[k] = val[g.a] && val[g.b]; break;
        case adm::Circuit::Op::Or: val[k] = val[g.a] || val[g.b]; break;
        }
    }
    return val[c.output()];
}

}  // namespace

ParityTruth parity_by_strategy_pairs(const Succ& succ, const VertexSet& eve, const std::vector<std::uint32_t>& colors) {
    const std::size_t n = succ.size();
    std::vector<Vertex> mine, theirs;
    for (Vertex v = 0; v < n; ++v) (eve.test(v) ? mine : theirs).push_back(v);
    const std::uint64_t ce = strategy_count(succ, mine), ca = strategy_count(succ, theirs);
    if (ce * ca > 50'000'000ULL) throw std::runtime_error("parity oracle: too many strategy pairs");
    ParityTruth t{VertexSet(n), VertexSet(n)};
    std::vector<Vertex> base(n, 0);
    // eve_beats[e] = vertices won by Eve strategy e against every Adam strategy.
    std::vector<VertexSet> eve_beats(ce, VertexSet(n, true));
    std::vector<VertexSet> adam_beats(ca, VertexSet(n, true));
    for (std::uint64_t e = 0; e < ce; ++e) {
        auto ch = decode(succ, mine, e, base);
        for (std::uint64_t a = 0; a < ca; ++a) {
            auto full = decode(succ, theirs, a, ch);
            for (Vertex v = 0; v < n; ++v) {
                if (eve_wins_play(full, colors, v))
                    adam_beats[a].reset(v);
                else
                    eve_beats[e].reset(v);
            }
        }
    }
    for (const auto& s : eve_beats) t.eve |= s;
    for (const auto& s : adam_beats) t.adam |= s;
    return t;
}

bool inf_nonempty(const Succ& succ, const std::function<bool(const VertexSet&)>& cond, Vertex start) {
    const std::size_t n = succ.size();
    if (n > 20) throw std::runtime_error("inf oracle: arena too large");
    VertexSet reach = reach_within(succ, start, VertexSet(n, true));
    Succ pred = reversed(succ);
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
        VertexSet s = from_mask(mask, n);
        if (!s.subset_of(reach)) continue;
        Vertex v = static_cast<Vertex>(s.first());
        if (s.count() == 1 && !has_edge(succ, v, v)) continue;
        if (reach_within(succ, v, s) != s || reach_within(pred, v, s) != s) continue;
        if (cond(s)) return true;
    }
    return false;
}

bool occ_nonempty(const Succ& succ, const std::function<bool(const VertexSet&)>& cond, Vertex start) {
    const std::size_t n = succ.size();
    if (n > 16) throw std::runtime_error("occ oracle: arena too large");
    Succ pred = reversed(succ);
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
        if (!(mask >> start & 1u)) continue;
        VertexSet r = from_mask(mask, n);
        // Components of the induced subgraph.
        std::vector<int> comp(n, -1);
        std::vector<VertexSet> comps;
        r.for_each([&](std::size_t v) {
            if (comp[v] >= 0) return;
            VertexSet c = reach_within(succ, static_cast<Vertex>(v), r) & reach_within(pred, static_cast<Vertex>(v), r);
            c.for_each([&](std::size_t w) { comp[w] = static_cast<int>(comps.size()); });
            comps.push_back(c);
        });
        const std::size_t k = comps.size();
        // Topological order by repeatedly taking a component without incoming edges.
        std::vector<int> indeg(k, 0);
        std::set<std::pair<int, int>> dag;
        r.for_each([&](std::size_t v) {
            for (auto w : succ[v])
                if (r.test(w) && comp[v] != comp[w]) dag.insert({comp[v], comp[w]});
        });
        for (auto [a, b] : dag) ++indeg[b];
        std::vector<int> order;
        std::vector<bool> used(k, false);
        bool chain = true;
        for (std::size_t step = 0; step < k && chain; ++step) {
            int pick = -1, sources = 0;
            for (std::size_t c = 0; c < k; ++c)
                if (!used[c] && indeg[c] == 0) {
                    ++sources;
                    pick = static_cast<int>(c);
                }
            if (sources != 1) {
                chain = false;
                break;
            }
            used[pick] = true;
            order.push_back(pick);
            for (auto [a, b] : dag)
                if (a == pick) --indeg[b];
        }
        if (!chain || order.front() != comp[start]) continue;
        const VertexSet& last = comps[order.back()];
        Vertex lv = static_cast<Vertex>(last.first());
        if (last.count() == 1 && !has_edge(succ, lv, lv)) continue;
        if (cond(r)) return true;
    }
    return false;
}

std::size_t lost_pairs(const Game& g, const std::vector<Vertex>& starts) {
    auto bad_mask = [&](Vertex v) {
        std::uint32_t m = 0;
        for (std::size_t i = 0; i < g.num_players(); ++i)
            if (g.objectives[i].set.test(v)) m |= 1u << i;
        return m;
    };
    std::set<std::pair<std::uint32_t, Vertex>> seen;
    std::vector<std::pair<std::uint32_t, Vertex>> stack;
    for (auto s : starts)
        if (seen.insert({bad_mask(s), s}).second) stack.push_back({bad_mask(s), s});
    while (!stack.empty()) {
        auto [m, v] = stack.back();
        stack.pop_back();
        for (auto w : g.succ[v]) {
            std::pair<std::uint32_t, Vertex> nxt{m | bad_mask(w), w};
            if (seen.insert(nxt).second) stack.push_back(nxt);
        }
    }
    return seen.size();
}

std::size_t visited_pairs(const Game& g, const std::vector<Vertex>& starts) {
    std::set<std::pair<std::uint64_t, Vertex>> seen;
    // Depth-first path exploration; a path is only extended while it reaches a new pair.
    std::function<void(std::uint64_t, Vertex)> explore = [&](std::uint64_t r, Vertex v) {
        if (!seen.insert({r, v}).second) return;
        for (auto w : g.succ[v]) explore(r | (1ULL << w), w);
    };
    for (auto s : starts) explore(1ULL << s, s);
    return seen.size();
}

MetroCount metro_states(int slots, int trains) {
    // A configuration is written "positions|intents" with intents over {?, M, S}.
    auto encode = [](const std::vector<int>& pos, const std::string& intents) {
        std::string s;
        for (int x : pos) s += std::to_string(x) + ",";
        return s + "|" + intents;
    };
    auto crashed = [](const std::vector<int>& pos) {
        std::set<int> distinct(pos.begin(), pos.end());
        return distinct.size() != pos.size();
    };
    std::set<std::string> seen;
    std::set<std::vector<int>> crash_positions;
    std::vector<std::pair<std::vector<int>, std::string>> todo;
    std::vector<int> init;
    for (int k = trains - 1; k >= 0; --k) init.push_back(k);
    todo.push_back({init, std::string(trains, '?')});
    seen.insert(encode(init, std::string(trains, '?')));
    auto push = [&](const std::vector<int>& pos, const std::string& intents) {
        // Collided configurations are absorbing and forget the intents.
        std::string key = crashed(pos) ? encode(pos, "") : encode(pos, intents);
        if (seen.insert(key).second) todo.push_back({pos, crashed(pos) ? "" : intents});
    };
    MetroCount out;
    while (!todo.empty()) {
        auto [pos, intents] = todo.back();
        todo.pop_back();
        if (crashed(pos)) {
            crash_positions.insert(pos);
            continue;
        }
        auto next = intents.find('?');
        if (next != std::string::npos) {
            for (char c : {'M', 'S'}) {
                std::string i2 = intents;
                i2[next] = c;
                push(pos, i2);
            }
            continue;
        }
        // The environment lets any subset of the willing trains advance.
        std::vector<int> willing;
        for (int t = 0; t < trains; ++t)
            if (intents[t] == 'M') willing.push_back(t);
        for (std::size_t sub = 0; sub < (std::size_t(1) << willing.size()); ++sub) {
            std::vector<int> p2 = pos;
            for (std::size_t b = 0; b < willing.size(); ++b)
                if (sub >> b & 1u) p2[willing[b]] = (p2[willing[b]] + 1) % slots;
            push(p2, std::string(trains, '?'));
        }
    }
    out.states = seen.size();
    out.collisions = crash_positions.size();
    return out;
}

bool wins(const Game& g, adm::Player i, const Lasso& l) {
    const std::size_t n = g.num_vertices();
    VertexSet occ(n), inf(n);
    for (auto v : l.stem) occ.set(v);
    for (auto v : l.cycle) {
        occ.set(v);
        inf.set(v);
    }
    const adm::Objective& o = g.objectives[i];
    switch (o.kind) {
    case adm::ObjectiveKind::Safety: return !occ.intersects(o.set);
    case adm::ObjectiveKind::Reachability: return occ.intersects(o.set);
    case adm::ObjectiveKind::Buchi: return inf.intersects(o.set);
    case adm::ObjectiveKind::Parity: {
        std::uint32_t top = 0;
        for (auto v : l.cycle) top = std::max(top, o.colors[v]);
        return top % 2 == 0;
    }
    case adm::ObjectiveKind::Muller: return eval_gates(o.circuit, inf);
    case adm::ObjectiveKind::WeakMuller: return eval_gates(o.circuit, occ);
    default: throw std::runtime_error("wins: player without objective");
    }
}

bool qbf_valid(const adm::Qbf& q) {
    std::vector<bool> val(q.num_vars());
    std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
        if (k == q.num_vars()) {
            for (const auto& cl : q.clauses) {
                bool sat = false;
                for (int lit : cl) {
                    bool x = val[static_cast<std::size_t>(std::abs(lit) - 1)];
                    if ((lit > 0) == x) sat = true;
                }
                if (!sat) return false;
            }
            return true;
        }
        val[k] = false;
        bool a = go(k + 1);
        val[k] = true;
        bool b = go(k + 1);
        return q.universal[k] ? (a && b) : (a || b);
    };
    return go(0);
}

bool is_path(const Succ& succ, const Lasso& l) {
    if (l.cycle.empty()) return false;
    for (auto v : l.stem)
        if (v >= succ.size()) return false;
    for (auto v : l.cycle)
        if (v >= succ.size()) return false;
    bool ok = true;
    l.for_each_edge([&](Vertex a, Vertex b) { ok = ok && has_edge(succ, a, b); });
    return ok;
}

Lasso sample_lasso(const Succ& succ, Vertex start, std::mt19937_64& rng, std::size_t max_len) {
    std::vector<Vertex> path{start};
    std::vector<int> last(succ.size(), -1);
    last[start] = 0;
    // Wander freely for a random number of steps, then close at the next repeated vertex.
    const std::size_t free_steps = rng() % (max_len + 1);
    for (std::size_t step = 0;; ++step) {
        Vertex w = succ[path.back()][rng() % succ[path.back()].size()];
        if (step >= free_steps && last[w] >= 0) {
            Lasso l;
            l.stem.assign(path.begin(), path.begin() + last[w]);
            l.cycle.assign(path.begin() + last[w], path.end());
            return l;
        }
        last[w] = static_cast<int>(path.size());
        path.push_back(w);
    }
}

Lasso mutate(const Lasso& l, std::size_t n, std::mt19937_64& rng) {
    Lasso m = l;
    auto pick_vertex = [&]() { return static_cast<Vertex>(rng() % n); };
    switch (rng() % 5) {
    case 0: {  // replace a vertex
        std::size_t k = rng() % m.length();
        Vertex& v = k < m.stem.size() ? m.stem[k] : m.cycle[k - m.stem.size()];
        v = pick_vertex();
        break;
    }
    case 1: {  // insert a vertex
        std::size_t k = rng() % (m.length() + 1);
        if (k <= m.stem.size())
            m.stem.insert(m.stem.begin() + static_cast<long>(k), pick_vertex());
        else
            m.cycle.insert(m.cycle.begin() + static_cast<long>(k - m.stem.size()), pick_vertex());
        break;
    }
    case 2: {  // drop a vertex, keeping the cycle nonempty
        std::size_t k = rng() % m.length();
        if (k < m.stem.size())
            m.stem.erase(m.stem.begin() + static_cast<long>(k));
        else if (m.cycle.size() > 1)
            m.cycle.erase(m.cycle.begin() + static_cast<long>(k - m.stem.size()));
        else
            m.cycle[0] = pick_vertex();
        break;
    }
    case 3:  // rotate the cycle
        std::rotate(m.cycle.begin(), m.cycle.begin() + 1, m.cycle.end());
        if (m.cycle.size() == 1) m.cycle[0] = pick_vertex();
        break;
    default:  // move the stem/cycle boundary
        if (!m.stem.empty()) {
            m.cycle.insert(m.cycle.begin(), m.stem.back());
            m.stem.pop_back();
        } else {
            m.stem.push_back(m.cycle.front());
        }
    }
    return m;
}

Succ successors(const Game& g) { return g.succ; }

}  // namespace oracle
