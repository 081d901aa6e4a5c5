#include "adm/queries.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "adm/errors.hpp"
#include "labels.hpp"

namespace adm {

const char* to_string(EngineKind k) {
    switch (k) {
    case EngineKind::Auto: return "auto";
    case EngineKind::Safety: return "safety";
    case EngineKind::General: return "general";
    case EngineKind::Buchi: return "buchi";
    case EngineKind::Weak: return "weak";
    }
    return "?";
}

EngineKind engine_from_string(const std::string& s) {
    for (auto k : {EngineKind::Auto, EngineKind::Safety, EngineKind::General, EngineKind::Buchi, EngineKind::Weak})
        if (s == to_string(k)) return k;
    fail(ErrorKind::Input, "unknown engine '" + s + "'");
}

EngineKind select_engine(const Game& g, EngineKind requested) {
    if (requested != EngineKind::Auto) return requested;
    bool safety = true, pi = true, occ = true;
    for (const auto& o : g.objectives) {
        safety = safety && o.kind == ObjectiveKind::Safety;
        pi = pi && o.prefix_independent();
        occ = occ && o.occurrence_based();
    }
    if (safety) return EngineKind::Safety;
    if (pi) return EngineKind::General;
    if (occ) return EngineKind::Weak;
    fail(ErrorKind::Unsupported, "games mixing prefix-independent and occurrence-based objectives are not supported");
}

AdmContext analyse(const Game& g, const QueryOptions& opt) {
    require_valid(g);
    AdmContext ctx;
    ctx.game = g;
    ctx.engine = select_engine(g, opt.engine);
    if (ctx.engine == EngineKind::Buchi) ctx.engine = EngineKind::General;
    switch (ctx.engine) {
    case EngineKind::Safety: ctx.safety = iterate_safety(g); break;
    case EngineKind::Weak: ctx.weak = run_weak(g, opt.weak); break;
    default: ctx.general = run_to_fixpoint(g, opt.general); break;
    }
    return ctx;
}

int AdmContext::fixpoint_at() const {
    if (safety) return safety->fixpoint_at;
    if (weak) return weak->fixpoint_at;
    return general->fixpoint_at;
}

int AdmContext::stable_level() const {
    if (safety) return safety->final_level();
    if (weak) return weak->stable_level;
    return general->stable_level;
}

const Game& AdmContext::arena() const {
    if (safety) return safety->arena();
    if (weak) return weak->engine.unfolding().game;
    return game;
}

std::optional<Lasso> AdmContext::lift(const Lasso& l) const {
    if (l.check(game)) return std::nullopt;
    if (safety) return lift_lost(safety->unfolding, game, l);
    if (weak) return lift_visited(weak->engine.unfolding(), l);
    return l;
}

Lasso AdmContext::project(const Lasso& l) const {
    if (safety) return safety->unfolding.project(l);
    if (weak) return weak->engine.unfolding().project(l);
    return l;
}

OutcomeModel AdmContext::model() const {
    OutcomeModel m;
    const int n = stable_level();
    if (safety) {
        const Game& a = safety->arena();
        m.succ = safety->edges.surviving(a, n + 1);
        m.start = a.initial();
        m.base = safety->unfolding.base;
        for (Player i = 0; i < a.num_players(); ++i) m.win.push_back(Circuit::none_of(a.objectives[i].set));
        m.forbidden = VertexSet(a.num_vertices());
    } else if (weak) {
        const WeakEngine& e = weak->engine;
        const Game& a = e.unfolding().game;
        const std::size_t nu = a.num_vertices();
        m.succ.resize(nu);
        for (Vertex x = 0; x < nu; ++x)
            for (auto y : a.succ[x])
                if (e.edge_alive(x, y, n)) m.succ[x].push_back(y);
        m.start = a.initial();
        m.base = e.unfolding().base;
        for (Player i = 0; i < a.num_players(); ++i) {
            VertexSet w(nu);
            for (Vertex x = 0; x < nu; ++x)
                if (e.wins(i, x)) w.set(x);
            m.win.push_back(Circuit::any_of(w));
        }
        for (int lvl = 1; lvl <= n; ++lvl)
            for (Player j = 0; j < a.num_players(); ++j) {
                VertexSet s(nu);
                for (const auto& st : e.strata()) {
                    VertexSet local = st.kernel.acc_set(j, lvl);
                    for (std::size_t k = 0; k < st.states.size(); ++k)
                        if (local.test(k)) s.set(st.states[k]);
                }
                m.clauses.push_back({s, j, lvl});
            }
        m.forbidden = VertexSet(nu);
    } else {
        const GeneralKernel& k = general->kernel;
        m.succ = k.pruned(n);
        m.start = game.initial();
        for (Vertex v = 0; v < game.num_vertices(); ++v) m.base.push_back(v);
        m.win = k.arena().win;
        for (int lvl = 1; lvl <= n; ++lvl)
            for (Player j = 0; j < game.num_players(); ++j) m.clauses.push_back({k.acc_set(j, lvl), j, lvl});
        m.forbidden = k.arena().pinned;
    }
    return m;
}

VertexSet parse_players(const Game& g, const std::string& list) {
    VertexSet s(g.num_players());
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        item = item.substr(b, e - b + 1);
        auto p = g.find_player(item);
        if (!p) fail(ErrorKind::Input, "unknown player '" + item + "'");
        s.set(*p);
    }
    return s;
}

namespace {

void check_sets(const Game& g, const VertexSet& win, const VertexSet& lose) {
    if (win.universe() != g.num_players() || lose.universe() != g.num_players())
        fail(ErrorKind::Input, "coalition player sets do not match the game");
    if (win.intersects(lose)) fail(ErrorKind::Input, "a player cannot be required both to win and to lose");
}

// Circuit over `n` derived vertices: every input a becomes "some copy of a".
Circuit lift_circuit(const Circuit& c, const std::vector<Vertex>& base, std::size_t n_base) {
    std::vector<VertexSet> copies(n_base, VertexSet(base.size()));
    for (std::size_t w = 0; w < base.size(); ++w) copies[base[w]].set(w);
    CircuitBuilder b;
    auto out = b.embed(c, [&](std::uint32_t a) { return a < n_base ? b.any_of(copies[a]) : b.constant(false); });
    return b.finish(out);
}

VertexSet lift_set(const VertexSet& s, const std::vector<Vertex>& base) {
    VertexSet r(base.size());
    for (std::size_t w = 0; w < base.size(); ++w)
        if (s.test(base[w])) r.set(w);
    return r;
}

// Out(S*) on an arena whose vertices project to model vertices through `base` (identity when empty).
CircuitBuilder::Ref outcome_ref(LabelSpace& ls, const OutcomeModel& m, const std::vector<Vertex>* base,
                                std::vector<CircuitBuilder::Ref>& win, std::size_t n) {
    auto& b = ls.b();
    for (const auto& w : m.win) win.push_back(base ? ls.win(lift_circuit(w, *base, m.size()), n) : ls.win(w, n));
    std::vector<CircuitBuilder::Ref> parts;
    parts.push_back(b.not_(ls.atom(base ? lift_set(m.forbidden, *base) : m.forbidden)));
    for (const auto& c : m.clauses)
        parts.push_back(b.or_(ls.atom(base ? lift_set(c.set, *base) : c.set), win[c.player]));
    return b.all(parts);
}

}  // namespace

CoalitionAnswer coalition_on_model(const AdmContext& ctx, const VertexSet& win, const VertexSet& lose) {
    check_sets(ctx.game, win, lose);
    OutcomeModel m = ctx.model();
    LabelSpace ls(m.size());
    std::vector<CircuitBuilder::Ref> w;
    auto cond = outcome_ref(ls, m, nullptr, w, m.size());
    auto& b = ls.b();
    win.for_each([&](std::size_t i) { cond = b.and_(cond, w[i]); });
    lose.for_each([&](std::size_t i) { cond = b.and_(cond, b.not_(w[i])); });
    CoalitionAnswer ans;
    ans.iterations = ctx.fixpoint_at();
    auto l = cooperative_emptiness(m.succ, ls.finish(cond), m.start);
    if (!l) return ans;
    ans.yes = true;
    ans.arena_witness = *l;
    ans.witness = ctx.project(*l);
    return ans;
}

CoalitionAnswer coalition(const AdmContext& ctx, const VertexSet& win, const VertexSet& lose) {
    check_sets(ctx.game, win, lose);
    if (ctx.safety) return coalition_safety(*ctx.safety, win, lose);
    if (ctx.weak) return coalition_weak(*ctx.weak, win, lose);
    return coalition_on_model(ctx, win, lose);
}

CoalitionAnswer coalition(const Game& g, const VertexSet& win, const VertexSet& lose, const QueryOptions& opt) {
    check_sets(g, win, lose);
    return coalition(analyse(g, opt), win, lose);
}

std::vector<std::vector<std::vector<std::uint32_t>>> BuchiAutomaton::table(std::size_t vertices) const {
    std::vector<std::vector<std::vector<std::uint32_t>>> t(size(), std::vector<std::vector<std::uint32_t>>(vertices));
    for (const auto& tr : transitions) {
        if (tr.from >= size() || tr.to >= size() || tr.label >= vertices)
            fail(ErrorKind::Input, "automaton transition outside its states or alphabet");
        t[tr.from][tr.label].push_back(tr.to);
    }
    for (auto& row : t)
        for (auto& s : row) {
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
        }
    return t;
}

bool BuchiAutomaton::accepts(const Lasso& l, std::size_t vertices) const {
    if (l.cycle.empty()) return false;
    auto t = table(vertices);
    std::vector<Vertex> word = l.stem;
    word.insert(word.end(), l.cycle.begin(), l.cycle.end());
    const std::size_t len = word.size(), q = size();
    auto next = [&](std::size_t k) { return k + 1 < len ? k + 1 : l.stem.size(); };
    auto id = [&](std::size_t k, std::uint32_t s) { return k * q + s; };
    std::vector<std::vector<std::size_t>> succ(len * q);
    for (std::size_t k = 0; k < len; ++k)
        for (std::uint32_t s = 0; s < q; ++s)
            for (auto s2 : t[s][word[next(k)]]) succ[id(k, s)].push_back(id(next(k), s2));
    auto reach_from = [&](const std::vector<std::size_t>& from) {
        std::vector<char> seen(len * q, 0);
        std::deque<std::size_t> queue;
        for (auto x : from) {
            if (!seen[x]) queue.push_back(x);
            seen[x] = 1;
        }
        while (!queue.empty()) {
            auto x = queue.front();
            queue.pop_front();
            for (auto y : succ[x])
                if (!seen[y]) {
                    seen[y] = 1;
                    queue.push_back(y);
                }
        }
        return seen;
    };
    std::vector<std::size_t> init;
    for (auto s0 : initial)
        for (auto s : t.at(s0)[word[0]]) init.push_back(id(0, s));
    auto seen = reach_from(init);
    for (std::size_t k = l.stem.size(); k < len; ++k)
        for (std::uint32_t s = 0; s < q; ++s) {
            if (!seen[id(k, s)] || !accepting.test(s)) continue;
            auto back = reach_from(succ[id(k, s)]);
            if (back[id(k, s)]) return true;
        }
    return false;
}

McAnswer mc_under_admissibility(const AdmContext& ctx, const BuchiAutomaton& neg_spec) {
    const std::size_t nv = ctx.game.num_vertices();
    if (neg_spec.accepting.universe() != neg_spec.size())
        fail(ErrorKind::Input, "automaton accepting set does not match its states");
    auto t = neg_spec.table(nv);
    OutcomeModel m = ctx.model();
    const std::uint32_t q = static_cast<std::uint32_t>(neg_spec.size());

    // Product of the outcome arena with the automaton, states reachable from the start.
    std::vector<Vertex> index(m.size() * q, Product::kNoVertex);
    std::vector<Vertex> pbase;
    std::vector<std::uint32_t> pstate;
    std::vector<std::vector<Vertex>> psucc;
    std::deque<Vertex> queue;
    auto get = [&](Vertex x, std::uint32_t s) {
        Vertex& slot = index[std::size_t(x) * q + s];
        if (slot == Product::kNoVertex) {
            slot = static_cast<Vertex>(pbase.size());
            pbase.push_back(x);
            pstate.push_back(s);
            psucc.emplace_back();
            queue.push_back(slot);
        }
        return slot;
    };
    std::vector<Vertex> starts;
    for (auto s0 : neg_spec.initial)
        for (auto s : t.at(s0)[m.base[m.start]]) starts.push_back(get(m.start, s));
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
    while (!queue.empty()) {
        Vertex p = queue.front();
        queue.pop_front();
        for (auto y : m.succ[pbase[p]])
            for (auto s2 : t[pstate[p]][m.base[y]]) {
                Vertex z = get(y, s2);  // may grow psucc
                psucc[p].push_back(z);
            }
    }
    for (auto& s : psucc) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    const std::size_t np = pbase.size();
    McAnswer ans;
    ans.product_size = np;
    ans.iterations = ctx.fixpoint_at();
    if (np == 0) return ans;

    LabelSpace ls(np);
    std::vector<CircuitBuilder::Ref> w;
    auto cond = outcome_ref(ls, m, &pbase, w, np);
    VertexSet acc(np);
    for (Vertex p = 0; p < np; ++p)
        if (neg_spec.accepting.test(pstate[p])) acc.set(p);
    cond = ls.b().and_(cond, ls.atom(acc));
    LabeledCondition c = ls.finish(cond);
    std::optional<Lasso> found;
    for (auto s : starts) {
        found = cooperative_emptiness(psucc, c, s);
        if (found) break;
    }
    if (!found) return ans;
    if (found->length() > 2 * np * np) fail(ErrorKind::Internal, "counterexample exceeds the lasso length bound");
    Lasso arena;
    for (auto p : found->stem) arena.stem.push_back(pbase[p]);
    for (auto p : found->cycle) arena.cycle.push_back(pbase[p]);
    ans.holds = false;
    ans.arena_witness = arena;
    ans.counterexample = ctx.project(arena);
    return ans;
}

McAnswer mc_under_admissibility(const Game& g, const BuchiAutomaton& neg_spec, const QueryOptions& opt) {
    return mc_under_admissibility(analyse(g, opt), neg_spec);
}

bool objective_holds(const Game& g, Player i, const Lasso& l) {
    const Objective& o = g.objectives.at(i);
    const std::size_t n = g.num_vertices();
    if (o.prefix_independent()) return inf_circuit(o, n).eval(l.inf(n));
    return occ_circuit(o, n).eval(l.occ(n));
}

namespace {

// Out(S*) clauses of a lasso of the engine's arena; appends the accepted clause per player and level.
std::optional<std::string> replay_outcome(const AdmContext& ctx, const Lasso& a, std::vector<std::string>& trace) {
    const Game& ar = ctx.arena();
    const Game& g = ctx.game;
    const int n = ctx.stable_level();
    auto name = [&](Vertex x) { return ar.names[x]; };
    if (ctx.safety) {
        const auto& it = *ctx.safety;
        std::optional<std::string> bad;
        a.for_each_edge([&](Vertex x, Vertex y) {
            if (bad) return;
            const auto& s = ar.succ[x];
            auto k = static_cast<std::size_t>(std::lower_bound(s.begin(), s.end(), y) - s.begin());
            std::uint32_t r = it.edges.removed[x][k];
            if (r != EdgeLevels::kNever && r <= static_cast<std::uint32_t>(n))
                bad = "edge " + name(x) + " -> " + name(y) + " removed at iteration " + std::to_string(r);
        });
        if (bad) return bad;
        for (Player j = 0; j < g.num_players(); ++j) {
            auto cls = lasso_value_sequence(a, [&](Vertex x) { return it.values.at(n, j, x); });
            trace.push_back("player " + g.players[j] + ": surviving transitions only, value class " + to_string(cls) +
                            " at iteration " + std::to_string(n));
        }
        return std::nullopt;
    }
    std::function<int(int, Player, Vertex)> value;
    std::function<bool(int, Player, Vertex)> help;
    if (ctx.weak) {
        const WeakEngine& e = ctx.weak->engine;
        if (auto r = weak_rejection(e, a, n)) return r;
        value = [&e](int m, Player j, Vertex x) { return e.value(m, j, x); };
        help = [&e](int m, Player j, Vertex x) { return e.help(m, j, x); };
    } else {
        const GeneralKernel& k = ctx.general->kernel;
        if (auto r = k.explain_rejection(a, n, name)) return r;
        value = [&k](int m, Player j, Vertex x) { return k.value(m, j, x); };
        help = [&k](int m, Player j, Vertex x) { return k.help(m, j).test(x); };
    }
    const Lasso base = ctx.project(a);
    for (int m = 1; m <= n; ++m)
        for (Player j = 0; j < g.num_players(); ++j) {
            auto cls = lasso_value_sequence(a, [&](Vertex x) { return value(m - 1, j, x); });
            std::string why;
            switch (cls) {
            case ValueClass::ZeroThenMinusOne: why = "values end in -1"; break;
            case ValueClass::ZeroThenOne: why = "values end in 1 and the objective holds"; break;
            case ValueClass::AllZero: {
                if (objective_holds(g, j, base)) {
                    why = "values stay 0 and the objective holds";
                } else {
                    for (auto x : a.cycle)
                        if (help(m - 1, j, x)) {
                            why = "values stay 0 and Help!-state " + name(x) + " recurs";
                            break;
                        }
                }
                break;
            }
            case ValueClass::Other: break;
            }
            trace.push_back("A-condition of player " + g.players[j] + " at iteration " + std::to_string(m) + ": " + why);
        }
    return std::nullopt;
}

}  // namespace

Certificate witness_replay(const AdmContext& ctx, const Lasso& l, const VertexSet& win, const VertexSet& lose) {
    check_sets(ctx.game, win, lose);
    Certificate c;
    const Game& g = ctx.game;
    if (auto bad = l.check(g)) {
        c.violation = *bad;
        return c;
    }
    auto a = ctx.lift(l);
    if (!a) {
        c.violation = "lasso leaves the analysed part of the game";
        return c;
    }
    c.trace.push_back("lasso " + to_string(g, l) + " tracked as " + to_string(ctx.arena(), *a));
    if (auto bad = replay_outcome(ctx, *a, c.trace)) {
        c.violation = *bad;
        return c;
    }
    for (Player i = 0; i < g.num_players(); ++i) {
        bool w = objective_holds(g, i, l);
        if (win.test(i) && !w) {
            c.violation = "player " + g.players[i] + " is required to win but loses";
            return c;
        }
        if (lose.test(i) && w) {
            c.violation = "player " + g.players[i] + " is required to lose but wins";
            return c;
        }
        if (win.test(i) || lose.test(i))
            c.trace.push_back("player " + g.players[i] + (w ? " wins" : " loses") + " as required");
    }
    c.ok = true;
    return c;
}

Certificate witness_replay(const AdmContext& ctx, const Lasso& l, const BuchiAutomaton& neg_spec) {
    Certificate c;
    const Game& g = ctx.game;
    if (auto bad = l.check(g)) {
        c.violation = *bad;
        return c;
    }
    auto a = ctx.lift(l);
    if (!a) {
        c.violation = "lasso leaves the analysed part of the game";
        return c;
    }
    c.trace.push_back("lasso " + to_string(g, l) + " tracked as " + to_string(ctx.arena(), *a));
    if (auto bad = replay_outcome(ctx, *a, c.trace)) {
        c.violation = *bad;
        return c;
    }
    if (!neg_spec.accepts(l, g.num_vertices())) {
        c.violation = "the negated specification rejects the lasso";
        return c;
    }
    c.trace.push_back("the negated specification accepts the lasso");
    c.ok = true;
    return c;
}

}  // namespace adm
