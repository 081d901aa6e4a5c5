#include "adm/general.hpp"

#include <algorithm>
#include <exception>
#include <map>

#include "adm/errors.hpp"
#include "labels.hpp"

namespace adm {

KernelArena KernelArena::from_game(const Game& g) {
    KernelArena a;
    a.succ = g.succ;
    a.owner = g.owner;
    a.players = g.num_players();
    for (Player i = 0; i < g.num_players(); ++i) a.win.push_back(inf_circuit(g.objectives[i], g.num_vertices()));
    a.pinned = VertexSet(g.num_vertices());
    return a;
}

GeneralKernel::GeneralKernel(KernelArena arena, GeneralOptions opt)
    : a_(std::move(arena)), opt_(opt), values_(a_.players, a_.size()) {
    if (a_.win.size() != a_.players) fail(ErrorKind::Internal, "kernel needs one winning condition per player");
    if (a_.pinned.universe() != a_.size()) a_.pinned = VertexSet(a_.size());
    a_.pinned.for_each([&](std::size_t t) { a_.succ[t] = {static_cast<Vertex>(t)}; });
    dom_.resize(a_.size());
    for (Vertex v = 0; v < a_.size(); ++v) dom_[v].assign(a_.succ[v].size(), kNever);
    acc_.resize(1);
}

VertexSet GeneralKernel::help(int n, Player i) const {
    if (n < 0) return VertexSet(a_.size());
    return help_.at(n).at(i);
}

std::uint32_t GeneralKernel::dominated_at(Vertex v, Vertex w) const {
    const auto& s = a_.succ[v];
    auto it = std::find(s.begin(), s.end(), w);
    if (it == s.end()) fail(ErrorKind::Input, "not an edge of the arena");
    return dom_[v][static_cast<std::size_t>(it - s.begin())];
}

bool GeneralKernel::edge_alive(Vertex v, Vertex w, int n) const {
    const auto& s = a_.succ[v];
    auto it = std::find(s.begin(), s.end(), w);
    if (it == s.end()) return false;
    std::uint32_t d = dom_[v][static_cast<std::size_t>(it - s.begin())];
    return d == kNever || d >= static_cast<std::uint32_t>(n);
}

std::vector<std::vector<Vertex>> GeneralKernel::pruned(int n) const {
    std::vector<std::vector<Vertex>> out(a_.size());
    for (Vertex v = 0; v < a_.size(); ++v)
        for (std::size_t k = 0; k < a_.succ[v].size(); ++k)
            if (dom_[v][k] == kNever || dom_[v][k] >= static_cast<std::uint32_t>(n)) out[v].push_back(a_.succ[v][k]);
    return out;
}

VertexSet GeneralKernel::acc_set(Player j, int m) const {
    if (m < 1 || m >= static_cast<int>(acc_.size())) fail(ErrorKind::Internal, "acceptance set requested for an uncomputed level");
    return acc_[m][j];
}

namespace {

// D^m as a conjunction over players and levels 1..m.
CircuitBuilder::Ref outcome_ref(LabelSpace& ls, const std::vector<std::vector<VertexSet>>& acc,
                                const std::vector<CircuitBuilder::Ref>& win, int m) {
    std::vector<CircuitBuilder::Ref> parts;
    for (int k = 1; k <= m; ++k)
        for (Player j = 0; j < win.size(); ++j) parts.push_back(ls.b().or_(ls.atom(acc[k][j]), win[j]));
    return ls.b().all(parts);
}

}  // namespace

LabeledCondition GeneralKernel::outcome_condition(int n) const {
    LabelSpace ls(a_.size());
    std::vector<CircuitBuilder::Ref> win;
    for (const auto& w : a_.win) win.push_back(ls.win(w, a_.size()));
    auto d = outcome_ref(ls, acc_, win, n);
    return ls.finish(ls.b().and_(ls.b().not_(ls.atom(a_.pinned)), d));
}

LabeledCondition GeneralKernel::psi_condition(Player i, int n) const {
    LabelSpace ls(a_.size());
    std::vector<CircuitBuilder::Ref> win;
    for (const auto& w : a_.win) win.push_back(ls.win(w, a_.size()));
    auto d = outcome_ref(ls, acc_, win, n);
    VertexSet exit_ok(a_.size());
    a_.pinned.for_each([&](std::size_t t) {
        if (values_.at(n, i, static_cast<Vertex>(t)) >= 0) exit_ok.set(t);
    });
    auto& b = ls.b();
    auto inside = b.and_(b.not_(ls.atom(a_.pinned)), b.and_(d, win[i]));
    return ls.finish(b.or_(ls.atom(exit_ok), inside));
}

GeneralKernel::ThetaGame GeneralKernel::theta_game(Player i, int n) const {
    const std::size_t nv = a_.size();
    const Vertex sink = static_cast<Vertex>(nv);
    std::vector<std::vector<Vertex>> succ(nv + 1);
    VertexSet eve(nv + 1);
    for (Vertex v = 0; v < nv; ++v) {
        if (a_.pinned.test(v)) {
            succ[v] = {v};
            continue;
        }
        bool redirected = false;
        for (std::size_t k = 0; k < a_.succ[v].size(); ++k) {
            bool alive = dom_[v][k] == kNever || dom_[v][k] >= static_cast<std::uint32_t>(n);
            if (alive)
                succ[v].push_back(a_.succ[v][k]);
            else if (a_.owner[v] != i)
                redirected = true;
        }
        if (redirected) succ[v].push_back(sink);
        if (a_.owner[v] == i) eve.set(v);
    }
    succ[sink] = {sink};
    eve.set(sink);

    auto extend = [&](const VertexSet& s) {
        VertexSet e(nv + 1);
        s.for_each([&](std::size_t v) { e.set(v); });
        return e;
    };
    LabelSpace ls(nv + 1);
    auto& b = ls.b();
    std::vector<CircuitBuilder::Ref> win;
    for (const auto& w : a_.win) win.push_back(ls.win(w, nv));
    std::vector<CircuitBuilder::Ref> gamma;
    auto d_prev = b.constant(true);  // D^{m-1}
    for (int m = 1; m <= n; ++m) {
        std::vector<CircuitBuilder::Ref> level;
        for (Player j = 0; j < a_.players; ++j) level.push_back(b.or_(ls.atom(extend(acc_[m][j])), win[j]));
        gamma.push_back(b.implies(d_prev, level[i]));
        d_prev = b.and_(d_prev, b.all(level));
    }
    gamma.push_back(b.implies(d_prev, win[i]));
    VertexSet sink_set(nv + 1), exit_win(nv + 1);
    sink_set.set(sink);
    a_.pinned.for_each([&](std::size_t t) {
        if (values_.at(n, i, static_cast<Vertex>(t)) == 1) exit_win.set(t);
    });
    auto inside = b.and_(b.not_(ls.atom(extend(a_.pinned))), b.all(gamma));
    auto out = b.or_(ls.atom(sink_set), b.or_(ls.atom(exit_win), inside));
    for (auto& s : succ) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    return {Arena(std::move(succ), eve), ls.finish(out), sink};
}

VertexSet GeneralKernel::psi_region(Player i, int n) const {
    return cooperative_region(pruned(n), psi_condition(i, n), opt_.emptiness);
}

VertexSet GeneralKernel::theta_region(Player i, int n) const {
    ThetaGame t = theta_game(i, n);
    VertexSet w = opt_.theta == ThetaBackend::Lar
                      ? solve_muller_lar(t.arena, t.condition.over_vertices(), opt_.lar_max_inputs)
                      : solve_muller(t.arena, t.condition, opt_.muller);
    VertexSet out(a_.size());
    for (Vertex v = 0; v < a_.size(); ++v)
        if (w.test(v) && !a_.pinned.test(v)) out.set(v);
    return out;
}

bool GeneralKernel::check_value_neg(Vertex s, Player i, int n) const { return !psi_region(i, n).test(s); }
bool GeneralKernel::check_value_pos(Vertex s, Player i, int n) const { return theta_region(i, n).test(s); }

VertexSet help_states(const std::vector<std::vector<Vertex>>& succ, const std::vector<Player>& owner,
                      const ValueTable& values, int n, Player i, const std::function<bool(Vertex, Vertex)>& alive) {
    VertexSet h(succ.size());
    for (Vertex s = 0; s < succ.size(); ++s) {
        Player j = owner[s];
        if (j == i) continue;
        int keep = values.at(n - 1, j, s);
        int count = 0;
        for (auto w : succ[s])
            if (alive(s, w) && values.at(n, i, w) >= 0 && values.at(n - 1, j, w) == keep) ++count;
        if (count >= 2) h.set(s);
    }
    return h;
}

void GeneralKernel::step(const PinnedValue& pinned) {
    const int n = levels();
    const std::size_t nv = a_.size();
    const std::size_t np = a_.players;
    values_.push_level();
    if (a_.pinned.any() && !pinned) fail(ErrorKind::Internal, "pinned vertices need supplied values");
    a_.pinned.for_each([&](std::size_t t) {
        for (Player i = 0; i < np; ++i) values_.set(n, i, static_cast<Vertex>(t), pinned(i, static_cast<Vertex>(t)));
    });
    for (Vertex v = 0; v < nv; ++v) {
        if (a_.pinned.test(v)) continue;
        bool any = false;
        for (std::size_t k = 0; k < a_.succ[v].size(); ++k)
            if (dom_[v][k] == kNever || dom_[v][k] >= static_cast<std::uint32_t>(n)) any = true;
        if (!any) fail(ErrorKind::Internal, "vertex " + std::to_string(v) + " has no surviving successor at level " +
                                                std::to_string(n));
    }

    std::vector<VertexSet> some_win(np), forced(np);
    std::exception_ptr error;
    auto body = [&](Player i) {
        some_win[i] = psi_region(i, n);
        forced[i] = theta_region(i, n);
    };
    const long count = static_cast<long>(np);
#if defined(ADM_HAVE_OPENMP)
    const bool parallel = opt_.policy == ExecutionPolicy::Parallel && np > 1;
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
#endif
    for (long p = 0; p < count; ++p) {
        try {
            body(static_cast<Player>(p));
        } catch (...) {
#if defined(ADM_HAVE_OPENMP)
#pragma omp critical(adm_kernel_error)
#endif
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    for (Player i = 0; i < np; ++i)
        for (Vertex v = 0; v < nv; ++v) {
            if (a_.pinned.test(v)) continue;
            if (forced[i].test(v) && !some_win[i].test(v))
                fail(ErrorKind::Internal, "vertex " + std::to_string(v) + " forced winning without a winning outcome");
            values_.set(n, i, v, forced[i].test(v) ? 1 : (some_win[i].test(v) ? 0 : -1));
        }

    for (Vertex v = 0; v < nv; ++v) {
        if (a_.pinned.test(v)) continue;
        Player o = a_.owner[v];
        for (std::size_t k = 0; k < a_.succ[v].size(); ++k) {
            Vertex w = a_.succ[v][k];
            bool alive = dom_[v][k] == kNever || dom_[v][k] >= static_cast<std::uint32_t>(n);
            if (!alive) continue;
            int from = values_.at(n, o, v), to = values_.at(n, o, w);
            if (from > to)
                dom_[v][k] = static_cast<std::uint32_t>(n);
            else if (from < to)
                fail(ErrorKind::Internal, "own move " + std::to_string(v) + " -> " + std::to_string(w) +
                                              " raises its owner's value at level " + std::to_string(n));
        }
    }

    auto alive_at_n = [&](Vertex s, Vertex w) { return edge_alive(s, w, n); };
    std::vector<VertexSet> h(np);
    for (Player i = 0; i < np; ++i) h[i] = help_states(a_.succ, a_.owner, values_, n, i, alive_at_n) - a_.pinned;
    help_.push_back(std::move(h));

    acc_.resize(static_cast<std::size_t>(n) + 2);
    acc_[n + 1].assign(np, VertexSet(nv));
    for (Player j = 0; j < np; ++j)
        for (Vertex v = 0; v < nv; ++v) {
            if (a_.pinned.test(v)) continue;
            int x = values_.at(n, j, v);
            if (x == -1 || (x == 0 && help_[n][j].test(v))) acc_[n + 1][j].set(v);
        }
}

bool GeneralKernel::stable() const {
    int l = levels();
    return l >= 2 && values_.level_equal(l - 1, l - 2) && help_[l - 1] == help_[l - 2];
}

bool GeneralKernel::accepts_Ai(Player j, int m, const Lasso& l) const {
    if (m < 1 || m > levels()) fail(ErrorKind::Internal, "A-condition requested for an uncomputed level");
    VertexSet inf = l.inf(a_.size());
    auto cls = lasso_value_sequence(l, [&](Vertex v) { return values_.at(m - 1, j, v); });
    switch (cls) {
    case ValueClass::ZeroThenMinusOne: return true;
    case ValueClass::ZeroThenOne: return a_.win[j].eval(inf);
    case ValueClass::AllZero: return a_.win[j].eval(inf) || inf.intersects(help(m - 1, j));
    case ValueClass::Other: return false;
    }
    return false;
}

bool GeneralKernel::accepts(const Lasso& l, int n) const {
    if (l.cycle.empty()) return false;
    bool edges = true;
    l.for_each_edge([&](Vertex u, Vertex v) {
        if (u >= a_.size() || v >= a_.size() || !edge_alive(u, v, n)) edges = false;
    });
    if (!edges) return false;
    for (int m = 1; m <= n; ++m)
        for (Player j = 0; j < a_.players; ++j)
            if (!accepts_Ai(j, m, l)) return false;
    return true;
}

bool GeneralKernel::accepts_inf(const Lasso& l, int n) const {
    if (l.cycle.empty()) return false;
    bool edges = true;
    l.for_each_edge([&](Vertex u, Vertex v) {
        if (u >= a_.size() || v >= a_.size() || !edge_alive(u, v, n)) edges = false;
    });
    return edges && outcome_condition(n).eval_on(l.inf(a_.size()));
}

std::optional<std::string> GeneralKernel::explain_rejection(const Lasso& l, int n,
                                                            const std::function<std::string(Vertex)>& name) const {
    if (l.cycle.empty()) return std::string("empty cycle");
    std::optional<std::string> bad;
    l.for_each_edge([&](Vertex u, Vertex v) {
        if (bad) return;
        if (u >= a_.size() || v >= a_.size()) {
            bad = "unknown vertex";
            return;
        }
        const auto& s = a_.succ[u];
        auto it = std::find(s.begin(), s.end(), v);
        if (it == s.end()) {
            bad = "missing edge " + name(u) + " -> " + name(v);
            return;
        }
        std::uint32_t d = dom_[u][static_cast<std::size_t>(it - s.begin())];
        if (d != kNever && d < static_cast<std::uint32_t>(n))
            bad = "edge " + name(u) + " -> " + name(v) + " removed at iteration " + std::to_string(d);
    });
    if (bad) return bad;
    for (int m = 1; m <= n; ++m)
        for (Player j = 0; j < a_.players; ++j)
            if (!accepts_Ai(j, m, l)) {
                auto cls = lasso_value_sequence(l, [&](Vertex v) { return values_.at(m - 1, j, v); });
                return "A-condition of player #" + std::to_string(j) + " at iteration " + std::to_string(m) +
                       " rejects (value class " + to_string(cls) + " at iteration " + std::to_string(m - 1) + ")";
            }
    return std::nullopt;
}

int fixpoint_index(const GeneralKernel& k) {
    int last = k.levels() - 1;
    int idx = last;
    while (idx > 0 && k.values().level_equal(idx - 1, last)) --idx;
    return idx;
}

void run_kernel_to_fixpoint(GeneralKernel& k) {
    const auto& a = k.arena();
    const std::size_t bound = a.players * a.size();
    while (true) {
        k.step();
        if (k.stable()) break;
        if (k.options().max_levels && static_cast<std::size_t>(k.levels()) >= k.options().max_levels) break;
        if (static_cast<std::size_t>(k.levels()) > bound + 2)
            fail(ErrorKind::Internal, "iteration bound |P|*|V| = " + std::to_string(bound) + " exceeded");
    }
    if (k.stable() && static_cast<std::size_t>(fixpoint_index(k)) > bound)
        fail(ErrorKind::Internal, "fixpoint beyond |P|*|V|");
}

GeneralIteration run_to_fixpoint(const Game& g, const GeneralOptions& opt) {
    require_valid(g);
    for (Player i = 0; i < g.num_players(); ++i)
        if (!g.objectives[i].prefix_independent())
            fail(ErrorKind::Unsupported, "general engine needs prefix-independent objectives; player '" + g.players[i] +
                                             "' has " + to_string(g.objectives[i].kind));
    GeneralIteration it{GeneralKernel(KernelArena::from_game(g), opt), 0, 0};
    run_kernel_to_fixpoint(it.kernel);
    it.fixpoint_at = fixpoint_index(it.kernel);
    it.stable_level = it.kernel.levels() - 1;
    return it;
}

}  // namespace adm
