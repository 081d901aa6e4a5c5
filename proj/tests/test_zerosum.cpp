#include <algorithm>
#include <random>

#include "adm/errors.hpp"
#include "adm/safety.hpp"
#include "adm/zerosum.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace adm;
using fixture::v;

namespace {

Arena random_arena(std::mt19937_64& rng, std::size_t n, double density) {
    std::vector<std::vector<Vertex>> succ(n);
    VertexSet eve(n);
    std::bernoulli_distribution edge(density), mine(0.5);
    for (Vertex x = 0; x < n; ++x) {
        if (mine(rng)) eve.set(x);
        for (Vertex y = 0; y < n; ++y)
            if (edge(rng)) succ[x].push_back(y);
        if (succ[x].empty()) succ[x].push_back(static_cast<Vertex>(rng() % n));
    }
    return Arena(succ, eve);
}

std::vector<std::uint32_t> random_colors(std::mt19937_64& rng, std::size_t n, std::uint32_t max_color) {
    std::vector<std::uint32_t> c(n);
    for (auto& x : c) x = static_cast<std::uint32_t>(rng() % (max_color + 1));
    return c;
}

VertexSet random_set(std::mt19937_64& rng, std::size_t n, double p) {
    VertexSet s(n);
    std::bernoulli_distribution in(p);
    for (std::size_t x = 0; x < n; ++x)
        if (in(rng)) s.set(x);
    return s;
}

/// The owner of `region` wins with `strategy` there: the opponent cannot form a losing cycle.
bool strategy_wins(const Arena& a, const std::vector<std::uint32_t>& colors, const ParityResult& r, bool for_eve) {
    const VertexSet& region = for_eve ? r.eve : r.adam;
    oracle::Succ succ(a.size());
    for (Vertex x = 0; x < a.size(); ++x) {
        if (!region.test(x)) continue;
        if (a.eve.test(x) == for_eve) {
            if (r.strategy[x] == ParityResult::kNone || !region.test(r.strategy[x])) return false;
            succ[x] = {r.strategy[x]};
        } else {
            for (auto y : a.succ[x]) {
                if (!region.test(y)) return false;
                succ[x].push_back(y);
            }
        }
    }
    bool ok = true;
    region.for_each([&](std::size_t x) {
        // Isolated vertices outside the region have no successors; they are never reached.
        bool bad = oracle::inf_nonempty(
            succ,
            [&](const VertexSet& s) {
                std::uint32_t top = 0;
                s.for_each([&](std::size_t y) { top = std::max(top, colors[y]); });
                return (top % 2 == 0) != for_eve;
            },
            static_cast<Vertex>(x));
        if (bad) ok = false;
    });
    return ok;
}

std::vector<std::vector<Vertex>> pruned_arena(const SafetyIteration& it, int n) { return it.edges.surviving(it.arena(), n); }

}  // namespace

TEST_CASE("attractor basics") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
        Arena a = random_arena(rng, 6, 0.4);
        CHECK(attractor(a, VertexSet(6), true, a.all()).none());
        CHECK(attractor(a, a.all(), false, a.all()) == a.all());
        VertexSet t = random_set(rng, 6, 0.3);
        VertexSet t2 = t | random_set(rng, 6, 0.3);
        for (bool side : {true, false}) CHECK(attractor(a, t, side, a.all()).subset_of(attractor(a, t2, side, a.all())));
    }
}

TEST_CASE("attractor strategies decrease the rank") {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 50; ++k) {
        Arena a = random_arena(rng, 7, 0.35);
        VertexSet t = random_set(rng, 7, 0.25);
        std::vector<Vertex> strategy(7, ParityResult::kNone);
        VertexSet attr = attractor(a, t, true, a.all(), &strategy);
        // Following the strategy from an attracted Eve vertex never leaves the attractor.
        attr.for_each([&](std::size_t x) {
            if (t.test(x) || !a.eve.test(x)) return;
            REQUIRE(strategy[x] != ParityResult::kNone);
            CHECK(attr.test(strategy[x]));
        });
    }
}

TEST_CASE("safety in the pruned unfolding") {
    Game g = fixture::corpus("fig1a.game");
    SafetyIteration it = iterate_safety(g);
    const Game& u = it.arena();
    VertexSet lost1(u.num_vertices()), lost2(u.num_vertices());
    for (Vertex x = 0; x < u.num_vertices(); ++x) {
        if (it.unfolding.tag[x].test(0)) lost1.set(x);
        if (it.unfolding.tag[x].test(1)) lost2.set(x);
    }
    auto succ = pruned_arena(it, 1);
    REQUIRE_FALSE(it.edges.alive(u, v(u, "q0"), v(u, "q4"), 1));

    SUBCASE("player 2 wins from q1 by returning to q0") {
        Arena a(succ, u.vertices_of(1));
        CHECK(solve_safety(a, lost2).test(v(u, "q1")));
        CHECK(solve_safety(a, lost2).test(v(u, "q0")));
    }
    SUBCASE("player 1 cannot force safety from q0 but may survive with help") {
        Arena a(succ, u.vertices_of(0));
        VertexSet safe = solve_safety(a, lost1);
        CHECK_FALSE(safe.test(v(u, "q0")));
        // The lost states of player 1 are closed, so safety is the parity condition "never odd".
        std::vector<std::uint32_t> colors(u.num_vertices(), 0);
        lost1.for_each([&](std::size_t x) { colors[x] = 1; });
        auto truth = oracle::parity_by_strategy_pairs(succ, a.eve, colors);
        CHECK(truth.eve == safe);
        auto lasso = cooperative_emptiness(succ, Circuit::none_of(lost1), LassoMode::Occ, v(u, "q0"));
        REQUIRE(lasso.has_value());
        CHECK_FALSE(lasso->occ(u.num_vertices()).intersects(lost1));
    }
}

TEST_CASE("safety trivial cases") {
    std::mt19937_64 rng(5);
    Arena a = random_arena(rng, 5, 0.5);
    CHECK(solve_safety(a, VertexSet(5)) == a.all());
    CHECK(solve_safety(a, a.all()).none());
}

TEST_CASE("parity on a single vertex") {
    Arena a({{0}}, VertexSet(1, true));
    CHECK(solve_parity(a, {2}).eve.test(0));
    CHECK(solve_parity(a, {1}).adam.test(0));
    Arena b({{0}}, VertexSet(1));
    CHECK(solve_parity(b, {0}).eve.test(0));
}

TEST_CASE("parity regions agree with positional strategy enumeration") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 150; ++k) {
        std::size_t n = 2 + rng() % 5;
        Arena a = random_arena(rng, n, 0.4);
        auto colors = random_colors(rng, n, 3);
        ParityResult r = solve_parity(a, colors);
        auto truth = oracle::parity_by_strategy_pairs(a.succ, a.eve, colors);
        CHECK(r.eve == truth.eve);
        CHECK(r.adam == truth.adam);
        CHECK((r.eve | r.adam) == a.all());
        CHECK_FALSE(r.eve.intersects(r.adam));
        CHECK(strategy_wins(a, colors, r, true));
        CHECK(strategy_wins(a, colors, r, false));
    }
}

TEST_CASE("Büchi equals two-color parity") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 100; ++k) {
        std::size_t n = 2 + rng() % 7;
        Arena a = random_arena(rng, n, 0.35);
        VertexSet acc = random_set(rng, n, 0.3);
        std::vector<std::uint32_t> colors(n, 1);
        acc.for_each([&](std::size_t x) { colors[x] = 2; });
        CHECK(solve_buchi(a, acc) == solve_parity(a, colors).eve);
    }
    Arena a({{1}, {0}}, VertexSet(2));
    CHECK(solve_buchi(a, a.all()) == a.all());
    CHECK(solve_buchi(a, VertexSet(2)).none());
}

TEST_CASE("Muller solvers agree with each other and with Büchi") {
    std::mt19937_64 rng(29);
    for (int k = 0; k < 100; ++k) {
        std::size_t n = 2 + rng() % 5;
        Arena a = random_arena(rng, n, 0.4);
        VertexSet acc = random_set(rng, n, 0.3);
        Circuit buchi = Circuit::any_of(acc);
        VertexSet expected = solve_buchi(a, acc);
        CHECK(solve_muller(a, buchi) == expected);
        CHECK(solve_muller_lar(a, buchi) == expected);

        // A condition that is not Büchi: visit x infinitely often but y only finitely often.
        Vertex x = static_cast<Vertex>(rng() % n), y = static_cast<Vertex>(rng() % n);
        CircuitBuilder b;
        Circuit c = b.finish(b.and_(b.input(x), b.not_(b.input(y))));
        VertexSet direct = solve_muller(a, c);
        CHECK(solve_muller_lar(a, c) == direct);
        if (x != y) {
            // Rabin pair with one pair is a parity condition: y odd colored above x.
            std::vector<std::uint32_t> colors(n, 1);
            colors[x] = 2;
            colors[y] = 3;
            CHECK(solve_parity(a, colors).eve == direct);
        }
    }
    std::mt19937_64 r2(1);
    Arena a = random_arena(r2, 5, 0.5);
    CHECK(solve_muller(a, Circuit::constant(true)) == a.all());
    CHECK(solve_muller_lar(a, Circuit::constant(true)) == a.all());
}

TEST_CASE("LAR reduction has the expected shape") {
    Arena a({{0, 1}, {0, 1}}, VertexSet(2, true));
    CircuitBuilder b;
    Circuit c = b.finish(b.and_(b.input(0), b.input(1)));
    LarReduction r = reduce_muller_to_parity(a, c);
    CHECK(r.arena.size() == r.colors.size());
    CHECK(r.base.size() == r.arena.size());
    for (Vertex x = 0; x < r.arena.size(); ++x)
        for (auto y : r.arena.succ[x]) {
            const auto& s = a.succ[r.base[x]];
            CHECK(std::find(s.begin(), s.end(), r.base[y]) != s.end());
        }
    ParityResult pr = solve_parity(r.arena, r.colors);
    CHECK(pr.eve.test(r.start[0]));
    CHECK(pr.eve.test(r.start[1]));
}

TEST_CASE("LAR guard") {
    std::size_t n = 12;
    std::vector<std::vector<Vertex>> succ(n);
    for (Vertex x = 0; x < n; ++x) succ[x] = {static_cast<Vertex>((x + 1) % n)};
    Arena a(succ, VertexSet(n, true));
    CHECK_THROWS_AS(reduce_muller_to_parity(a, Circuit::any_of(VertexSet(n, true)), 10), Error);
}

TEST_CASE("cooperative emptiness") {
    SUBCASE("false has no lasso") {
        Game g = fixture::corpus("fig1a.game");
        CHECK_FALSE(cooperative_emptiness(g, Circuit::constant(false), LassoMode::Inf, 0).has_value());
        CHECK_FALSE(cooperative_emptiness(g, Circuit::constant(false), LassoMode::Occ, 0).has_value());
    }
    SUBCASE("player 1 can avoid q2 by looping between q0 and q1") {
        Game g = fixture::corpus("fig1a.game");
        auto l = cooperative_emptiness(g, Circuit::none_of(g.objectives[0].set), LassoMode::Occ, v(g, "q0"));
        REQUIRE(l.has_value());
        // The same run as (q0 q1)^w, possibly with a different stem/cycle split.
        CHECK(oracle::is_path(g.succ, *l));
        CHECK(l->first() == v(g, "q0"));
        CHECK(l->inf(g.num_vertices()) == fixture::set_of(g, {"q0", "q1"}));
        CHECK(l->occ(g.num_vertices()) == fixture::set_of(g, {"q0", "q1"}));
    }
    SUBCASE("random games agree with subset enumeration") {
        std::mt19937_64 rng(31);
        for (int k = 0; k < 120; ++k) {
            std::size_t n = 3 + rng() % 6;
            Arena a = random_arena(rng, n, 0.3);
            CircuitBuilder b;
            std::vector<CircuitBuilder::Ref> refs;
            for (std::uint32_t x = 0; x < n; ++x) refs.push_back(b.input(x));
            for (int j = 0; j < 6; ++j) {
                auto x = refs[rng() % refs.size()], y = refs[rng() % refs.size()];
                switch (rng() % 3) {
                case 0: refs.push_back(b.and_(x, y)); break;
                case 1: refs.push_back(b.or_(x, y)); break;
                default: refs.push_back(b.not_(x));
                }
            }
            Circuit c = b.finish(refs.back());
            Vertex start = static_cast<Vertex>(rng() % n);
            auto cond = [&](const VertexSet& s) { return c.eval(s); };
            auto inf = cooperative_emptiness(a.succ, c, LassoMode::Inf, start);
            CHECK(inf.has_value() == oracle::inf_nonempty(a.succ, cond, start));
            if (inf) {
                CHECK(oracle::is_path(a.succ, *inf));
                CHECK(inf->first() == start);
                CHECK(c.eval(inf->inf(n)));
            }
            auto occ = cooperative_emptiness(a.succ, c, LassoMode::Occ, start);
            CHECK(occ.has_value() == oracle::occ_nonempty(a.succ, cond, start));
            if (occ) {
                CHECK(oracle::is_path(a.succ, *occ));
                CHECK(occ->first() == start);
                CHECK(c.eval(occ->occ(n)));
            }
            VertexSet region = cooperative_region(a.succ, c);
            for (Vertex x = 0; x < n; ++x) CHECK(region.test(x) == oracle::inf_nonempty(a.succ, cond, x));
        }
    }
}

TEST_CASE("SCC decomposition lists sinks first") {
    std::vector<std::vector<Vertex>> succ{{1}, {0, 2}, {3}, {2}, {4}};
    auto sccs = scc_decomposition(succ, VertexSet(5, true));
    REQUIRE(sccs.size() == 3);
    auto pos = [&](std::vector<Vertex> c) { return std::find(sccs.begin(), sccs.end(), c) - sccs.begin(); };
    CHECK(pos({2, 3}) < pos({0, 1}));
    CHECK(pos({4}) < 3);
    CHECK(pos({0, 1}) < 3);
}
