#include <algorithm>
#include <random>
#include <set>

#include "adm/buchi.hpp"
#include "adm/errors.hpp"
#include "adm/generators.hpp"
#include "adm/unfold.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace adm;
using fixture::set_of;
using fixture::v;

namespace {

bool has_violation(const Game& g, const std::string& needle) {
    for (const auto& s : validate_game(g))
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

std::set<std::string> names_of(const Game& g) { return {g.names.begin(), g.names.end()}; }

}  // namespace

TEST_CASE("validate_game accepts the two-player safety game") {
    Game g = fixture::corpus("fig1a.game");
    CHECK(validate_game(g).empty());
    CHECK(g.num_vertices() == 5);
    CHECK(g.num_players() == 2);
    CHECK(g.objectives[0].set == set_of(g, {"q2"}));
    CHECK(g.objectives[1].set == set_of(g, {"q3"}));
}

TEST_CASE("validate_game reports a vertex without successor") {
    Game g = fixture::corpus("fig1a.game");
    g.succ[v(g, "q3")].clear();
    CHECK(has_violation(g, "no successor"));
    CHECK_THROWS_AS(require_valid(g), Error);
}

TEST_CASE("validate_game reports an edge to an undeclared vertex") {
    Game g = parse_game("players a\nvertex x owner=a\nedge x y\nedge x x\nobjective a safety bad=\n");
    CHECK(has_violation(g, "unknown endpoint"));
}

TEST_CASE("validate_game reports missing objectives and bad colorings") {
    Game g;
    g.add_player("a");
    Vertex x = g.add_vertex("x", 0);
    g.add_edge(x, x);
    g.objectives.resize(1);
    CHECK(has_violation(g, "has no objective"));
    g.objectives[0] = Objective::parity({});
    CHECK(has_violation(g, "does not color every vertex"));
    g.objectives[0] = Objective::parity({2});
    CHECK(validate_game(g).empty());
}

TEST_CASE("circuit evaluation") {
    Game g = fixture::corpus("fig1a.game");
    const std::size_t n = g.num_vertices();
    CHECK(Circuit::constant(true).eval(VertexSet(n)));
    CHECK(Circuit::constant(true).eval(VertexSet(n, true)));
    CHECK_FALSE(Circuit::constant(false).eval(VertexSet(n, true)));

    Circuit safe1 = occ_circuit(g.objectives[0], n);
    CHECK(safe1.eval(set_of(g, {"q0", "q1"})));
    CHECK_FALSE(safe1.eval(set_of(g, {"q0", "q2"})));

    Circuit broken({{Circuit::Op::Input, 0, 0}, {Circuit::Op::And, 0, 7}}, 1);
    CHECK(broken.check(n).has_value());
    CHECK_FALSE(safe1.check(n).has_value());
}

TEST_CASE("metro train circuit needs both sections infinitely often") {
    Game g = gen_metro(6, 2);
    const Circuit& c = g.objectives[0].circuit;
    CHECK(c.eval(set_of(g, {"m0.1.__", "m1.2.__"})));
    CHECK_FALSE(c.eval(set_of(g, {"m0.1.__", "m0.2.__"})));
    CHECK_FALSE(c.eval(set_of(g, {"m1.2.__", "m1.3.__"})));
    // Collision states do not count as being at a section.
    CHECK_FALSE(c.eval(set_of(g, {"m0.1.__", "c1.1"})));
}

TEST_CASE("circuits without negation are monotone") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 200; ++round) {
        CircuitBuilder b;
        std::vector<CircuitBuilder::Ref> refs;
        for (std::uint32_t a = 0; a < 6; ++a) refs.push_back(b.input(a));
        for (int k = 0; k < 10; ++k) {
            auto x = refs[rng() % refs.size()], y = refs[rng() % refs.size()];
            refs.push_back(rng() % 2 ? b.and_(x, y) : b.or_(x, y));
        }
        Circuit c = b.finish(refs.back());
        REQUIRE_FALSE(c.has_not());
        for (std::uint64_t mask = 0; mask < 64; ++mask) {
            VertexSet s = VertexSet(6);
            for (int a = 0; a < 6; ++a)
                if (mask >> a & 1u) s.set(a);
            for (int a = 0; a < 6; ++a) {
                VertexSet t = s;
                t.set(a);
                CHECK((!c.eval(s) || c.eval(t)));
            }
        }
    }
}

TEST_CASE("unfold_lost of the safety game") {
    Game g = fixture::corpus("fig1a.game");
    Unfolding u = unfold_lost(g, {g.initial()});
    CHECK(names_of(u.game) ==
          std::set<std::string>{"q0", "q1", "q4", "q2@p1", "q1@p1", "q3@p1+p2", "q0@p1", "q4@p1"});
    CHECK(validate_game(u.game).empty());
    Vertex lost1 = v(u.game, "q2@p1");
    CHECK(u.base[lost1] == v(g, "q2"));
    CHECK(u.tag[lost1].test(0));
    CHECK_FALSE(u.tag[lost1].test(1));
    CHECK(u.game.has_edge(v(u.game, "q1"), lost1));
    CHECK(u.game.has_edge(v(u.game, "q2@p1"), v(u.game, "q3@p1+p2")));
}

TEST_CASE("unfold_lost with nothing to lose is the game itself") {
    Game g = parse_game("players a\nvertex x owner=a\nvertex y owner=a\nedge x y\nedge y x\nedge y y\n"
                        "objective a safety bad=\ninit x\n");
    Unfolding u = unfold_lost(g, {0, 1});
    CHECK(u.game.num_vertices() == g.num_vertices());
    CHECK(u.game.succ == g.succ);
}

TEST_CASE("unfold_lost rejects other objectives") {
    Game g = fixture::corpus("fig2a.game");
    try {
        unfold_lost(g, {0});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Unsupported);
    }
}

TEST_CASE("unfold_lost size agrees with pair enumeration") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        RandomSpec spec;
        spec.seed = seed;
        spec.vertices = 4;
        spec.players = 3;
        spec.objective = RandomObjective::Safety;
        Game g = gen_random(spec);
        std::vector<Vertex> starts{0, 1, 2, 3};
        Unfolding u = unfold_lost(g, starts);
        CHECK(u.game.num_vertices() == oracle::lost_pairs(g, starts));
        CHECK(u.game.num_vertices() <= 8 * 4);
    }
}

TEST_CASE("unfold_lost preserves safety on sampled lassos") {
    std::mt19937_64 rng(11);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RandomSpec spec;
        spec.seed = seed;
        spec.vertices = 5;
        spec.players = 2;
        spec.objective = RandomObjective::Safety;
        Game g = gen_random(spec);
        Unfolding u = unfold_lost(g, {0});
        for (int k = 0; k < 20; ++k) {
            Lasso l = oracle::sample_lasso(g.succ, 0, rng);
            auto lifted = lift_lost(u, g, l);
            REQUIRE(lifted.has_value());
            CHECK(u.project(*lifted).occ(g.num_vertices()) == l.occ(g.num_vertices()));
            for (Player i = 0; i < 2; ++i) CHECK(oracle::wins(u.game, i, *lifted) == oracle::wins(g, i, l));
        }
    }
}

TEST_CASE("unfold_visited") {
    SUBCASE("a single self-loop gives one state") {
        Game g = parse_game("players a\nvertex x owner=a\nedge x x\nobjective a safety bad=\n");
        CHECK(unfold_visited(g, {0}).game.num_vertices() == 1);
    }
    SUBCASE("visited sets follow paths") {
        Game g = fixture::corpus("fig1a.game");
        Unfolding u = unfold_visited(g, {g.initial()});
        CHECK(u.find(set_of(g, {"q0", "q1", "q2"}), v(g, "q2")).has_value());
        CHECK_FALSE(u.find(set_of(g, {"q0", "q2"}), v(g, "q2")).has_value());
    }
    SUBCASE("state count agrees with path exploration") {
        for (std::uint64_t seed = 1; seed <= 15; ++seed) {
            RandomSpec spec;
            spec.seed = seed;
            spec.vertices = 6;
            spec.players = 2;
            spec.density = 0.35;
            spec.objective = RandomObjective::Weak;
            Game g = gen_random(spec);
            std::vector<Vertex> starts{0, 1, 2, 3, 4, 5};
            CHECK(unfold_visited(g, starts).game.num_vertices() == oracle::visited_pairs(g, starts));
        }
    }
    SUBCASE("the vertex guard") {
        Game g = gen_metro(6, 2);
        CHECK_THROWS_AS(unfold_visited(g, {g.initial()}), Error);
    }
}

TEST_CASE("product with the trivial monitor is isomorphic") {
    Game g = fixture::corpus("fig1a.game");
    Product p = product(g, MonitorAutomaton::trivial(g.num_vertices()));
    CHECK(p.game.num_vertices() == g.num_vertices());
    CHECK(p.game.num_edges() == g.num_edges());
    for (Vertex w = 0; w < p.game.num_vertices(); ++w) {
        CHECK(p.game.owner[w] == g.owner[p.base[w]]);
        for (auto x : p.game.succ[w]) CHECK(g.has_edge(p.base[w], p.base[x]));
    }
}

TEST_CASE("generalized Büchi monitor product of the metro preserves the train objectives") {
    Game g = gen_metro(6, 2);
    auto compiled = compile_generalized_buchi(g);
    REQUIRE(compiled.has_value());
    std::vector<std::vector<VertexSet>> sets;
    MonitorAutomaton m = generalized_buchi_monitor(g, sets);
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int k = 0; k < 100; ++k) {
        Lasso l = oracle::sample_lasso(g.succ, g.initial(), rng, 40);
        auto lifted = compiled->lift(l, m);
        REQUIRE(lifted.has_value());
        REQUIRE(oracle::is_path(compiled->game.succ, *lifted));
        CHECK(compiled->project(*lifted).first() == l.first());
        for (Player i = 0; i < g.num_players(); ++i) {
            CHECK(oracle::wins(compiled->game, i, *lifted) == oracle::wins(g, i, l));
            ++checked;
        }
    }
    CHECK(checked == 300);
}

TEST_CASE("product lassos project to lassos of the game") {
    Game g = gen_metro(6, 2);
    auto compiled = compile_generalized_buchi(g);
    REQUIRE(compiled.has_value());
    std::mt19937_64 rng(9);
    for (int k = 0; k < 100; ++k) {
        Vertex start = static_cast<Vertex>(rng() % compiled->game.num_vertices());
        Lasso l = oracle::sample_lasso(compiled->game.succ, start, rng, 30);
        CHECK(oracle::is_path(g.succ, compiled->project(l)));
    }
}

TEST_CASE("lasso value classification") {
    auto word = [](std::vector<int> vals) { return [vals](Vertex x) { return vals[x]; }; };
    SUBCASE("all zero") {
        Lasso l{{0, 1}, {2}};
        CHECK(lasso_value_sequence(l, word({0, 0, 0})) == ValueClass::AllZero);
    }
    SUBCASE("the run that drops into s3") {
        Game g = fixture::corpus("fig2a.game");
        std::vector<int> val(g.num_vertices(), 0);
        val[v(g, "s3")] = -1;
        Lasso l = fixture::lasso(g, {"s0", "s1", "s2"}, {"s3"});
        CHECK(lasso_value_sequence(l, word(val)) == ValueClass::ZeroThenMinusOne);
    }
    SUBCASE("not monotone") {
        Lasso l{{}, {0, 1, 2}};
        CHECK(lasso_value_sequence(l, word({0, 1, 0})) == ValueClass::Other);
    }
    SUBCASE("zero then one") {
        Lasso l{{0, 1}, {1}};
        CHECK(lasso_value_sequence(l, word({0, 1})) == ValueClass::ZeroThenOne);
        Lasso back{{1}, {0}};
        CHECK(lasso_value_sequence(back, word({0, 1})) == ValueClass::Other);
    }
}

TEST_CASE("lasso structural check") {
    Game g = fixture::corpus("fig1a.game");
    CHECK_FALSE(fixture::lasso(g, {"q0"}, {"q1", "q0"}).check(g).has_value());
    CHECK(fixture::lasso(g, {"q0"}, {"q2"}).check(g).has_value());
    CHECK(Lasso{{0}, {}}.check(g).has_value());
    CHECK(Lasso{{}, {99}}.check(g).has_value());
}
