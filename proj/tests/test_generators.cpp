#include <random>

#include "adm/errors.hpp"
#include "adm/generators.hpp"
#include "adm/io.hpp"
#include "adm/queries.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace adm;
using fixture::v;

namespace {

QueryOptions roomy() {
    QueryOptions o;
    o.weak.visited.max_vertices = 64;
    return o;
}

bool eve_can_win(const Game& g) {
    VertexSet eve(g.num_players());
    eve.set(*g.find_player("Eve"));
    return coalition(g, eve, VertexSet(g.num_players()), roomy()).yes;
}

/// Random closed 3-variable QBF with 1 to 3 clauses of 1 to 3 literals.
Qbf random_qbf(std::mt19937_64& rng) {
    Qbf q;
    for (int k = 0; k < 3; ++k) {
        q.vars.push_back("x" + std::to_string(k + 1));
        q.universal.push_back(rng() % 2 == 1);
    }
    const int clauses = 1 + static_cast<int>(rng() % 3);
    for (int c = 0; c < clauses; ++c) {
        std::vector<int> clause;
        const int lits = 1 + static_cast<int>(rng() % 3);
        for (int l = 0; l < lits; ++l) {
            int var = 1 + static_cast<int>(rng() % 3);
            clause.push_back(rng() % 2 ? var : -var);
        }
        q.clauses.push_back(clause);
    }
    return q;
}

}  // namespace

TEST_CASE("QBF parsing and evaluation") {
    Qbf mu = parse_qbf("exists x1 forall x2 exists x3 . (x1 | x2 | ~x3) & (~x1 | x2 | x3)");
    CHECK(mu.num_vars() == 3);
    CHECK(mu.universal == std::vector<bool>{false, true, false});
    CHECK(mu.clauses == std::vector<std::vector<int>>{{1, 2, -3}, {-1, 2, 3}});
    CHECK(eval_qbf(mu));
    CHECK_FALSE(eval_qbf(parse_qbf("forall x . (x)")));
    CHECK(eval_qbf(parse_qbf("E x . (x)")));
    CHECK(eval_qbf(parse_qbf("A x . (x | !x)")));
    CHECK(parse_qbf(to_string(mu)).clauses == mu.clauses);
    CHECK_THROWS_AS(parse_qbf("exists x . (x & x)"), Error);
    CHECK_THROWS_AS(parse_qbf("exists x . (y)"), Error);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
        Qbf q = random_qbf(rng);
        CHECK(eval_qbf(q) == oracle::qbf_valid(q));
    }
}

TEST_CASE("the QBF safety game of the worked formula") {
    Qbf mu = parse_qbf("exists x1 forall x2 exists x3 . (x1 | x2 | ~x3) & (~x1 | x2 | x3)");
    Game g = gen_qbf_safety(mu);
    CHECK(validate_game(g).empty());
    // Eve, Adam and one player per literal.
    CHECK(g.num_players() == 8);
    for (const char* p : {"Eve", "Adam", "x1", "nx1", "x2", "nx2", "x3", "nx3"}) CHECK(g.find_player(p).has_value());
    for (Player p = 0; p < g.num_players(); ++p) CHECK(g.objectives[p].kind == ObjectiveKind::Safety);
    CHECK(eve_can_win(g));
    CHECK(eve_can_win(gen_qbf_safety(parse_qbf("exists x . (x)"))));
    CHECK_FALSE(eve_can_win(gen_qbf_safety(parse_qbf("forall x . (x)"))));
}

TEST_CASE("the QBF reachability game") {
    Qbf mu = parse_qbf("exists x1 forall x2 exists x3 . (x1 | x2 | ~x3) & (~x1 | x2 | x3)");
    Game g = gen_qbf_reachability(mu);
    CHECK(validate_game(g).empty());
    for (Player p = 0; p < g.num_players(); ++p) CHECK(g.objectives[p].kind == ObjectiveKind::Reachability);
    CHECK(eve_can_win(g));
    CHECK_FALSE(eve_can_win(gen_qbf_reachability(parse_qbf("forall x . (x)"))));
    CHECK(eve_can_win(gen_qbf_reachability(parse_qbf("forall x . (x | ~x)"))));
}

TEST_CASE("random QBF games agree with validity") {
    std::mt19937_64 rng(11);
    int valid = 0;
    for (int k = 0; k < 20; ++k) {
        Qbf q = random_qbf(rng);
        const bool truth = oracle::qbf_valid(q);
        valid += truth;
        CHECK_MESSAGE(eve_can_win(gen_qbf_safety(q)) == truth, to_string(q));
        CHECK_MESSAGE(eve_can_win(gen_qbf_reachability(q)) == truth, to_string(q));
    }
    CHECK(valid > 0);
    CHECK(valid < 20);
}

TEST_CASE("metro generator") {
    SUBCASE("six sections and two trains") {
        Game g = gen_metro(6, 2);
        CHECK(validate_game(g).empty());
        oracle::MetroCount c = oracle::metro_states(6, 2);
        CHECK(g.num_vertices() == c.states);
        CHECK(c.states == 216);
        std::size_t collisions = 0;
        for (Vertex x = 0; x < g.num_vertices(); ++x)
            if (g.names[x][0] == 'c') ++collisions;
        CHECK(collisions == c.collisions);
        CHECK(collisions == 6);
        CHECK(g.names[g.initial()] == "m1.0.__");
        CHECK(g.players == std::vector<std::string>{"t1", "t2", "env"});
        CHECK(g.objectives[2].kind == ObjectiveKind::Buchi);
        CHECK(g.objectives[2].set.count() == collisions);
        // Trains declare in order, env resolves.
        CHECK(g.owner[v(g, "m1.0.__")] == 0);
        CHECK(g.owner[v(g, "m1.0.m_")] == 1);
        CHECK(g.owner[v(g, "m1.0.mm")] == 2);
        CHECK(g.succ[v(g, "m1.0.mm")].size() == 4);
        CHECK(g.has_edge(v(g, "m1.0.mm"), v(g, "c1.1")));
    }
    SUBCASE("other sizes match the independent count") {
        for (auto [n, p] : {std::pair{4, 2}, std::pair{5, 2}, std::pair{6, 3}, std::pair{3, 1}}) {
            Game g = gen_metro(n, p);
            oracle::MetroCount c = oracle::metro_states(n, p);
            CHECK(g.num_vertices() == c.states);
            CHECK(g.objectives[p].set.count() == c.collisions);
        }
    }
    SUBCASE("a single train on two sections") {
        Game g = gen_metro(2, 1);
        CHECK(validate_game(g).empty());
        CHECK(g.objectives[1].set.none());
        CHECK(oracle::metro_states(2, 1).collisions == 0);
        // The environment may always block.
        Vertex blocked = v(g, "m1.m");
        CHECK(g.has_edge(blocked, v(g, "m1._")));
    }
    CHECK_THROWS_AS(gen_metro(3, 2), Error);
    CHECK_THROWS_AS(gen_metro(4, 0), Error);
}

TEST_CASE("random games") {
    SUBCASE("snapshot") {
        RandomSpec spec;
        spec.seed = 1;
        spec.vertices = 4;
        spec.players = 2;
        spec.density = 0.5;
        spec.objective = RandomObjective::Buchi;
        const std::string expected =
            "players p1 p2\n"
            "vertex v0 owner=p1\nvertex v1 owner=p1\nvertex v2 owner=p1\nvertex v3 owner=p1\n"
            "edge v0 v0\nedge v0 v2\nedge v0 v3\nedge v1 v2\nedge v2 v1\nedge v2 v2\nedge v2 v3\n"
            "edge v3 v0\nedge v3 v2\nedge v3 v3\n"
            "objective p1 buchi acc=v0\nobjective p2 buchi acc=v1,v2,v3\n";
        CHECK(serialize_game(gen_random(spec)) == expected);
        CHECK(serialize_game(gen_random(spec)) == serialize_game(gen_random(spec)));
    }
    SUBCASE("density extremes") {
        RandomSpec spec;
        spec.vertices = 5;
        spec.density = 0.0;
        Game sparse = gen_random(spec);
        for (Vertex x = 0; x < 5; ++x) CHECK(sparse.succ[x] == std::vector<Vertex>{static_cast<Vertex>((x + 1) % 5)});
        spec.density = 1.0;
        Game full = gen_random(spec);
        CHECK(full.num_edges() == 25);
    }
    SUBCASE("every kind is valid") {
        for (auto kind : {RandomObjective::Safety, RandomObjective::Reachability, RandomObjective::Buchi,
                          RandomObjective::Parity, RandomObjective::Muller, RandomObjective::Weak})
            for (std::uint64_t seed = 1; seed <= 20; ++seed) {
                RandomSpec spec;
                spec.seed = seed;
                spec.vertices = 1 + seed % 6;
                spec.players = 1 + seed % 3;
                spec.objective = kind;
                Game g = gen_random(spec);
                CHECK(validate_game(g).empty());
                CHECK(random_objective_from_string(to_string(kind)) == kind);
            }
    }
    RandomSpec empty;
    empty.vertices = 0;
    CHECK_THROWS_AS(gen_random(empty), Error);
}
