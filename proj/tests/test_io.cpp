#include <string>

#include "adm/errors.hpp"
#include "adm/generators.hpp"
#include "adm/io.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace adm;
using fixture::v;

namespace {

/// Message of the Input error raised while parsing `text`, or "" if parsing succeeds.
std::string parse_error(const std::string& text) {
    try {
        parse_game(text);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Input);
        return e.what();
    }
    return "";
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

TEST_CASE("game files round-trip") {
    for (auto kind : {RandomObjective::Safety, RandomObjective::Reachability, RandomObjective::Buchi,
                      RandomObjective::Parity, RandomObjective::Muller, RandomObjective::Weak})
        for (std::uint64_t seed = 1; seed <= 17; ++seed) {
            RandomSpec spec;
            spec.seed = seed;
            spec.vertices = 2 + seed % 5;
            spec.players = 1 + seed % 3;
            spec.objective = kind;
            Game g = gen_random(spec);
            if (seed % 2) g.init = 0;
            const std::string text = serialize_game(g);
            Game back = parse_game(text);
            CHECK(serialize_game(back) == text);
            CHECK(validate_game(back).empty());
            CHECK(game_fingerprint(back) == game_fingerprint(g));
            CHECK(back.succ == g.succ);
            CHECK(back.owner == g.owner);
        }
    for (const char* file : {"fig1a.game", "fig2a.game", "fig2b.game", "metro_6_2.game"}) {
        Game g = fixture::corpus(file);
        CHECK(serialize_game(parse_game(serialize_game(g))) == serialize_game(g));
    }
}

TEST_CASE("the metro corpus file is the generated game") {
    Game g = fixture::corpus("metro_6_2.game");
    CHECK(serialize_game(canonical_game(g)) == serialize_game(canonical_game(gen_metro(6, 2))));
}

TEST_CASE("syntax errors carry positions") {
    CHECK(starts_with(parse_error(""), "1:1:"));
    CHECK(starts_with(parse_error("# only a comment\n"), "1:1:"));
    CHECK(starts_with(parse_error("players a\nvertex x\n"), "2:1:"));
    CHECK(starts_with(parse_error("players a\nvertex x owner=a\nedge x\n"), "3:1:"));
    CHECK(starts_with(parse_error("players a\nvertex x owner=a\nedge x x\nobjective a kind\n"), "4:13:"));
    CHECK(starts_with(parse_error("players a\nvertex x owner=a\nedge x x\nobjective b buchi acc=x\n"), "4:11:"));
    CHECK(starts_with(parse_error("players a\nvertex x owner=a\nvertex x owner=a\n"), "3:8:"));
    CHECK(starts_with(parse_error("players a\nvertex x owner=a\nedge x x\nobjective a parity x:y\n"), "4:"));
    CHECK(starts_with(parse_error("players a\nfrobnicate\n"), "2:1:"));
    CHECK(parse_error("players a\nvertex x owner=a\nedge x x\nobjective a buchi acc=x\n").empty());
    // Semantic problems are left to validation.
    Game g = parse_game("players a\nvertex x owner=a\nedge x y\nobjective a buchi acc=x\n");
    CHECK_FALSE(validate_game(g).empty());
}

TEST_CASE("Büchi automaton files") {
    Game g = fixture::corpus("metro_6_2.game");
    BuchiAutomaton a = parse_buchi(read_text(std::string(ADM_CORPUS_DIR) + "/metro_collision.ba"), g);
    CHECK(a.size() == 2);
    CHECK(a.initial == std::vector<std::uint32_t>{0});
    CHECK(a.accepting.count() == 1);
    // Two wildcard lines expand to one transition per vertex, plus six collision entries.
    CHECK(a.transitions.size() == 2 * g.num_vertices() + 6);
    BuchiAutomaton back = parse_buchi(serialize_buchi(a, g), g);
    CHECK(back.transitions.size() == a.transitions.size());
    CHECK(back.accepting == a.accepting);
    Lasso crash = fixture::lasso(g, {"m1.0.__", "m1.0.m_", "m1.0.mm"}, {"c1.1"});
    CHECK(a.accepts(crash, g.num_vertices()));
    CHECK_FALSE(a.accepts(fixture::lasso(g, {}, {"m1.0.__", "m1.0.s_", "m1.0.ss"}), g.num_vertices()));

    CHECK_THROWS_AS(parse_buchi("states q\ninitial r\n", g), Error);
    CHECK_THROWS_AS(parse_buchi("states q\ninitial q\ntrans q nowhere q\n", g), Error);
    CHECK_THROWS_AS(parse_buchi("states q\naccepting q\n", g), Error);
}

TEST_CASE("witness files") {
    Game g = fixture::corpus("fig1a.game");
    WitnessFile w;
    w.fingerprint = game_fingerprint(g);
    w.query = "coalition";
    w.win = fixture::players_of(g, {"p1", "p2"});
    w.lose = VertexSet(2);
    w.lasso = fixture::lasso(g, {"q0"}, {"q1", "q0"});
    const std::string text = serialize_witness(w, g);
    WitnessFile back = parse_witness(text, g);
    CHECK(back.fingerprint == w.fingerprint);
    CHECK(back.query == "coalition");
    CHECK(back.win == w.win);
    CHECK(back.lose == w.lose);
    CHECK(back.lasso == w.lasso);
    CHECK(serialize_witness(back, g) == text);

    CHECK(game_fingerprint(g).size() == 16);
    Game h = g;
    h.add_edge(v(h, "q3"), v(h, "q0"));
    CHECK(game_fingerprint(h) != game_fingerprint(g));

    CHECK_THROWS_AS(parse_witness("", g), Error);
    CHECK_THROWS_AS(parse_witness("query coalition\nstem q0\n", g), Error);
    CHECK_THROWS_AS(parse_witness("query coalition\ncycle q9\n", g), Error);
    CHECK_THROWS_AS(parse_witness("query guess\ncycle q0\n", g), Error);
}

TEST_CASE("dot output") {
    Game g = fixture::corpus("fig1a.game");
    std::string dot = to_dot(g, [&](Vertex a, Vertex b) { return !(a == v(g, "q0") && b == v(g, "q4")); });
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("\"q0\" -> \"q4\" [style=dashed]") != std::string::npos);
    CHECK(dot.find("\"q0\" -> \"q1\";") != std::string::npos);
}
