#pragma once

#include <string>

#include "adm/game.hpp"
#include "adm/io.hpp"
#include "adm/lasso.hpp"
#include "doctest.h"

namespace fixture {

inline adm::Game corpus(const std::string& file) {
    return adm::parse_game(adm::read_text(std::string(ADM_CORPUS_DIR) + "/" + file));
}

inline adm::Vertex v(const adm::Game& g, const std::string& name) {
    auto x = g.find_vertex(name);
    REQUIRE_MESSAGE(x.has_value(), "no vertex " << name);
    return *x;
}

inline adm::Player p(const adm::Game& g, const std::string& name) {
    auto x = g.find_player(name);
    REQUIRE_MESSAGE(x.has_value(), "no player " << name);
    return *x;
}

inline adm::VertexSet set_of(const adm::Game& g, std::initializer_list<const char*> names) {
    adm::VertexSet s(g.num_vertices());
    for (auto n : names) s.set(v(g, n));
    return s;
}

inline adm::VertexSet players_of(const adm::Game& g, std::initializer_list<const char*> names) {
    adm::VertexSet s(g.num_players());
    for (auto n : names) s.set(p(g, n));
    return s;
}

inline adm::Lasso lasso(const adm::Game& g, std::initializer_list<const char*> stem,
                        std::initializer_list<const char*> cycle) {
    adm::Lasso l;
    for (auto n : stem) l.stem.push_back(v(g, n));
    for (auto n : cycle) l.cycle.push_back(v(g, n));
    return l;
}

}  // namespace fixture
