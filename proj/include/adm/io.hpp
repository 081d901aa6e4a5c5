#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adm/game.hpp"
#include "adm/lasso.hpp"
#include "adm/queries.hpp"

namespace adm {

/// Parses the line-oriented game format. Syntax errors are Input errors prefixed with
/// "line:col:"; semantic problems (undeclared vertices, missing successors) are left for
/// validate_game, so the result may be invalid.
Game parse_game(const std::string& text);

/// Canonical text: players, vertices in id order, edges in id order, objectives in player
/// order, then init. Circuits are written in postfix form.
std::string serialize_game(const Game& g);

/// Copy of `g` with every circuit in the tree layout produced by parsing.
Game canonical_game(const Game& g);

/// Büchi automaton over the vertices of `g`; `*` as a transition label stands for every vertex.
BuchiAutomaton parse_buchi(const std::string& text, const Game& g);
std::string serialize_buchi(const BuchiAutomaton& a, const Game& g);

/// 64-bit FNV-1a hash of the canonical serialization, as 16 hex digits.
std::string game_fingerprint(const Game& g);

/// A witness lasso together with the query it answers and the game it belongs to.
struct WitnessFile {
    std::string fingerprint;
    std::string query;  // "coalition" or "mc-adm"
    VertexSet win, lose;
    Lasso lasso;
};

WitnessFile parse_witness(const std::string& text, const Game& g);
std::string serialize_witness(const WitnessFile& w, const Game& g);

/// Graphviz rendering; edges rejected by `keep` are drawn dashed.
std::string to_dot(const Game& g, const std::function<bool(Vertex, Vertex)>& keep = {});

/// Whole file contents; "-" reads standard input.
std::string read_text(const std::string& path);

}  // namespace adm
