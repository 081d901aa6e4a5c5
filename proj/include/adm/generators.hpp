#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adm/game.hpp"

namespace adm {

/// Closed prenex QBF with a CNF matrix. Variable k (0-based) is quantified at prefix position k;
/// literals are +(k+1) for the variable and -(k+1) for its negation.
struct Qbf {
    std::vector<std::string> vars;
    std::vector<bool> universal;
    std::vector<std::vector<int>> clauses;

    std::size_t num_vars() const { return vars.size(); }
};

/// Parses "exists x1 forall x2 . (x1 | ~x2) & (x2)". Quantifiers: exists/forall (or E/A);
/// negation: ~ or !; the matrix must be a conjunction of parenthesised disjunctions of literals.
Qbf parse_qbf(const std::string& text);
std::string to_string(const Qbf& q);

/// Brute-force validity (at most 20 variables).
bool eval_qbf(const Qbf& q);

/// Safety game G_phi: Eve, Adam and one player per literal; Eve can win in some iteratively
/// admissible profile iff the formula is valid.
Game gen_qbf_safety(const Qbf& q);
/// Reachability variant: literal players may win at a private sink instead of letting the game continue.
Game gen_qbf_reachability(const Qbf& q);

/// Metro ring with `slots` sections and `trains` trains (train k starts at section trains-k).
/// Trains declare in index order, then env blocks any subset of the trains that want to move.
Game gen_metro(int slots, int trains);

enum class RandomObjective { Safety, Reachability, Buchi, Parity, Muller, Weak };
RandomObjective random_objective_from_string(const std::string& s);
const char* to_string(RandomObjective k);

struct RandomSpec {
    std::uint64_t seed = 1;
    std::size_t vertices = 4;
    std::size_t players = 2;
    double density = 0.5;
    RandomObjective objective = RandomObjective::Buchi;
    std::uint32_t max_color = 3;
    double set_density = 0.3;
};

/// Seeded random game: edge u->v present with probability `density`; vertices left without a
/// successor get the edge to the next vertex.
Game gen_random(const RandomSpec& spec);

}  // namespace adm
