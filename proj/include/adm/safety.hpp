#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "adm/game.hpp"
#include "adm/lasso.hpp"
#include "adm/unfold.hpp"

namespace adm {

/// Removed-edge bookkeeping: removed[v][k] is the level n at which v -> succ[v][k] entered T^n.
struct EdgeLevels {
    static constexpr std::uint32_t kNever = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::vector<std::uint32_t>> removed;

    static EdgeLevels none(const Game& g);
    /// Edge present in the arena of level n (removed at no level below n).
    bool alive(const Game& g, Vertex v, Vertex w, int n) const;
    std::vector<std::vector<Vertex>> surviving(const Game& g, int n) const;
};

/// Per-player values (indexed [player][vertex]) of one elimination round on a lost-set arena.
using ValueSlice = std::vector<std::vector<int>>;

/// Values on `arena` (a lost-set unfolding) without the edges removed before level n:
/// 1 where the player wins the safety game, -1 where no infinite path avoids its lost states.
ValueSlice safety_values(const Game& arena, const EdgeLevels& edges, int n);

/// Adds to `edges`, at level n, every surviving edge whose owner's value strictly decreases.
/// Returns the newly removed edges.
std::vector<std::pair<Vertex, Vertex>> dominated_transitions(const Game& arena, const ValueSlice& values,
                                                             EdgeLevels& edges, int n);

struct SafetyIteration {
    Game source;
    Unfolding unfolding;
    ValueTable values;
    EdgeLevels edges;
    /// rounds[n] = T^n \ T^{n-1}.
    std::vector<std::vector<std::pair<Vertex, Vertex>>> rounds;
    /// Number of rounds that removed at least one transition.
    int elimination_rounds = 0;
    /// Smallest n such that every later level has the same values as level n.
    int fixpoint_at = 0;

    const Game& arena() const { return unfolding.game; }
    int final_level() const { return static_cast<int>(values.levels()) - 1; }
    /// Unfolded arena restricted to the transitions surviving the fixpoint.
    Game pruned() const;
};

/// Repeats value computation and dominated-transition removal until no
/// transition is removed. The unfolding starts from `init` when declared, else from every vertex.
SafetyIteration iterate_safety(const Game& g);

struct CoalitionAnswer {
    bool yes = false;
    std::optional<Lasso> witness;        // in the queried game
    std::optional<Lasso> arena_witness;  // in the engine's arena (unfolding / product), when different
    int iterations = 0;
};

CoalitionAnswer coalition_safety(const Game& g, const VertexSet& win, const VertexSet& lose);
CoalitionAnswer coalition_safety(const SafetyIteration& it, const VertexSet& win, const VertexSet& lose);

}  // namespace adm
