#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "adm/game.hpp"
#include "adm/lasso.hpp"

namespace adm {

/// A game whose vertices are pairs (tag, base vertex). For the lost-set unfolding the tag is a
/// set of players; for the visited-set unfolding it is a set of base vertices.
struct Unfolding {
    Game game;
    std::vector<Vertex> base;
    std::vector<VertexSet> tag;

    std::optional<Vertex> find(const VertexSet& t, Vertex b) const;
    /// Tracks a base lasso through the unfolding from the start state of its first vertex.
    std::optional<Lasso> lift(const Lasso& l, const std::function<VertexSet(Vertex)>& start_tag,
                              const std::function<VertexSet(const VertexSet&, Vertex)>& step) const;
    Lasso project(const Lasso& l) const;
};

/// Lost-set unfolding of a game with safety objectives, restricted to states reachable from
/// (L0(s), s) for s in `starts`. Objectives become "never enter a state where i has lost".
Unfolding unfold_lost(const Game& g, const std::vector<Vertex>& starts);
VertexSet lost_at(const Game& g, Vertex v);
std::optional<Lasso> lift_lost(const Unfolding& u, const Game& g, const Lasso& l);

struct VisitedOptions {
    std::size_t max_vertices = 16;
    std::size_t max_states = 1u << 20;
};

/// Visited-set unfolding restricted to states reachable from ({s}, s) for s in `starts`.
/// Objectives are rewritten to Büchi on {(R,s) : R satisfies the occurrence condition}, which is
/// exact because R is eventually constant.
Unfolding unfold_visited(const Game& g, const std::vector<Vertex>& starts, const VisitedOptions& opt = {});
std::optional<Lasso> lift_visited(const Unfolding& u, const Lasso& l);

/// Deterministic total automaton reading arena vertices.
struct MonitorAutomaton {
    std::uint32_t states = 1;
    std::uint32_t initial = 0;
    std::vector<std::vector<std::uint32_t>> delta;  // delta[q][v]
    std::vector<std::uint32_t> label;               // optional per-state label

    std::uint32_t step(std::uint32_t q, Vertex v) const { return delta[q][v]; }
    static MonitorAutomaton trivial(std::size_t n);
};

struct Product {
    Game game;
    std::vector<Vertex> base;
    std::vector<std::uint32_t> mstate;
    std::vector<std::vector<Vertex>> index;  // index[v][q], or kNoVertex

    static constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

    /// Product vertex reached when a run starts at base vertex v.
    Vertex start(Vertex v, const MonitorAutomaton& m) const { return index[v][m.step(m.initial, v)]; }
    std::optional<Lasso> lift(const Lasso& l, const MonitorAutomaton& m) const;
    Lasso project(const Lasso& l) const;
};

/// Synchronous product; states reachable from (s, delta(q0, s)) for every base vertex s.
/// Ownership is inherited; objectives are lifted through the projection.
Product product(const Game& g, const MonitorAutomaton& m);

/// Lifts an objective of `g` to vertices of a derived arena through `base`.
Objective lift_objective(const Objective& o, const std::vector<Vertex>& base, std::size_t n_base);

}  // namespace adm
