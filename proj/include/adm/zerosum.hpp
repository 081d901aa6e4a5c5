#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "adm/circuit.hpp"
#include "adm/game.hpp"
#include "adm/lasso.hpp"

namespace adm {

/// Two-player arena: Eve (the protagonist) owns the vertices in `eve`, Adam all others.
struct Arena {
    std::vector<std::vector<Vertex>> succ;
    std::vector<std::vector<Vertex>> pred;
    VertexSet eve;

    Arena() = default;
    Arena(std::vector<std::vector<Vertex>> succ, VertexSet eve);
    std::size_t size() const { return succ.size(); }
    VertexSet all() const { return VertexSet(size(), true); }
};

/// The protagonist's view of a multiplayer game: every other player is coalesced into Adam.
struct TwoPlayerView {
    Arena arena;
    Player protagonist = 0;
};

TwoPlayerView make_view(const Game& g, Player protagonist);

/// Attractor of `target` for Eve (`eve_side`) or Adam inside the subgame `alive`.
/// When `strategy` is given, attracted vertices of the attracting side receive a successor
/// that decreases the attraction rank (lowest id among such).
VertexSet attractor(const Arena& a, const VertexSet& target, bool eve_side, const VertexSet& alive,
                    std::vector<Vertex>* strategy = nullptr);
VertexSet attractor(const TwoPlayerView& view, const VertexSet& target);

/// Eve's winning region for "never visit bad".
VertexSet solve_safety(const Arena& a, const VertexSet& bad);
VertexSet solve_safety(const TwoPlayerView& view, const VertexSet& bad);

/// Eve's winning region for "visit accepting infinitely often".
VertexSet solve_buchi(const Arena& a, const VertexSet& accepting);
VertexSet solve_buchi(const TwoPlayerView& view, const VertexSet& accepting);

struct ParityResult {
    VertexSet eve;   // Eve's winning region
    VertexSet adam;  // Adam's winning region
    /// Positional strategy: for every vertex, the chosen successor of its owner when the owner
    /// wins there, kNone otherwise.
    std::vector<Vertex> strategy;
    static constexpr Vertex kNone = std::numeric_limits<Vertex>::max();
};

/// Max-parity (Eve wins iff the largest color seen infinitely often is even), Zielonka recursion.
ParityResult solve_parity(const Arena& a, const std::vector<std::uint32_t>& colors);
ParityResult solve_parity(const TwoPlayerView& view, const std::vector<std::uint32_t>& colors);

/// Muller condition whose circuit reads labels instead of vertices: vertex v carries the label
/// set labels[v], and a set of vertices satisfies the condition when the circuit holds on the
/// union of their labels.
struct LabeledCondition {
    Circuit circuit;
    std::vector<VertexSet> labels;  // per vertex, over `atoms` labels
    std::size_t atoms = 0;

    /// Labels are the vertices themselves.
    static LabeledCondition identity(const Circuit& c, std::size_t n);
    VertexSet label_union(const VertexSet& vertices) const;
    bool eval_on(const VertexSet& vertices) const { return circuit.eval(label_union(vertices)); }
    /// Vertices carrying label a.
    VertexSet carriers(std::uint32_t a) const;
    /// Equivalent circuit over vertices (each label replaced by the disjunction of its carriers).
    Circuit over_vertices() const;
};

struct MullerOptions {
    std::size_t max_subset_states = 1u << 20;  // guard on explored Zielonka-tree nodes per call
};

/// Eve's winning region for the Muller condition "circuit holds on Inf", atoms being arena vertices.
/// Recursive Zielonka-tree algorithm with SCC decomposition; exact.
VertexSet solve_muller(const Arena& a, const Circuit& c, const MullerOptions& opt = {});
VertexSet solve_muller(const Arena& a, const LabeledCondition& c, const MullerOptions& opt = {});

/// Latest-appearance-record product turning a circuit condition into a parity condition.
struct LarReduction {
    Arena arena;
    std::vector<std::uint32_t> colors;
    std::vector<Vertex> base;
    std::vector<Vertex> start;  // LAR vertex reached when a play starts at each base vertex
};

LarReduction reduce_muller_to_parity(const Arena& a, const Circuit& c, std::size_t max_inputs = 10);
TwoPlayerView reduce_muller_to_parity(const TwoPlayerView& view, const Circuit& c, std::vector<std::uint32_t>& colors,
                                      std::size_t max_inputs = 10);
/// Eve's winning region computed through the LAR reduction.
VertexSet solve_muller_lar(const Arena& a, const Circuit& c, std::size_t max_inputs = 10);

enum class LassoMode { Inf, Occ };

struct EmptinessOptions {
    std::size_t max_scc_inputs = 15;      // guard for the general subset search in Inf mode
    std::size_t max_occ_states = 1u << 20;
};

/// Vertices from which some run satisfies the circuit on its Inf-set (cooperative, one player).
VertexSet cooperative_region(const std::vector<std::vector<Vertex>>& succ, const Circuit& c,
                             const EmptinessOptions& opt = {});
VertexSet cooperative_region(const std::vector<std::vector<Vertex>>& succ, const LabeledCondition& c,
                             const EmptinessOptions& opt = {});

/// Accepting lasso from `start` if one exists (shortest stem first, lowest ids on ties).
std::optional<Lasso> cooperative_emptiness(const std::vector<std::vector<Vertex>>& succ, const Circuit& c,
                                           LassoMode mode, Vertex start, const EmptinessOptions& opt = {});
/// Inf-mode search for a labeled condition.
std::optional<Lasso> cooperative_emptiness(const std::vector<std::vector<Vertex>>& succ, const LabeledCondition& c,
                                           Vertex start, const EmptinessOptions& opt = {});
std::optional<Lasso> cooperative_emptiness(const Game& g, const Circuit& c, LassoMode mode, Vertex start,
                                           const EmptinessOptions& opt = {});

/// Strongly connected components of the subgraph induced by `alive`, sinks first
/// (reverse topological order); each component sorted.
std::vector<std::vector<Vertex>> scc_decomposition(const std::vector<std::vector<Vertex>>& succ, const VertexSet& alive);

/// Vertices that can reach `target` inside `alive` (targets included).
VertexSet backward_reach(const std::vector<std::vector<Vertex>>& succ, const VertexSet& target, const VertexSet& alive);

}  // namespace adm
