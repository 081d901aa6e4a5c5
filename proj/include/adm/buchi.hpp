#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "adm/game.hpp"
#include "adm/general.hpp"
#include "adm/lasso.hpp"
#include "adm/unfold.hpp"
#include "adm/zerosum.hpp"

namespace adm {

struct BuchiOptions {
    ExecutionPolicy policy = ExecutionPolicy::Parallel;
    std::size_t max_levels = 0;
};

/// Value-1 game of one player at one level: the pruned arena (own dominated moves deleted,
/// dominated opponent moves sent to a winning sink) times a memory that tracks the sequence
/// K_i^1, K_j^1 (j != i), ..., K_i^n, K_j^n, F_i.
///
/// The conditions E^1, D^1, E^2, ..., D^n each ask for infinitely many visits to a prefix of
/// the sequence (E^m to the first (m-1)|P|+1 sets, D^m to the first m|P|). The memory has one
/// stage per distinct prefix. A stage walks through its own sets in order, then waits for the
/// stage below to complete, then completes itself and starts over. A condition holds on a run
/// exactly when its stage completes infinitely often.
struct BuchiLevelProduct {
    Arena arena;
    std::vector<std::uint32_t> colors;
    std::vector<Vertex> base;             // arena vertex per product vertex (sink: kNoBase)
    std::vector<std::uint64_t> state;     // encoded stage counters per product vertex
    std::vector<std::uint64_t> events;    // stages completed on entering the product vertex
    std::vector<Vertex> start;            // product vertex for a play starting at each arena vertex
    std::vector<VertexSet> sequence;      // the tracked sets
    std::vector<int> stage_of_D;          // stage completing D^m (index m, m >= 1)
    std::vector<int> stage_of_E;          // stage completing E^m (index m, m >= 1)
    std::size_t stages = 0;
    std::size_t players = 0;
    int level = 0;
    Vertex sink = 0;
    static constexpr Vertex kNoBase = std::numeric_limits<Vertex>::max();

    /// Product vertices entered while D^m completes (every non-sink vertex for m = 0).
    bool in_D(Vertex p, int m) const;
    /// Product vertices entered while E^m completes (m = 1..level).
    bool in_E(Vertex p, int m) const;
};

/// Iterated admissibility for Büchi objectives, values by parity solving.
class BuchiEngine {
public:
    BuchiEngine(const Game& g, BuchiOptions opt = {});

    const Game& game() const { return g_; }
    int levels() const { return static_cast<int>(values_.levels()); }
    const ValueTable& values() const { return values_; }
    VertexSet help(int n, Player i) const;
    bool edge_alive(Vertex v, Vertex w, int n) const;

    /// K_i^n = {-1} u ({1} n F_i) u ({0} n (F_i u H_i^{n-1})) for Val^{n-1}_i; n >= 1.
    VertexSet k_set(Player i, int n) const;
    BuchiLevelProduct level_product(Player i, int n) const;
    bool value_pos_buchi(Vertex s, Player i, int n) const;
    /// Vertices with Val^n_i = -1 (no surviving outcome visits every K_j^m and F_i infinitely often).
    VertexSet value_neg_region(Player i, int n) const;

    void step();
    bool stable() const;

private:
    VertexSet value_pos_region(Player i, int n) const;
    std::vector<std::vector<Vertex>> pruned(int n) const;

    Game g_;
    BuchiOptions opt_;
    ValueTable values_;
    std::vector<std::vector<VertexSet>> help_;
    std::vector<std::vector<std::uint32_t>> dom_;
};

struct BuchiIteration {
    /// Game analysed by the engine (a product with objective monitors for generalized Büchi).
    BuchiEngine engine;
    std::optional<Product> compiled;
    /// Values on the input game's vertices.
    ValueTable values;
    int fixpoint_at = 0;
    int stable_level = 0;
};

/// Generalized Büchi objectives (conjunctions of disjunctions of vertices, given as Muller
/// circuits) become Büchi objectives on a product with completion monitors.
std::optional<Product> compile_generalized_buchi(const Game& g);
MonitorAutomaton generalized_buchi_monitor(const Game& g, std::vector<std::vector<VertexSet>>& sets);

BuchiIteration run_buchi(const Game& g, const BuchiOptions& opt = {});

}  // namespace adm
