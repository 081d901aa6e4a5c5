#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adm/game.hpp"
#include "adm/general.hpp"
#include "adm/lasso.hpp"
#include "adm/safety.hpp"
#include "adm/unfold.hpp"

namespace adm {

struct WeakOptions {
    ExecutionPolicy policy = ExecutionPolicy::Parallel;
    VisitedOptions visited;
    MullerOptions muller;
    EmptinessOptions emptiness;
    std::size_t max_levels = 0;
};

/// States of the visited-set unfolding sharing one visited set R, with their kernel.
/// Kernel vertices 0..states.size()-1 are the stratum states; the remaining ones are pinned
/// exits standing for states of strictly larger strata.
struct Stratum {
    VertexSet visited;
    std::vector<Vertex> states;  // unfolded states, kernel order
    std::vector<Vertex> exits;   // unfolded state of each pinned exit
    GeneralKernel kernel;
};

/// Iterated admissibility for occurrence-based objectives (safety, reachability, weak Muller).
/// Values of a history only depend on its visited set and last vertex; each visited set is
/// handled by a kernel whose objectives are constants and whose exits carry the values of the
/// larger visited sets.
class WeakEngine {
public:
    explicit WeakEngine(const Game& g, WeakOptions opt = {});

    const Game& game() const { return g_; }
    const Unfolding& unfolding() const { return u_; }
    int levels() const { return levels_; }
    bool stable() const;

    /// Computes levels up to and including n.
    void ensure(int n);
    void step();

    /// Val^n_i of unfolded state x.
    int value(int n, Player i, Vertex x) const;
    /// Val^n_i(R, s) for every player and every state of stratum R (indexed [player][state]);
    /// computes the missing levels.
    std::vector<std::vector<int>> proc_values(const VertexSet& r, int n);
    bool help(int n, Player i, Vertex x) const;
    bool edge_alive(Vertex x, Vertex y, int n) const;
    /// Level at which the unfolded edge x -> y became dominated, or GeneralKernel::kNever.
    std::uint32_t dominated_at(Vertex x, Vertex y) const;
    /// c_i(R) for the visited set of state x.
    bool wins(Player i, Vertex x) const;

    const std::vector<Stratum>& strata() const { return strata_; }
    std::size_t stratum_of(Vertex x) const { return where_[x].first; }
    Vertex local_of(Vertex x) const { return where_[x].second; }
    std::optional<std::size_t> find_stratum(const VertexSet& r) const;

    /// Fresh kernel for one stratum stepped to level n with exits read from this engine.
    ValueTable recompute_stratum(std::size_t s, int n) const;

    /// Values on the input game: Val^n_i(v) is the value of the state ({v}, v).
    ValueTable base_values() const;

private:
    KernelArena stratum_arena(std::size_t s) const;

    Game g_;
    WeakOptions opt_;
    Unfolding u_;
    std::vector<Stratum> strata_;                          // decreasing |R|
    std::vector<std::pair<std::size_t, Vertex>> where_;    // unfolded state -> (stratum, local)
    std::map<VertexSet, std::size_t> by_visited_;
    int levels_ = 0;
};

struct WeakIteration {
    WeakEngine engine;
    int fixpoint_at = 0;
    int stable_level = 0;
};

WeakIteration run_weak(const Game& g, const WeakOptions& opt = {});

/// Out(S*) restricted to runs that make W win and L lose; witness in the input game, arena
/// witness in the visited-set unfolding.
CoalitionAnswer coalition_weak(const WeakIteration& it, const VertexSet& win, const VertexSet& lose);
CoalitionAnswer coalition_weak(const Game& g, const VertexSet& win, const VertexSet& lose, const WeakOptions& opt = {});

/// First violated Out(S^n) clause of a lasso of the unfolding, if any.
std::optional<std::string> weak_rejection(const WeakEngine& e, const Lasso& l, int n);

}  // namespace adm
