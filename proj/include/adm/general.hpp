#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "adm/game.hpp"
#include "adm/lasso.hpp"
#include "adm/zerosum.hpp"

namespace adm {

enum class ExecutionPolicy { Serial, Parallel };

enum class ThetaBackend { Recursive, Lar };

struct GeneralOptions {
    ExecutionPolicy policy = ExecutionPolicy::Parallel;
    ThetaBackend theta = ThetaBackend::Recursive;
    std::size_t lar_max_inputs = 10;
    MullerOptions muller;
    EmptinessOptions emptiness;
    /// Stop after this many levels even when not stable (0: run to the fixpoint).
    std::size_t max_levels = 0;
};

/// Arena handed to the value kernel: winning conditions are Inf circuits over vertices.
/// Pinned vertices are absorbing exits whose values the caller supplies at every level.
struct KernelArena {
    std::vector<std::vector<Vertex>> succ;
    std::vector<Player> owner;
    std::size_t players = 0;
    std::vector<Circuit> win;
    VertexSet pinned;

    std::size_t size() const { return succ.size(); }
    static KernelArena from_game(const Game& g);
};

/// Incremental computation of Val^n, T^n (edge domination) and H^n for prefix-independent
/// objectives. Level n is computed from levels 0..n-1 by step().
class GeneralKernel {
public:
    static constexpr std::uint32_t kNever = std::numeric_limits<std::uint32_t>::max();
    using PinnedValue = std::function<int(Player, Vertex)>;

    explicit GeneralKernel(KernelArena arena, GeneralOptions opt = {});

    const KernelArena& arena() const { return a_; }
    const GeneralOptions& options() const { return opt_; }
    int levels() const { return static_cast<int>(values_.levels()); }

    /// Computes the next level; `pinned` gives the current-level values of pinned vertices.
    void step(const PinnedValue& pinned = {});
    /// True when the last two levels agree on values and Help!-sets.
    bool stable() const;

    const ValueTable& values() const { return values_; }
    int value(int n, Player i, Vertex v) const { return values_.at(n, i, v); }
    /// H^n_i; empty for n < 0.
    VertexSet help(int n, Player i) const;
    /// Smallest level k at which edge v -> succ[v][k] is dominated for its owner, or kNever.
    std::uint32_t dominated_at(Vertex v, std::size_t k) const { return dom_[v][k]; }
    std::uint32_t dominated_at(Vertex v, Vertex w) const;
    /// Edge usable by outcomes of S^n: not dominated at any level below n.
    bool edge_alive(Vertex v, Vertex w, int n) const;
    /// Surviving successor lists at level n (pinned vertices loop on themselves).
    std::vector<std::vector<Vertex>> pruned(int n) const;

    /// Vertices whose Inf visits satisfy the value-class clause of A_j^m without Win_j:
    /// value -1, or value 0 and Help!, for Val^{m-1}_j and H^{m-1}_j.
    VertexSet acc_set(Player j, int m) const;

    /// Inf condition on the level-n pruned arena describing Out(S^n).
    LabeledCondition outcome_condition(int n) const;
    /// Inf condition of the Psi-check: Out(S^n) and Win_i (pinned exits with value >= 0 count).
    LabeledCondition psi_condition(Player i, int n) const;
    /// Theta-game at level n for player i: arena (last vertex = winning sink) and condition.
    struct ThetaGame {
        Arena arena;
        LabeledCondition condition;
        Vertex sink = 0;
    };
    ThetaGame theta_game(Player i, int n) const;

    /// Val^n_i(s) = -1, recomputed from the conditions (levels < n must be available).
    bool check_value_neg(Vertex s, Player i, int n) const;
    /// Val^n_i(s) = 1, recomputed from the Theta-game (levels < n must be available).
    bool check_value_pos(Vertex s, Player i, int n) const;

    /// Membership of a lasso (of the kernel arena) in L(A_j^m): class of Val^{m-1}_j and Win_j / H^{m-1}_j.
    bool accepts_Ai(Player j, int m, const Lasso& l) const;
    /// Class-based membership in Out(S^n): surviving edges and every A_j^m, m = 1..n.
    bool accepts(const Lasso& l, int n) const;
    /// Inf-level evaluation of Out(S^n) (surviving edges and outcome_condition).
    bool accepts_inf(const Lasso& l, int n) const;

    /// First violated Out(S^n) clause, if any ("edge a->b dominated at level k", "A_j^m", ...).
    std::optional<std::string> explain_rejection(const Lasso& l, int n,
                                                 const std::function<std::string(Vertex)>& name) const;

private:
    VertexSet psi_region(Player i, int n) const;
    VertexSet theta_region(Player i, int n) const;

    KernelArena a_;
    GeneralOptions opt_;
    ValueTable values_;
    std::vector<std::vector<VertexSet>> help_;  // [n][i]
    std::vector<std::vector<std::uint32_t>> dom_;
    std::vector<std::vector<VertexSet>> acc_;   // acc_[m][j] for m >= 1
};

/// Result of running the general engine on a game.
struct GeneralIteration {
    GeneralKernel kernel;
    /// Smallest n such that every later computed level has the same values as level n.
    int fixpoint_at = 0;
    /// Level whose outcome set equals Out(S*): values and Help!-sets agree with the previous level.
    int stable_level = 0;

    const ValueTable& values() const { return kernel.values(); }
};

GeneralIteration run_to_fixpoint(const Game& g, const GeneralOptions& opt = {});
/// Runs an existing kernel (without pinned vertices) to its fixpoint.
void run_kernel_to_fixpoint(GeneralKernel& k);
int fixpoint_index(const GeneralKernel& k);

/// Help!-states computed from scratch for a value table on arena `succ` restricted by `alive`.
VertexSet help_states(const std::vector<std::vector<Vertex>>& succ, const std::vector<Player>& owner,
                      const ValueTable& values, int n, Player i,
                      const std::function<bool(Vertex, Vertex)>& alive);

}  // namespace adm
