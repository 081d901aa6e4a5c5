#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adm/general.hpp"
#include "adm/safety.hpp"
#include "adm/weak.hpp"

namespace adm {

enum class EngineKind { Auto, Safety, General, Buchi, Weak };

const char* to_string(EngineKind k);
EngineKind engine_from_string(const std::string& s);

struct QueryOptions {
    EngineKind engine = EngineKind::Auto;
    GeneralOptions general;
    WeakOptions weak;
};

/// Engine selected for a game: safety for all-safety games, the general engine for
/// prefix-independent objectives, the weak engine for occurrence-based ones.
EngineKind select_engine(const Game& g, EngineKind requested);

/// Out(S*) as an Inf condition on an explicit arena: runs of `succ` from `start` such that no
/// forbidden vertex recurs and every clause (Inf meets set, or the clause player wins) holds.
struct OutcomeModel {
    std::vector<std::vector<Vertex>> succ;
    Vertex start = 0;
    std::vector<Vertex> base;        // game vertex of each arena vertex
    std::vector<Circuit> win;        // per player, Inf circuit over arena vertices
    struct Clause {
        VertexSet set;
        Player player = 0;
        int level = 0;
    };
    std::vector<Clause> clauses;
    VertexSet forbidden;

    std::size_t size() const { return succ.size(); }
};

/// Completed fixpoint computation for one game.
struct AdmContext {
    Game game;
    EngineKind engine = EngineKind::General;
    std::optional<SafetyIteration> safety;
    std::optional<GeneralIteration> general;
    std::optional<WeakIteration> weak;

    int fixpoint_at() const;
    /// Level describing Out(S*).
    int stable_level() const;
    OutcomeModel model() const;
    /// The engine's arena as a game (unfolding for safety and weak, the game itself otherwise).
    const Game& arena() const;
    /// Lifts a lasso of the game into the engine's arena.
    std::optional<Lasso> lift(const Lasso& l) const;
    Lasso project(const Lasso& l) const;
};

AdmContext analyse(const Game& g, const QueryOptions& opt = {});

/// Players named in a comma-separated list.
VertexSet parse_players(const Game& g, const std::string& list);

CoalitionAnswer coalition(const AdmContext& ctx, const VertexSet& win, const VertexSet& lose);
CoalitionAnswer coalition(const Game& g, const VertexSet& win, const VertexSet& lose, const QueryOptions& opt = {});
/// Same question answered on the outcome model, independently of the engine-specific search.
CoalitionAnswer coalition_on_model(const AdmContext& ctx, const VertexSet& win, const VertexSet& lose);

/// Nondeterministic Büchi automaton over the game's vertices. A run reads the first vertex of
/// a play from an initial state and accepts when accepting states occur infinitely often.
struct BuchiAutomaton {
    std::vector<std::string> states;
    std::vector<std::uint32_t> initial;
    VertexSet accepting;
    struct Transition {
        std::uint32_t from = 0;
        Vertex label = 0;
        std::uint32_t to = 0;
    };
    std::vector<Transition> transitions;

    std::size_t size() const { return states.size(); }
    /// delta[q][v]: successor states.
    std::vector<std::vector<std::vector<std::uint32_t>>> table(std::size_t vertices) const;
    /// Acceptance of stem · cycle^ω.
    bool accepts(const Lasso& l, std::size_t vertices) const;
};

struct McAnswer {
    bool holds = true;
    std::optional<Lasso> counterexample;  // in the game
    std::optional<Lasso> arena_witness;   // in the engine's arena
    std::size_t product_size = 0;
    int iterations = 0;
};

McAnswer mc_under_admissibility(const AdmContext& ctx, const BuchiAutomaton& neg_spec);
McAnswer mc_under_admissibility(const Game& g, const BuchiAutomaton& neg_spec, const QueryOptions& opt = {});

struct Certificate {
    bool ok = false;
    std::optional<std::string> violation;
    std::vector<std::string> trace;
};

/// Re-checks a coalition witness (a lasso of the game) from scratch: edges against the removed
/// transitions, every A-condition up to the stable level, and the W/L objectives.
Certificate witness_replay(const AdmContext& ctx, const Lasso& l, const VertexSet& win, const VertexSet& lose);
/// Re-checks a model-checking counterexample: admissibility clauses and acceptance by neg_spec.
Certificate witness_replay(const AdmContext& ctx, const Lasso& l, const BuchiAutomaton& neg_spec);

bool objective_holds(const Game& g, Player i, const Lasso& l);

}  // namespace adm
