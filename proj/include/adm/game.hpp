#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "adm/bitset.hpp"
#include "adm/circuit.hpp"

namespace adm {

using Vertex = std::uint32_t;
using Player = std::uint32_t;
inline constexpr Player kNoOwner = std::numeric_limits<Player>::max();

enum class ObjectiveKind { None, Safety, Reachability, Buchi, Parity, Muller, WeakMuller };

const char* to_string(ObjectiveKind k);

/// Winning condition of one player. `set` holds Bad / Good / accepting vertices,
/// `colors` the parity coloring, `circuit` the Muller family (Inf for Muller, Occ for WeakMuller).
struct Objective {
    ObjectiveKind kind = ObjectiveKind::None;
    VertexSet set;
    std::vector<std::uint32_t> colors;
    Circuit circuit;

    static Objective safety(VertexSet bad) { return {ObjectiveKind::Safety, std::move(bad), {}, {}}; }
    static Objective reachability(VertexSet good) { return {ObjectiveKind::Reachability, std::move(good), {}, {}}; }
    static Objective buchi(VertexSet acc) { return {ObjectiveKind::Buchi, std::move(acc), {}, {}}; }
    static Objective parity(std::vector<std::uint32_t> colors) { return {ObjectiveKind::Parity, {}, std::move(colors), {}}; }
    static Objective muller(Circuit c) { return {ObjectiveKind::Muller, {}, {}, std::move(c)}; }
    static Objective weak(Circuit c) { return {ObjectiveKind::WeakMuller, {}, {}, std::move(c)}; }

    /// True for conditions that only depend on the set of vertices seen infinitely often.
    bool prefix_independent() const {
        return kind == ObjectiveKind::Buchi || kind == ObjectiveKind::Parity || kind == ObjectiveKind::Muller;
    }
    /// True for conditions that only depend on the set of vertices ever visited.
    bool occurrence_based() const {
        return kind == ObjectiveKind::Safety || kind == ObjectiveKind::Reachability || kind == ObjectiveKind::WeakMuller;
    }
    bool operator==(const Objective&) const = default;
};

/// Circuit over vertices evaluated on the Inf-set; only for prefix-independent objectives.
Circuit inf_circuit(const Objective& o, std::size_t n);
/// Circuit over vertices evaluated on the Occ-set; only for occurrence-based objectives.
Circuit occ_circuit(const Objective& o, std::size_t n);

/// Turn-based multiplayer game on a finite graph. Vertex and player ids are dense indices;
/// names are kept for input/output only.
struct Game {
    std::vector<std::string> players;
    std::vector<std::string> names;
    std::vector<Player> owner;
    std::vector<std::vector<Vertex>> succ;  // sorted, duplicate free
    std::vector<Objective> objectives;      // indexed by player
    std::optional<Vertex> init;

    std::size_t num_vertices() const { return names.size(); }
    std::size_t num_players() const { return players.size(); }
    std::size_t num_edges() const;
    Vertex initial() const { return init.value_or(0); }

    Player add_player(const std::string& name);
    /// Returns the vertex named `name`, creating it (without owner) if needed.
    Vertex vertex(const std::string& name);
    Vertex add_vertex(const std::string& name, Player owner);
    void add_edge(Vertex u, Vertex v);
    bool has_edge(Vertex u, Vertex v) const;

    std::optional<Vertex> find_vertex(const std::string& name) const;
    std::optional<Player> find_player(const std::string& name) const;

    VertexSet vertices_of(Player p) const;
    bool operator==(const Game& o) const {
        return players == o.players && names == o.names && owner == o.owner && succ == o.succ &&
               objectives == o.objectives && init == o.init;
    }

private:
    std::unordered_map<std::string, Vertex> vindex_;
};

/// Every violated Game invariant, in deterministic order; empty iff the game is valid.
std::vector<std::string> validate_game(const Game& g);

/// Throws an Input error carrying the first violation, if any.
void require_valid(const Game& g);

std::string player_set_name(const Game& g, const VertexSet& players);

}  // namespace adm
