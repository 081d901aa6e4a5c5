#include "adm/game.hpp"

#include <algorithm>

#include "adm/errors.hpp"

namespace adm {

const char* to_string(ObjectiveKind k) {
    switch (k) {
    case ObjectiveKind::None: return "none";
    case ObjectiveKind::Safety: return "safety";
    case ObjectiveKind::Reachability: return "reachability";
    case ObjectiveKind::Buchi: return "buchi";
    case ObjectiveKind::Parity: return "parity";
    case ObjectiveKind::Muller: return "muller";
    case ObjectiveKind::WeakMuller: return "weak";
    }
    return "?";
}

Circuit inf_circuit(const Objective& o, std::size_t n) {
    switch (o.kind) {
    case ObjectiveKind::Buchi: return Circuit::any_of(o.set);
    case ObjectiveKind::Muller: return o.circuit;
    case ObjectiveKind::Parity: {
        // Max color seen infinitely often is even.
        CircuitBuilder b;
        std::uint32_t top = 0;
        for (auto c : o.colors) top = std::max(top, c);
        std::vector<VertexSet> by_color(top + 1, VertexSet(n));
        for (std::size_t v = 0; v < o.colors.size() && v < n; ++v) by_color[o.colors[v]].set(v);
        auto above = b.constant(false);  // some vertex of color > c is in Inf
        std::vector<CircuitBuilder::Ref> wins;
        for (std::uint32_t c = top + 1; c-- > 0;) {
            auto here = b.any_of(by_color[c]);
            if (c % 2 == 0) wins.push_back(b.and_(here, b.not_(above)));
            above = b.or_(above, here);
        }
        return b.finish(b.any(wins));
    }
    default: fail(ErrorKind::Unsupported, std::string("objective kind '") + to_string(o.kind) + "' is not prefix-independent");
    }
}

Circuit occ_circuit(const Objective& o, std::size_t) {
    switch (o.kind) {
    case ObjectiveKind::Safety: return Circuit::none_of(o.set);
    case ObjectiveKind::Reachability: return Circuit::any_of(o.set);
    case ObjectiveKind::WeakMuller: return o.circuit;
    default: fail(ErrorKind::Unsupported, std::string("objective kind '") + to_string(o.kind) + "' is not occurrence-based");
    }
}

std::size_t Game::num_edges() const {
    std::size_t m = 0;
    for (const auto& s : succ) m += s.size();
    return m;
}

Player Game::add_player(const std::string& name) {
    players.push_back(name);
    objectives.emplace_back();
    return static_cast<Player>(players.size() - 1);
}

Vertex Game::vertex(const std::string& name) {
    auto it = vindex_.find(name);
    if (it != vindex_.end()) return it->second;
    Vertex v = static_cast<Vertex>(names.size());
    names.push_back(name);
    owner.push_back(kNoOwner);
    succ.emplace_back();
    vindex_.emplace(name, v);
    return v;
}

Vertex Game::add_vertex(const std::string& name, Player o) {
    Vertex v = vertex(name);
    owner[v] = o;
    return v;
}

void Game::add_edge(Vertex u, Vertex v) {
    auto& s = succ[u];
    auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it == s.end() || *it != v) s.insert(it, v);
}

bool Game::has_edge(Vertex u, Vertex v) const {
    if (u >= succ.size()) return false;
    return std::binary_search(succ[u].begin(), succ[u].end(), v);
}

std::optional<Vertex> Game::find_vertex(const std::string& name) const {
    auto it = vindex_.find(name);
    if (it != vindex_.end()) return it->second;
    // Games assembled field by field have no index.
    if (vindex_.empty())
        for (std::size_t v = 0; v < names.size(); ++v)
            if (names[v] == name) return static_cast<Vertex>(v);
    return std::nullopt;
}

std::optional<Player> Game::find_player(const std::string& name) const {
    for (std::size_t p = 0; p < players.size(); ++p)
        if (players[p] == name) return static_cast<Player>(p);
    return std::nullopt;
}

VertexSet Game::vertices_of(Player p) const {
    VertexSet r(num_vertices());
    for (std::size_t v = 0; v < owner.size(); ++v)
        if (owner[v] == p) r.set(v);
    return r;
}

std::vector<std::string> validate_game(const Game& g) {
    std::vector<std::string> out;
    const std::size_t n = g.num_vertices();
    if (g.players.empty()) out.push_back("no players declared");
    if (n == 0) out.push_back("no vertices declared");
    for (std::size_t p = 0; p < g.players.size(); ++p)
        for (std::size_t q = 0; q < p; ++q)
            if (g.players[p] == g.players[q]) out.push_back("duplicate player '" + g.players[p] + "'");
    for (std::size_t v = 0; v < n; ++v) {
        if (g.owner[v] == kNoOwner) {
            out.push_back("unknown endpoint '" + g.names[v] + "' (vertex never declared)");
        } else if (g.owner[v] >= g.players.size()) {
            out.push_back("vertex '" + g.names[v] + "' has an undeclared owner");
        }
        if (v >= g.succ.size() || g.succ[v].empty()) out.push_back("no successor for vertex '" + g.names[v] + "'");
        if (v < g.succ.size())
            for (auto w : g.succ[v])
                if (w >= n) out.push_back("unknown endpoint in edge from '" + g.names[v] + "'");
    }
    if (g.objectives.size() != g.players.size()) out.push_back("objectives do not match declared players");
    for (std::size_t p = 0; p < g.objectives.size() && p < g.players.size(); ++p) {
        const Objective& o = g.objectives[p];
        const std::string who = "objective of '" + g.players[p] + "'";
        switch (o.kind) {
        case ObjectiveKind::None: out.push_back("player '" + g.players[p] + "' has no objective"); break;
        case ObjectiveKind::Safety:
        case ObjectiveKind::Reachability:
        case ObjectiveKind::Buchi:
            if (o.set.universe() != n) out.push_back(who + " references unknown vertices");
            break;
        case ObjectiveKind::Parity:
            if (o.colors.size() != n) out.push_back(who + " does not color every vertex");
            break;
        case ObjectiveKind::Muller:
        case ObjectiveKind::WeakMuller:
            if (auto e = o.circuit.check(n)) out.push_back(who + ": " + *e);
            break;
        }
    }
    if (g.init && *g.init >= n) out.push_back("initial vertex out of range");
    return out;
}

void require_valid(const Game& g) {
    auto v = validate_game(g);
    if (!v.empty()) fail(ErrorKind::Input, "invalid game: " + v.front());
}

std::string player_set_name(const Game& g, const VertexSet& players) {
    std::string s;
    players.for_each([&](std::size_t p) {
        if (!s.empty()) s += "+";
        s += g.players[p];
    });
    return s;
}

}  // namespace adm
