#include "adm/generators.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <map>
#include <random>

#include "adm/errors.hpp"

namespace adm {

namespace {

class QbfLexer {
public:
    explicit QbfLexer(const std::string& s) : s_(s) {}

    std::string next() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ >= s_.size()) return {};
        char c = s_[pos_];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t b = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            return s_.substr(b, pos_ - b);
        }
        ++pos_;
        return std::string(1, c);
    }
    std::string peek() {
        std::size_t save = pos_;
        std::string t = next();
        pos_ = save;
        return t;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

Qbf parse_qbf(const std::string& text) {
    Qbf q;
    QbfLexer lex(text);
    std::map<std::string, int> index;
    while (true) {
        std::string t = lex.peek();
        bool ex = t == "exists" || t == "E", fa = t == "forall" || t == "A";
        if (!ex && !fa) break;
        lex.next();
        std::string v = lex.next();
        if (v.empty() || !(std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_'))
            fail(ErrorKind::Input, "expected a variable after '" + t + "'");
        if (index.count(v)) fail(ErrorKind::Input, "variable '" + v + "' quantified twice");
        index[v] = static_cast<int>(q.vars.size()) + 1;
        q.vars.push_back(v);
        q.universal.push_back(fa);
    }
    if (lex.next() != ".") fail(ErrorKind::Input, "expected '.' after the quantifier prefix");
    while (true) {
        if (lex.next() != "(") fail(ErrorKind::Input, "non-CNF matrix: expected '(' opening a clause");
        std::vector<int> clause;
        while (true) {
            std::string t = lex.next();
            bool neg = false;
            while (t == "~" || t == "!" || t == "-") {
                neg = !neg;
                t = lex.next();
            }
            if (t == "(") fail(ErrorKind::Input, "non-CNF matrix: nested parentheses");
            auto it = index.find(t);
            if (it == index.end()) fail(ErrorKind::Input, "formula is not closed: '" + t + "' is not quantified");
            clause.push_back(neg ? -it->second : it->second);
            t = lex.next();
            if (t == ")") break;
            if (t != "|") fail(ErrorKind::Input, "non-CNF matrix: expected '|' or ')' in a clause");
        }
        q.clauses.push_back(std::move(clause));
        std::string t = lex.next();
        if (t.empty()) break;
        if (t != "&") fail(ErrorKind::Input, "non-CNF matrix: expected '&' between clauses");
    }
    return q;
}

std::string to_string(const Qbf& q) {
    std::string s;
    for (std::size_t k = 0; k < q.vars.size(); ++k) s += (q.universal[k] ? "forall " : "exists ") + q.vars[k] + " ";
    s += ".";
    for (std::size_t c = 0; c < q.clauses.size(); ++c) {
        s += c ? " & (" : " (";
        for (std::size_t k = 0; k < q.clauses[c].size(); ++k) {
            int l = q.clauses[c][k];
            s += (k ? " | " : "") + std::string(l < 0 ? "~" : "") + q.vars[std::abs(l) - 1];
        }
        s += ")";
    }
    return s;
}

bool eval_qbf(const Qbf& q) {
    if (q.num_vars() > 20) fail(ErrorKind::Guard, "QBF evaluation limited to 20 variables");
    std::vector<bool> val(q.num_vars());
    std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
        if (k == q.num_vars()) {
            for (const auto& c : q.clauses) {
                bool sat = false;
                for (int l : c)
                    if (val[std::abs(l) - 1] == (l > 0)) sat = true;
                if (!sat) return false;
            }
            return true;
        }
        val[k] = false;
        bool a = rec(k + 1);
        val[k] = true;
        bool b = rec(k + 1);
        return q.universal[k] ? (a && b) : (a || b);
    };
    return rec(0);
}

namespace {

// Players and literal bookkeeping shared by both QBF games.
struct QbfBuilder {
    Game g;
    Player eve = 0, adam = 1;
    std::vector<Player> pos, neg;  // literal players
    std::vector<std::vector<Vertex>> marks;  // per literal player: states in its Bad / Good set

    explicit QbfBuilder(const Qbf& q) {
        if (q.clauses.empty()) fail(ErrorKind::Input, "formula without clauses");
        eve = g.add_player("Eve");
        adam = g.add_player("Adam");
        for (const auto& v : q.vars) {
            pos.push_back(g.add_player(v));
            neg.push_back(g.add_player("n" + v));
        }
        marks.resize(g.num_players());
    }
    Player literal_player(int l) const { return l > 0 ? pos[l - 1] : neg[-l - 1]; }
    std::string literal_name(const Qbf& q, int l) const { return (l < 0 ? "n" : "") + q.vars[std::abs(l) - 1]; }
};

// Quantifier modules followed by the clause chain ending in `final_state`. `literal` creates a
// literal module and returns its entry and the state continuing the play.
template <class Literal>
void build_chain(QbfBuilder& b, const Qbf& q, Vertex final_state, Literal&& literal) {
    Game& g = b.g;
    std::vector<Vertex> chooser;
    for (std::size_t k = 0; k < q.num_vars(); ++k) {
        chooser.push_back(g.add_vertex("set_" + q.vars[k], q.universal[k] ? b.adam : b.eve));
        Vertex t = g.add_vertex(q.vars[k], b.eve);
        Vertex f = g.add_vertex("n" + q.vars[k], b.eve);
        b.marks[b.pos[k]].push_back(t);
        b.marks[b.neg[k]].push_back(f);
        g.add_edge(chooser.back(), t);
        g.add_edge(chooser.back(), f);
    }
    std::vector<Vertex> entry;
    std::vector<std::vector<Vertex>> exits;
    for (std::size_t c = 0; c < q.clauses.size(); ++c) {
        std::string cn = "c" + std::to_string(c + 1);
        std::vector<Vertex> ex;
        Vertex in;
        if (q.clauses[c].size() > 1) {
            in = g.add_vertex(cn, b.eve);
            for (std::size_t k = 0; k < q.clauses[c].size(); ++k) {
                auto [lin, lout] = literal(cn + "_" + std::to_string(k + 1), q.clauses[c][k]);
                g.add_edge(in, lin);
                ex.push_back(lout);
            }
        } else {
            auto [lin, lout] = literal(cn + "_1", q.clauses[c][0]);
            in = lin;
            ex.push_back(lout);
        }
        entry.push_back(in);
        exits.push_back(ex);
    }
    // Wiring: quantifier k's literal states lead to the next quantifier or the matrix entry.
    for (std::size_t k = 0; k < q.num_vars(); ++k) {
        Vertex next = k + 1 < q.num_vars() ? chooser[k + 1] : entry[0];
        g.add_edge(g.find_vertex(q.vars[k]).value(), next);
        g.add_edge(g.find_vertex("n" + q.vars[k]).value(), next);
    }
    for (std::size_t c = 0; c < q.clauses.size(); ++c) {
        Vertex next = c + 1 < q.clauses.size() ? entry[c + 1] : final_state;
        for (auto x : exits[c]) g.add_edge(x, next);
    }
    g.init = q.num_vars() ? chooser[0] : entry[0];
}

}  // namespace

Game gen_qbf_safety(const Qbf& q) {
    QbfBuilder b(q);
    Game& g = b.g;
    std::vector<Vertex> eve_sinks;
    Vertex adam_sink = g.add_vertex("adam_loses", b.adam);
    g.add_edge(adam_sink, adam_sink);
    build_chain(b, q, adam_sink, [&](const std::string& name, int l) {
        Player p = b.literal_player(l);
        Vertex choice = g.add_vertex(name, p);
        Vertex mark = g.add_vertex(name + "_" + b.literal_name(q, l), b.eve);
        Vertex sink = g.add_vertex(name + "_eve_loses", b.eve);
        g.add_edge(choice, mark);
        g.add_edge(choice, sink);
        g.add_edge(sink, sink);
        b.marks[p].push_back(mark);
        eve_sinks.push_back(sink);
        return std::pair<Vertex, Vertex>{choice, mark};
    });
    const std::size_t n = g.num_vertices();
    auto set_of = [&](const std::vector<Vertex>& vs) {
        VertexSet s(n);
        for (auto v : vs) s.set(v);
        return s;
    };
    g.objectives[b.eve] = Objective::safety(set_of(eve_sinks));
    g.objectives[b.adam] = Objective::safety(set_of({adam_sink}));
    for (Player p = 2; p < g.num_players(); ++p) g.objectives[p] = Objective::safety(set_of(b.marks[p]));
    require_valid(g);
    return g;
}

Game gen_qbf_reachability(const Qbf& q) {
    QbfBuilder b(q);
    Game& g = b.g;
    std::vector<Vertex> literal_sinks;
    Vertex eve_sink = g.add_vertex("eve_wins", b.eve);
    g.add_edge(eve_sink, eve_sink);
    build_chain(b, q, eve_sink, [&](const std::string& name, int l) {
        Player p = b.literal_player(l);
        Vertex choice = g.add_vertex(name, p);
        Vertex sink = g.add_vertex(name + "_" + b.literal_name(q, l) + "_wins", b.eve);
        g.add_edge(choice, sink);
        g.add_edge(sink, sink);
        b.marks[p].push_back(sink);
        literal_sinks.push_back(sink);
        return std::pair<Vertex, Vertex>{choice, choice};
    });
    const std::size_t n = g.num_vertices();
    auto set_of = [&](const std::vector<Vertex>& vs) {
        VertexSet s(n);
        for (auto v : vs) s.set(v);
        return s;
    };
    g.objectives[b.eve] = Objective::reachability(set_of({eve_sink}));
    g.objectives[b.adam] = Objective::reachability(set_of(literal_sinks));
    for (Player p = 2; p < g.num_players(); ++p) g.objectives[p] = Objective::reachability(set_of(b.marks[p]));
    require_valid(g);
    return g;
}

Game gen_metro(int slots, int trains) {
    if (trains < 1 || slots < 2 * trains)
        fail(ErrorKind::Input, "metro needs at least one train and at least two sections per train");
    const int p = trains;
    Game g;
    for (int k = 1; k <= p; ++k) g.add_player("t" + std::to_string(k));
    const Player env = g.add_player("env");

    // State: positions, number of declared intents, intents ('_' undeclared, 'm' move, 's' stay).
    using Key = std::pair<std::vector<int>, std::string>;
    std::map<Key, Vertex> index;
    std::vector<Key> keys;
    std::deque<Vertex> queue;
    auto collided = [](const std::vector<int>& pos) {
        for (std::size_t a = 0; a < pos.size(); ++a)
            for (std::size_t b = a + 1; b < pos.size(); ++b)
                if (pos[a] == pos[b]) return true;
        return false;
    };
    auto name_of = [&](const Key& k) {
        std::string s = collided(k.first) ? "c" : "m";
        for (std::size_t a = 0; a < k.first.size(); ++a) s += (a ? "." : "") + std::to_string(k.first[a]);
        if (!collided(k.first)) s += "." + k.second;
        return s;
    };
    auto get = [&](const Key& k) {
        auto it = index.find(k);
        if (it != index.end()) return it->second;
        Player owner = env;
        if (!collided(k.first)) {
            auto d = k.second.find('_');
            owner = d == std::string::npos ? env : static_cast<Player>(d);
        }
        Vertex v = g.add_vertex(name_of(k), owner);
        index.emplace(k, v);
        keys.push_back(k);
        queue.push_back(v);
        return v;
    };
    std::vector<int> start(p);
    for (int k = 0; k < p; ++k) start[k] = p - 1 - k;
    g.init = get({start, std::string(p, '_')});
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        const Key k = keys[v];
        if (collided(k.first)) {
            g.add_edge(v, v);
            continue;
        }
        auto d = k.second.find('_');
        if (d != std::string::npos) {
            for (char c : {'m', 's'}) {
                Key n = k;
                n.second[d] = c;
                g.add_edge(v, get(n));
            }
            continue;
        }
        std::vector<int> movers;
        for (int t = 0; t < p; ++t)
            if (k.second[t] == 'm') movers.push_back(t);
        for (std::uint32_t mask = 0; mask < (1u << movers.size()); ++mask) {  // mask: blocked movers
            std::vector<int> pos = k.first;
            for (std::size_t b = 0; b < movers.size(); ++b)
                if (!(mask >> b & 1u)) pos[movers[b]] = (pos[movers[b]] + 1) % slots;
            g.add_edge(v, get({pos, std::string(p, '_')}));
        }
    }
    const std::size_t n = g.num_vertices();
    VertexSet coll(n);
    for (Vertex v = 0; v < n; ++v)
        if (collided(keys[v].first)) coll.set(v);
    for (int t = 0; t < p; ++t) {
        VertexSet at0(n), at1(n);
        for (Vertex v = 0; v < n; ++v) {
            if (coll.test(v)) continue;
            if (keys[v].first[t] == 0) at0.set(v);
            if (keys[v].first[t] == 1) at1.set(v);
        }
        CircuitBuilder b;
        g.objectives[t] = Objective::muller(b.finish(b.and_(b.any_of(at0), b.any_of(at1))).canonical());
    }
    g.objectives[env] = Objective::buchi(coll);
    require_valid(g);
    return g;
}

RandomObjective random_objective_from_string(const std::string& s) {
    for (auto k : {RandomObjective::Safety, RandomObjective::Reachability, RandomObjective::Buchi, RandomObjective::Parity,
                   RandomObjective::Muller, RandomObjective::Weak})
        if (s == to_string(k)) return k;
    fail(ErrorKind::Input, "unknown random objective kind '" + s + "'");
}

const char* to_string(RandomObjective k) {
    switch (k) {
    case RandomObjective::Safety: return "safety";
    case RandomObjective::Reachability: return "reachability";
    case RandomObjective::Buchi: return "buchi";
    case RandomObjective::Parity: return "parity";
    case RandomObjective::Muller: return "muller";
    case RandomObjective::Weak: return "weak";
    }
    return "?";
}

Game gen_random(const RandomSpec& spec) {
    if (spec.vertices == 0 || spec.players == 0) fail(ErrorKind::Input, "random game needs vertices and players");
    std::mt19937_64 rng(spec.seed);
    auto uniform = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto below = [&](std::uint64_t k) { return rng() % k; };
    const std::size_t n = spec.vertices;
    Game g;
    for (std::size_t p = 0; p < spec.players; ++p) g.add_player("p" + std::to_string(p + 1));
    for (std::size_t v = 0; v < n; ++v) g.add_vertex("v" + std::to_string(v), static_cast<Player>(below(spec.players)));
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = 0; v < n; ++v)
            if (uniform() < spec.density) g.add_edge(u, v);
    for (Vertex u = 0; u < n; ++u)
        if (g.succ[u].empty()) g.add_edge(u, static_cast<Vertex>((u + 1) % n));
    auto random_set = [&]() {
        VertexSet s(n);
        for (std::size_t v = 0; v < n; ++v)
            if (uniform() < spec.set_density) s.set(v);
        return s;
    };
    auto random_circuit = [&]() {
        CircuitBuilder b;
        std::vector<CircuitBuilder::Ref> pool;
        for (int k = 0, m = 2 + static_cast<int>(below(2)); k < m; ++k) pool.push_back(b.input(static_cast<std::uint32_t>(below(n))));
        for (int k = 0, m = 1 + static_cast<int>(below(3)); k < m; ++k) {
            auto x = pool[below(pool.size())], y = pool[below(pool.size())];
            switch (below(3)) {
            case 0: pool.push_back(b.and_(x, y)); break;
            case 1: pool.push_back(b.or_(x, y)); break;
            default: pool.push_back(b.not_(x)); break;
            }
        }
        return b.finish(pool.back()).canonical();
    };
    for (Player p = 0; p < spec.players; ++p) {
        switch (spec.objective) {
        case RandomObjective::Safety: g.objectives[p] = Objective::safety(random_set()); break;
        case RandomObjective::Reachability: g.objectives[p] = Objective::reachability(random_set()); break;
        case RandomObjective::Buchi: g.objectives[p] = Objective::buchi(random_set()); break;
        case RandomObjective::Parity: {
            std::vector<std::uint32_t> c(n);
            for (auto& x : c) x = static_cast<std::uint32_t>(below(spec.max_color + 1));
            g.objectives[p] = Objective::parity(std::move(c));
            break;
        }
        case RandomObjective::Muller: g.objectives[p] = Objective::muller(random_circuit()); break;
        case RandomObjective::Weak: g.objectives[p] = Objective::weak(random_circuit()); break;
        }
    }
    return g;
}

}  // namespace adm
