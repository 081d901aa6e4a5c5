#include "adm/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "adm/errors.hpp"

namespace adm {

namespace {

struct Token {
    std::string text;
    std::size_t line = 0, col = 0;
};

[[noreturn]] void syntax_error(std::size_t line, std::size_t col, const std::string& msg) {
    fail(ErrorKind::Input, std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
}
[[noreturn]] void syntax_error(const Token& t, const std::string& msg) { syntax_error(t.line, t.col, msg); }

/// Non-empty lines split into whitespace separated tokens. A token starting with '#'
/// comments out the rest of its line.
std::vector<std::vector<Token>> tokenize(const std::string& text) {
    std::vector<std::vector<Token>> lines;
    std::size_t line = 1, col = 1;
    std::vector<Token> cur;
    bool comment = false;
    Token tok;
    auto flush_token = [&]() {
        if (!tok.text.empty()) cur.push_back(tok);
        tok.text.clear();
    };
    for (std::size_t k = 0; k <= text.size(); ++k) {
        char ch = k < text.size() ? text[k] : '\n';
        if (ch == '\n') {
            flush_token();
            if (!cur.empty()) lines.push_back(std::move(cur));
            cur.clear();
            comment = false;
            ++line;
            col = 1;
            continue;
        }
        if (!comment) {
            if (ch == ' ' || ch == '\t' || ch == '\r') {
                flush_token();
            } else if (tok.text.empty() && ch == '#') {
                comment = true;
            } else {
                if (tok.text.empty()) {
                    tok.line = line;
                    tok.col = col;
                }
                tok.text += ch;
            }
        }
        ++col;
    }
    return lines;
}

bool valid_id(const std::string& s) {
    if (s.empty() || s[0] == '#') return false;
    for (char c : s)
        if (c == ',' || c == ':' || c == '=') return false;
    return true;
}

/// Splits `key=a,b,c` (continuing over further tokens) into its items.
std::vector<Token> list_items(const std::vector<Token>& line, std::size_t from, const std::string& key) {
    if (from >= line.size()) syntax_error(line.back().line, line.back().col + line.back().text.size(), "expected '" + key + "='");
    const Token& head = line[from];
    if (head.text.rfind(key + "=", 0) != 0) syntax_error(head, "expected '" + key + "=', found '" + head.text + "'");
    std::vector<Token> items;
    auto split = [&](const Token& t, std::size_t skip) {
        std::size_t start = skip;
        for (std::size_t k = skip; k <= t.text.size(); ++k) {
            if (k == t.text.size() || t.text[k] == ',') {
                if (k > start) {
                    Token item{t.text.substr(start, k - start), t.line, t.col + start};
                    if (!valid_id(item.text)) syntax_error(item, "invalid vertex name '" + item.text + "'");
                    items.push_back(item);
                } else if (k < t.text.size() || (k > skip && t.text[k - 1] == ',')) {
                    syntax_error(t.line, t.col + k, "empty item in list");
                }
                start = k + 1;
            }
        }
    };
    split(head, key.size() + 1);
    for (std::size_t k = from + 1; k < line.size(); ++k) split(line[k], 0);
    return items;
}

struct PendingObjective {
    ObjectiveKind kind = ObjectiveKind::None;
    std::vector<Vertex> members;
    std::vector<std::pair<Vertex, std::uint32_t>> colors;
    std::vector<Circuit::Gate> gates;
    std::uint32_t output = 0;
};

/// Postfix circuit over vertex names; the gate layout mirrors the token order.
void parse_postfix(Game& g, const std::vector<Token>& line, std::size_t from, PendingObjective& out) {
    if (from >= line.size()) syntax_error(line.back().line, line.back().col + line.back().text.size(), "expected 'circuit='");
    if (line[from].text.rfind("circuit=", 0) != 0) syntax_error(line[from], "expected 'circuit=', found '" + line[from].text + "'");
    std::vector<Token> toks;
    if (line[from].text.size() > 8) toks.push_back({line[from].text.substr(8), line[from].line, line[from].col + 8});
    for (std::size_t k = from + 1; k < line.size(); ++k) toks.push_back(line[k]);
    if (toks.empty()) syntax_error(line[from].line, line[from].col + 8, "empty circuit");
    std::vector<std::uint32_t> stack;
    using Op = Circuit::Op;
    for (const auto& t : toks) {
        auto need = [&](std::size_t k) {
            if (stack.size() < k) syntax_error(t, "operator '" + t.text + "' lacks operands");
        };
        if (t.text == "AND" || t.text == "OR") {
            need(2);
            auto b = stack.back();
            stack.pop_back();
            auto a = stack.back();
            stack.pop_back();
            out.gates.push_back({t.text == "AND" ? Op::And : Op::Or, a, b});
        } else if (t.text == "NOT") {
            need(1);
            auto a = stack.back();
            stack.pop_back();
            out.gates.push_back({Op::Not, a, 0});
        } else if (t.text == "TRUE" || t.text == "FALSE") {
            out.gates.push_back({Op::Const, t.text == "TRUE" ? 1u : 0u, 0});
        } else {
            if (!valid_id(t.text)) syntax_error(t, "invalid vertex name '" + t.text + "'");
            out.gates.push_back({Op::Input, g.vertex(t.text), 0});
        }
        stack.push_back(static_cast<std::uint32_t>(out.gates.size() - 1));
    }
    if (stack.size() != 1)
        syntax_error(toks.back(), "circuit leaves " + std::to_string(stack.size()) + " operands on the stack");
    out.output = stack.back();
}

std::string join_names(const Game& g, const VertexSet& s, char sep = ',') {
    std::string r;
    s.for_each([&](std::size_t v) {
        if (!r.empty()) r += sep;
        r += g.names[v];
    });
    return r;
}

}  // namespace

Game parse_game(const std::string& text) {
    auto lines = tokenize(text);
    if (lines.empty()) syntax_error(1, 1, "empty game description");
    Game g;
    std::vector<std::pair<Vertex, Token>> owners;  // resolved once all players are known
    std::vector<bool> declared;
    std::vector<std::pair<Token, PendingObjective>> objectives;
    std::optional<Token> init;
    for (const auto& line : lines) {
        const Token& kw = line[0];
        if (kw.text == "players") {
            if (line.size() < 2) syntax_error(kw.line, kw.col + kw.text.size(), "expected at least one player name");
            for (std::size_t k = 1; k < line.size(); ++k) {
                if (!valid_id(line[k].text)) syntax_error(line[k], "invalid player name '" + line[k].text + "'");
                g.add_player(line[k].text);
            }
        } else if (kw.text == "vertex") {
            if (line.size() != 3) syntax_error(kw, "expected 'vertex <id> owner=<player>'");
            if (!valid_id(line[1].text)) syntax_error(line[1], "invalid vertex name '" + line[1].text + "'");
            if (line[2].text.rfind("owner=", 0) != 0 || line[2].text.size() == 6)
                syntax_error(line[2], "expected 'owner=<player>'");
            Vertex v = g.vertex(line[1].text);
            declared.resize(g.num_vertices(), false);
            if (declared[v]) syntax_error(line[1], "vertex '" + line[1].text + "' declared twice");
            declared[v] = true;
            owners.emplace_back(v, Token{line[2].text.substr(6), line[2].line, line[2].col + 6});
        } else if (kw.text == "edge") {
            if (line.size() != 3) syntax_error(kw, "expected 'edge <vertex> <vertex>'");
            for (std::size_t k = 1; k < 3; ++k)
                if (!valid_id(line[k].text)) syntax_error(line[k], "invalid vertex name '" + line[k].text + "'");
            Vertex u = g.vertex(line[1].text);
            Vertex v = g.vertex(line[2].text);
            g.add_edge(u, v);
        } else if (kw.text == "objective") {
            if (line.size() < 3) syntax_error(kw, "expected 'objective <player> <kind> ...'");
            PendingObjective po;
            const std::string& kind = line[2].text;
            if (kind == "safety" || kind == "reachability" || kind == "buchi") {
                po.kind = kind == "safety" ? ObjectiveKind::Safety
                          : kind == "buchi" ? ObjectiveKind::Buchi
                                            : ObjectiveKind::Reachability;
                const char* key = kind == "safety" ? "bad" : kind == "buchi" ? "acc" : "good";
                for (const auto& item : list_items(line, 3, key)) po.members.push_back(g.vertex(item.text));
            } else if (kind == "parity") {
                po.kind = ObjectiveKind::Parity;
                for (std::size_t k = 3; k < line.size(); ++k) {
                    const Token& t = line[k];
                    auto colon = t.text.rfind(':');
                    if (colon == std::string::npos || colon == 0 || colon + 1 == t.text.size())
                        syntax_error(t, "expected '<vertex>:<color>', found '" + t.text + "'");
                    std::string name = t.text.substr(0, colon);
                    if (!valid_id(name)) syntax_error(t, "invalid vertex name '" + name + "'");
                    std::uint32_t c = 0;
                    for (std::size_t j = colon + 1; j < t.text.size(); ++j) {
                        char ch = t.text[j];
                        if (ch < '0' || ch > '9' || c > 100000000u) syntax_error(t.line, t.col + j, "invalid color");
                        c = c * 10 + static_cast<std::uint32_t>(ch - '0');
                    }
                    po.colors.emplace_back(g.vertex(name), c);
                }
            } else if (kind == "muller" || kind == "weak") {
                po.kind = kind == "muller" ? ObjectiveKind::Muller : ObjectiveKind::WeakMuller;
                parse_postfix(g, line, 3, po);
            } else {
                syntax_error(line[2], "unknown objective kind '" + kind + "'");
            }
            objectives.emplace_back(line[1], std::move(po));
        } else if (kw.text == "init") {
            if (line.size() != 2) syntax_error(kw, "expected 'init <vertex>'");
            if (init) syntax_error(kw, "initial vertex given twice");
            if (!valid_id(line[1].text)) syntax_error(line[1], "invalid vertex name '" + line[1].text + "'");
            init = line[1];
            g.init = g.vertex(line[1].text);
        } else {
            syntax_error(kw, "unknown statement '" + kw.text + "'");
        }
    }
    for (const auto& [v, tok] : owners) {
        auto p = g.find_player(tok.text);
        // An undeclared owner is reported by validate_game.
        g.owner[v] = p ? *p : static_cast<Player>(g.num_players());
    }
    const std::size_t n = g.num_vertices();
    std::vector<bool> given(g.num_players(), false);
    for (auto& [tok, po] : objectives) {
        auto p = g.find_player(tok.text);
        if (!p) syntax_error(tok, "objective for unknown player '" + tok.text + "'");
        if (given[*p]) syntax_error(tok, "second objective for player '" + tok.text + "'");
        given[*p] = true;
        Objective o;
        o.kind = po.kind;
        switch (po.kind) {
        case ObjectiveKind::Safety:
        case ObjectiveKind::Reachability:
        case ObjectiveKind::Buchi:
            o.set = VertexSet(n);
            for (auto v : po.members) o.set.set(v);
            break;
        case ObjectiveKind::Parity: {
            std::vector<bool> colored(n, false);
            o.colors.assign(n, 0);
            for (auto [v, c] : po.colors) {
                if (colored[v]) syntax_error(tok, "vertex '" + g.names[v] + "' colored twice");
                colored[v] = true;
                o.colors[v] = c;
            }
            // Leaving a vertex uncolored is reported by validate_game.
            for (std::size_t v = 0; v < n; ++v)
                if (!colored[v]) {
                    o.colors.resize(std::count(colored.begin(), colored.end(), true));
                    break;
                }
            break;
        }
        default: o.circuit = Circuit(std::move(po.gates), po.output); break;
        }
        g.objectives[*p] = std::move(o);
    }
    return g;
}

std::string serialize_game(const Game& g) {
    std::ostringstream os;
    os << "players";
    for (const auto& p : g.players) os << ' ' << p;
    os << '\n';
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        if (g.owner[v] == kNoOwner) continue;
        os << "vertex " << g.names[v] << " owner="
           << (g.owner[v] < g.num_players() ? g.players[g.owner[v]] : std::string("?")) << '\n';
    }
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
        for (auto w : g.succ[v]) os << "edge " << g.names[v] << ' ' << g.names[w] << '\n';
    auto name = [&](std::uint32_t a) { return a < g.num_vertices() ? g.names[a] : std::string("?"); };
    for (std::size_t p = 0; p < g.objectives.size() && p < g.num_players(); ++p) {
        const Objective& o = g.objectives[p];
        if (o.kind == ObjectiveKind::None) continue;
        os << "objective " << g.players[p] << ' ' << to_string(o.kind);
        switch (o.kind) {
        case ObjectiveKind::Safety: os << " bad=" << join_names(g, o.set); break;
        case ObjectiveKind::Reachability: os << " good=" << join_names(g, o.set); break;
        case ObjectiveKind::Buchi: os << " acc=" << join_names(g, o.set); break;
        case ObjectiveKind::Parity:
            for (std::size_t v = 0; v < o.colors.size(); ++v) os << ' ' << name(static_cast<std::uint32_t>(v)) << ':' << o.colors[v];
            break;
        default: os << " circuit=" << o.circuit.to_postfix(name); break;
        }
        os << '\n';
    }
    if (g.init) os << "init " << name(*g.init) << '\n';
    return os.str();
}

Game canonical_game(const Game& g) {
    Game r = g;
    for (auto& o : r.objectives)
        if (o.kind == ObjectiveKind::Muller || o.kind == ObjectiveKind::WeakMuller) o.circuit = o.circuit.canonical();
    return r;
}

BuchiAutomaton parse_buchi(const std::string& text, const Game& g) {
    auto lines = tokenize(text);
    if (lines.empty()) syntax_error(1, 1, "empty automaton description");
    BuchiAutomaton a;
    std::map<std::string, std::uint32_t> index;
    auto state = [&](const Token& t) {
        auto it = index.find(t.text);
        if (it == index.end()) syntax_error(t, "undeclared automaton state '" + t.text + "'");
        return it->second;
    };
    std::vector<std::vector<Token>> deferred;
    for (const auto& line : lines) {
        const Token& kw = line[0];
        if (kw.text == "states") {
            if (line.size() < 2) syntax_error(kw.line, kw.col + kw.text.size(), "expected at least one state name");
            for (std::size_t k = 1; k < line.size(); ++k) {
                if (!valid_id(line[k].text)) syntax_error(line[k], "invalid state name '" + line[k].text + "'");
                if (index.count(line[k].text)) syntax_error(line[k], "state '" + line[k].text + "' declared twice");
                index.emplace(line[k].text, static_cast<std::uint32_t>(a.states.size()));
                a.states.push_back(line[k].text);
            }
        } else if (kw.text == "initial" || kw.text == "accepting" || kw.text == "trans") {
            deferred.push_back(line);
        } else {
            syntax_error(kw, "unknown statement '" + kw.text + "'");
        }
    }
    if (a.states.empty()) syntax_error(1, 1, "no automaton states declared");
    a.accepting = VertexSet(a.states.size());
    for (const auto& line : deferred) {
        const Token& kw = line[0];
        if (kw.text == "initial") {
            for (std::size_t k = 1; k < line.size(); ++k) a.initial.push_back(state(line[k]));
        } else if (kw.text == "accepting") {
            for (std::size_t k = 1; k < line.size(); ++k) a.accepting.set(state(line[k]));
        } else {
            if (line.size() != 4) syntax_error(kw, "expected 'trans <state> <vertex> <state>'");
            auto from = state(line[1]);
            auto to = state(line[3]);
            if (line[2].text == "*") {
                for (Vertex v = 0; v < g.num_vertices(); ++v) a.transitions.push_back({from, v, to});
            } else {
                auto v = g.find_vertex(line[2].text);
                if (!v) syntax_error(line[2], "unknown vertex label '" + line[2].text + "'");
                a.transitions.push_back({from, *v, to});
            }
        }
    }
    if (a.initial.empty()) syntax_error(1, 1, "no initial automaton state");
    std::sort(a.initial.begin(), a.initial.end());
    a.initial.erase(std::unique(a.initial.begin(), a.initial.end()), a.initial.end());
    return a;
}

std::string serialize_buchi(const BuchiAutomaton& a, const Game& g) {
    std::ostringstream os;
    os << "states";
    for (const auto& s : a.states) os << ' ' << s;
    os << "\ninitial";
    for (auto q : a.initial) os << ' ' << a.states[q];
    os << "\naccepting";
    a.accepting.for_each([&](std::size_t q) { os << ' ' << a.states[q]; });
    os << '\n';
    for (const auto& t : a.transitions)
        os << "trans " << a.states[t.from] << ' ' << g.names[t.label] << ' ' << a.states[t.to] << '\n';
    return os.str();
}

std::string game_fingerprint(const Game& g) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : serialize_game(g)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

WitnessFile parse_witness(const std::string& text, const Game& g) {
    auto lines = tokenize(text);
    if (lines.empty()) syntax_error(1, 1, "empty witness file");
    WitnessFile w;
    w.win = VertexSet(g.num_players());
    w.lose = VertexSet(g.num_players());
    bool have_cycle = false;
    auto vertices = [&](const std::vector<Token>& line) {
        std::vector<Vertex> out;
        for (std::size_t k = 1; k < line.size(); ++k) {
            auto v = g.find_vertex(line[k].text);
            if (!v) syntax_error(line[k], "unknown vertex '" + line[k].text + "'");
            out.push_back(*v);
        }
        return out;
    };
    auto players = [&](const std::vector<Token>& line, VertexSet& into) {
        for (std::size_t k = 1; k < line.size(); ++k) {
            auto p = g.find_player(line[k].text);
            if (!p) syntax_error(line[k], "unknown player '" + line[k].text + "'");
            into.set(*p);
        }
    };
    for (const auto& line : lines) {
        const Token& kw = line[0];
        if (kw.text == "game") {
            if (line.size() != 2) syntax_error(kw, "expected 'game <fingerprint>'");
            w.fingerprint = line[1].text;
        } else if (kw.text == "query") {
            if (line.size() != 2 || (line[1].text != "coalition" && line[1].text != "mc-adm"))
                syntax_error(kw, "expected 'query coalition' or 'query mc-adm'");
            w.query = line[1].text;
        } else if (kw.text == "win") {
            players(line, w.win);
        } else if (kw.text == "lose") {
            players(line, w.lose);
        } else if (kw.text == "stem") {
            w.lasso.stem = vertices(line);
        } else if (kw.text == "cycle") {
            w.lasso.cycle = vertices(line);
            if (w.lasso.cycle.empty()) syntax_error(kw, "empty cycle");
            have_cycle = true;
        } else {
            syntax_error(kw, "unknown statement '" + kw.text + "'");
        }
    }
    if (!have_cycle) syntax_error(lines.back().front(), "witness has no cycle");
    if (w.query.empty()) syntax_error(lines.front().front(), "witness has no query line");
    return w;
}

std::string serialize_witness(const WitnessFile& w, const Game& g) {
    std::ostringstream os;
    os << "game " << w.fingerprint << "\nquery " << w.query << '\n';
    if (w.query == "coalition") {
        os << "win";
        w.win.for_each([&](std::size_t p) { os << ' ' << g.players[p]; });
        os << "\nlose";
        w.lose.for_each([&](std::size_t p) { os << ' ' << g.players[p]; });
        os << '\n';
    }
    os << "stem";
    for (auto v : w.lasso.stem) os << ' ' << g.names[v];
    os << "\ncycle";
    for (auto v : w.lasso.cycle) os << ' ' << g.names[v];
    os << '\n';
    return os.str();
}

std::string to_dot(const Game& g, const std::function<bool(Vertex, Vertex)>& keep) {
    auto quote = [](const std::string& s) {
        std::string r = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') r += '\\';
            r += c;
        }
        return r + "\"";
    };
    std::ostringstream os;
    os << "digraph game {\n";
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        std::string owner = g.owner[v] < g.num_players() ? g.players[g.owner[v]] : "?";
        os << "  " << quote(g.names[v]) << " [label=" << quote(g.names[v] + "\\n" + owner);
        if (g.init && *g.init == v) os << ", shape=doublecircle";
        os << "];\n";
    }
    for (Vertex v = 0; v < g.num_vertices(); ++v)
        for (auto w : g.succ[v]) {
            os << "  " << quote(g.names[v]) << " -> " << quote(g.names[w]);
            if (keep && !keep(v, w)) os << " [style=dashed]";
            os << ";\n";
        }
    os << "}\n";
    return os.str();
}

std::string read_text(const std::string& path) {
    std::ostringstream os;
    if (path == "-") {
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Input, "cannot open '" + path + "'");
    os << in.rdbuf();
    return os.str();
}

}  // namespace adm
