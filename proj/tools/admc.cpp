#include <chrono>
#include <functional>
#include <memory>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "adm/buchi.hpp"
#include "adm/errors.hpp"
#include "adm/general.hpp"
#include "adm/generators.hpp"
#include "adm/io.hpp"
#include "adm/queries.hpp"
#include "adm/safety.hpp"
#include "adm/weak.hpp"

using namespace adm;
using json = nlohmann::ordered_json;

namespace {

struct Flags {
    std::string format = "text";
    std::string dot;
    std::string engine = "auto";
    bool serial = false;
    bool timings = false;
    std::size_t max_visited = VisitedOptions{}.max_vertices;
    std::size_t max_states = VisitedOptions{}.max_states;
};

using Clock = std::chrono::steady_clock;

class Report {
public:
    explicit Report(const Flags& f) : f_(f), start_(Clock::now()) {}

    bool json_mode() const { return f_.format == "json-lines"; }

    /// Emits one verdict record. Timings are only included on request so that reports stay
    /// byte-identical across runs.
    void verdict(json rec) {
        json t = json::object();
        if (f_.timings)
            t["total_ms"] =
                std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
        rec["timings"] = t;
        if (json_mode()) std::cout << rec.dump() << '\n';
    }
    void text(const std::string& s) {
        if (!json_mode()) std::cout << s;
    }

private:
    const Flags& f_;
    Clock::time_point start_;
};

json lasso_json(const Game& g, const Lasso& l) {
    json stem = json::array(), cycle = json::array();
    for (auto v : l.stem) stem.push_back(g.names[v]);
    for (auto v : l.cycle) cycle.push_back(g.names[v]);
    return json{{"stem", stem}, {"cycle", cycle}};
}

Game load_game(const std::string& path) { return parse_game(read_text(path)); }

QueryOptions query_options(const Flags& f) {
    QueryOptions q;
    q.engine = engine_from_string(f.engine);
    auto pol = f.serial ? ExecutionPolicy::Serial : ExecutionPolicy::Parallel;
    q.general.policy = pol;
    q.weak.policy = pol;
    q.weak.visited.max_vertices = f.max_visited;
    q.weak.visited.max_states = f.max_states;
    return q;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Input, "cannot write '" + path + "'");
    out << text;
}

/// Uniform view of one engine run: arena, value table and surviving edges.
struct ValueView {
    std::string engine;
    const Game* arena = nullptr;
    std::function<int(int, Player, Vertex)> value;
    std::function<bool(Vertex, Vertex, int)> alive;
    int levels = 0;
    int fixpoint_at = 0;
    int stable_level = 0;
    int elimination_rounds = -1;
};

struct EngineRun {
    std::optional<SafetyIteration> safety;
    std::optional<GeneralIteration> general;
    std::optional<BuchiIteration> buchi;
    std::optional<WeakIteration> weak;
    ValueView view;
};

std::unique_ptr<EngineRun> run_engine(const Game& g, const Flags& f, std::size_t max_levels) {
    require_valid(g);
    auto q = query_options(f);
    auto kind = select_engine(g, q.engine);
    auto r = std::make_unique<EngineRun>();
    ValueView& v = r->view;
    v.engine = to_string(kind);
    switch (kind) {
    case EngineKind::Safety: {
        r->safety = iterate_safety(g);
        const auto& it = *r->safety;
        v.arena = &it.arena();
        v.value = [&it](int n, Player i, Vertex x) { return it.values.at(n, i, x); };
        v.alive = [&it](Vertex a, Vertex b, int n) { return it.edges.alive(it.arena(), a, b, n + 1); };
        v.levels = static_cast<int>(it.values.levels());
        v.fixpoint_at = it.fixpoint_at;
        v.stable_level = it.final_level();
        v.elimination_rounds = it.elimination_rounds;
        break;
    }
    case EngineKind::Buchi: {
        BuchiOptions bo;
        bo.policy = q.general.policy;
        bo.max_levels = max_levels;
        r->buchi = run_buchi(g, bo);
        const auto& it = *r->buchi;
        v.arena = &g;
        v.value = [&it](int n, Player i, Vertex x) { return it.values.at(n, i, x); };
        if (it.compiled) {
            // A game edge survives when some monitor copy of it does.
            v.alive = [&it](Vertex a, Vertex b, int n) {
                const Product& p = *it.compiled;
                for (auto x : p.index[a]) {
                    if (x == Product::kNoVertex) continue;
                    for (auto y : p.game.succ[x])
                        if (p.base[y] == b && it.engine.edge_alive(x, y, n)) return true;
                }
                return false;
            };
        } else {
            v.alive = [&it](Vertex a, Vertex b, int n) { return it.engine.edge_alive(a, b, n); };
        }
        v.levels = it.engine.levels();
        v.fixpoint_at = it.fixpoint_at;
        v.stable_level = it.stable_level;
        break;
    }
    case EngineKind::Weak: {
        q.weak.max_levels = max_levels;
        r->weak = run_weak(g, q.weak);
        const auto& it = *r->weak;
        v.arena = &it.engine.unfolding().game;
        v.value = [&it](int n, Player i, Vertex x) { return it.engine.value(n, i, x); };
        v.alive = [&it](Vertex a, Vertex b, int n) { return it.engine.edge_alive(a, b, n); };
        v.levels = it.engine.levels();
        v.fixpoint_at = it.fixpoint_at;
        v.stable_level = it.stable_level;
        break;
    }
    default: {
        q.general.max_levels = max_levels;
        r->general = run_to_fixpoint(g, q.general);
        const auto& it = *r->general;
        v.arena = &g;
        v.value = [&it](int n, Player i, Vertex x) { return it.kernel.value(n, i, x); };
        v.alive = [&it](Vertex a, Vertex b, int n) { return it.kernel.edge_alive(a, b, n); };
        v.levels = it.kernel.levels();
        v.fixpoint_at = it.fixpoint_at;
        v.stable_level = it.stable_level;
        v.engine = "general";
    }
    }
    return r;
}

std::vector<std::pair<Vertex, Vertex>> removed_edges(const ValueView& v) {
    std::vector<std::pair<Vertex, Vertex>> out;
    const Game& a = *v.arena;
    for (Vertex x = 0; x < a.num_vertices(); ++x)
        for (auto y : a.succ[x])
            if (!v.alive(x, y, v.stable_level)) out.emplace_back(x, y);
    return out;
}

int cmd_validate(const std::string& path, Report& rep) {
    Game g = load_game(path);
    auto issues = validate_game(g);
    json rec{{"command", "validate"}, {"verdict", issues.empty() ? "valid" : "invalid"}, {"issues", issues}};
    std::ostringstream os;
    if (issues.empty()) {
        os << "valid: " << g.num_players() << " players, " << g.num_vertices() << " vertices, " << g.num_edges()
           << " edges\n";
    } else {
        for (const auto& s : issues) os << "invalid: " << s << '\n';
    }
    rep.text(os.str());
    rep.verdict(rec);
    return issues.empty() ? 0 : 1;
}

int cmd_values(const std::string& path, const Flags& f, int iterations, bool fixpoint, Report& rep) {
    Game g = load_game(path);
    auto run = run_engine(g, f, fixpoint || iterations <= 0 ? 0 : static_cast<std::size_t>(iterations));
    const ValueView& v = run->view;
    const Game& a = *v.arena;
    int shown = fixpoint || iterations <= 0 ? v.levels : std::min(v.levels, iterations);
    std::ostringstream os;
    os << "engine " << v.engine << '\n';
    os << "arena " << a.num_vertices() << " vertices\n";
    json levels = json::array();
    for (int n = 0; n < shown; ++n) {
        os << "iteration " << n << '\n';
        json lv = json::object();
        for (Vertex x = 0; x < a.num_vertices(); ++x) {
            os << "  " << a.names[x];
            json per = json::object();
            for (Player i = 0; i < a.num_players(); ++i) {
                int val = v.value(n, i, x);
                os << ' ' << a.players[i] << '=' << val;
                per[a.players[i]] = val;
            }
            os << '\n';
            lv[a.names[x]] = per;
        }
        levels.push_back(lv);
    }
    auto removed = removed_edges(v);
    json rem = json::array();
    for (auto [x, y] : removed) {
        os << "removed " << a.names[x] << " -> " << a.names[y] << '\n';
        rem.push_back(json::array({a.names[x], a.names[y]}));
    }
    os << "fixpoint " << v.fixpoint_at << '\n';
    if (v.elimination_rounds >= 0) os << "elimination rounds " << v.elimination_rounds << '\n';
    rep.text(os.str());
    json rec{{"command", "values"}, {"verdict", "computed"}, {"engine", v.engine}, {"witness", nullptr},
             {"iterations", v.fixpoint_at}, {"levels", levels}, {"removed", rem}};
    if (v.elimination_rounds >= 0) rec["elimination_rounds"] = v.elimination_rounds;
    rep.verdict(rec);
    if (!f.dot.empty()) write_file(f.dot, to_dot(a, [&](Vertex x, Vertex y) { return v.alive(x, y, v.stable_level); }));
    return 0;
}

int cmd_prune(const std::string& path, const Flags& f, Report& rep) {
    Game g = load_game(path);
    auto run = run_engine(g, f, 0);
    const ValueView& v = run->view;
    const Game& a = *v.arena;
    Game pruned = a;
    for (Vertex x = 0; x < a.num_vertices(); ++x) {
        pruned.succ[x].clear();
        for (auto y : a.succ[x])
            if (v.alive(x, y, v.stable_level)) pruned.succ[x].push_back(y);
    }
    std::ostringstream os;
    json rem = json::array();
    for (auto [x, y] : removed_edges(v)) {
        os << "# removed " << a.names[x] << " -> " << a.names[y] << '\n';
        rem.push_back(json::array({a.names[x], a.names[y]}));
    }
    os << serialize_game(pruned);
    rep.text(os.str());
    rep.verdict(json{{"command", "prune"}, {"verdict", "pruned"}, {"engine", v.engine}, {"witness", nullptr},
                     {"iterations", v.fixpoint_at}, {"removed", rem}, {"arena", serialize_game(pruned)}});
    if (!f.dot.empty()) write_file(f.dot, to_dot(a, [&](Vertex x, Vertex y) { return v.alive(x, y, v.stable_level); }));
    return 0;
}

int cmd_coalition(const std::string& path, const Flags& f, const std::string& win_s, const std::string& lose_s,
                  const std::string& witness_out, Report& rep) {
    Game g = load_game(path);
    require_valid(g);
    VertexSet win = parse_players(g, win_s), lose = parse_players(g, lose_s);
    AdmContext ctx = analyse(g, query_options(f));
    CoalitionAnswer ans = coalition(ctx, win, lose);
    std::ostringstream os;
    os << (ans.yes ? "yes" : "no") << '\n';
    json rec{{"command", "coalition"}, {"verdict", ans.yes ? "yes" : "no"}, {"engine", to_string(ctx.engine)}};
    if (ans.witness) {
        os << "witness " << to_string(g, *ans.witness) << '\n';
        rec["witness"] = lasso_json(g, *ans.witness);
        if (!witness_out.empty())
            write_file(witness_out, serialize_witness({game_fingerprint(g), "coalition", win, lose, *ans.witness}, g));
    } else {
        rec["witness"] = nullptr;
    }
    os << "iterations " << ans.iterations << '\n';
    rec["iterations"] = ans.iterations;
    rep.text(os.str());
    rep.verdict(rec);
    if (!f.dot.empty()) write_file(f.dot, to_dot(ctx.arena()));
    return ans.yes ? 0 : 1;
}

int cmd_mc(const std::string& path, const Flags& f, const std::string& spec_path, const std::string& witness_out,
           Report& rep) {
    Game g = load_game(path);
    require_valid(g);
    BuchiAutomaton neg = parse_buchi(read_text(spec_path), g);
    AdmContext ctx = analyse(g, query_options(f));
    McAnswer ans = mc_under_admissibility(ctx, neg);
    std::ostringstream os;
    os << (ans.holds ? "holds" : "fails") << '\n';
    json rec{{"command", "mc-adm"}, {"verdict", ans.holds ? "holds" : "fails"}, {"engine", to_string(ctx.engine)}};
    if (ans.counterexample) {
        os << "counterexample " << to_string(g, *ans.counterexample) << '\n';
        rec["witness"] = lasso_json(g, *ans.counterexample);
        if (!witness_out.empty())
            write_file(witness_out, serialize_witness({game_fingerprint(g), "mc-adm", VertexSet(g.num_players()),
                                                       VertexSet(g.num_players()), *ans.counterexample},
                                                      g));
    } else {
        rec["witness"] = nullptr;
    }
    os << "iterations " << ans.iterations << '\n' << "product " << ans.product_size << " states\n";
    rec["iterations"] = ans.iterations;
    rec["product_size"] = ans.product_size;
    rep.text(os.str());
    rep.verdict(rec);
    return ans.holds ? 0 : 1;
}

int cmd_replay(const std::string& path, const Flags& f, const std::string& witness_path, const std::string& spec_path,
               Report& rep) {
    Game g = load_game(path);
    require_valid(g);
    WitnessFile w = parse_witness(read_text(witness_path), g);
    std::string fp = game_fingerprint(g);
    if (!w.fingerprint.empty() && w.fingerprint != fp)
        fail(ErrorKind::Input, "stale context: witness was produced for game " + w.fingerprint + ", not " + fp);
    AdmContext ctx = analyse(g, query_options(f));
    Certificate c;
    if (w.query == "mc-adm") {
        if (spec_path.empty()) fail(ErrorKind::Input, "replaying an mc-adm witness needs --neg-spec");
        c = witness_replay(ctx, w.lasso, parse_buchi(read_text(spec_path), g));
    } else {
        c = witness_replay(ctx, w.lasso, w.win, w.lose);
    }
    std::ostringstream os;
    os << (c.ok ? "valid" : "rejected") << '\n';
    if (c.violation) os << "violation " << *c.violation << '\n';
    for (const auto& t : c.trace) os << "  " << t << '\n';
    rep.text(os.str());
    json rec{{"command", "replay"}, {"verdict", c.ok ? "valid" : "rejected"}, {"witness", lasso_json(g, w.lasso)},
             {"iterations", ctx.fixpoint_at()}};
    rec["violation"] = c.violation ? json(*c.violation) : json(nullptr);
    rep.verdict(rec);
    return c.ok ? 0 : 1;
}

void emit_game(const Game& g, const std::string& out) {
    if (out.empty() || out == "-")
        std::cout << serialize_game(g);
    else
        write_file(out, serialize_game(g));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"admc: iterated admissibility for multiplayer games on graphs"};
    app.require_subcommand(1);
    Flags f;
    app.add_option("--format", f.format, "Report format")->check(CLI::IsMember({"text", "json-lines"}));
    app.add_option("--dot", f.dot, "Write the analysed arena as a Graphviz file");
    app.add_flag("--serial", f.serial, "Run per-player checks serially");
    app.add_flag("--timings", f.timings, "Include wall-clock timings in json-lines records");
    app.add_option("--max-visited", f.max_visited, "Largest game for the visited-set unfolding");
    app.add_option("--max-states", f.max_states, "Largest visited-set unfolding");

    std::string game_path, witness_out, spec_path, witness_path, win_s, lose_s;
    int iterations = 0;
    bool fixpoint = false;

    auto* validate = app.add_subcommand("validate", "Check a game file");
    validate->add_option("game", game_path, "Game file ('-' for stdin)")->required();

    auto* values = app.add_subcommand("values", "Print Val^n for every player and vertex");
    values->add_option("game", game_path)->required();
    values->add_option("--engine", f.engine)->check(CLI::IsMember({"auto", "safety", "general", "buchi", "weak"}));
    auto* it_opt = values->add_option("--iterations", iterations, "Number of iterations to print");
    values->add_flag("--fixpoint", fixpoint, "Run to the fixpoint")->excludes(it_opt);

    auto* prune = app.add_subcommand("prune", "Emit the arena restricted to surviving transitions");
    prune->add_option("game", game_path)->required();
    prune->add_option("--engine", f.engine)->check(CLI::IsMember({"auto", "safety", "general", "buchi", "weak"}));

    auto* coal = app.add_subcommand("coalition", "Winning coalition problem");
    coal->add_option("game", game_path)->required();
    coal->add_option("--win", win_s, "Players that must win");
    coal->add_option("--lose", lose_s, "Players that must lose");
    coal->add_option("--witness-out", witness_out, "Write the witness lasso to a file");
    coal->add_option("--engine", f.engine)->check(CLI::IsMember({"auto", "safety", "general", "buchi", "weak"}));

    auto* mc = app.add_subcommand("mc-adm", "Model checking under admissibility");
    mc->add_option("game", game_path)->required();
    mc->add_option("--neg-spec", spec_path, "Büchi automaton for the negated specification")->required();
    mc->add_option("--witness-out", witness_out, "Write the counterexample to a file");
    mc->add_option("--engine", f.engine)->check(CLI::IsMember({"auto", "safety", "general", "buchi", "weak"}));

    auto* replay = app.add_subcommand("replay", "Re-check a witness file");
    replay->add_option("game", game_path)->required();
    replay->add_option("--witness", witness_path, "Witness file")->required();
    replay->add_option("--neg-spec", spec_path, "Automaton of an mc-adm witness");
    replay->add_option("--engine", f.engine)->check(CLI::IsMember({"auto", "safety", "general", "buchi", "weak"}));

    auto* gen = app.add_subcommand("gen", "Generate games");
    gen->require_subcommand(1);
    std::string out_path, formula, objective = "buchi";
    int slots = 6, trains = 2;
    RandomSpec rs;
    auto* gq = gen->add_subcommand("qbf", "Safety encoding of a QBF");
    gq->add_option("formula", formula, "e.g. \"exists x forall y . (x | ~y)\"")->required();
    gq->add_option("-o,--output", out_path);
    auto* gqr = gen->add_subcommand("qbf-reach", "Reachability encoding of a QBF");
    gqr->add_option("formula", formula)->required();
    gqr->add_option("-o,--output", out_path);
    auto* gm = gen->add_subcommand("metro", "Metro ring");
    gm->add_option("--slots", slots);
    gm->add_option("--trains", trains);
    gm->add_option("-o,--output", out_path);
    auto* gr = gen->add_subcommand("random", "Seeded random game");
    gr->add_option("--seed", rs.seed);
    gr->add_option("--vertices", rs.vertices);
    gr->add_option("--players", rs.players);
    gr->add_option("--density", rs.density)->check(CLI::Range(0.0, 1.0));
    gr->add_option("--objective", objective)
        ->check(CLI::IsMember({"safety", "reachability", "buchi", "parity", "muller", "weak"}));
    gr->add_option("--max-color", rs.max_color);
    gr->add_option("-o,--output", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    Report rep(f);
    try {
        if (*validate) return cmd_validate(game_path, rep);
        if (*values) return cmd_values(game_path, f, iterations, fixpoint, rep);
        if (*prune) return cmd_prune(game_path, f, rep);
        if (*coal) return cmd_coalition(game_path, f, win_s, lose_s, witness_out, rep);
        if (*mc) return cmd_mc(game_path, f, spec_path, witness_out, rep);
        if (*replay) return cmd_replay(game_path, f, witness_path, spec_path, rep);
        if (*gq) emit_game(gen_qbf_safety(parse_qbf(formula)), out_path);
        if (*gqr) emit_game(gen_qbf_reachability(parse_qbf(formula)), out_path);
        if (*gm) emit_game(gen_metro(slots, trains), out_path);
        if (*gr) {
            rs.objective = random_objective_from_string(objective);
            emit_game(gen_random(rs), out_path);
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
}
