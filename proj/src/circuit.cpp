#include "adm/circuit.hpp"

#include <algorithm>

namespace adm {

Circuit Circuit::any_of(const VertexSet& atoms) {
    CircuitBuilder b;
    return b.finish(b.any_of(atoms));
}

Circuit Circuit::none_of(const VertexSet& atoms) {
    CircuitBuilder b;
    return b.finish(b.not_(b.any_of(atoms)));
}

bool Circuit::eval(const VertexSet& s) const {
    thread_local std::vector<char> val;
    val.resize(gates_.size());
    for (std::size_t k = 0; k < gates_.size(); ++k) {
        const Gate& g = gates_[k];
        switch (g.op) {
        case Op::Input: val[k] = g.a < s.universe() && s.test(g.a); break;
        case Op::And: val[k] = val[g.a] && val[g.b]; break;
        case Op::Or: val[k] = val[g.a] || val[g.b]; break;
        case Op::Not: val[k] = !val[g.a]; break;
        case Op::Const: val[k] = g.a != 0; break;
        }
    }
    return val[output_];
}

std::optional<std::string> Circuit::check(std::size_t atoms) const {
    if (gates_.empty()) return "circuit has no gates";
    if (output_ >= gates_.size()) return "output gate " + std::to_string(output_) + " out of range";
    for (std::size_t k = 0; k < gates_.size(); ++k) {
        const Gate& g = gates_[k];
        switch (g.op) {
        case Op::Input:
            if (g.a >= atoms) return "gate " + std::to_string(k) + " reads unknown vertex " + std::to_string(g.a);
            break;
        case Op::And:
        case Op::Or:
            if (g.a >= k || g.b >= k) return "gate " + std::to_string(k) + " references a later gate";
            break;
        case Op::Not:
            if (g.a >= k) return "gate " + std::to_string(k) + " references a later gate";
            break;
        case Op::Const: break;
        }
    }
    return std::nullopt;
}

static std::vector<char> live_gates(const std::vector<Circuit::Gate>& gates, std::uint32_t out) {
    std::vector<char> live(gates.size(), 0);
    live[out] = 1;
    for (std::size_t k = gates.size(); k-- > 0;) {
        if (!live[k]) continue;
        const auto& g = gates[k];
        if (g.op == Circuit::Op::And || g.op == Circuit::Op::Or) live[g.a] = live[g.b] = 1;
        if (g.op == Circuit::Op::Not) live[g.a] = 1;
    }
    return live;
}

VertexSet Circuit::inputs(std::size_t atoms) const {
    VertexSet r(atoms);
    auto live = live_gates(gates_, output_);
    for (std::size_t k = 0; k < gates_.size(); ++k)
        if (live[k] && gates_[k].op == Op::Input && gates_[k].a < atoms) r.set(gates_[k].a);
    return r;
}

bool Circuit::has_not() const {
    auto live = live_gates(gates_, output_);
    for (std::size_t k = 0; k < gates_.size(); ++k)
        if (live[k] && gates_[k].op == Op::Not) return true;
    return false;
}

Circuit Circuit::map_atoms(const std::function<std::uint32_t(std::uint32_t)>& f) const {
    Circuit r(*this);
    for (auto& g : r.gates_)
        if (g.op == Op::Input) g.a = f(g.a);
    return r;
}

std::string Circuit::to_postfix(const std::function<std::string(std::uint32_t)>& name) const {
    // Emit the tree below the output; shared gates are re-emitted, which is fine for postfix.
    std::vector<std::string> text(gates_.size());
    auto live = live_gates(gates_, output_);
    for (std::size_t k = 0; k < gates_.size(); ++k) {
        if (!live[k]) continue;
        const Gate& g = gates_[k];
        switch (g.op) {
        case Op::Input: text[k] = name(g.a); break;
        case Op::And: text[k] = text[g.a] + " " + text[g.b] + " AND"; break;
        case Op::Or: text[k] = text[g.a] + " " + text[g.b] + " OR"; break;
        case Op::Not: text[k] = text[g.a] + " NOT"; break;
        case Op::Const: text[k] = g.a ? "TRUE" : "FALSE"; break;
        }
    }
    return text[output_];
}

Circuit Circuit::canonical() const {
    std::vector<Gate> out;
    // Gates are topologically sorted, so the recursion depth is bounded by the circuit size.
    std::function<std::uint32_t(std::uint32_t)> emit = [&](std::uint32_t k) -> std::uint32_t {
        const Gate& g = gates_[k];
        switch (g.op) {
        case Op::Input:
        case Op::Const: out.push_back(g); break;
        case Op::Not: {
            auto a = emit(g.a);
            out.push_back({Op::Not, a, 0});
            break;
        }
        default: {
            auto a = emit(g.a);
            auto b = emit(g.b);
            out.push_back({g.op, a, b});
        }
        }
        return static_cast<std::uint32_t>(out.size() - 1);
    };
    auto root = emit(output_);
    return Circuit(std::move(out), root);
}

CircuitBuilder::CircuitBuilder() {
    false_ = add({Circuit::Op::Const, 0, 0});
    true_ = add({Circuit::Op::Const, 1, 0});
}

CircuitBuilder::Ref CircuitBuilder::add(Circuit::Gate g) {
    auto it = index_.find(g);
    if (it != index_.end()) return it->second;
    Ref r = static_cast<Ref>(gates_.size());
    gates_.push_back(g);
    index_.emplace(g, r);
    return r;
}

CircuitBuilder::Ref CircuitBuilder::input(std::uint32_t atom) { return add({Circuit::Op::Input, atom, 0}); }

CircuitBuilder::Ref CircuitBuilder::and_(Ref x, Ref y) {
    if (x == false_ || y == false_) return false_;
    if (x == true_) return y;
    if (y == true_ || x == y) return x;
    if (x > y) std::swap(x, y);
    return add({Circuit::Op::And, x, y});
}

CircuitBuilder::Ref CircuitBuilder::or_(Ref x, Ref y) {
    if (x == true_ || y == true_) return true_;
    if (x == false_) return y;
    if (y == false_ || x == y) return x;
    if (x > y) std::swap(x, y);
    return add({Circuit::Op::Or, x, y});
}

CircuitBuilder::Ref CircuitBuilder::not_(Ref x) {
    if (x == true_) return false_;
    if (x == false_) return true_;
    if (gates_[x].op == Circuit::Op::Not) return gates_[x].a;
    return add({Circuit::Op::Not, x, 0});
}

CircuitBuilder::Ref CircuitBuilder::all(const std::vector<Ref>& xs) {
    Ref r = true_;
    for (Ref x : xs) r = and_(r, x);
    return r;
}

CircuitBuilder::Ref CircuitBuilder::any(const std::vector<Ref>& xs) {
    Ref r = false_;
    for (Ref x : xs) r = or_(r, x);
    return r;
}

CircuitBuilder::Ref CircuitBuilder::any_of(const VertexSet& atoms) {
    Ref r = false_;
    atoms.for_each([&](std::size_t a) { r = or_(r, input(static_cast<std::uint32_t>(a))); });
    return r;
}

CircuitBuilder::Ref CircuitBuilder::embed(const Circuit& c, const std::function<Ref(std::uint32_t)>& atom) {
    const auto& gs = c.gates();
    std::vector<Ref> map(gs.size());
    for (std::size_t k = 0; k < gs.size(); ++k) {
        const auto& g = gs[k];
        switch (g.op) {
        case Circuit::Op::Input: map[k] = atom(g.a); break;
        case Circuit::Op::And: map[k] = and_(map[g.a], map[g.b]); break;
        case Circuit::Op::Or: map[k] = or_(map[g.a], map[g.b]); break;
        case Circuit::Op::Not: map[k] = not_(map[g.a]); break;
        case Circuit::Op::Const: map[k] = constant(g.a != 0); break;
        }
    }
    return map[c.output()];
}

Circuit CircuitBuilder::finish(Ref output) const {
    // Keep only gates below the output, renumbered in order.
    auto live = live_gates(gates_, output);
    std::vector<std::uint32_t> renum(gates_.size(), 0);
    std::vector<Circuit::Gate> out;
    for (std::size_t k = 0; k < gates_.size(); ++k) {
        if (!live[k]) continue;
        Circuit::Gate g = gates_[k];
        if (g.op == Circuit::Op::And || g.op == Circuit::Op::Or) {
            g.a = renum[g.a];
            g.b = renum[g.b];
        } else if (g.op == Circuit::Op::Not) {
            g.a = renum[g.a];
        }
        renum[k] = static_cast<std::uint32_t>(out.size());
        out.push_back(g);
    }
    return Circuit(std::move(out), renum[output]);
}

namespace {

void flatten(const std::vector<Circuit::Gate>& gs, std::uint32_t k, Circuit::Op op, std::vector<std::uint32_t>& out) {
    if (gs[k].op == op) {
        flatten(gs, gs[k].a, op, out);
        flatten(gs, gs[k].b, op, out);
    } else {
        out.push_back(k);
    }
}

// Atoms of a pure disjunction of inputs; nullopt if the gate is not of that shape.
// `trivially_true` is set when the disjunction contains Const(true).
std::optional<VertexSet> as_positive_clause(const std::vector<Circuit::Gate>& gs, std::uint32_t k,
                                            std::size_t atoms, bool& trivially_true) {
    std::vector<std::uint32_t> parts;
    flatten(gs, k, Circuit::Op::Or, parts);
    VertexSet clause(atoms);
    trivially_true = false;
    for (auto p : parts) {
        if (gs[p].op == Circuit::Op::Input && gs[p].a < atoms) {
            clause.set(gs[p].a);
        } else if (gs[p].op == Circuit::Op::Const) {
            if (gs[p].a) trivially_true = true;
        } else {
            return std::nullopt;
        }
    }
    return clause;
}

}  // namespace

std::optional<LiteralCnf> as_literal_cnf(const Circuit& c, std::size_t atoms) {
    const auto& gs = c.gates();
    std::vector<std::uint32_t> conj;
    flatten(gs, c.output(), Circuit::Op::And, conj);
    LiteralCnf r;
    r.forbidden = VertexSet(atoms);
    for (auto k : conj) {
        const auto& g = gs[k];
        if (g.op == Circuit::Op::Const) {
            if (!g.a) r.unsatisfiable = true;
            continue;
        }
        if (g.op == Circuit::Op::Not) {
            bool tt = false;
            auto clause = as_positive_clause(gs, g.a, atoms, tt);
            if (!clause) return std::nullopt;
            if (tt) r.unsatisfiable = true;
            r.forbidden |= *clause;
            continue;
        }
        bool tt = false;
        auto clause = as_positive_clause(gs, k, atoms, tt);
        if (!clause) return std::nullopt;
        if (tt) continue;
        if (clause->none()) r.unsatisfiable = true;
        r.clauses.push_back(*clause);
    }
    return r;
}

}  // namespace adm
