#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "adm/bitset.hpp"

namespace adm {

/// Boolean circuit over atom indicators (atoms are vertex indices of some arena).
/// Gates are topologically sorted: a gate only references gates with a smaller index.
class Circuit {
public:
    enum class Op : std::uint8_t { Input, And, Or, Not, Const };
    struct Gate {
        Op op = Op::Const;
        std::uint32_t a = 0;  // Input: atom, Const: value, otherwise first operand
        std::uint32_t b = 0;
        bool operator==(const Gate&) const = default;
    };

    Circuit() : gates_{{Op::Const, 0, 0}}, output_(0) {}
    Circuit(std::vector<Gate> gates, std::uint32_t output) : gates_(std::move(gates)), output_(output) {}

    static Circuit constant(bool v) { return Circuit({{Op::Const, v ? 1u : 0u, 0}}, 0); }
    /// Disjunction of the given atoms (false when empty).
    static Circuit any_of(const VertexSet& atoms);
    /// Negated disjunction: none of the atoms.
    static Circuit none_of(const VertexSet& atoms);

    const std::vector<Gate>& gates() const { return gates_; }
    std::uint32_t output() const { return output_; }

    bool eval(const VertexSet& s) const;

    /// Describes the first structural defect, if any, for a universe of `atoms` atoms.
    std::optional<std::string> check(std::size_t atoms) const;

    /// Atoms read by gates reachable from the output.
    VertexSet inputs(std::size_t atoms) const;
    bool has_not() const;

    /// Renames atoms; `f` returns the new atom for each old one.
    Circuit map_atoms(const std::function<std::uint32_t(std::uint32_t)>& f) const;

    /// Postfix rendering with atom names supplied by `name`.
    std::string to_postfix(const std::function<std::string(std::uint32_t)>& name) const;

    /// Tree-shaped copy laid out in postfix order, the form produced by parsing a postfix rendering.
    Circuit canonical() const;

    bool operator==(const Circuit&) const = default;

private:
    std::vector<Gate> gates_;
    std::uint32_t output_;
};

/// Hash-consing builder with constant folding.
class CircuitBuilder {
public:
    using Ref = std::uint32_t;

    CircuitBuilder();

    Ref constant(bool v) { return v ? true_ : false_; }
    Ref input(std::uint32_t atom);
    Ref and_(Ref x, Ref y);
    Ref or_(Ref x, Ref y);
    Ref not_(Ref x);
    Ref implies(Ref x, Ref y) { return or_(not_(x), y); }
    Ref all(const std::vector<Ref>& xs);
    Ref any(const std::vector<Ref>& xs);
    Ref any_of(const VertexSet& atoms);

    /// Copies `c` into this builder, replacing each input atom `a` by `atom(a)`.
    Ref embed(const Circuit& c, const std::function<Ref(std::uint32_t)>& atom);
    Ref embed(const Circuit& c) {
        return embed(c, [this](std::uint32_t a) { return input(a); });
    }

    bool is_const(Ref x, bool v) const { return x == (v ? true_ : false_); }

    Circuit finish(Ref output) const;

private:
    Ref add(Circuit::Gate g);
    struct GateHash {
        std::size_t operator()(const Circuit::Gate& g) const {
            return (std::size_t(g.op) * 0x9E3779B97F4A7C15ULL) ^ (std::size_t(g.a) << 24) ^ g.b;
        }
    };
    std::vector<Circuit::Gate> gates_;
    std::unordered_map<Circuit::Gate, Ref, GateHash> index_;
    Ref false_ = 0, true_ = 1;
};

/// A circuit recognised as a conjunction of positive clauses and negative literals
/// ("visit some atom of each clause, avoid every forbidden atom").
struct LiteralCnf {
    std::vector<VertexSet> clauses;
    VertexSet forbidden;
    bool unsatisfiable = false;
};

std::optional<LiteralCnf> as_literal_cnf(const Circuit& c, std::size_t atoms);

}  // namespace adm
