#pragma once

#include <map>
#include <optional>
#include <vector>

#include "adm/circuit.hpp"
#include "adm/zerosum.hpp"

namespace adm {

/// Builds labeled conditions whose labels are vertex sets ("Inf meets X"). Identical sets share
/// one label; the empty set is false and the whole arena is true.
class LabelSpace {
public:
    using Ref = CircuitBuilder::Ref;

    explicit LabelSpace(std::size_t n) : n_(n) {}

    CircuitBuilder& b() { return b_; }

    Ref atom(const VertexSet& s) {
        if (s.none()) return b_.constant(false);
        if (s.count() == n_) return b_.constant(true);
        auto it = index_.find(s);
        if (it != index_.end()) return b_.input(it->second);
        auto id = static_cast<std::uint32_t>(sets_.size());
        sets_.push_back(s);
        index_.emplace(s, id);
        return b_.input(id);
    }

    /// Embeds an Inf circuit over the first `base` vertices; maximal disjunctions of inputs
    /// become single labels.
    Ref win(const Circuit& c, std::size_t base) {
        const auto& gates = c.gates();
        std::vector<std::optional<VertexSet>> pure(gates.size());
        for (std::size_t g = 0; g < gates.size(); ++g) {
            const auto& x = gates[g];
            if (x.op == Circuit::Op::Input) {
                VertexSet s(n_);
                if (x.a < base) s.set(x.a);
                pure[g] = s;
            } else if (x.op == Circuit::Op::Const && x.a == 0) {
                pure[g] = VertexSet(n_);
            } else if (x.op == Circuit::Op::Or && pure[x.a] && pure[x.b]) {
                pure[g] = *pure[x.a] | *pure[x.b];
            }
        }
        std::vector<char> needed(gates.size(), 0);
        needed[c.output()] = 1;
        for (std::size_t g = gates.size(); g-- > 0;) {
            if (!needed[g] || pure[g]) continue;
            const auto& x = gates[g];
            if (x.op == Circuit::Op::And || x.op == Circuit::Op::Or) needed[x.a] = needed[x.b] = 1;
            if (x.op == Circuit::Op::Not) needed[x.a] = 1;
        }
        std::vector<Ref> ref(gates.size(), b_.constant(false));
        for (std::size_t g = 0; g < gates.size(); ++g) {
            if (!needed[g]) continue;
            const auto& x = gates[g];
            if (pure[g]) {
                ref[g] = atom(*pure[g]);
                continue;
            }
            switch (x.op) {
            case Circuit::Op::And: ref[g] = b_.and_(ref[x.a], ref[x.b]); break;
            case Circuit::Op::Or: ref[g] = b_.or_(ref[x.a], ref[x.b]); break;
            case Circuit::Op::Not: ref[g] = b_.not_(ref[x.a]); break;
            case Circuit::Op::Const: ref[g] = b_.constant(x.a != 0); break;
            case Circuit::Op::Input: break;
            }
        }
        return ref[c.output()];
    }

    LabeledCondition finish(Ref out) const {
        LabeledCondition l;
        l.circuit = b_.finish(out);
        l.atoms = std::max<std::size_t>(sets_.size(), 1);
        l.labels.assign(n_, VertexSet(l.atoms));
        for (std::uint32_t a = 0; a < sets_.size(); ++a) sets_[a].for_each([&](std::size_t v) { l.labels[v].set(a); });
        return l;
    }

private:
    std::size_t n_;
    CircuitBuilder b_;
    std::vector<VertexSet> sets_;
    std::map<VertexSet, std::uint32_t> index_;
};

}  // namespace adm
