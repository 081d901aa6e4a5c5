#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adm/game.hpp"

namespace adm {

/// Ultimately periodic run stem · cycle^ω.
struct Lasso {
    std::vector<Vertex> stem;
    std::vector<Vertex> cycle;

    VertexSet occ(std::size_t n) const;
    VertexSet inf(std::size_t n) const;
    Vertex first() const { return stem.empty() ? cycle.front() : stem.front(); }
    std::size_t length() const { return stem.size() + cycle.size(); }

    /// Visits every transition taken by the lasso once, in order (stem, stem->cycle, cycle, wrap-around).
    template <class F>
    void for_each_edge(F&& f) const {
        for (std::size_t k = 0; k + 1 < stem.size(); ++k) f(stem[k], stem[k + 1]);
        if (!stem.empty()) f(stem.back(), cycle.front());
        for (std::size_t k = 0; k + 1 < cycle.size(); ++k) f(cycle[k], cycle[k + 1]);
        f(cycle.back(), cycle.front());
    }

    /// First structural defect with respect to `g` (empty cycle, unknown vertex, missing edge).
    std::optional<std::string> check(const Game& g) const;

    bool operator==(const Lasso&) const = default;
};

std::string to_string(const Game& g, const Lasso& l);

enum class ValueClass { ZeroThenOne, AllZero, ZeroThenMinusOne, Other };
const char* to_string(ValueClass c);

/// Classifies the value word of stem · cycle^ω, `val` giving the value of each vertex.
template <class F>
ValueClass lasso_value_sequence(const Lasso& l, F&& val) {
    if (l.cycle.empty()) return ValueClass::Other;
    int target = val(l.cycle.front());
    for (auto v : l.cycle)
        if (val(v) != target) return ValueClass::Other;
    // The stem must read 0* target*.
    bool left_zero = false;
    for (auto v : l.stem) {
        int x = val(v);
        if (x == 0) {
            if (left_zero) return ValueClass::Other;
        } else if (x == target) {
            left_zero = true;
        } else {
            return ValueClass::Other;
        }
    }
    if (target == 0) return ValueClass::AllZero;
    return target == 1 ? ValueClass::ZeroThenOne : ValueClass::ZeroThenMinusOne;
}

/// Val^n_i(v) for iterations n = 0..levels()-1; Val^{-1} is identically 0.
class ValueTable {
public:
    ValueTable() = default;
    ValueTable(std::size_t players, std::size_t vertices) : np_(players), nv_(vertices) {}

    std::size_t players() const { return np_; }
    std::size_t vertices() const { return nv_; }
    std::size_t levels() const { return data_.size(); }

    int at(int n, Player i, Vertex v) const { return n < 0 ? 0 : data_[n][std::size_t(i) * nv_ + v]; }
    void set(int n, Player i, Vertex v, int x) { data_[n][std::size_t(i) * nv_ + v] = static_cast<std::int8_t>(x); }
    void push_level() { data_.emplace_back(np_ * nv_, std::int8_t(0)); }
    void drop_last() { data_.pop_back(); }
    bool level_equal(int a, int b) const;

    bool operator==(const ValueTable&) const = default;

private:
    std::size_t np_ = 0, nv_ = 0;
    std::vector<std::vector<std::int8_t>> data_;
};

}  // namespace adm
