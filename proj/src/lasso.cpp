#include "adm/lasso.hpp"

namespace adm {

VertexSet Lasso::occ(std::size_t n) const {
    VertexSet s(n);
    for (auto v : stem) s.set(v);
    for (auto v : cycle) s.set(v);
    return s;
}

VertexSet Lasso::inf(std::size_t n) const {
    VertexSet s(n);
    for (auto v : cycle) s.set(v);
    return s;
}

std::optional<std::string> Lasso::check(const Game& g) const {
    if (cycle.empty()) return std::string("empty cycle");
    for (auto v : stem)
        if (v >= g.num_vertices()) return std::string("unknown vertex in stem");
    for (auto v : cycle)
        if (v >= g.num_vertices()) return std::string("unknown vertex in cycle");
    std::optional<std::string> bad;
    for_each_edge([&](Vertex u, Vertex v) {
        if (!bad && !g.has_edge(u, v)) bad = "missing edge " + g.names[u] + " -> " + g.names[v];
    });
    return bad;
}

std::string to_string(const Game& g, const Lasso& l) {
    std::string s;
    for (auto v : l.stem) s += g.names[v] + " ";
    s += "(";
    for (std::size_t k = 0; k < l.cycle.size(); ++k) s += (k ? " " : "") + g.names[l.cycle[k]];
    s += ")^w";
    return s;
}

const char* to_string(ValueClass c) {
    switch (c) {
    case ValueClass::ZeroThenOne: return "0*1^w";
    case ValueClass::AllZero: return "0^w";
    case ValueClass::ZeroThenMinusOne: return "0*(-1)^w";
    case ValueClass::Other: return "other";
    }
    return "?";
}

bool ValueTable::level_equal(int a, int b) const {
    auto get = [&](int n) -> std::vector<std::int8_t> {
        if (n < 0) return std::vector<std::int8_t>(np_ * nv_, 0);
        return data_[n];
    };
    return get(a) == get(b);
}

}  // namespace adm
