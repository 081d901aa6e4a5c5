#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace adm {

/// Set of dense vertex indices with a width fixed at construction.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::size_t n, bool full = false) : n_(n), w_((n + 63) / 64, full ? ~0ULL : 0ULL) {
        trim();
    }

    std::size_t universe() const { return n_; }

    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1ULL; }
    void set(std::size_t i) { w_[i >> 6] |= 1ULL << (i & 63); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(1ULL << (i & 63)); }
    void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : w_) c += std::popcount(w);
        return c;
    }
    bool any() const {
        for (auto w : w_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    /// Smallest member, or universe() if empty.
    std::size_t first() const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k]) return k * 64 + std::countr_zero(w_[k]);
        return n_;
    }

    bool intersects(const VertexSet& o) const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k] & o.w_[k]) return true;
        return false;
    }
    bool subset_of(const VertexSet& o) const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k] & ~o.w_[k]) return false;
        return true;
    }

    VertexSet& operator|=(const VertexSet& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
        return *this;
    }
    VertexSet& operator&=(const VertexSet& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
        return *this;
    }
    VertexSet& operator-=(const VertexSet& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
        return *this;
    }
    friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
    friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
    friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }
    VertexSet complement() const {
        VertexSet r(*this);
        for (auto& w : r.w_) w = ~w;
        r.trim();
        return r;
    }

    bool operator==(const VertexSet& o) const = default;
    bool operator<(const VertexSet& o) const {
        if (n_ != o.n_) return n_ < o.n_;
        for (std::size_t k = w_.size(); k-- > 0;)
            if (w_[k] != o.w_[k]) return w_[k] < o.w_[k];
        return false;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t k = 0; k < w_.size(); ++k) {
            std::uint64_t w = w_[k];
            while (w) {
                f(k * 64 + std::countr_zero(w));
                w &= w - 1;
            }
        }
    }
    std::vector<std::size_t> members() const {
        std::vector<std::size_t> r;
        for_each([&](std::size_t i) { r.push_back(i); });
        return r;
    }

    std::size_t hash() const {
        std::size_t h = n_;
        for (auto w : w_) h = h * 1099511628211ULL ^ std::hash<std::uint64_t>{}(w);
        return h;
    }

private:
    void trim() {
        if (n_ % 64 && !w_.empty()) w_.back() &= (1ULL << (n_ % 64)) - 1;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct VertexSetHash {
    std::size_t operator()(const VertexSet& s) const { return s.hash(); }
};

}  // namespace adm
