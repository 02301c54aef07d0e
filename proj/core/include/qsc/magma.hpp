#pragma once

#include "qsc/rational.hpp"

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qsc {

// Free magma on one generator: binary trees interned by structure. Formal
// nested pre-Lie expressions live here, independent of any carrier; the
// universal Magnus expansion is iterated on these trees and only then
// evaluated in a concrete backend (or printed).
class MagmaPool {
  public:
    MagmaPool() { nodes_.push_back({-1, -1}); }  // id 0: the generator

    int leaf() const { return 0; }

    int join(int l, int r) {
        auto [it, inserted] = index_.try_emplace({l, r}, static_cast<int>(nodes_.size()));
        if (inserted) nodes_.push_back({l, r});
        return it->second;
    }

    bool is_leaf(int id) const { return nodes_[id].first < 0; }
    int left(int id) const { return nodes_[id].first; }
    int right(int id) const { return nodes_[id].second; }

    int degree(int id) const {
        if (is_leaf(id)) return 1;
        return degree(left(id)) + degree(right(id));
    }

    // "X", "X op X", "(X op X) op X", ... with the given operator glyph.
    std::string str(int id, const std::string& op, const std::string& leaf_name = "X") const {
        if (is_leaf(id)) return leaf_name;
        return wrap(left(id), op, leaf_name) + op + wrap(right(id), op, leaf_name);
    }

  private:
    std::string wrap(int id, const std::string& op, const std::string& leaf_name) const {
        if (is_leaf(id)) return leaf_name;
        return "(" + str(id, op, leaf_name) + ")";
    }

    std::vector<std::pair<int, int>> nodes_;
    std::map<std::pair<int, int>, int> index_;
};

// Exact-rational linear combinations of trees. Satisfies the linear slice
// of the backend interface, so the graded and polynomial machinery work on
// it; the pre-Lie product is supplied as a capture of the pool.
struct MagmaBackend {
    using Element = std::map<int, Rational>;
    static constexpr bool exact = true;
    static std::string name() { return "magma"; }

    static Element add(const Element& a, const Element& b) {
        Element out = a;
        for (const auto& [id, c] : b) {
            auto [it, inserted] = out.try_emplace(id, c);
            if (!inserted) {
                it->second += c;
                if (it->second == 0) out.erase(it);
            }
        }
        return out;
    }
    static Element sub(const Element& a, const Element& b) { return add(a, scale(b, -1)); }
    static Element scale(const Element& a, const Rational& c) {
        Element out;
        if (c == 0) return out;
        for (const auto& [id, v] : a) out.emplace(id, v * c);
        return out;
    }
    static double norm(const Element& a) {
        double m = 0.0;
        for (const auto& [id, c] : a) m = std::max(m, std::abs(to_double(c)));
        return m;
    }
    static bool is_zero(const Element& a) { return a.empty(); }
    static bool equal(const Element& a, const Element& b) { return a == b; }
    static bool less(const Element& a, const Element& b) { return a < b; }
};

// Bilinear extension of the tree join; the formal pre-Lie product.
inline auto magma_tri(MagmaPool& pool) {
    return [&pool](const MagmaBackend::Element& a, const MagmaBackend::Element& b) {
        MagmaBackend::Element out;
        for (const auto& [ia, ca] : a) {
            for (const auto& [ib, cb] : b) {
                const int id = pool.join(ia, ib);
                auto [it, inserted] = out.try_emplace(id, ca * cb);
                if (!inserted) {
                    it->second += ca * cb;
                    if (it->second == 0) out.erase(it);
                }
            }
        }
        return out;
    };
}

// Evaluates a tree series in a concrete algebra: leaves become x, joins
// become the supplied pre-Lie product.
template <class B, class Tri>
typename B::Element magma_evaluate(const MagmaPool& pool, const MagmaBackend::Element& series,
                                   const typename B::Element& x, Tri&& tri) {
    using Element = typename B::Element;
    std::map<int, Element> cache;
    auto eval = [&](auto&& self, int id) -> const Element& {
        auto it = cache.find(id);
        if (it != cache.end()) return it->second;
        Element v = pool.is_leaf(id)
                        ? x
                        : tri(self(self, pool.left(id)), self(self, pool.right(id)));
        return cache.emplace(id, std::move(v)).first->second;
    };
    Element acc = B::scale(x, Rational(0));
    for (const auto& [id, c] : series) acc = B::add(acc, B::scale(eval(eval, id), c));
    return acc;
}

// Pretty printer for a tree series, coefficients as "p/q·", terms joined
// with " + " / " - ", trees ordered by (degree, id).
std::string magma_series_str(const MagmaPool& pool, const MagmaBackend::Element& series,
                             const std::string& op, const std::string& leaf_name = "X");

}  // namespace qsc
