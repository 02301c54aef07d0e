#include "qsc/magma.hpp"

#include <algorithm>

namespace qsc {

namespace {

// Degree first, then left-heavier trees first, recursively. Puts the
// left-nested expressions like (X op X) op X ahead of X op (X op X).
int tree_cmp(const MagmaPool& pool, int a, int b) {
    const int da = pool.degree(a), db = pool.degree(b);
    if (da != db) return da < db ? -1 : 1;
    const bool la = pool.is_leaf(a), lb = pool.is_leaf(b);
    if (la && lb) return 0;
    const int dla = pool.degree(pool.left(a)), dlb = pool.degree(pool.left(b));
    if (dla != dlb) return dla > dlb ? -1 : 1;
    if (const int c = tree_cmp(pool, pool.left(a), pool.left(b))) return c;
    return tree_cmp(pool, pool.right(a), pool.right(b));
}

}  // namespace

std::string magma_series_str(const MagmaPool& pool, const MagmaBackend::Element& series,
                             const std::string& op, const std::string& leaf_name) {
    if (series.empty()) return "0";
    std::vector<std::pair<std::pair<int, int>, Rational>> terms;  // ((degree, id), coeff)
    terms.reserve(series.size());
    for (const auto& [id, c] : series) terms.push_back({{pool.degree(id), id}, c});
    std::sort(terms.begin(), terms.end(), [&pool](const auto& a, const auto& b) {
        const int c = tree_cmp(pool, a.first.second, b.first.second);
        return c ? c < 0 : a.first.second < b.first.second;
    });
    std::string out;
    bool first = true;
    for (const auto& [key, c] : terms) {
        const bool neg = c < 0;
        if (first) {
            if (neg) out += '-';
        } else {
            out += neg ? " - " : " + ";
        }
        const Rational a = neg ? Rational(-c) : c;
        if (a != 1) out += rational_str(a) + "\xc2\xb7";
        out += pool.str(key.second, op, leaf_name);
        first = false;
    }
    return out;
}

}  // namespace qsc
