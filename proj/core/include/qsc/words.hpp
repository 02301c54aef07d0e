#pragma once

#include "qsc/errors.hpp"
#include "qsc/rational.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qsc {

// Letters of the free quasi-shuffle algebra live in a monoid. The default
// monoid is (Z+, +): positive integers that fuse by addition, so e.g.
// bracketing the one-letter words 3 and 1 produces the letter 4.
struct AdditiveMonoid {
    using Letter = std::uint32_t;
    static Letter combine(Letter a, Letter b) { return a + b; }
    static bool less(Letter a, Letter b) { return a < b; }
};

template <class M>
using BasicWord = std::vector<typename M::Letter>;

using Letter = AdditiveMonoid::Letter;
using Word = BasicWord<AdditiveMonoid>;

// Length-lexicographic word order: shorter words first, ties broken
// letter-by-letter. Fixed once so serialization and golden files are
// deterministic.
template <class M>
struct LengthLexLess {
    using W = BasicWord<M>;
    bool operator()(const W& a, const W& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (M::less(a[i], b[i])) return true;
            if (M::less(b[i], a[i])) return false;
        }
        return false;
    }
};

// Finite linear combination of words with exact rational coefficients.
// Zero coefficients are never stored; terms iterate in length-lex order.
template <class M>
class BasicWordSeries {
  public:
    using Letter = typename M::Letter;
    using W = BasicWord<M>;
    using Terms = std::map<W, Rational, LengthLexLess<M>>;

    BasicWordSeries() = default;

    static BasicWordSeries single(W w, Rational c = 1) {
        BasicWordSeries s;
        s.add_term(std::move(w), std::move(c));
        return s;
    }
    static BasicWordSeries unit() { return single(W{}); }
    static BasicWordSeries zero() { return {}; }

    void add_term(W w, Rational c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(std::move(w), c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool contains_empty_word() const {
        return !terms_.empty() && terms_.begin()->first.empty();
    }

    // Largest |coefficient| as a double; 0 for the zero series.
    double norm() const {
        double m = 0.0;
        for (const auto& [w, c] : terms_) {
            const double a = std::abs(to_double(c));
            if (a > m) m = a;
        }
        return m;
    }

    int min_word_length() const {
        return terms_.empty() ? 0 : static_cast<int>(terms_.begin()->first.size());
    }
    int max_word_length() const {
        return terms_.empty() ? 0 : static_cast<int>(terms_.rbegin()->first.size());
    }

    // Drops every term whose word is longer than max_len.
    BasicWordSeries truncate_length(int max_len) const {
        BasicWordSeries s;
        for (const auto& [w, c] : terms_) {
            if (static_cast<int>(w.size()) <= max_len) s.terms_.emplace(w, c);
        }
        return s;
    }

    BasicWordSeries& operator+=(const BasicWordSeries& o) {
        for (const auto& [w, c] : o.terms_) add_term(w, c);
        return *this;
    }
    BasicWordSeries& operator-=(const BasicWordSeries& o) {
        for (const auto& [w, c] : o.terms_) add_term(w, -c);
        return *this;
    }
    BasicWordSeries& operator*=(const Rational& c) {
        if (c == 0) {
            terms_.clear();
        } else {
            for (auto& [w, v] : terms_) v *= c;
        }
        return *this;
    }

    friend BasicWordSeries operator+(BasicWordSeries a, const BasicWordSeries& b) {
        a += b;
        return a;
    }
    friend BasicWordSeries operator-(BasicWordSeries a, const BasicWordSeries& b) {
        a -= b;
        return a;
    }
    friend BasicWordSeries operator*(const Rational& c, BasicWordSeries s) {
        s *= c;
        return s;
    }
    friend bool operator==(const BasicWordSeries& a, const BasicWordSeries& b) {
        return a.terms_ == b.terms_;
    }

    // Total order, used to keep polynomial monomials canonical.
    static bool less(const BasicWordSeries& a, const BasicWordSeries& b) {
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        LengthLexLess<M> wl;
        for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
            if (wl(ia->first, ib->first)) return true;
            if (wl(ib->first, ia->first)) return false;
            if (ia->second != ib->second) return ia->second < ib->second;
        }
        return ia == a.terms_.end() && ib != b.terms_.end();
    }

  private:
    Terms terms_;
};

namespace detail {

// Prepends one letter to every word of a series.
template <class M>
BasicWordSeries<M> prefix_letter(typename M::Letter l, const BasicWordSeries<M>& s) {
    BasicWordSeries<M> out;
    for (const auto& [w, c] : s.terms()) {
        BasicWord<M> nw;
        nw.reserve(w.size() + 1);
        nw.push_back(l);
        nw.insert(nw.end(), w.begin(), w.end());
        out.add_term(std::move(nw), c);
    }
    return out;
}

// Products of one word pair. The table dp[i][j] holds the full product of
// the suffixes x[i:] and y[j:], so a single bottom-up pass yields the
// product together with all three one-step unfoldings:
//   x prec y    = x0 (x' * y)      = prefix(x0, dp[1][0])
//   x succ y    = y0 (x  * y')     = prefix(y0, dp[0][1])
//   [x, y]      = (x0.y0)(x' * y') = prefix(x0.y0, dp[1][1])
template <class M>
struct WordPairProducts {
    BasicWordSeries<M> prec, succ, bracket, product;
};

template <class M>
WordPairProducts<M> quad_products(const BasicWord<M>& x, const BasicWord<M>& y) {
    using S = BasicWordSeries<M>;
    const std::size_t n = x.size(), m = y.size();
    std::vector<std::vector<S>> dp(n + 1, std::vector<S>(m + 1));
    dp[n][m] = S::unit();
    for (std::size_t i = n; i-- > 0;)
        dp[i][m] = S::single(BasicWord<M>(x.begin() + i, x.end()));
    for (std::size_t j = m; j-- > 0;)
        dp[n][j] = S::single(BasicWord<M>(y.begin() + j, y.end()));
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = m; j-- > 0;) {
            S v = prefix_letter<M>(x[i], dp[i + 1][j]);
            v += prefix_letter<M>(y[j], dp[i][j + 1]);
            v += prefix_letter<M>(M::combine(x[i], y[j]), dp[i + 1][j + 1]);
            dp[i][j] = std::move(v);
        }
    }
    WordPairProducts<M> out;
    out.product = std::move(dp[0][0]);
    if (n > 0 && m > 0) {
        out.prec = prefix_letter<M>(x[0], dp[1][0]);
        out.succ = prefix_letter<M>(y[0], dp[0][1]);
        out.bracket = prefix_letter<M>(M::combine(x[0], y[0]), dp[1][1]);
    }
    return out;
}

enum class WordOp { Prec, Succ, Bracket, Product };

template <class M>
BasicWordSeries<M> bilinear(WordOp op, const BasicWordSeries<M>& a, const BasicWordSeries<M>& b) {
    if (op != WordOp::Product && (a.contains_empty_word() || b.contains_empty_word()))
        throw UnitOperand("half-shuffles and the bracket are undefined on the empty word");
    BasicWordSeries<M> out;
    for (const auto& [wa, ca] : a.terms()) {
        for (const auto& [wb, cb] : b.terms()) {
            const Rational c = ca * cb;
            auto quad = quad_products<M>(wa, wb);
            switch (op) {
                case WordOp::Prec: out += c * std::move(quad.prec); break;
                case WordOp::Succ: out += c * std::move(quad.succ); break;
                case WordOp::Bracket: out += c * std::move(quad.bracket); break;
                case WordOp::Product: out += c * std::move(quad.product); break;
            }
        }
    }
    return out;
}

}  // namespace detail

// The three quasi-shuffle products and the associative product they sum to,
// extended bilinearly from the inductive definitions on words. prec, succ
// and bracket require both operands to avoid the empty word; product treats
// the empty word as its two-sided unit.
template <class M>
BasicWordSeries<M> prec(const BasicWordSeries<M>& a, const BasicWordSeries<M>& b) {
    return detail::bilinear(detail::WordOp::Prec, a, b);
}
template <class M>
BasicWordSeries<M> succ(const BasicWordSeries<M>& a, const BasicWordSeries<M>& b) {
    return detail::bilinear(detail::WordOp::Succ, a, b);
}
template <class M>
BasicWordSeries<M> bracket(const BasicWordSeries<M>& a, const BasicWordSeries<M>& b) {
    return detail::bilinear(detail::WordOp::Bracket, a, b);
}
template <class M>
BasicWordSeries<M> product(const BasicWordSeries<M>& a, const BasicWordSeries<M>& b) {
    return detail::bilinear(detail::WordOp::Product, a, b);
}

// Independent oracle for the quasi-shuffle product of two words: enumerate
// every order-preserving interleaving of x and y in which any number of
// pairs (one letter from each word) fuse via the monoid product. This walks
// move sequences directly and never touches the half-shuffle recursion.
template <class M>
BasicWordSeries<M> oracle_product(const BasicWord<M>& x, const BasicWord<M>& y) {
    using S = BasicWordSeries<M>;
    if (x.empty() || y.empty())
        throw UnitOperand("oracle_product expects non-empty words");
    S out;
    BasicWord<M> cur;
    cur.reserve(x.size() + y.size());
    auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> void {
        if (i == x.size() && j == y.size()) {
            out.add_term(cur, 1);
            return;
        }
        if (i < x.size()) {
            cur.push_back(x[i]);
            self(self, i + 1, j);
            cur.pop_back();
        }
        if (j < y.size()) {
            cur.push_back(y[j]);
            self(self, i, j + 1);
            cur.pop_back();
        }
        if (i < x.size() && j < y.size()) {
            cur.push_back(M::combine(x[i], y[j]));
            self(self, i + 1, j + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0, 0);
    return out;
}

using WordSeries = BasicWordSeries<AdditiveMonoid>;

// Text form of a series over the default monoid. Words print as
// space-separated letters, the empty word as "e", terms join with " + "
// (or " - " for negative coefficients) and non-unit coefficients carry a
// "p/q·" prefix, e.g. "2 3 1 + 2 1 3 + 2 4" or "1 - 1/2·2 3".
std::string to_string(const WordSeries& s);

// Inverse of to_string; also accepts '*' in place of '·'. Letters must be
// positive integers. Throws Error on malformed input.
WordSeries parse_word_series(const std::string& text);

// Single word from space-separated positive integers, e.g. "2 3".
Word parse_word(const std::string& text);

extern template class BasicWordSeries<AdditiveMonoid>;

}  // namespace qsc
