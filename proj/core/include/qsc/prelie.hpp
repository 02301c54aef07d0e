#pragma once

#include "qsc/backends.hpp"
#include "qsc/errors.hpp"
#include "qsc/rational.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qsc {

// Two pre-Lie products on a quasi-shuffle carrier:
//   Strat:  X tri Y = X ssucc Y - Y sprec X   (Stratonovich one-sided integrals)
//   Ito:    X tri Y = X dsucc Y - Y prec X    (derived right half-shuffle)
// The Ito flavour is pre-Lie on every quasi-shuffle carrier because
// (prec, dsucc) is always a shuffle pair. The Stratonovich flavour needs a
// bracket split; on the word model the whole bracket counts as continuous.
enum class Flavor { Strat, Ito };

Flavor flavor_from_string(const std::string& name);
std::string flavor_name(Flavor f);

enum class Side { Left, Right };

// B_0 .. B_n by the defining recurrence sum_{j<=n} C(n+1,j) B_j = 0
// (B_1 = -1/2 convention, the expansion of x/(e^x - 1)).
std::vector<Rational> bernoulli_numbers(int n_max);

// ---------------------------------------------------------------------------
// Flavour-resolved binary operations on backend elements.

template <class B>
typename B::Element strat_succ_of(const typename B::Element& x, const typename B::Element& y) {
    static_assert(B::split != SplitKind::None,
                  "Stratonovich products need a bracket split on the backend");
    return B::add(B::succ(x, y), B::scale(B::bracket_c(x, y), Rational(1, 2)));
}

template <class B>
typename B::Element strat_prec_of(const typename B::Element& x, const typename B::Element& y) {
    static_assert(B::split != SplitKind::None,
                  "Stratonovich products need a bracket split on the backend");
    return B::add(B::prec(x, y), B::scale(B::bracket_c(x, y), Rational(1, 2)));
}

template <class B>
typename B::Element derived_succ_of(const typename B::Element& x, const typename B::Element& y) {
    return B::add(B::succ(x, y), B::bracket(x, y));
}

template <class B>
typename B::Element prelie_product(Flavor f, const typename B::Element& x,
                                   const typename B::Element& y) {
    if (f == Flavor::Ito) return B::sub(derived_succ_of<B>(x, y), B::prec(y, x));
    if constexpr (B::split == SplitKind::None) {
        throw Error("Stratonovich flavour needs a bracket split on backend " + B::name());
    } else {
        return B::sub(strat_succ_of<B>(x, y), strat_prec_of<B>(y, x));
    }
}

// Antisymmetrised pre-Lie product; coincides with the commutator of the
// backend product for the Ito flavour everywhere and for the Stratonovich
// flavour on continuous carriers.
template <class B>
typename B::Element prelie_bracket(Flavor f, const typename B::Element& x,
                                   const typename B::Element& y) {
    return B::sub(prelie_product<B>(f, x, y), prelie_product<B>(f, y, x));
}

// Nesting operation of the stochastic exponential / time-ordered products:
// the flavour's left half-shuffle on the right side, its right half-shuffle
// on the left side.
template <class B>
typename B::Element exp_dot(Flavor f, Side s, const typename B::Element& a,
                            const typename B::Element& b) {
    if (f == Flavor::Ito) return s == Side::Right ? B::prec(a, b) : derived_succ_of<B>(a, b);
    if constexpr (B::split == SplitKind::None) {
        throw Error("Stratonovich flavour needs a bracket split on backend " + B::name());
    } else {
        return s == Side::Right ? strat_prec_of<B>(a, b) : strat_succ_of<B>(a, b);
    }
}

// ---------------------------------------------------------------------------
// Elements graded by formal degree in a driver X. Component d holds the
// degree-d part; the scalar field is the coefficient of the adjoined unit.
// Everything above the truncation order is discarded eagerly, which is what
// makes truncated expansions exact degree by degree.

template <class B>
struct Graded {
    using Element = typename B::Element;

    int order = 0;
    Rational scalar = 0;
    std::vector<std::optional<Element>> comp;  // index 1..order; [0] unused

    explicit Graded(int n) : order(n), comp(n + 1) {}

    static Graded unit(int n) {
        Graded g(n);
        g.scalar = 1;
        return g;
    }
    static Graded from_element(Element x, int n, int degree = 1) {
        Graded g(n);
        if (degree <= n) g.comp[degree] = std::move(x);
        g.normalize();
        return g;
    }

    bool has(int d) const { return d >= 1 && d <= order && comp[d].has_value(); }
    const Element& at(int d) const { return *comp[d]; }

    void add_component(int d, const Element& v) {
        if (d > order) return;
        if (!comp[d])
            comp[d] = v;
        else
            comp[d] = B::add(*comp[d], v);
    }

    void normalize() {
        for (auto& c : comp)
            if (c && B::is_zero(*c)) c.reset();
    }

    bool is_zero() const {
        if (scalar != 0) return false;
        for (const auto& c : comp)
            if (c && !B::is_zero(*c)) return false;
        return true;
    }

    double norm() const {
        double m = std::abs(to_double(scalar));
        for (const auto& c : comp)
            if (c) m = std::max(m, B::norm(*c));
        return m;
    }

    friend Graded operator+(const Graded& a, const Graded& b) {
        Graded out(std::max(a.order, b.order));
        out.scalar = a.scalar + b.scalar;
        for (int d = 1; d <= out.order; ++d) {
            if (a.has(d)) out.add_component(d, a.at(d));
            if (b.has(d)) out.add_component(d, b.at(d));
        }
        out.normalize();
        return out;
    }
    friend Graded operator-(const Graded& a, const Graded& b) {
        return a + scale(b, Rational(-1));
    }
    friend Graded scale(const Graded& a, const Rational& c) {
        Graded out(a.order);
        out.scalar = a.scalar * c;
        for (int d = 1; d <= a.order; ++d)
            if (a.has(d)) out.comp[d] = B::scale(a.at(d), c);
        out.normalize();
        return out;
    }

    bool equal(const Graded& o) const {
        if (scalar != o.scalar) return false;
        const int n = std::max(order, o.order);
        for (int d = 1; d <= n; ++d) {
            const bool ha = has(d), hb = o.has(d);
            if (ha != hb) return false;
            if (ha && !B::equal(at(d), o.at(d))) return false;
        }
        return true;
    }

    // Sum of all components; the element the truncation approximates.
    // Meaningful when the scalar part is zero.
    std::optional<Element> collapse() const {
        if (scalar != 0) throw UnitOperand("cannot collapse a graded element with a unit part");
        std::optional<Element> acc;
        for (int d = 1; d <= order; ++d) {
            if (!has(d)) continue;
            acc = acc ? B::add(*acc, at(d)) : at(d);
        }
        return acc;
    }
};

// Degree-convolved bilinear extension of an operation that is undefined on
// the unit (half-shuffles, brackets, pre-Lie products).
template <class B, class F>
Graded<B> bilinear_graded(F&& f, const Graded<B>& a, const Graded<B>& b) {
    if (a.scalar != 0 || b.scalar != 0)
        throw UnitOperand("bilinear products are undefined on the adjoined unit");
    Graded<B> out(std::max(a.order, b.order));
    for (int i = 1; i <= a.order; ++i) {
        if (!a.has(i)) continue;
        for (int j = 1; j <= b.order && i + j <= out.order; ++j) {
            if (!b.has(j)) continue;
            out.add_component(i + j, f(a.at(i), b.at(j)));
        }
    }
    out.normalize();
    return out;
}

// Full unital product.
template <class B>
Graded<B> graded_product(const Graded<B>& a, const Graded<B>& b) {
    Graded<B> out(std::max(a.order, b.order));
    out.scalar = a.scalar * b.scalar;
    for (int d = 1; d <= out.order; ++d) {
        if (b.has(d) && a.scalar != 0) out.add_component(d, B::scale(b.at(d), a.scalar));
        if (a.has(d) && b.scalar != 0) out.add_component(d, B::scale(a.at(d), b.scalar));
    }
    for (int i = 1; i <= a.order; ++i) {
        if (!a.has(i)) continue;
        for (int j = 1; j <= b.order && i + j <= out.order; ++j) {
            if (!b.has(j)) continue;
            out.add_component(i + j, B::product(a.at(i), b.at(j)));
        }
    }
    out.normalize();
    return out;
}

// exp of a unit-free graded element in the backend's associative algebra.
template <class B>
Graded<B> graded_exp(const Graded<B>& a) {
    if (a.scalar != 0) throw UnitOperand("graded exp expects no unit part");
    Graded<B> out = Graded<B>::unit(a.order);
    Graded<B> pow = Graded<B>::unit(a.order);
    Rational fact = 1;
    for (int k = 1; k <= a.order; ++k) {
        pow = graded_product<B>(pow, a);
        fact *= k;
        out = out + scale(pow, Rational(1) / fact);
    }
    return out;
}

// log of a graded element with unit coefficient one.
template <class B>
Graded<B> graded_log(const Graded<B>& a) {
    if (a.scalar != 1) throw Error("graded log expects unit coefficient 1");
    Graded<B> r = a;
    r.scalar = 0;
    Graded<B> out(a.order);
    Graded<B> pow = Graded<B>::unit(a.order);
    for (int k = 1; k <= a.order; ++k) {
        pow = graded_product<B>(pow, r);
        out = out + scale(pow, Rational((k % 2) ? 1 : -1, k));
    }
    return out;
}

// Truncated Picard series of the stochastic exponential,
//   right: E = 1 + X dot E,  terms X, X dot X, X dot (X dot X), ...
//   left:  E = 1 + E dot X,  terms nested on the left.
// The nesting never touches the unit, matching the partial half-shuffles.
template <class B>
Graded<B> stoch_exp_graded(const typename B::Element& x, Side side, Flavor flavor, int order) {
    Graded<B> e = Graded<B>::unit(order);
    Graded<B> xg = Graded<B>::from_element(x, order);
    Graded<B> term = xg;
    e = e + term;
    auto dot = [&](const typename B::Element& a, const typename B::Element& b) {
        return exp_dot<B>(flavor, side, a, b);
    };
    for (int k = 2; k <= order; ++k) {
        term = (side == Side::Right) ? bilinear_graded<B>(dot, xg, term)
                                     : bilinear_graded<B>(dot, term, xg);
        e = e + term;
    }
    return e;
}

// ---------------------------------------------------------------------------
// Pre-Lie Magnus expansion as a truncated fixed point
//   Omega = sum_{n>=0} B_n/n! ad^n_{Omega tri} (X),
// iterated once per degree; sweep s settles degree s exactly.

template <class B, class Tri>
Graded<B> magnus_graded_with(Tri&& tri, const typename B::Element& x, int order) {
    const auto bern = bernoulli_numbers(std::max(0, order - 1));
    Graded<B> xg = Graded<B>::from_element(x, order);
    Graded<B> omega = xg;
    for (int sweep = 0; sweep < order; ++sweep) {
        Graded<B> acc = xg;  // n = 0 term
        Graded<B> lpow = xg;
        Rational fact = 1;
        for (int n = 1; n < order; ++n) {
            lpow = bilinear_graded<B>(tri, omega, lpow);
            fact *= n;
            if (bern[n] != 0) acc = acc + scale(lpow, bern[n] / fact);
        }
        omega = acc;
    }
    return omega;
}

template <class B>
Graded<B> magnus_graded(const typename B::Element& x, Flavor flavor, int order) {
    auto tri = [flavor](const typename B::Element& a, const typename B::Element& b) {
        return prelie_product<B>(flavor, a, b);
    };
    return magnus_graded_with<B>(tri, x, order);
}

// Element-level Magnus value: the sum of the graded components.
template <class B>
typename B::Element magnus(const typename B::Element& x, Flavor flavor, int order) {
    auto g = magnus_graded<B>(x, flavor, order);
    auto v = g.collapse();
    return v ? *v : B::scale(x, Rational(0));
}

// ---------------------------------------------------------------------------
// The polynomial (enveloping) algebra over a backend: exact-rational linear
// combinations of commutative monomials whose factors are backend elements.
// Each factor carries its formal degree in the driver so series can be
// truncated consistently.

template <class B>
struct PolyEntry {
    int xdeg;
    typename B::Element v;
};

template <class B>
struct PolyEntryLess {
    bool operator()(const PolyEntry<B>& a, const PolyEntry<B>& b) const {
        if (a.xdeg != b.xdeg) return a.xdeg < b.xdeg;
        return B::less(a.v, b.v);
    }
};

template <class B>
struct MonomialLess {
    bool operator()(const std::vector<PolyEntry<B>>& a, const std::vector<PolyEntry<B>>& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        PolyEntryLess<B> el;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (el(a[i], b[i])) return true;
            if (el(b[i], a[i])) return false;
        }
        return false;
    }
};

template <class B>
class Poly {
  public:
    using Entry = PolyEntry<B>;
    using Monomial = std::vector<Entry>;  // kept sorted
    using Terms = std::map<Monomial, Rational, MonomialLess<B>>;

    static Poly one() {
        Poly p;
        p.add_term({}, 1);
        return p;
    }
    static Poly from_element(typename B::Element v, int xdeg = 1, Rational c = 1) {
        Poly p;
        p.add_term({Entry{xdeg, std::move(v)}}, std::move(c));
        return p;
    }

    void add_term(Monomial m, Rational c) {
        if (c == 0) return;
        for (const Entry& e : m)
            if (B::is_zero(e.v)) return;  // a zero factor kills the monomial
        std::sort(m.begin(), m.end(), PolyEntryLess<B>{});
        auto [it, inserted] = terms_.try_emplace(std::move(m), c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    static int degree_of(const Monomial& m) {
        int d = 0;
        for (const Entry& e : m) d += e.xdeg;
        return d;
    }

    int degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, degree_of(m));
        return d;
    }

    Poly truncated(int max_degree) const {
        Poly out;
        for (const auto& [m, c] : terms_)
            if (degree_of(m) <= max_degree) out.terms_.emplace(m, c);
        return out;
    }

    Poly& operator+=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Poly& operator*=(const Rational& c) {
        if (c == 0) {
            terms_.clear();
        } else {
            for (auto& [m, v] : terms_) v *= c;
        }
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Rational& c, Poly p) { return p *= c; }

    bool equal(const Poly& o) const {
        if (terms_.size() != o.terms_.size()) return false;
        auto ia = terms_.begin();
        auto ib = o.terms_.begin();
        MonomialLess<B> ml;
        for (; ia != terms_.end(); ++ia, ++ib) {
            if (ml(ia->first, ib->first) || ml(ib->first, ia->first)) return false;
            if (ia->second != ib->second) return false;
        }
        return true;
    }

    // Largest |coefficient| times factor norms; zero iff the poly is zero.
    double norm() const {
        double out = 0.0;
        for (const auto& [m, c] : terms_) {
            double t = std::abs(to_double(c));
            for (const Entry& e : m) t *= std::max(B::norm(e.v), 1e-300);
            out = std::max(out, t);
        }
        return out;
    }

  private:
    Terms terms_;
};

// Symmetric brace map {Y_1,...,Y_n} X, reduced inductively:
//   {}X = X,   {Y}X = Y tri X,
//   {Y_1..Y_n}X = {Y_n}({Y_1..Y_{n-1}}X)
//                 - sum_i {Y_1,..,{Y_n}Y_i,..,Y_{n-1}}X.
template <class B, class Tri>
typename B::Element brace_with(Tri&& tri, std::vector<typename B::Element> slots,
                               const typename B::Element& x) {
    if (slots.empty()) return x;
    if (slots.size() == 1) return tri(slots.front(), x);
    typename B::Element yn = std::move(slots.back());
    slots.pop_back();
    typename B::Element out = tri(yn, brace_with<B>(tri, slots, x));
    for (std::size_t i = 0; i < slots.size(); ++i) {
        std::vector<typename B::Element> mod = slots;
        mod[i] = tri(yn, mod[i]);
        out = B::sub(out, brace_with<B>(tri, std::move(mod), x));
    }
    return out;
}

template <class B>
typename B::Element brace(Flavor f, const std::vector<typename B::Element>& slots,
                          const typename B::Element& x) {
    auto tri = [f](const typename B::Element& a, const typename B::Element& b) {
        return prelie_product<B>(f, a, b);
    };
    return brace_with<B>(tri, slots, x);
}

// Grafting product on the polynomial algebra,
//   (Y_1 ... Y_m) star (X_1 ... X_n)
//     = sum_f W_0 . {W_1}X_1 . ... . {W_n}X_n,
// summed over all maps f from {1..m} to {0..n}; W_i collects the Y_j with
// f(j) = i. Terms above max_degree are dropped.
template <class B, class Tri>
Poly<B> star_with(Tri&& tri, const Poly<B>& p, const Poly<B>& q, int max_degree) {
    using P = Poly<B>;
    using Entry = typename P::Entry;
    using Monomial = typename P::Monomial;
    P out;
    for (const auto& [my, cy] : p.terms()) {
        const int dy = P::degree_of(my);
        for (const auto& [mx, cx] : q.terms()) {
            if (dy + P::degree_of(mx) > max_degree) continue;
            const std::size_t m = my.size(), n = mx.size();
            const Rational c = cy * cx;
            std::vector<std::size_t> f(m, 0);
            while (true) {
                Monomial result;
                result.reserve(m + n);
                bool dead = false;
                for (std::size_t j = 0; j < m; ++j)
                    if (f[j] == 0) result.push_back(my[j]);
                for (std::size_t i = 1; i <= n && !dead; ++i) {
                    std::vector<typename B::Element> slots;
                    int deg = mx[i - 1].xdeg;
                    for (std::size_t j = 0; j < m; ++j) {
                        if (f[j] == i) {
                            slots.push_back(my[j].v);
                            deg += my[j].xdeg;
                        }
                    }
                    typename B::Element braced = brace_with<B>(tri, std::move(slots), mx[i - 1].v);
                    if (B::is_zero(braced)) {
                        dead = true;
                        break;
                    }
                    result.push_back(Entry{deg, std::move(braced)});
                }
                if (!dead) out.add_term(std::move(result), c);
                // next map f
                std::size_t j = 0;
                for (; j < m; ++j) {
                    if (f[j] < n) {
                        ++f[j];
                        break;
                    }
                    f[j] = 0;
                }
                if (j == m) break;
            }
        }
    }
    return out;
}

template <class B>
Poly<B> star_product(Flavor f, const Poly<B>& p, const Poly<B>& q, int max_degree) {
    auto tri = [f](const typename B::Element& a, const typename B::Element& b) {
        return prelie_product<B>(f, a, b);
    };
    return star_with<B>(tri, p, q, max_degree);
}

// exp of x for the commutative monomial product: sum_n x^{.n} / n!.
template <class B>
Poly<B> exp_odot(const typename B::Element& x, int order) {
    Poly<B> out = Poly<B>::one();
    typename Poly<B>::Monomial mono;
    Rational fact = 1;
    for (int n = 1; n <= order; ++n) {
        mono.push_back(PolyEntry<B>{1, x});
        fact *= n;
        Poly<B> term;
        term.add_term(mono, Rational(1) / fact);
        out += term;
    }
    return out;
}

template <class B, class Tri>
Poly<B> exp_star_with(Tri&& tri, const Poly<B>& p, int max_degree) {
    Poly<B> out = Poly<B>::one();
    Poly<B> pow = Poly<B>::one();
    Rational fact = 1;
    for (int k = 1; k <= max_degree; ++k) {
        pow = star_with<B>(tri, pow, p, max_degree);
        if (pow.is_zero()) break;
        fact *= k;
        out += Rational(1) / fact * pow;
    }
    return out;
}

// log of a polynomial with unit term 1, for the star product.
template <class B, class Tri>
Poly<B> log_star_with(Tri&& tri, const Poly<B>& p, int max_degree) {
    Poly<B> r = p;
    r -= Poly<B>::one();
    Poly<B> out;
    Poly<B> pow = Poly<B>::one();
    for (int k = 1; k <= max_degree; ++k) {
        pow = star_with<B>(tri, pow, r, max_degree);
        if (pow.is_zero()) break;
        out += Rational((k % 2) ? 1 : -1, k) * pow;
    }
    return out;
}

// Canonical morphism from the polynomial algebra onto the carrier: the
// image of a monomial is the time-ordered product
//   T<X_1,...,X_n> = sum_{sigma in S_n} X_{s1} dot (X_{s2} dot (... X_{sn})),
// fully symmetrised; factor counts above 8 are rejected (8! terms).
template <class B, class Dot>
typename B::Element iota_monomial_with(Dot&& dot,
                                       const std::vector<typename B::Element>& factors) {
    const std::size_t n = factors.size();
    if (n == 0) throw UnitOperand("iota of the empty monomial is the unit, handle separately");
    if (n > 8) throw Error("time-ordered products limited to 8 factors");
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::optional<typename B::Element> acc;
    do {
        typename B::Element nested = factors[idx[n - 1]];
        for (std::size_t i = n - 1; i-- > 0;) nested = dot(factors[idx[i]], nested);
        acc = acc ? B::add(*acc, nested) : nested;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return *acc;
}

// iota of a polynomial as a graded element (the unit coefficient and each
// degree collected separately).
template <class B>
Graded<B> iota(Flavor f, const Poly<B>& p, int order) {
    auto dot = [f](const typename B::Element& a, const typename B::Element& b) {
        return exp_dot<B>(f, Side::Right, a, b);
    };
    Graded<B> out(order);
    for (const auto& [m, c] : p.terms()) {
        if (m.empty()) {
            out.scalar += c;
            continue;
        }
        const int deg = Poly<B>::degree_of(m);
        if (deg > order) continue;
        std::vector<typename B::Element> factors;
        factors.reserve(m.size());
        for (const auto& e : m) factors.push_back(e.v);
        out.add_component(deg, B::scale(iota_monomial_with<B>(dot, factors), c));
    }
    out.normalize();
    return out;
}

// log^star of exp^odot: the Magnus element computed inside the polynomial
// algebra. The result must collapse to bare elements (monomials of length
// one); anything else signals a broken brace or star and raises
// NotPrimitive.
template <class B, class Tri>
Poly<B> magnus_poly_with(Tri&& tri, const typename B::Element& x, int order) {
    Poly<B> lifted = log_star_with<B>(tri, exp_odot<B>(x, order), order);
    for (const auto& [m, c] : lifted.terms()) {
        if (m.size() != 1)
            throw NotPrimitive("log^star exp^odot left a monomial of length " +
                               std::to_string(m.size()));
    }
    return lifted;
}

template <class B>
Poly<B> magnus_poly(const typename B::Element& x, Flavor f, int order) {
    auto tri = [f](const typename B::Element& a, const typename B::Element& b) {
        return prelie_product<B>(f, a, b);
    };
    return magnus_poly_with<B>(tri, x, order);
}

// Reassembles a primitive polynomial into a graded element.
template <class B>
Graded<B> collapse_primitive(const Poly<B>& p, int order) {
    Graded<B> out(order);
    for (const auto& [m, c] : p.terms()) {
        if (m.size() != 1) throw NotPrimitive("polynomial has a non-primitive term");
        if (m.front().xdeg <= order)
            out.add_component(m.front().xdeg, B::scale(m.front().v, c));
    }
    out.normalize();
    return out;
}

}  // namespace qsc
