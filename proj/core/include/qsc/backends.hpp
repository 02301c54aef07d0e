#pragma once

#include "qsc/grid.hpp"
#include "qsc/rota_baxter.hpp"
#include "qsc/words.hpp"

#include <cstring>
#include <string>

namespace qsc {

// How a backend splits its covariation bracket.
//   JumpFlags:     per-step jump metadata (process backend)
//   AllContinuous: the whole bracket counts as continuous; the convention
//                  under which the word model feeds the Stratonovich-
//                  flavoured constructions
//   None:          no split declared; Stratonovich products unavailable
enum class SplitKind { None, JumpFlags, AllContinuous };

// Uniform static interface over the quasi-shuffle carriers. Everything the
// axiom engine and the enveloping-algebra machinery need: the three
// products, linear structure, an exact total order for canonical forms,
// and a residual norm.
struct WordBackend {
    using Element = WordSeries;
    static constexpr bool exact = true;
    static constexpr SplitKind split = SplitKind::AllContinuous;
    static std::string name() { return "words"; }

    static Element prec(const Element& a, const Element& b) { return qsc::prec(a, b); }
    static Element succ(const Element& a, const Element& b) { return qsc::succ(a, b); }
    static Element bracket(const Element& a, const Element& b) { return qsc::bracket(a, b); }
    static Element product(const Element& a, const Element& b) { return qsc::product(a, b); }
    static Element bracket_c(const Element& a, const Element& b) { return qsc::bracket(a, b); }
    static Element bracket_j(const Element&, const Element&) { return Element(); }

    static Element add(const Element& a, const Element& b) { return a + b; }
    static Element sub(const Element& a, const Element& b) { return a - b; }
    static Element scale(const Element& a, const Rational& c) { return c * a; }
    static double norm(const Element& a) { return a.norm(); }
    static bool is_zero(const Element& a) { return a.is_zero(); }
    static bool equal(const Element& a, const Element& b) { return a == b; }
    static bool less(const Element& a, const Element& b) { return Element::less(a, b); }
};

struct ProcessBackend {
    using Element = GridPath;
    static constexpr bool exact = false;
    static constexpr SplitKind split = SplitKind::JumpFlags;
    static std::string name() { return "paths"; }

    static Element prec(const Element& a, const Element& b) { return qsc::prec(a, b); }
    static Element succ(const Element& a, const Element& b) { return qsc::succ(a, b); }
    static Element bracket(const Element& a, const Element& b) { return qsc::qbracket(a, b); }
    static Element product(const Element& a, const Element& b) { return qsc::product(a, b); }
    static Element bracket_c(const Element& a, const Element& b) {
        return qsc::bracket_continuous(a, b);
    }
    static Element bracket_j(const Element& a, const Element& b) {
        return qsc::bracket_jump(a, b);
    }

    static Element add(const Element& a, const Element& b) { return a + b; }
    static Element sub(const Element& a, const Element& b) { return a - b; }
    static Element scale(const Element& a, const Rational& c) { return to_double(c) * a; }
    static double norm(const Element& a) { return a.norm(); }
    static bool is_zero(const Element& a) { return a.norm() == 0.0; }

    static bool equal(const Element& a, const Element& b) {
        if (a.dim() != b.dim() || a.steps() != b.steps()) return false;
        for (int k = 0; k <= a.steps(); ++k)
            if (a.at(k) != b.at(k)) return false;
        return true;
    }
    static bool less(const Element& a, const Element& b) {
        if (a.dim() != b.dim()) return a.dim() < b.dim();
        if (a.steps() != b.steps()) return a.steps() < b.steps();
        for (int k = 0; k <= a.steps(); ++k) {
            for (int i = 0; i < a.dim(); ++i) {
                for (int j = 0; j < a.dim(); ++j) {
                    const double x = a.at(k)(i, j), y = b.at(k)(i, j);
                    if (x != y) return x < y;
                }
            }
        }
        return false;
    }
};

// Weight-one summation-operator backend on matrix sequences.
struct RBBackend {
    using Element = RBSequence;
    static constexpr bool exact = false;  // float entries; exact on integer data
    static constexpr SplitKind split = SplitKind::None;
    static std::string name() { return "rb"; }

    static Element prec(const Element& a, const Element& b) { return rb_mul(a, rb_apply(b)); }
    static Element succ(const Element& a, const Element& b) { return rb_mul(rb_apply(a), b); }
    static Element bracket(const Element& a, const Element& b) { return rb_mul(a, b); }
    static Element product(const Element& a, const Element& b) {
        return prec(a, b) + succ(a, b) + bracket(a, b);
    }

    static Element add(const Element& a, const Element& b) { return a + b; }
    static Element sub(const Element& a, const Element& b) { return a - b; }
    static Element scale(const Element& a, const Rational& c) { return to_double(c) * a; }
    static double norm(const Element& a) { return a.norm(); }
    static bool is_zero(const Element& a) { return a.norm() == 0.0; }

    static bool equal(const Element& a, const Element& b) {
        if (a.dim() != b.dim() || a.length() != b.length()) return false;
        for (int n = 0; n < a.length(); ++n)
            if (a.at(n) != b.at(n)) return false;
        return true;
    }
    static bool less(const Element& a, const Element& b) {
        if (a.dim() != b.dim()) return a.dim() < b.dim();
        if (a.length() != b.length()) return a.length() < b.length();
        for (int n = 0; n < a.length(); ++n) {
            for (int i = 0; i < a.dim(); ++i) {
                for (int j = 0; j < a.dim(); ++j) {
                    const double x = a.at(n)(i, j), y = b.at(n)(i, j);
                    if (x != y) return x < y;
                }
            }
        }
        return false;
    }
};

}  // namespace qsc
