#pragma once

#include "qsc/errors.hpp"
#include "qsc/grid.hpp"
#include "qsc/rational.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace qsc {

// Finite matrix-valued sequence f(0), ..., f(N-1); the carrier of the
// summation-operator Rota-Baxter backend.
class RBSequence {
  public:
    RBSequence(int dim, std::vector<Matrix> entries) : dim_(dim), entries_(std::move(entries)) {
        for (const Matrix& e : entries_)
            if (e.rows() != dim_ || e.cols() != dim_) throw ShapeMismatch("entry has wrong shape");
    }

    static RBSequence zero(int dim, int length) {
        return RBSequence(dim, std::vector<Matrix>(length, Matrix::Zero(dim, dim)));
    }
    static RBSequence constant(int dim, int length, double value) {
        std::vector<Matrix> e(length, value * Matrix::Identity(dim, dim));
        return RBSequence(dim, std::move(e));
    }

    int dim() const { return dim_; }
    int length() const { return static_cast<int>(entries_.size()); }
    const Matrix& at(int n) const { return entries_[n]; }
    Matrix& at(int n) { return entries_[n]; }

    double norm() const {
        double m = 0.0;
        for (const Matrix& e : entries_) m = std::max(m, e.cwiseAbs().maxCoeff());
        return m;
    }

    RBSequence& operator+=(const RBSequence& o) {
        check_shape(o);
        for (int n = 0; n < length(); ++n) entries_[n] += o.entries_[n];
        return *this;
    }
    RBSequence& operator-=(const RBSequence& o) {
        check_shape(o);
        for (int n = 0; n < length(); ++n) entries_[n] -= o.entries_[n];
        return *this;
    }
    RBSequence& operator*=(double c) {
        for (Matrix& e : entries_) e *= c;
        return *this;
    }
    friend RBSequence operator+(RBSequence a, const RBSequence& b) { return a += b; }
    friend RBSequence operator-(RBSequence a, const RBSequence& b) { return a -= b; }
    friend RBSequence operator*(double c, RBSequence s) { return s *= c; }

    void check_shape(const RBSequence& o) const {
        if (dim_ != o.dim_ || entries_.size() != o.entries_.size())
            throw ShapeMismatch("sequences have different shapes");
    }

  private:
    int dim_;
    std::vector<Matrix> entries_;
};

// Pointwise product of sequences.
inline RBSequence rb_mul(const RBSequence& f, const RBSequence& g) {
    f.check_shape(g);
    std::vector<Matrix> e;
    e.reserve(f.length());
    for (int n = 0; n < f.length(); ++n) e.push_back(f.at(n) * g.at(n));
    return RBSequence(f.dim(), std::move(e));
}

// The summation operator R(f)(n) = sum_{k<n} f(k), R(f)(0) = 0; a
// Rota-Baxter map of weight one (right inverse of forward differences).
inline RBSequence rb_apply(const RBSequence& f) {
    std::vector<Matrix> e;
    e.reserve(f.length());
    Matrix acc = Matrix::Zero(f.dim(), f.dim());
    for (int n = 0; n < f.length(); ++n) {
        e.push_back(acc);
        acc += f.at(n);
    }
    return RBSequence(f.dim(), std::move(e));
}

// A Rota-Baxter structure: a linear operator on sequences together with its
// weight. Users may plug in operators other than the built-in summation.
struct RBStructure {
    std::function<RBSequence(const RBSequence&)> apply;
    Rational weight;
};

inline RBStructure summation_rb() {
    return RBStructure{[](const RBSequence& f) { return rb_apply(f); }, 1};
}

// beta * R has weight beta * theta.
inline RBStructure rescale(const RBStructure& s, const Rational& beta) {
    auto inner = s.apply;
    const double b = to_double(beta);
    return RBStructure{[inner, b](const RBSequence& f) {
                           RBSequence r = inner(f);
                           r *= b;
                           return r;
                       },
                       beta * s.weight};
}

// Rota-Baxter associative product f *_theta g = R(f)g + fR(g) + theta fg
// for the given structure.
inline RBSequence rb_product(const RBSequence& f, const RBSequence& g, const RBStructure& s) {
    f.check_shape(g);
    RBSequence out = rb_mul(s.apply(f), g) + rb_mul(f, s.apply(g));
    if (s.weight != 0) out += to_double(s.weight) * rb_mul(f, g);
    return out;
}

inline RBSequence rb_product(const RBSequence& f, const RBSequence& g, const Rational& theta = 1) {
    RBStructure s = summation_rb();
    s.weight = theta;  // product formula only; the operator stays the summation
    return rb_product(f, g, s);
}

// Quasi-shuffle operations induced by a weight-one Rota-Baxter operator:
//   a prec b    = a R(b)
//   a succ b    = R(a) b
//   [a, b]      = a b
// Their sum is the Rota-Baxter product *_1.
struct RBQuasiShuffle {
    std::function<RBSequence(const RBSequence&)> apply;

    RBSequence prec(const RBSequence& a, const RBSequence& b) const { return rb_mul(a, apply(b)); }
    RBSequence succ(const RBSequence& a, const RBSequence& b) const { return rb_mul(apply(a), b); }
    RBSequence bracket(const RBSequence& a, const RBSequence& b) const { return rb_mul(a, b); }
    RBSequence product(const RBSequence& a, const RBSequence& b) const {
        return prec(a, b) + succ(a, b) + bracket(a, b);
    }
};

inline RBQuasiShuffle rb_to_quasi_shuffle(const RBStructure& s) {
    if (s.weight != 1)
        throw WrongWeight("quasi-shuffle structure requires a weight-one Rota-Baxter operator");
    return RBQuasiShuffle{s.apply};
}

}  // namespace qsc
