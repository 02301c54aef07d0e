#pragma once

#include "qsc/grid.hpp"
#include "qsc/words.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace qsc {

// Fisk-Stratonovich one-sided integrals, defined from the Ito ones by the
// half continuous-bracket correction:
//   X ssucc Y (right) = X succ Y + 1/2 [X,Y]^c
//   X sprec Y (left)  = X prec Y + 1/2 [X,Y]^c
inline GridPath strat_succ(const GridPath& x, const GridPath& y) {
    return succ(x, y) + 0.5 * bracket_continuous(x, y);
}
inline GridPath strat_prec(const GridPath& x, const GridPath& y) {
    return prec(x, y) + 0.5 * bracket_continuous(x, y);
}

// (X ssucc Y, X sprec Y) in one call.
inline std::pair<GridPath, GridPath> strat_products(const GridPath& x, const GridPath& y) {
    const GridPath half_c = 0.5 * bracket_continuous(x, y);
    return {succ(x, y) + half_c, prec(x, y) + half_c};
}

// The derived right half-shuffle: X dsucc Y = X succ Y + [X,Y]. The pair
// (prec, dsucc) is a shuffle algebra on any quasi-shuffle carrier, with no
// regularity assumption.
inline GridPath derived_succ(const GridPath& x, const GridPath& y) {
    return succ(x, y) + qbracket(x, y);
}
template <class M>
BasicWordSeries<M> derived_succ(const BasicWordSeries<M>& x, const BasicWordSeries<M>& y) {
    return succ(x, y) + bracket(x, y);
}

enum class ShuffleIdentity { PrecPrec, SuccPrec, SuccSucc };

struct ShuffleResidual {
    GridPath direct;       // identity LHS minus RHS, evaluated literally
    GridPath closed_form;  // the same residual as a triple-bracket expression
};

// Residual bookkeeping for the three Stratonovich half-shuffle identities
// on a jump-free backend. Unfolding each identity through the exact
// discrete axioms leaves only triple-bracket terms:
//   (X sprec Y) sprec Z - X sprec (YZ)        = 1/4 [[X,Y],Z] - 1/2 [X,[Y,Z]]
//   (X ssucc Y) sprec Z - X ssucc (Y sprec Z) = 1/4 ([[X,Y],Z] - [X,[Y,Z]])
//   X ssucc (Y ssucc Z) - (XY) ssucc Z        = 1/4 [X,[Y,Z]] - 1/2 [[X,Y],Z]
// The middle closed form vanishes identically by bracket associativity.
// direct == closed_form holds exactly at grid level; both shrink under
// refinement for continuous drivers, which is the regular (shuffle) limit.
ShuffleResidual shuffle_residual(ShuffleIdentity which, const GridPath& x, const GridPath& y,
                                 const GridPath& z);

inline ShuffleResidual shuffle_residual(const GridPath& x, const GridPath& y, const GridPath& z) {
    return shuffle_residual(ShuffleIdentity::PrecPrec, x, y, z);
}

// True iff both triple brackets [[X,Y],Z] and [X,[Y,Z]] vanish within
// tol * scale. The tolerance is a test-harness constant, not a claim about
// the continuum limit.
bool regular_check(const GridPath& x, const GridPath& y, const GridPath& z, double tol = 1e-6);

template <class M>
bool regular_check(const BasicWordSeries<M>& x, const BasicWordSeries<M>& y,
                   const BasicWordSeries<M>& z) {
    return bracket(bracket(x, y), z).is_zero() && bracket(x, bracket(y, z)).is_zero();
}

// The Stratonovich pair packaged as a shuffle-algebra structure.
struct ShuffleOps {
    std::function<GridPath(const GridPath&, const GridPath&)> prec;
    std::function<GridPath(const GridPath&, const GridPath&)> succ;
};

// Packages (sprec, ssucc) after verifying regular_check on the supplied
// test triples; throws NotRegular otherwise.
ShuffleOps functor_to_shuffle(const std::vector<GridPath>& test_elements, double tol = 1e-6);

}  // namespace qsc
