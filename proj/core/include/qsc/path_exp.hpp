#pragma once

#include "qsc/grid.hpp"
#include "qsc/prelie.hpp"

namespace qsc {

// Exact grid-level stochastic exponentials. Solving the one-step fixed
// point at each grid step gives closed-form per-step factors, so the Picard
// iteration terminates after K steps. All start at the identity.
//
//   right Ito   (E = 1 + X prec E):   E_m = (I + dX_m) E_{m-1}
//   left  Ito   (E = 1 + E dsucc X):  E_m = E_{m-1} (I - dX_m)^{-1}
//   right Strat (E = 1 + X sprec E):  E_m = (I - dX_m/2)^{-1} (I + dX_m/2) E_{m-1}
//   left  Strat (E = 1 + E ssucc X):  E_m = E_{m-1} (I + dX_m/2)(I - dX_m/2)^{-1}
//
// On a flagged jump step the Stratonovich correction is absent and the
// factor degenerates to the Ito one-step factor.
GridPath stoch_exp_path(const GridPath& x, Side side, Flavor flavor);

// Matrix exponential (scaling and squaring).
Matrix matrix_exp(const Matrix& a);

// Principal matrix logarithm. Throws Error when an eigenvalue sits on the
// closed negative real axis, where the principal branch is undefined.
Matrix matrix_log(const Matrix& a);

}  // namespace qsc
