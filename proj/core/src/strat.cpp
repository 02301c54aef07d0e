#include "qsc/strat.hpp"

#include <algorithm>

namespace qsc {

ShuffleResidual shuffle_residual(ShuffleIdentity which, const GridPath& x, const GridPath& y,
                                 const GridPath& z) {
    if (x.has_jumps() || y.has_jumps() || z.has_jumps())
        throw JumpsPresent("shuffle residuals are defined on jump-free paths");
    const GridPath t_left = qbracket(qbracket(x, y), z);   // [[X,Y],Z]
    const GridPath t_right = qbracket(x, qbracket(y, z));  // [X,[Y,Z]]
    switch (which) {
        case ShuffleIdentity::PrecPrec: {
            GridPath direct =
                strat_prec(strat_prec(x, y), z) - strat_prec(x, product(y, z));
            GridPath closed = 0.25 * t_left - 0.5 * t_right;
            return {std::move(direct), std::move(closed)};
        }
        case ShuffleIdentity::SuccPrec: {
            GridPath direct =
                strat_prec(strat_succ(x, y), z) - strat_succ(x, strat_prec(y, z));
            GridPath closed = 0.25 * (t_left - t_right);
            return {std::move(direct), std::move(closed)};
        }
        case ShuffleIdentity::SuccSucc: {
            GridPath direct =
                strat_succ(x, strat_succ(y, z)) - strat_succ(product(x, y), z);
            GridPath closed = 0.25 * t_right - 0.5 * t_left;
            return {std::move(direct), std::move(closed)};
        }
    }
    throw Error("unreachable shuffle identity");
}

bool regular_check(const GridPath& x, const GridPath& y, const GridPath& z, double tol) {
    const double scale = std::max({1.0, x.norm(), y.norm(), z.norm()});
    return qbracket(qbracket(x, y), z).norm() <= tol * scale &&
           qbracket(x, qbracket(y, z)).norm() <= tol * scale;
}

ShuffleOps functor_to_shuffle(const std::vector<GridPath>& test_elements, double tol) {
    for (std::size_t i = 0; i < test_elements.size(); ++i) {
        for (std::size_t j = 0; j < test_elements.size(); ++j) {
            for (std::size_t k = 0; k < test_elements.size(); ++k) {
                if (!regular_check(test_elements[i], test_elements[j], test_elements[k], tol))
                    throw NotRegular("triple brackets of test elements exceed tolerance");
            }
        }
    }
    return ShuffleOps{
        [](const GridPath& a, const GridPath& b) { return strat_prec(a, b); },
        [](const GridPath& a, const GridPath& b) { return strat_succ(a, b); },
    };
}

}  // namespace qsc
