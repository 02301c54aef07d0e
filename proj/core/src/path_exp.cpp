#include "qsc/path_exp.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace qsc {

GridPath stoch_exp_path(const GridPath& x, Side side, Flavor flavor) {
    const int d = x.dim();
    const Matrix id = Matrix::Identity(d, d);
    std::vector<Matrix> vals;
    vals.reserve(x.steps() + 1);
    vals.push_back(id);
    for (int k = 1; k <= x.steps(); ++k) {
        const Matrix dx = x.increment(k);
        const bool jump = x.jump_flags()[k] != 0;
        Matrix factor;
        if (flavor == Flavor::Ito) {
            if (side == Side::Right) {
                factor = id + dx;
            } else {
                factor = (id - dx).inverse();
            }
        } else if (jump) {
            factor = id + dx;  // no continuous bracket on a jump step
        } else if (side == Side::Right) {
            factor = (id - 0.5 * dx).inverse() * (id + 0.5 * dx);
        } else {
            factor = (id + 0.5 * dx) * (id - 0.5 * dx).inverse();
        }
        vals.push_back(side == Side::Right ? Matrix(factor * vals.back())
                                           : Matrix(vals.back() * factor));
    }
    return GridPath(x.grid(), d, std::move(vals), x.jump_flags());
}

Matrix matrix_exp(const Matrix& a) { return a.exp(); }

Matrix matrix_log(const Matrix& a) {
    const Eigen::EigenSolver<Matrix> es(a);
    for (int i = 0; i < a.rows(); ++i) {
        const auto ev = es.eigenvalues()[i];
        if (ev.real() <= 0.0 && std::abs(ev.imag()) < 1e-14 * std::max(1.0, std::abs(ev.real())))
            throw Error("principal matrix log undefined: eigenvalue on the negative real axis");
    }
    return a.log();
}

}  // namespace qsc
