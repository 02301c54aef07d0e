#pragma once

#include "qsc/errors.hpp"
#include "qsc/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace qsc {

// Dense square matrices, row-major as serialized.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Time grid t0 = 0 < t1 < ... < tK.
struct Grid {
    std::vector<double> times;

    explicit Grid(std::vector<double> t);
    static std::shared_ptr<const Grid> uniform(int steps, double t_end = 1.0);

    int steps() const { return static_cast<int>(times.size()) - 1; }
    double dt(int k) const { return times[k] - times[k - 1]; }
};

using GridPtr = std::shared_ptr<const Grid>;

// Matrix-valued discrete cadlag path. values[k] is the state at times[k];
// jump_flags[k] marks step k (1..K) as a jump step, which is structural
// metadata used to split the covariation bracket, not a detected property.
class GridPath {
  public:
    GridPath(GridPtr grid, int dim, std::vector<Matrix> values,
             std::vector<std::uint8_t> jump_flags = {});

    static GridPath zero(GridPtr grid, int dim);
    // Identity at every time; the adjoined unit of the path algebra.
    static GridPath one(GridPtr grid, int dim);
    // Cumulative sums of the given per-step increments (value at t0 is 0).
    static GridPath from_increments(GridPtr grid, const std::vector<Matrix>& increments,
                                    std::vector<std::uint8_t> jump_flags = {});

    const GridPtr& grid() const { return grid_; }
    int dim() const { return dim_; }
    int steps() const { return grid_->steps(); }
    const Matrix& at(int k) const { return values_[k]; }
    const std::vector<std::uint8_t>& jump_flags() const { return jump_flags_; }
    bool has_jumps() const;

    Matrix increment(int k) const { return values_[k] - values_[k - 1]; }
    const Matrix& terminal() const { return values_.back(); }

    double norm() const;  // max |entry| over all grid points

    GridPath& operator+=(const GridPath& o);
    GridPath& operator-=(const GridPath& o);
    GridPath& operator*=(double c);
    friend GridPath operator+(GridPath a, const GridPath& b) { return a += b; }
    friend GridPath operator-(GridPath a, const GridPath& b) { return a -= b; }
    friend GridPath operator*(double c, GridPath p) { return p *= c; }

    friend void check_compatible(const GridPath& a, const GridPath& b);

  private:
    GridPtr grid_;
    int dim_ = 1;
    std::vector<Matrix> values_;
    std::vector<std::uint8_t> jump_flags_;  // size K+1, index 0 unused
};

// Left and right discrete Ito integrals and the covariation bracket:
//   (X prec Y)(t_m)    = sum_{k<=m} dX_k Y(t_{k-1})
//   (X succ Y)(t_m)    = sum_{k<=m} X(t_{k-1}) dY_k
//   qbracket(X,Y)(t_m) = sum_{k<=m} dX_k dY_k
//   product(X,Y)(t)    = X(t) Y(t)
// product = prec + succ + qbracket holds exactly (Abel summation) whenever
// both paths start at zero.
GridPath prec(const GridPath& x, const GridPath& y);
GridPath succ(const GridPath& x, const GridPath& y);
GridPath qbracket(const GridPath& x, const GridPath& y);
GridPath product(const GridPath& x, const GridPath& y);

// Jump process: value at t_k is the increment dX_k, zero at t0.
GridPath delta(const GridPath& x);

struct BracketSplit {
    GridPath total, continuous, jump;
};

// Splits the bracket over the union of the two flag sets: jump sums the
// increment products over flagged steps, continuous over the rest.
BracketSplit bracket_split(const GridPath& x, const GridPath& y);

GridPath bracket_continuous(const GridPath& x, const GridPath& y);
GridPath bracket_jump(const GridPath& x, const GridPath& y);

enum class PathKind { Brownian, FiniteVariation, CompoundJump, Mixed };

PathKind path_kind_from_string(const std::string& name);

// Deterministic in (seed, path_id): every matrix entry at every step is a
// pure function of those keys, so sampling order never matters.
GridPath sample_path(PathKind kind, int dim, GridPtr grid, std::uint64_t seed,
                     std::uint64_t path_id = 0);

// Integer-valued increments in [-max_entry, max_entry]; exact in doubles,
// used wherever identities are asserted bit-exactly.
GridPath sample_integer_path(int dim, GridPtr grid, std::uint64_t seed, std::uint64_t path_id = 0,
                             int max_entry = 3, bool flag_all_jumps = false);

// CSV dump: header "t,i,j,value", one row per grid point and entry, doubles
// printed with 17 significant digits so a read-back is bit-exact.
void write_path_csv(std::ostream& out, const GridPath& path);
GridPath read_path_csv(std::istream& in);

}  // namespace qsc
