#include "qsc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace qsc {

Grid::Grid(std::vector<double> t) : times(std::move(t)) {
    if (times.size() < 2) throw Error("grid needs at least t0 and t1");
    if (times.front() != 0.0) throw Error("grid must start at t0 = 0");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1])) throw Error("grid times must be strictly increasing");
}

GridPtr Grid::uniform(int steps, double t_end) {
    if (steps < 1) throw Error("grid needs at least one step");
    std::vector<double> t(steps + 1);
    for (int k = 0; k <= steps; ++k) t[k] = t_end * static_cast<double>(k) / steps;
    return std::make_shared<Grid>(std::move(t));
}

GridPath::GridPath(GridPtr grid, int dim, std::vector<Matrix> values,
                   std::vector<std::uint8_t> jump_flags)
    : grid_(std::move(grid)), dim_(dim), values_(std::move(values)), jump_flags_(std::move(jump_flags)) {
    if (dim_ < 1) throw DimMismatch("path dimension must be >= 1");
    if (values_.size() != grid_->times.size())
        throw GridMismatch("path value count does not match grid");
    for (const Matrix& v : values_)
        if (v.rows() != dim_ || v.cols() != dim_) throw DimMismatch("path value has wrong shape");
    if (jump_flags_.empty()) jump_flags_.assign(grid_->times.size(), 0);
    if (jump_flags_.size() != grid_->times.size())
        throw GridMismatch("jump flag count does not match grid");
}

GridPath GridPath::zero(GridPtr grid, int dim) {
    std::vector<Matrix> vals(grid->times.size(), Matrix::Zero(dim, dim));
    return GridPath(std::move(grid), dim, std::move(vals));
}

GridPath GridPath::one(GridPtr grid, int dim) {
    std::vector<Matrix> vals(grid->times.size(), Matrix::Identity(dim, dim));
    return GridPath(std::move(grid), dim, std::move(vals));
}

GridPath GridPath::from_increments(GridPtr grid, const std::vector<Matrix>& increments,
                                   std::vector<std::uint8_t> jump_flags) {
    const int K = grid->steps();
    if (static_cast<int>(increments.size()) != K)
        throw GridMismatch("need one increment per grid step");
    const int d = static_cast<int>(increments.front().rows());
    std::vector<Matrix> vals;
    vals.reserve(K + 1);
    vals.push_back(Matrix::Zero(d, d));
    for (int k = 0; k < K; ++k) vals.push_back(vals.back() + increments[k]);
    if (!jump_flags.empty() && jump_flags.size() != grid->times.size()) {
        // allow per-step flags of length K
        if (static_cast<int>(jump_flags.size()) == K)
            jump_flags.insert(jump_flags.begin(), 0);
        else
            throw GridMismatch("jump flag count does not match grid");
    }
    return GridPath(std::move(grid), d, std::move(vals), std::move(jump_flags));
}

bool GridPath::has_jumps() const {
    return std::any_of(jump_flags_.begin(), jump_flags_.end(), [](std::uint8_t f) { return f != 0; });
}

double GridPath::norm() const {
    double m = 0.0;
    for (const Matrix& v : values_) m = std::max(m, v.cwiseAbs().maxCoeff());
    return m;
}

void check_compatible(const GridPath& a, const GridPath& b) {
    if (a.grid_ != b.grid_ && a.grid_->times != b.grid_->times)
        throw GridMismatch("paths live on different grids");
    if (a.dim_ != b.dim_) throw DimMismatch("paths have different dimensions");
}

namespace {

std::vector<std::uint8_t> merge_flags(const GridPath& a, const GridPath& b) {
    std::vector<std::uint8_t> out(a.jump_flags().size(), 0);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = a.jump_flags()[k] | b.jump_flags()[k];
    return out;
}

}  // namespace

GridPath& GridPath::operator+=(const GridPath& o) {
    check_compatible(*this, o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    jump_flags_ = merge_flags(*this, o);
    return *this;
}

GridPath& GridPath::operator-=(const GridPath& o) {
    check_compatible(*this, o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    jump_flags_ = merge_flags(*this, o);
    return *this;
}

GridPath& GridPath::operator*=(double c) {
    for (Matrix& v : values_) v *= c;
    return *this;
}

namespace {

enum class IntKind { Prec, Succ, Bracket };

GridPath integral(IntKind kind, const GridPath& x, const GridPath& y) {
    check_compatible(x, y);
    const int K = x.steps();
    const int d = x.dim();
    std::vector<Matrix> vals;
    vals.reserve(K + 1);
    Matrix acc = Matrix::Zero(d, d);
    vals.push_back(acc);
    for (int k = 1; k <= K; ++k) {
        switch (kind) {
            case IntKind::Prec: acc += x.increment(k) * y.at(k - 1); break;
            case IntKind::Succ: acc += x.at(k - 1) * y.increment(k); break;
            case IntKind::Bracket: acc += x.increment(k) * y.increment(k); break;
        }
        vals.push_back(acc);
    }
    return GridPath(x.grid(), d, std::move(vals), merge_flags(x, y));
}

}  // namespace

GridPath prec(const GridPath& x, const GridPath& y) { return integral(IntKind::Prec, x, y); }
GridPath succ(const GridPath& x, const GridPath& y) { return integral(IntKind::Succ, x, y); }
GridPath qbracket(const GridPath& x, const GridPath& y) { return integral(IntKind::Bracket, x, y); }

GridPath product(const GridPath& x, const GridPath& y) {
    check_compatible(x, y);
    std::vector<Matrix> vals;
    vals.reserve(x.steps() + 1);
    for (int k = 0; k <= x.steps(); ++k) vals.push_back(x.at(k) * y.at(k));
    return GridPath(x.grid(), x.dim(), std::move(vals), merge_flags(x, y));
}

GridPath delta(const GridPath& x) {
    std::vector<Matrix> vals;
    vals.reserve(x.steps() + 1);
    vals.push_back(Matrix::Zero(x.dim(), x.dim()));
    for (int k = 1; k <= x.steps(); ++k) vals.push_back(x.increment(k));
    return GridPath(x.grid(), x.dim(), std::move(vals), x.jump_flags());
}

BracketSplit bracket_split(const GridPath& x, const GridPath& y) {
    check_compatible(x, y);
    const int K = x.steps();
    const int d = x.dim();
    const auto flags = merge_flags(x, y);
    std::vector<Matrix> cont, jump;
    cont.reserve(K + 1);
    jump.reserve(K + 1);
    Matrix acc_c = Matrix::Zero(d, d), acc_j = Matrix::Zero(d, d);
    cont.push_back(acc_c);
    jump.push_back(acc_j);
    for (int k = 1; k <= K; ++k) {
        const Matrix inc = x.increment(k) * y.increment(k);
        if (flags[k])
            acc_j += inc;
        else
            acc_c += inc;
        cont.push_back(acc_c);
        jump.push_back(acc_j);
    }
    GridPath c(x.grid(), d, std::move(cont), flags);
    GridPath j(x.grid(), d, std::move(jump), flags);
    return BracketSplit{qbracket(x, y), std::move(c), std::move(j)};
}

GridPath bracket_continuous(const GridPath& x, const GridPath& y) {
    return bracket_split(x, y).continuous;
}

GridPath bracket_jump(const GridPath& x, const GridPath& y) { return bracket_split(x, y).jump; }

PathKind path_kind_from_string(const std::string& name) {
    if (name == "brownian") return PathKind::Brownian;
    if (name == "finite_variation") return PathKind::FiniteVariation;
    if (name == "compound_jump") return PathKind::CompoundJump;
    if (name == "mixed") return PathKind::Mixed;
    throw Error("unknown path kind: " + name);
}

namespace {

GridPath sample_brownian(int dim, GridPtr grid, CounterRng rng) {
    const int K = grid->steps();
    std::vector<Matrix> incs;
    incs.reserve(K);
    for (int k = 1; k <= K; ++k) {
        auto step_rng = rng.stream(k);
        const double sd = std::sqrt(grid->dt(k));
        Matrix a(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) a(i, j) = sd * step_rng.next_gaussian();
        incs.push_back(std::move(a));
    }
    return GridPath::from_increments(std::move(grid), incs);
}

// Smooth deterministic-style path: entries are polynomials plus one sine
// mode with coefficients drawn once per entry; zero at t = 0.
GridPath sample_finite_variation(int dim, GridPtr grid, CounterRng rng) {
    Matrix a(dim, dim), b(dim, dim), c(dim, dim);
    auto coef_rng = rng.stream(0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            a(i, j) = 2.0 * coef_rng.next_uniform() - 1.0;
            b(i, j) = 2.0 * coef_rng.next_uniform() - 1.0;
            c(i, j) = 2.0 * coef_rng.next_uniform() - 1.0;
        }
    std::vector<Matrix> vals;
    vals.reserve(grid->times.size());
    for (double t : grid->times) {
        const double s = std::sin(6.283185307179586 * t) / 6.283185307179586;
        vals.push_back(a * t + b * (0.5 * t * t) + c * s);
    }
    return GridPath(std::move(grid), dim, std::move(vals));
}

GridPath sample_compound_jump(int dim, GridPtr grid, CounterRng rng) {
    const int K = grid->steps();
    const int target = std::max(1, K / 8);
    std::vector<std::uint8_t> flags(K + 1, 0);
    auto pick_rng = rng.stream(1);
    for (int n = 0; n < target; ++n)
        flags[1 + static_cast<int>(pick_rng.next_int(0, K - 1))] = 1;
    std::vector<Matrix> incs;
    incs.reserve(K);
    for (int k = 1; k <= K; ++k) {
        Matrix a = Matrix::Zero(dim, dim);
        if (flags[k]) {
            auto step_rng = rng.stream(1000 + k);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) a(i, j) = 2.0 * step_rng.next_uniform() - 1.0;
        }
        incs.push_back(std::move(a));
    }
    return GridPath::from_increments(std::move(grid), incs, std::move(flags));
}

}  // namespace

GridPath sample_path(PathKind kind, int dim, GridPtr grid, std::uint64_t seed,
                     std::uint64_t path_id) {
    CounterRng rng = CounterRng(seed).stream(path_id);
    switch (kind) {
        case PathKind::Brownian: return sample_brownian(dim, std::move(grid), rng.stream(11));
        case PathKind::FiniteVariation:
            return sample_finite_variation(dim, std::move(grid), rng.stream(22));
        case PathKind::CompoundJump:
            return sample_compound_jump(dim, std::move(grid), rng.stream(33));
        case PathKind::Mixed: {
            GridPath w = sample_brownian(dim, grid, rng.stream(11));
            GridPath j = sample_compound_jump(dim, grid, rng.stream(33));
            return w + j;
        }
    }
    throw Error("unreachable path kind");
}

GridPath sample_integer_path(int dim, GridPtr grid, std::uint64_t seed, std::uint64_t path_id,
                             int max_entry, bool flag_all_jumps) {
    CounterRng rng = CounterRng(seed).stream(path_id);
    const int K = grid->steps();
    std::vector<Matrix> incs;
    incs.reserve(K);
    for (int k = 1; k <= K; ++k) {
        auto step_rng = rng.stream(k);
        Matrix a(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                a(i, j) = static_cast<double>(step_rng.next_int(-max_entry, max_entry));
        incs.push_back(std::move(a));
    }
    std::vector<std::uint8_t> flags;
    if (flag_all_jumps) flags.assign(K + 1, 1), flags[0] = 0;
    return GridPath::from_increments(std::move(grid), incs, std::move(flags));
}

void write_path_csv(std::ostream& out, const GridPath& path) {
    out << "t,i,j,value\n";
    char buf[64];
    for (int k = 0; k <= path.steps(); ++k) {
        for (int i = 0; i < path.dim(); ++i) {
            for (int j = 0; j < path.dim(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", path.grid()->times[k]);
                out << buf << ',' << i << ',' << j << ',';
                std::snprintf(buf, sizeof buf, "%.17g", path.at(k)(i, j));
                out << buf << '\n';
            }
        }
    }
}

GridPath read_path_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "t,i,j,value")
        throw Error("path CSV must start with header t,i,j,value");
    std::vector<double> times;
    std::map<std::pair<int, int>, std::vector<double>> entries;
    int dim = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tok;
        double t, v;
        int i, j;
        std::getline(row, tok, ',');
        t = std::strtod(tok.c_str(), nullptr);
        std::getline(row, tok, ',');
        i = std::stoi(tok);
        std::getline(row, tok, ',');
        j = std::stoi(tok);
        std::getline(row, tok, ',');
        v = std::strtod(tok.c_str(), nullptr);
        if (i == 0 && j == 0) times.push_back(t);
        dim = std::max(dim, std::max(i, j) + 1);
        entries[{i, j}].push_back(v);
    }
    if (times.empty()) throw Error("path CSV has no data rows");
    std::vector<Matrix> vals(times.size(), Matrix::Zero(dim, dim));
    for (const auto& [ij, col] : entries) {
        if (col.size() != times.size()) throw Error("ragged path CSV");
        for (std::size_t k = 0; k < col.size(); ++k) vals[k](ij.first, ij.second) = col[k];
    }
    return GridPath(std::make_shared<Grid>(std::move(times)), dim, std::move(vals));
}

}  // namespace qsc
