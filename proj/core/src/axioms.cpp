#include "qsc/axioms.hpp"

#include "qsc/backends.hpp"
#include "qsc/prelie.hpp"
#include "qsc/rng.hpp"
#include "qsc/strat.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace qsc {

std::string exact_class_str(ExactClass cls, double tol) {
    switch (cls) {
        case ExactClass::ExactRational: return "EXACT_RATIONAL";
        case ExactClass::ExactFloat: {
            std::ostringstream s;
            s << "EXACT_FLOAT(" << tol << ")";
            return s.str();
        }
        case ExactClass::Asymptotic: return "ASYMPTOTIC(median decreases K->4K)";
    }
    return "?";
}

namespace {

template <class B>
using Elem = typename B::Element;

template <class B>
double rel_residual(const Elem<B>& lhs, const Elem<B>& rhs) {
    const double scale = std::max({1.0, B::norm(lhs), B::norm(rhs)});
    return B::norm(B::sub(lhs, rhs)) / scale;
}

template <class B>
struct Check {
    std::string id;
    std::string statement;
    ExactClass cls = ExactClass::ExactFloat;
    double tol = 0.0;
    std::function<double(const Elem<B>&, const Elem<B>&, const Elem<B>&)> residual;
    bool skipped = false;
    std::string skip_reason;
};

template <class B>
using Gen = std::function<Elem<B>(std::uint64_t trial, int which)>;

// ---------------------------------------------------------------------------
// Catalog pieces shared by every quasi-shuffle backend.

template <class B>
void add_karandikar(std::vector<Check<B>>& out, ExactClass cls, double tol, bool scalar_comm) {
    using E = Elem<B>;
    auto mk = [&](std::string id, std::string st, auto fn) {
        out.push_back({std::move(id), std::move(st), cls, tol, fn});
    };
    mk("K4", "(X prec Y) prec Z = X prec (Y Z)", [](const E& x, const E& y, const E& z) {
        return rel_residual<B>(B::prec(B::prec(x, y), z), B::prec(x, B::product(y, z)));
    });
    mk("K5", "X succ (Y succ Z) = (X Y) succ Z", [](const E& x, const E& y, const E& z) {
        return rel_residual<B>(B::succ(x, B::succ(y, z)), B::succ(B::product(x, y), z));
    });
    mk("K6", "(X succ Y) prec Z = X succ (Y prec Z)", [](const E& x, const E& y, const E& z) {
        return rel_residual<B>(B::prec(B::succ(x, y), z), B::succ(x, B::prec(y, z)));
    });
    mk("K7", "(X Y) Z = X (Y Z)", [](const E& x, const E& y, const E& z) {
        return rel_residual<B>(B::product(B::product(x, y), z), B::product(x, B::product(y, z)));
    });
    mk("K7D", "(X Y) Z unfolded through the half-shuffle axioms equals X (Y Z)",
       [](const E& x, const E& y, const E& z) {
           // (XY)Z = X prec (YZ) + X succ (Y prec Z) + X succ (Y succ Z)
           //         + X succ [Y,Z] + [X, Y prec Z] + [X, Y succ Z] + [X,[Y,Z]]
           E rhs = B::prec(x, B::product(y, z));
           rhs = B::add(rhs, B::succ(x, B::prec(y, z)));
           rhs = B::add(rhs, B::succ(x, B::succ(y, z)));
           rhs = B::add(rhs, B::succ(x, B::bracket(y, z)));
           rhs = B::add(rhs, B::bracket(x, B::prec(y, z)));
           rhs = B::add(rhs, B::bracket(x, B::succ(y, z)));
           rhs = B::add(rhs, B::bracket(x, B::bracket(y, z)));
           return rel_residual<B>(B::product(B::product(x, y), z), rhs);
       });
    mk("K8", "[X succ Y, Z] = X succ [Y, Z]", [](const E& x, const E& y, const E& z) {
        return rel_residual<B>(B::bracket(B::succ(x, y), z), B::succ(x, B::bracket(y, z)));
    });
    mk("K9", "[X prec Y, Z] = [X, Y succ Z]", [](const E& x, const E& y, const E& z) {
        return rel_residual<B>(B::bracket(B::prec(x, y), z), B::bracket(x, B::succ(y, z)));
    });
    mk("K10", "[X, Y] prec Z = [X, Y prec Z]", [](const E& x, const E& y, const E& z) {
        return rel_residual<B>(B::prec(B::bracket(x, y), z), B::bracket(x, B::prec(y, z)));
    });
    mk("K11", "[[X, Y], Z] = [X, [Y, Z]]", [](const E& x, const E& y, const E& z) {
        return rel_residual<B>(B::bracket(B::bracket(x, y), z), B::bracket(x, B::bracket(y, z)));
    });
    mk("IBP", "X Y = X prec Y + X succ Y + [X, Y]", [](const E& x, const E& y, const E&) {
        const E rhs = B::add(B::add(B::prec(x, y), B::succ(x, y)), B::bracket(x, y));
        return rel_residual<B>(B::product(x, y), rhs);
    });
    if (scalar_comm) {
        mk("COMM", "scalar carrier: X prec Y = Y succ X", [](const E& x, const E& y, const E&) {
            return rel_residual<B>(B::prec(x, y), B::succ(y, x));
        });
    }
}

template <class B>
void add_derived(std::vector<Check<B>>& out, ExactClass cls, double tol) {
    using E = Elem<B>;
    auto dsucc = [](const E& a, const E& b) { return derived_succ_of<B>(a, b); };
    out.push_back({"D18A", "(X prec Y) prec Z = X prec (Y Z) for the pair (prec, dsucc)", cls, tol,
                   [](const E& x, const E& y, const E& z) {
                       return rel_residual<B>(B::prec(B::prec(x, y), z),
                                              B::prec(x, B::product(y, z)));
                   }});
    out.push_back({"D18B", "(X dsucc Y) prec Z = X dsucc (Y prec Z)", cls, tol,
                   [dsucc](const E& x, const E& y, const E& z) {
                       return rel_residual<B>(B::prec(dsucc(x, y), z), dsucc(x, B::prec(y, z)));
                   }});
    out.push_back({"D18C", "X dsucc (Y dsucc Z) = (X Y) dsucc Z", cls, tol,
                   [dsucc](const E& x, const E& y, const E& z) {
                       return rel_residual<B>(dsucc(x, dsucc(y, z)), dsucc(B::product(x, y), z));
                   }});
}

template <class B>
double prelie_associator_residual(Flavor f, const Elem<B>& x, const Elem<B>& y,
                                  const Elem<B>& z) {
    auto tri = [f](const Elem<B>& a, const Elem<B>& b) { return prelie_product<B>(f, a, b); };
    const Elem<B> lhs = B::sub(tri(x, tri(y, z)), tri(tri(x, y), z));
    const Elem<B> rhs = B::sub(tri(y, tri(x, z)), tri(tri(y, x), z));
    return rel_residual<B>(lhs, rhs);
}

template <class B>
void add_prelie(std::vector<Check<B>>& out, Flavor f, ExactClass cls, double tol) {
    using E = Elem<B>;
    const std::string tag = f == Flavor::Ito ? "ITO" : "STRAT";
    out.push_back({"PRELIE-" + tag, "left pre-Lie relation for the " + flavor_name(f) + " product",
                   cls, tol, [f](const E& x, const E& y, const E& z) {
                       return prelie_associator_residual<B>(f, x, y, z);
                   }});
    out.push_back({"LIE-" + tag,
                   "X Y - Y X equals the antisymmetrised " + flavor_name(f) + " product",
                   cls == ExactClass::Asymptotic ? ExactClass::ExactFloat : cls, tol,
                   [f](const E& x, const E& y, const E&) {
                       const E comm = B::sub(B::product(x, y), B::product(y, x));
                       return rel_residual<B>(comm, prelie_bracket<B>(f, x, y));
                   }});
}

template <class B>
void add_skipped(std::vector<Check<B>>& out, std::vector<std::string> ids, std::string reason) {
    for (auto& id : ids) {
        Check<B> c;
        c.id = std::move(id);
        c.statement = "";
        c.skipped = true;
        c.skip_reason = reason;
        out.push_back(std::move(c));
    }
}

// ---------------------------------------------------------------------------
// Process-backend specifics.

void add_singular(std::vector<Check<ProcessBackend>>& out, ExactClass s19_cls, double tol) {
    using E = GridPath;
    auto two_sided = [](const E& a, const E& b, const E& scale_ref) {
        const double scale = std::max({1.0, scale_ref.norm()});
        return std::max(a.norm(), b.norm()) / scale;
    };
    out.push_back({"S19", "[[X,Y]^c, Z]^c = [X, [Y,Z]^c]^c = 0", s19_cls, tol,
                   [two_sided](const E& x, const E& y, const E& z) {
                       const E l = bracket_continuous(bracket_continuous(x, y), z);
                       const E r = bracket_continuous(x, bracket_continuous(y, z));
                       return two_sided(l, r, product(product(x, y), z));
                   }});
    out.push_back({"S20", "[[X,Y]^c, Z]^j = [X, [Y,Z]^c]^j = 0", ExactClass::ExactFloat, 0.0,
                   [two_sided](const E& x, const E& y, const E& z) {
                       const E l = bracket_jump(bracket_continuous(x, y), z);
                       const E r = bracket_jump(x, bracket_continuous(y, z));
                       return two_sided(l, r, product(product(x, y), z));
                   }});
    out.push_back({"S21", "[[X,Y]^j, Z]^c = [X, [Y,Z]^j]^c = 0", ExactClass::ExactFloat, 0.0,
                   [two_sided](const E& x, const E& y, const E& z) {
                       const E l = bracket_continuous(bracket_jump(x, y), z);
                       const E r = bracket_continuous(x, bracket_jump(y, z));
                       return two_sided(l, r, product(product(x, y), z));
                   }});
    out.push_back({"SIBP", "X Y = X ssucc Y + X sprec Y + [X, Y]^j", ExactClass::ExactFloat, tol,
                   [](const E& x, const E& y, const E&) {
                       const E rhs = strat_succ(x, y) + strat_prec(x, y) + bracket_jump(x, y);
                       return rel_residual<ProcessBackend>(product(x, y), rhs);
                   }});
    out.push_back({"SMIXC", "[X prec Y, Z]^c = [X, Y succ Z]^c", ExactClass::ExactFloat, tol,
                   [](const E& x, const E& y, const E& z) {
                       return rel_residual<ProcessBackend>(bracket_continuous(prec(x, y), z),
                                                           bracket_continuous(x, succ(y, z)));
                   }});
    out.push_back({"SMIXJ", "[X prec Y, Z]^j = [X, Y succ Z]^j", ExactClass::ExactFloat, tol,
                   [](const E& x, const E& y, const E& z) {
                       return rel_residual<ProcessBackend>(bracket_jump(prec(x, y), z),
                                                           bracket_jump(x, succ(y, z)));
                   }});
    out.push_back({"TRIPLE", "[[X,Y], Z](t) = sum_{s<=t} d[X,Y]_s dZ_s", ExactClass::ExactFloat,
                   tol, [](const E& x, const E& y, const E& z) {
                       const E lhs = qbracket(qbracket(x, y), z);
                       const E dxy = delta(qbracket(x, y));
                       const E dz = delta(z);
                       const int d = x.dim();
                       std::vector<Matrix> vals;
                       vals.reserve(x.steps() + 1);
                       Matrix acc = Matrix::Zero(d, d);
                       vals.push_back(acc);
                       for (int k = 1; k <= x.steps(); ++k) {
                           acc += dxy.at(k) * dz.at(k);
                           vals.push_back(acc);
                       }
                       const E rhs(x.grid(), d, std::move(vals));
                       return rel_residual<ProcessBackend>(lhs, rhs);
                   }});
    out.push_back({"DELTAJ", "[X,Y]^j(t) = sum_{s<=t, s in J} dX_s dY_s", ExactClass::ExactFloat,
                   tol, [](const E& x, const E& y, const E&) {
                       const E lhs = bracket_split(x, y).jump;
                       const E dx = delta(x);
                       const E dy = delta(y);
                       const int d = x.dim();
                       std::vector<std::uint8_t> flags(x.jump_flags());
                       for (std::size_t k = 0; k < flags.size(); ++k)
                           flags[k] = flags[k] | y.jump_flags()[k];
                       std::vector<Matrix> vals;
                       vals.reserve(x.steps() + 1);
                       Matrix acc = Matrix::Zero(d, d);
                       vals.push_back(acc);
                       for (int k = 1; k <= x.steps(); ++k) {
                           if (flags[k]) acc += dx.at(k) * dy.at(k);
                           vals.push_back(acc);
                       }
                       const E rhs(x.grid(), d, std::move(vals));
                       return rel_residual<ProcessBackend>(lhs, rhs);
                   }});
}

void add_strat_process(std::vector<Check<ProcessBackend>>& out, bool jump_free, double tol) {
    using E = GridPath;
    if (!jump_free) {
        add_skipped(out, {"SH27", "SH28", "SH29", "SH27CF", "SH28CF", "SH29CF"},
                    "requires jump-free paths");
        return;
    }
    struct Row {
        const char* direct_id;
        const char* cf_id;
        ShuffleIdentity which;
        const char* st_direct;
        const char* st_cf;
    };
    const Row rows[] = {
        {"SH27", "SH27CF", ShuffleIdentity::PrecPrec,
         "(X sprec Y) sprec Z - X sprec (Y Z) -> 0 under refinement",
         "(X sprec Y) sprec Z - X sprec (Y Z) = 1/4 [[X,Y],Z] - 1/2 [X,[Y,Z]]"},
        {"SH28", "SH28CF", ShuffleIdentity::SuccPrec,
         "(X ssucc Y) sprec Z - X ssucc (Y sprec Z) -> 0 (identically zero closed form)",
         "(X ssucc Y) sprec Z - X ssucc (Y sprec Z) = 1/4 ([[X,Y],Z] - [X,[Y,Z]])"},
        {"SH29", "SH29CF", ShuffleIdentity::SuccSucc,
         "X ssucc (Y ssucc Z) - (X Y) ssucc Z -> 0 under refinement",
         "X ssucc (Y ssucc Z) - (X Y) ssucc Z = 1/4 [X,[Y,Z]] - 1/2 [[X,Y],Z]"},
    };
    for (const Row& r : rows) {
        // The middle identity's closed form vanishes by bracket
        // associativity, so its direct residual stays at rounding level
        // instead of shrinking like the others.
        const ExactClass cls =
            r.which == ShuffleIdentity::SuccPrec ? ExactClass::ExactFloat : ExactClass::Asymptotic;
        out.push_back({r.direct_id, r.st_direct, cls, cls == ExactClass::ExactFloat ? 1e-12 : 0.0,
                       [w = r.which](const E& x, const E& y, const E& z) {
                           const auto res = shuffle_residual(w, x, y, z);
                           const double scale =
                               std::max({1.0, x.norm(), y.norm(), z.norm()});
                           return res.direct.norm() / (scale * scale * scale);
                       }});
        out.push_back({r.cf_id, r.st_cf, ExactClass::ExactFloat, tol,
                       [w = r.which](const E& x, const E& y, const E& z) {
                           const auto res = shuffle_residual(w, x, y, z);
                           return rel_residual<ProcessBackend>(res.direct, res.closed_form);
                       }});
    }
}

// Stratonovich shuffle closed forms on the word model (whole bracket
// continuous); exact rational identities there.
void add_strat_words(std::vector<Check<WordBackend>>& out) {
    using E = WordSeries;
    using B = WordBackend;
    auto sprec = [](const E& a, const E& b) { return strat_prec_of<B>(a, b); };
    auto ssucc = [](const E& a, const E& b) { return strat_succ_of<B>(a, b); };
    auto quarter = [](const E& a) { return Rational(1, 4) * a; };
    auto half = [](const E& a) { return Rational(1, 2) * a; };
    out.push_back(
        {"SH27CF", "(X sprec Y) sprec Z - X sprec (Y Z) = 1/4 [[X,Y],Z] - 1/2 [X,[Y,Z]]",
         ExactClass::ExactRational, 0.0, [sprec, quarter, half](const E& x, const E& y, const E& z) {
             const E direct = sprec(sprec(x, y), z) - sprec(x, product(y, z));
             const E closed = quarter(bracket(bracket(x, y), z)) - half(bracket(x, bracket(y, z)));
             return rel_residual<B>(direct, closed);
         }});
    out.push_back(
        {"SH28CF", "(X ssucc Y) sprec Z - X ssucc (Y sprec Z) = 1/4 ([[X,Y],Z] - [X,[Y,Z]])",
         ExactClass::ExactRational, 0.0,
         [sprec, ssucc, quarter](const E& x, const E& y, const E& z) {
             const E direct = sprec(ssucc(x, y), z) - ssucc(x, sprec(y, z));
             const E closed =
                 quarter(bracket(bracket(x, y), z) - bracket(x, bracket(y, z)));
             return rel_residual<B>(direct, closed);
         }});
    out.push_back(
        {"SH29CF", "X ssucc (Y ssucc Z) - (X Y) ssucc Z = 1/4 [X,[Y,Z]] - 1/2 [[X,Y],Z]",
         ExactClass::ExactRational, 0.0,
         [ssucc, quarter, half](const E& x, const E& y, const E& z) {
             const E direct = ssucc(x, ssucc(y, z)) - ssucc(product(x, y), z);
             const E closed = quarter(bracket(x, bracket(y, z))) - half(bracket(bracket(x, y), z));
             return rel_residual<B>(direct, closed);
         }});
}

// ---------------------------------------------------------------------------
// Word-backend polynomial machinery checks.

void add_poly_words(std::vector<Check<WordBackend>>& out) {
    using E = WordSeries;
    using B = WordBackend;
    out.push_back({"OG-ASSOC", "(A * B) * C = A * (B * C) in the polynomial algebra",
                   ExactClass::ExactRational, 0.0, [](const E& x, const E& y, const E& z) {
                       Poly<B> a = Poly<B>::from_element(x);
                       Poly<B> b;
                       b.add_term({PolyEntry<B>{1, y}, PolyEntry<B>{1, z}}, 1);
                       Poly<B> c;
                       c.add_term({PolyEntry<B>{1, x}, PolyEntry<B>{1, y}}, Rational(1, 2));
                       c += Poly<B>::from_element(z);
                       const int maxdeg = 5;
                       for (Flavor f : {Flavor::Ito, Flavor::Strat}) {
                           const Poly<B> l =
                               star_product<B>(f, star_product<B>(f, a, b, maxdeg), c, maxdeg);
                           const Poly<B> r =
                               star_product<B>(f, a, star_product<B>(f, b, c, maxdeg), maxdeg);
                           if (!l.equal(r)) return 1.0;
                       }
                       return 0.0;
                   }});
    out.push_back({"IOTA-MORPH", "iota(A * B) = iota(A) iota(B)", ExactClass::ExactRational, 0.0,
                   [](const E& x, const E& y, const E& z) {
                       // Ito flavour: iota is the canonical morphism on any
                       // quasi-shuffle carrier.
                       const Flavor f = Flavor::Ito;
                       Poly<B> a;
                       a.add_term({PolyEntry<B>{1, x}, PolyEntry<B>{1, y}}, 1);
                       Poly<B> b = Poly<B>::from_element(z);
                       const int order = 4;
                       const Graded<B> lhs = iota<B>(f, star_product<B>(f, a, b, order), order);
                       const Graded<B> rhs =
                           graded_product<B>(iota<B>(f, a, order), iota<B>(f, b, order));
                       return (lhs - rhs).norm();
                   }});
    out.push_back({"BRACE-SYM", "{Y1,...,Yn}X is symmetric in the brace slots",
                   ExactClass::ExactRational, 0.0, [](const E& x, const E& y, const E& z) {
                       double worst = 0.0;
                       for (Flavor f : {Flavor::Ito, Flavor::Strat}) {
                           const E two_a = brace<B>(f, {x, y}, z);
                           const E two_b = brace<B>(f, {y, x}, z);
                           worst = std::max(worst, rel_residual<B>(two_a, two_b));
                           std::vector<E> slots = {x, y, z};
                           std::sort(slots.begin(), slots.end(), B::less);
                           const E ref = brace<B>(f, slots, x);
                           do {
                               worst = std::max(worst,
                                                rel_residual<B>(brace<B>(f, slots, x), ref));
                           } while (std::next_permutation(slots.begin(), slots.end(), B::less));
                       }
                       return worst;
                   }});
}

// ---------------------------------------------------------------------------
// Rota-Baxter checks.

void add_rb(std::vector<Check<RBBackend>>& out, double tol) {
    using E = RBSequence;
    out.push_back({"RB13", "R(f) R(g) = R(R(f) g + f R(g) + f g)", ExactClass::ExactFloat, tol,
                   [](const E& f, const E& g, const E&) {
                       const E lhs = rb_mul(rb_apply(f), rb_apply(g));
                       const E inner = rb_mul(rb_apply(f), g) + rb_mul(f, rb_apply(g)) + rb_mul(f, g);
                       return rel_residual<RBBackend>(lhs, rb_apply(inner));
                   }});
    out.push_back({"RB13-RESCALE", "R' = 2R satisfies the weight-2 relation",
                   ExactClass::ExactFloat, tol, [](const E& f, const E& g, const E&) {
                       auto rp = [](const E& h) {
                           E r = rb_apply(h);
                           r *= 2.0;
                           return r;
                       };
                       const E lhs = rb_mul(rp(f), rp(g));
                       const E inner = rb_mul(rp(f), g) + rb_mul(f, rp(g)) + 2.0 * rb_mul(f, g);
                       return rel_residual<RBBackend>(lhs, rp(inner));
                   }});
    const std::pair<const char*, Rational> thetas[] = {
        {"RBA0", Rational(0)}, {"RBA1", Rational(1)}, {"RBA-1", Rational(-1)}, {"RBA2", Rational(2)}};
    for (const auto& [id, theta] : thetas) {
        out.push_back({id,
                       std::string("f *_t g = R(f)g + fR(g) + t fg is associative (t = ") +
                           rational_str(theta) + ")",
                       ExactClass::ExactFloat, tol, [theta = theta](const E& f, const E& g, const E& h) {
                           const E lhs = rb_product(rb_product(f, g, theta), h, theta);
                           const E rhs = rb_product(f, rb_product(g, h, theta), theta);
                           return rel_residual<RBBackend>(lhs, rhs);
                       }});
    }
    out.push_back({"RBSTAR", "f *_1 g = f prec g + f succ g + f g", ExactClass::ExactFloat, tol,
                   [](const E& f, const E& g, const E&) {
                       using B = RBBackend;
                       const E rhs = B::add(B::add(B::prec(f, g), B::succ(f, g)), B::bracket(f, g));
                       return rel_residual<RBBackend>(rb_product(f, g, Rational(1)), rhs);
                   }});
}

// ---------------------------------------------------------------------------
// Suite assembly.

const std::set<std::string> kCatalogNames = {"karandikar", "singular", "strat", "derived",
                                             "prelie",     "rb",       "all"};

struct BackendTraits {
    bool is_words = false;
    bool is_rb = false;
    PathKind kind = PathKind::Brownian;
    bool integer_paths = false;
    bool pure_jump = false;
    bool jump_free = false;
};

BackendTraits backend_traits(const std::string& name) {
    BackendTraits t;
    if (name == "words") {
        t.is_words = true;
    } else if (name == "rb") {
        t.is_rb = true;
    } else if (name == "jump") {
        t.integer_paths = true;
        t.pure_jump = true;
    } else if (name == "continuous") {
        t.kind = PathKind::Brownian;
        t.jump_free = true;
    } else if (name == "mixed") {
        t.kind = PathKind::Mixed;
    } else if (name == "fv") {
        t.kind = PathKind::FiniteVariation;
        t.jump_free = true;
    } else {
        throw Error("unknown backend: " + name);
    }
    return t;
}

bool want(const std::string& catalog, const char* part) {
    return catalog == "all" || catalog == part;
}

std::vector<Check<WordBackend>> build_word_checks(const std::string& catalog) {
    std::vector<Check<WordBackend>> checks;
    if (want(catalog, "karandikar"))
        add_karandikar<WordBackend>(checks, ExactClass::ExactRational, 0.0, false);
    if (want(catalog, "singular"))
        add_skipped(checks, {"S19", "S20", "S21", "SIBP", "SMIXC", "SMIXJ", "TRIPLE", "DELTAJ"},
                    "no jump metadata on the word model");
    if (want(catalog, "strat")) add_strat_words(checks);
    if (want(catalog, "derived")) add_derived<WordBackend>(checks, ExactClass::ExactRational, 0.0);
    if (want(catalog, "prelie")) {
        add_prelie<WordBackend>(checks, Flavor::Ito, ExactClass::ExactRational, 0.0);
        add_prelie<WordBackend>(checks, Flavor::Strat, ExactClass::ExactRational, 0.0);
        add_poly_words(checks);
    }
    if (want(catalog, "rb"))
        add_skipped(checks, {"RB13"}, "Rota-Baxter operator lives on the sequence backend");
    return checks;
}

std::vector<Check<ProcessBackend>> build_process_checks(const std::string& catalog,
                                                        const BackendTraits& t, int dim,
                                                        double tol) {
    std::vector<Check<ProcessBackend>> checks;
    const double k_tol = t.integer_paths ? 0.0 : tol;
    if (want(catalog, "karandikar"))
        add_karandikar<ProcessBackend>(checks, ExactClass::ExactFloat, k_tol, dim == 1);
    if (want(catalog, "singular")) {
        const ExactClass s19 = t.pure_jump ? ExactClass::ExactFloat : ExactClass::Asymptotic;
        add_singular(checks, s19, k_tol);
    }
    if (want(catalog, "strat")) add_strat_process(checks, t.jump_free || t.pure_jump, k_tol);
    if (want(catalog, "derived")) add_derived<ProcessBackend>(checks, ExactClass::ExactFloat, k_tol);
    if (want(catalog, "prelie")) {
        add_prelie<ProcessBackend>(checks, Flavor::Ito, ExactClass::ExactFloat, k_tol);
        if (t.jump_free) {
            // grid-level continuous paths are only asymptotically regular
            add_prelie<ProcessBackend>(checks, Flavor::Strat, ExactClass::Asymptotic, k_tol);
        } else if (t.pure_jump) {
            // all-continuous correction absent; sprec = prec, ssucc = succ
            add_skipped(checks, {"PRELIE-STRAT", "LIE-STRAT"},
                        "Stratonovich pre-Lie structure needs jump-free paths");
        } else {
            add_skipped(checks, {"PRELIE-STRAT", "LIE-STRAT"},
                        "Stratonovich pre-Lie structure needs jump-free paths");
        }
    }
    if (want(catalog, "rb"))
        add_skipped(checks, {"RB13"}, "Rota-Baxter operator lives on the sequence backend");
    return checks;
}

std::vector<Check<RBBackend>> build_rb_checks(const std::string& catalog, double tol) {
    std::vector<Check<RBBackend>> checks;
    if (want(catalog, "karandikar"))
        add_karandikar<RBBackend>(checks, ExactClass::ExactFloat, tol, false);
    if (want(catalog, "singular"))
        add_skipped(checks, {"S19", "S20", "S21"}, "no bracket split on the sequence backend");
    if (want(catalog, "strat"))
        add_skipped(checks, {"SH27", "SH28", "SH29"}, "no bracket split on the sequence backend");
    if (want(catalog, "derived")) add_derived<RBBackend>(checks, ExactClass::ExactFloat, tol);
    if (want(catalog, "prelie"))
        add_prelie<RBBackend>(checks, Flavor::Ito, ExactClass::ExactFloat, tol);
    if (want(catalog, "rb")) add_rb(checks, tol);
    return checks;
}

Gen<WordBackend> word_gen(std::uint64_t seed) {
    return [seed](std::uint64_t trial, int which) {
        CounterRng rng = CounterRng(seed).stream(trial * 4 + which + 1);
        const int len = 1 + static_cast<int>(rng.next_int(0, 3));
        Word w(len);
        for (int i = 0; i < len; ++i) w[i] = 1 + static_cast<Letter>(rng.next_int(0, 4));
        return WordSeries::single(std::move(w));
    };
}

Gen<ProcessBackend> path_gen(const BackendTraits& t, int dim, GridPtr grid, std::uint64_t seed) {
    return [t, dim, grid, seed](std::uint64_t trial, int which) {
        const std::uint64_t path_id = trial * 4 + which + 1;
        if (t.integer_paths)
            return sample_integer_path(dim, grid, seed, path_id, 3, t.pure_jump);
        return sample_path(t.kind, dim, grid, seed, path_id);
    };
}

Gen<RBBackend> rb_gen(int dim, int length, std::uint64_t seed) {
    return [dim, length, seed](std::uint64_t trial, int which) {
        CounterRng rng = CounterRng(seed).stream(trial * 4 + which + 1);
        std::vector<Matrix> entries;
        entries.reserve(length);
        for (int n = 0; n < length; ++n) {
            Matrix a(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    a(i, j) = static_cast<double>(rng.next_int(-3, 3));
            entries.push_back(std::move(a));
        }
        return RBSequence(dim, std::move(entries));
    };
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <class B>
AxiomReport run_checks(const std::string& backend_name, const std::vector<Check<B>>& checks,
                       const Gen<B>& gen, const Gen<B>* gen_refined, const SuiteConfig& cfg) {
    AxiomReport rep;
    rep.backend = backend_name;
    rep.seed = cfg.seed;
    rep.trials = cfg.trials;

    const int T = cfg.trials;
    const std::size_t C = checks.size();
    std::vector<std::vector<double>> res(T, std::vector<double>(C, 0.0));
    std::vector<std::vector<double>> res4;
    bool any_asym = false;
    for (const auto& c : checks)
        if (!c.skipped && c.cls == ExactClass::Asymptotic) any_asym = true;
    if (any_asym && gen_refined) res4.assign(T, std::vector<double>(C, 0.0));

    const int threads = std::max(1, cfg.threads);
    std::vector<std::vector<double>> seconds(threads, std::vector<double>(C, 0.0));

    auto worker = [&](int tid, int t0, int t1) {
        for (int t = t0; t < t1; ++t) {
            const Elem<B> x = gen(t, 0), y = gen(t, 1), z = gen(t, 2);
            for (std::size_t c = 0; c < C; ++c) {
                if (checks[c].skipped) continue;
                const auto start = std::chrono::steady_clock::now();
                res[t][c] = checks[c].residual(x, y, z);
                seconds[tid][c] +=
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            }
            if (!res4.empty()) {
                const Elem<B> x4 = (*gen_refined)(t, 0), y4 = (*gen_refined)(t, 1),
                              z4 = (*gen_refined)(t, 2);
                for (std::size_t c = 0; c < C; ++c) {
                    if (checks[c].skipped || checks[c].cls != ExactClass::Asymptotic) continue;
                    res4[t][c] = checks[c].residual(x4, y4, z4);
                }
            }
        }
    };
    if (threads == 1) {
        worker(0, 0, T);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (T + threads - 1) / threads;
        for (int i = 0; i < threads; ++i) {
            const int t0 = i * chunk, t1 = std::min(T, t0 + chunk);
            if (t0 >= t1) break;
            pool.emplace_back(worker, i, t0, t1);
        }
        for (auto& th : pool) th.join();
    }

    rep.checks.reserve(C);
    for (std::size_t c = 0; c < C; ++c) {
        const Check<B>& ck = checks[c];
        CheckOutcome o;
        o.id = ck.id;
        o.statement = ck.statement;
        o.cls = ck.cls;
        o.tol = ck.tol;
        o.skipped = ck.skipped;
        o.skip_reason = ck.skip_reason;
        for (int tid = 0; tid < threads; ++tid) o.seconds += seconds[tid][c];
        if (ck.skipped) {
            rep.checks.push_back(std::move(o));
            continue;
        }
        std::vector<double> col(T);
        for (int t = 0; t < T; ++t) col[t] = res[t][c];
        o.max_residual = col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
        if (ck.cls == ExactClass::Asymptotic) {
            const double med = median(col);
            double med4 = med;
            if (!res4.empty()) {
                std::vector<double> col4(T);
                for (int t = 0; t < T; ++t) col4[t] = res4[t][c];
                med4 = median(col4);
            }
            o.pass = med <= 1e-12 || med4 < med;
        } else {
            o.pass = o.max_residual <= ck.tol;
            if (!o.pass) {
                for (int t = 0; t < T; ++t) {
                    if (col[t] > ck.tol) {
                        o.first_fail_trial = t;
                        break;
                    }
                }
            }
        }
        rep.pass = rep.pass && o.pass;
        rep.checks.push_back(std::move(o));
    }
    return rep;
}

}  // namespace

AxiomReport run_suite(const SuiteConfig& cfg) {
    if (!kCatalogNames.count(cfg.catalog)) throw Error("unknown catalog: " + cfg.catalog);
    const BackendTraits t = backend_traits(cfg.backend);
    const double tol = cfg.tol > 0 ? cfg.tol : 1e-12;
    if (t.is_words) {
        const auto checks = build_word_checks(cfg.catalog);
        const auto gen = word_gen(cfg.seed);
        return run_checks<WordBackend>(cfg.backend, checks, gen, nullptr, cfg);
    }
    if (t.is_rb) {
        const auto checks = build_rb_checks(cfg.catalog, 0.0);  // integer data: bit-exact
        const auto gen = rb_gen(cfg.dim, cfg.rb_length, cfg.seed);
        return run_checks<RBBackend>(cfg.backend, checks, gen, nullptr, cfg);
    }
    const auto checks = build_process_checks(cfg.catalog, t, cfg.dim, tol);
    const auto gen = path_gen(t, cfg.dim, Grid::uniform(cfg.grid_steps), cfg.seed);
    const auto gen4 = path_gen(t, cfg.dim, Grid::uniform(4 * cfg.grid_steps), cfg.seed);
    return run_checks<ProcessBackend>(cfg.backend, checks, gen, &gen4, cfg);
}

std::string report_to_json(const AxiomReport& report) {
    nlohmann::ordered_json j;
    j["backend"] = report.backend;
    j["seed"] = report.seed;
    j["trials"] = report.trials;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        if (c.skipped) continue;
        nlohmann::ordered_json e;
        e["id"] = c.id;
        e["paper_ref"] = c.statement;
        e["class"] = exact_class_str(c.cls, c.tol);
        e["max_residual"] = c.max_residual;
        e["pass"] = c.pass;
        checks.push_back(std::move(e));
    }
    j["checks"] = std::move(checks);
    j["pass"] = report.pass;
    return j.dump(2) + "\n";
}

void print_report(std::ostream& out, const AxiomReport& report) {
    out << "backend: " << report.backend << "  seed: " << report.seed
        << "  trials: " << report.trials << "\n";
    for (const auto& c : report.checks) {
        out << "  " << std::left << std::setw(12) << c.id;
        if (c.skipped) {
            out << "SKIP  (" << c.skip_reason << ")\n";
            continue;
        }
        out << (c.pass ? "pass" : "FAIL") << "  residual " << std::scientific
            << std::setprecision(3) << c.max_residual << "  " << exact_class_str(c.cls, c.tol);
        if (c.first_fail_trial >= 0) out << "  first failing trial " << c.first_fail_trial;
        out << "\n" << std::defaultfloat;
    }
    out << (report.pass ? "PASS" : "FAIL") << "\n";
}

std::vector<RefinementRow> refinement_study(const SuiteConfig& base, const std::string& check_id,
                                            const std::vector<int>& grid_sizes, int seeds) {
    const BackendTraits t = backend_traits(base.backend);
    if (t.is_words || t.is_rb)
        throw Error("refinement studies need a process backend");
    const double tol = base.tol > 0 ? base.tol : 1e-12;
    const auto checks = build_process_checks(base.catalog, t, base.dim, tol);
    const Check<ProcessBackend>* check = nullptr;
    for (const auto& c : checks)
        if (c.id == check_id) check = &c;
    if (!check) throw UnknownCheckId("no catalog entry with id " + check_id);
    if (check->skipped) throw Error("check " + check_id + " is skipped here: " + check->skip_reason);
    if (check->cls != ExactClass::Asymptotic)
        throw Error("check " + check_id + " is not asymptotic on backend " + base.backend);

    std::vector<RefinementRow> rows;
    rows.reserve(grid_sizes.size());
    for (int K : grid_sizes) {
        const auto gen = path_gen(t, base.dim, Grid::uniform(K), base.seed);
        std::vector<double> residuals(seeds);
        for (int s = 0; s < seeds; ++s)
            residuals[s] = check->residual(gen(s, 0), gen(s, 1), gen(s, 2));
        rows.push_back({K, median(residuals)});
    }
    return rows;
}

bool strictly_decreasing(const std::vector<RefinementRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].median_residual < rows[i - 1].median_residual)) return false;
    return true;
}

std::vector<std::string> catalog_check_ids(const std::string& backend, const std::string& catalog) {
    if (!kCatalogNames.count(catalog)) throw Error("unknown catalog: " + catalog);
    const BackendTraits t = backend_traits(backend);
    std::vector<std::string> ids;
    if (t.is_words) {
        for (const auto& c : build_word_checks(catalog)) ids.push_back(c.id);
    } else if (t.is_rb) {
        for (const auto& c : build_rb_checks(catalog, 0.0)) ids.push_back(c.id);
    } else {
        for (const auto& c : build_process_checks(catalog, t, 2, 1e-12)) ids.push_back(c.id);
    }
    return ids;
}

}  // namespace qsc
