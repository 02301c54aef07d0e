#include "qsc/prelie.hpp"

namespace qsc {

Flavor flavor_from_string(const std::string& name) {
    if (name == "strat" || name == "stratonovich") return Flavor::Strat;
    if (name == "ito") return Flavor::Ito;
    throw Error("unknown flavor: " + name);
}

std::string flavor_name(Flavor f) { return f == Flavor::Strat ? "strat" : "ito"; }

std::vector<Rational> bernoulli_numbers(int n_max) {
    std::vector<Rational> b(n_max + 1);
    b[0] = 1;
    for (int n = 1; n <= n_max; ++n) {
        Rational s = 0;
        for (int j = 0; j < n; ++j) s += Rational(binomial(n + 1, j)) * b[j];
        b[n] = -s / Rational(n + 1);
    }
    return b;
}

}  // namespace qsc
