#include "qsc/cli.hpp"

#include "qsc/axioms.hpp"
#include "qsc/magma.hpp"
#include "qsc/path_exp.hpp"
#include "qsc/prelie.hpp"
#include "qsc/strat.hpp"
#include "qsc/words.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace qsc {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// RFC 4180: quote a field when it contains a comma, a quote or a newline.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

struct OutputTarget {
    std::ostream& fallback;
    std::string path;

    // Writes to the file when a path is set, to the stream otherwise.
    void write(const std::string& content) const {
        if (path.empty()) {
            fallback << content;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error("cannot open output file: " + path);
        f << content;
    }
};

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok));
    }
    if (out.empty()) throw Error("empty list: " + csv);
    return out;
}

// ---------------------------------------------------------------------------
// axioms

struct AxiomsArgs {
    SuiteConfig cfg;
    std::string out_path;
    std::string refine;
    int refine_seeds = 50;
    bool verbose = false;
};

int cmd_axioms(const AxiomsArgs& a, std::ostream& out, std::ostream& err) {
    if (!a.refine.empty()) {
        const std::vector<int> grids = parse_int_list(a.refine);
        std::string csv = "check_id,grid_steps,median_residual\n";
        bool all_decreasing = true;
        bool any = false;
        for (const std::string& id : catalog_check_ids(a.cfg.backend, a.cfg.catalog)) {
            std::vector<RefinementRow> rows;
            try {
                rows = refinement_study(a.cfg, id, grids, a.refine_seeds);
            } catch (const Error&) {
                continue;  // not asymptotic here
            }
            any = true;
            for (const auto& r : rows)
                csv += csv_field(id) + "," + std::to_string(r.grid_steps) + "," +
                       fmt17(r.median_residual) + "\n";
            all_decreasing = all_decreasing && strictly_decreasing(rows);
        }
        if (!any) {
            err << "no asymptotic checks in catalog '" << a.cfg.catalog << "' on backend '"
                << a.cfg.backend << "'\n";
            return 2;
        }
        OutputTarget{out, a.out_path}.write(csv);
        return all_decreasing ? 0 : 1;
    }

    const AxiomReport rep = run_suite(a.cfg);
    print_report(out, rep);
    if (a.verbose) {
        for (const auto& c : rep.checks)
            if (!c.skipped) err << c.id << " took " << c.seconds << " s\n";
    }
    if (!a.out_path.empty()) OutputTarget{out, a.out_path}.write(report_to_json(rep));
    return rep.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// expand

struct ExpandArgs {
    std::string op = "prec";
    std::string lhs, rhs;
    std::string input = "X";
    std::string flavor = "strat";
    int order = 3;
};

std::string poly_str(const Poly<WordBackend>& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [mono, c] : p.terms()) {
        const bool neg = c < 0;
        if (first) {
            if (neg) out += '-';
        } else {
            out += neg ? " - " : " + ";
        }
        const Rational a = neg ? Rational(-c) : c;
        if (a != 1 || mono.empty()) out += rational_str(a);
        if (!mono.empty()) {
            if (a != 1) out += "\xc2\xb7";
            for (std::size_t i = 0; i < mono.size(); ++i) {
                if (i) out += "\xe2\x8a\x99";  // odot
                out += "(" + to_string(mono[i].v) + ")";
            }
        }
        first = false;
    }
    return out;
}

int cmd_expand(const ExpandArgs& a, std::ostream& out, std::ostream&) {
    const std::string& op = a.op;
    if (op == "prec" || op == "succ" || op == "bracket" || op == "product" || op == "oracle") {
        const WordSeries lhs = parse_word_series(a.lhs);
        const WordSeries rhs = parse_word_series(a.rhs);
        WordSeries result;
        if (op == "prec")
            result = prec(lhs, rhs);
        else if (op == "succ")
            result = succ(lhs, rhs);
        else if (op == "bracket")
            result = bracket(lhs, rhs);
        else if (op == "product")
            result = product(lhs, rhs);
        else
            result = oracle_product<AdditiveMonoid>(parse_word(a.lhs), parse_word(a.rhs));
        out << to_string(result) << "\n";
        return 0;
    }
    const Flavor f = flavor_from_string(a.flavor);
    if (op == "star") {
        const Poly<WordBackend> p = Poly<WordBackend>::from_element(parse_word_series(a.lhs));
        const Poly<WordBackend> q = Poly<WordBackend>::from_element(parse_word_series(a.rhs));
        out << poly_str(star_product<WordBackend>(f, p, q, 2 * std::max(a.order, 2))) << "\n";
        return 0;
    }
    if (op == "brace") {
        std::vector<WordSeries> slots;
        std::stringstream ss(a.lhs);
        std::string part;
        while (std::getline(ss, part, '|')) slots.push_back(parse_word_series(part));
        out << to_string(brace<WordBackend>(f, slots, parse_word_series(a.rhs))) << "\n";
        return 0;
    }
    if (op == "magnus") {
        MagmaPool pool;
        MagmaBackend::Element x{{pool.leaf(), 1}};
        const auto omega = magnus_graded_with<MagmaBackend>(magma_tri(pool), x, a.order);
        MagmaBackend::Element total;
        for (int d = 1; d <= omega.order; ++d)
            if (omega.has(d)) total = MagmaBackend::add(total, omega.at(d));
        const std::string glyph =
            f == Flavor::Strat ? "\xe2\x96\xb7" : "\xe2\x96\xb6";  // open/filled triangle
        out << magma_series_str(pool, total, glyph, a.input) << "\n";
        return 0;
    }
    throw Error("unknown expand op: " + op);
}

// ---------------------------------------------------------------------------
// magnus

struct MagnusArgs {
    std::string flavor = "ito";
    std::string kind = "integer";  // integer | brownian
    int dim = 3;
    int steps = 8;
    int order = 6;
    int seeds = 20;
    double scale = 0.1;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string svg_path;
};

GridPath magnus_driver(const MagnusArgs& a, GridPtr grid, int seed_idx) {
    if (a.kind == "brownian") {
        GridPath w = sample_path(PathKind::Brownian, a.dim, grid, a.seed, seed_idx + 1);
        return a.scale * w;
    }
    // integer increments rescaled so every step has Frobenius norm <= scale
    CounterRng rng = CounterRng(a.seed).stream(seed_idx + 1);
    std::vector<Matrix> incs;
    incs.reserve(grid->steps());
    for (int k = 1; k <= grid->steps(); ++k) {
        auto step_rng = rng.stream(k);
        Matrix m(a.dim, a.dim);
        for (int i = 0; i < a.dim; ++i)
            for (int j = 0; j < a.dim; ++j)
                m(i, j) = static_cast<double>(step_rng.next_int(-1, 1));
        const double f = m.norm();  // Frobenius
        if (f > 0) m *= a.scale / std::max(1.0, f);
        incs.push_back(std::move(m));
    }
    return GridPath::from_increments(std::move(grid), incs);
}

std::string svg_log_plot(const std::vector<double>& mean_err, const std::string& title);

int cmd_magnus(const MagnusArgs& a, std::ostream& out, std::ostream& err) {
    const Flavor f = flavor_from_string(a.flavor);
    GridPtr grid = Grid::uniform(a.steps);

    std::vector<std::vector<double>> errs(a.order + 1);  // errs[N][seed]
    for (int s = 0; s < a.seeds; ++s) {
        const GridPath x = magnus_driver(a, grid, s);
        const Matrix ref = stoch_exp_path(x, Side::Right, f).terminal();
        for (int N = 1; N <= a.order; ++N) {
            const GridPath omega = magnus<ProcessBackend>(x, f, N);
            errs[N].push_back((matrix_exp(omega.terminal()) - ref).norm());
        }
    }

    std::vector<double> mean(a.order + 1, 0.0), sd(a.order + 1, 0.0);
    for (int N = 1; N <= a.order; ++N) {
        double m = 0;
        for (double e : errs[N]) m += e;
        m /= a.seeds;
        double v = 0;
        for (double e : errs[N]) v += (e - m) * (e - m);
        mean[N] = m;
        sd[N] = a.seeds > 1 ? std::sqrt(v / (a.seeds - 1)) : 0.0;
    }

    // Discretization floor for statistical drivers: rerun the largest order
    // on a 4x finer grid; truncation error this small means the remaining
    // error is the grid, not the series.
    double floor_est = 0.0;
    if (a.kind == "brownian") {
        GridPtr fine = Grid::uniform(4 * a.steps);
        MagnusArgs fa = a;
        fa.steps = 4 * a.steps;
        double m = 0;
        for (int s = 0; s < a.seeds; ++s) {
            const GridPath x = magnus_driver(fa, fine, s);
            const Matrix ref = stoch_exp_path(x, Side::Right, f).terminal();
            const GridPath omega = magnus<ProcessBackend>(x, f, a.order);
            m += (matrix_exp(omega.terminal()) - ref).norm();
        }
        floor_est = m / a.seeds;
        out << "floor_estimate_4K," << fmt17(floor_est) << "\n";
    }

    std::string csv = "N,mean_err,std_err\n";
    for (int N = 1; N <= a.order; ++N)
        csv += std::to_string(N) + "," + fmt17(mean[N]) + "," + fmt17(sd[N]) + "\n";
    OutputTarget{out, a.out_path}.write(csv);

    if (!a.svg_path.empty()) {
        std::ofstream svg(a.svg_path, std::ios::binary);
        if (!svg) throw Error("cannot open output file: " + a.svg_path);
        svg << svg_log_plot(std::vector<double>(mean.begin() + 1, mean.end()),
                            "Magnus truncation error, flavor " + flavor_name(f));
    }

    bool pass = true;
    for (int N = 1; N + 1 <= a.order; ++N) {
        const bool dec = mean[N + 1] < mean[N];
        const bool at_floor = floor_est > 0 && mean[N + 1] <= 3.0 * floor_est;
        if (!dec && !at_floor) pass = false;
    }
    if (!pass) err << "error column is not decreasing\n";
    return pass ? 0 : 1;
}

std::string svg_log_plot(const std::vector<double>& mean_err, const std::string& title) {
    const int W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;
    double lo = 1e300, hi = -1e300;
    for (double e : mean_err) {
        const double l = std::log10(std::max(e, 1e-18));
        lo = std::min(lo, l);
        hi = std::max(hi, l);
    }
    if (hi - lo < 1) hi = lo + 1;
    const int n = static_cast<int>(mean_err.size());
    auto xmap = [&](int i) { return ml + (W - ml - mr) * (n == 1 ? 0.5 : double(i) / (n - 1)); };
    auto ymap = [&](double e) {
        const double l = std::log10(std::max(e, 1e-18));
        return mt + (H - mt - mb) * (hi - l) / (hi - lo);
    };
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    s << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">"
      << title << "</text>\n";
    s << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
      << H - mb << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
      << "\" stroke=\"black\"/>\n";
    for (int g = static_cast<int>(std::ceil(lo)); g <= static_cast<int>(std::floor(hi)); ++g) {
        const double y = ymap(std::pow(10.0, g));
        s << "<line x1=\"" << ml - 4 << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\"" << y
          << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << g
          << "</text>\n";
    }
    s << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (int i = 0; i < n; ++i) s << xmap(i) << "," << ymap(mean_err[i]) << " ";
    s << "\"/>\n";
    for (int i = 0; i < n; ++i) {
        s << "<circle cx=\"" << xmap(i) << "\" cy=\"" << ymap(mean_err[i])
          << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
        s << "<text x=\"" << xmap(i) << "\" y=\"" << H - mb + 18
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << (i + 1)
          << "</text>\n";
    }
    s << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">truncation order "
         "N</text>\n";
    s << "</svg>\n";
    return s.str();
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    std::string kind = "brownian";
    int dim = 1;
    int steps = 256;
    std::uint64_t seed = 0;
    double t_end = 1.0;
    std::string out_path;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream&) {
    const GridPath p =
        sample_path(path_kind_from_string(a.kind), a.dim, Grid::uniform(a.steps, a.t_end), a.seed);
    std::ostringstream buf;
    write_path_csv(buf, p);
    OutputTarget{out, a.out_path}.write(buf.str());
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"quasi-shuffle stochastic calculus workbench"};
    app.require_subcommand(1);

    AxiomsArgs ax;
    CLI::App* axioms = app.add_subcommand("axioms", "run an axiom catalog against a backend");
    axioms->add_option("--backend", ax.cfg.backend, "words | jump | continuous | mixed | rb")
        ->check(CLI::IsMember({"words", "jump", "continuous", "mixed", "rb"}));
    axioms
        ->add_option("--catalog", ax.cfg.catalog,
                     "karandikar | singular | strat | derived | prelie | rb | all")
        ->check(CLI::IsMember({"karandikar", "singular", "strat", "derived", "prelie", "rb", "all"}));
    axioms->add_option("--trials", ax.cfg.trials)->check(CLI::PositiveNumber);
    axioms->add_option("--seed", ax.cfg.seed);
    axioms->add_option("--grid", ax.cfg.grid_steps)->check(CLI::PositiveNumber);
    axioms->add_option("--dim", ax.cfg.dim)->check(CLI::Range(1, 8));
    axioms->add_option("--rb-length", ax.cfg.rb_length)->check(CLI::PositiveNumber);
    axioms->add_option("--tol", ax.cfg.tol);
    axioms->add_option("--threads", ax.cfg.threads)->check(CLI::Range(1, 64));
    axioms->add_option("--out", ax.out_path, "write the JSON report here");
    axioms->add_option("--refine", ax.refine, "comma-separated grid sizes; emits a CSV of medians");
    axioms->add_option("--refine-seeds", ax.refine_seeds)->check(CLI::PositiveNumber);
    axioms->add_flag("--verbose", ax.verbose, "per-check wall times on stderr");

    ExpandArgs ex;
    CLI::App* expand = app.add_subcommand("expand", "print symbolic expansions on the word model");
    expand->add_option("--op", ex.op,
                       "prec | succ | bracket | product | oracle | star | brace | magnus")
        ->check(CLI::IsMember(
            {"prec", "succ", "bracket", "product", "oracle", "star", "brace", "magnus"}));
    expand->add_option("--lhs", ex.lhs);
    expand->add_option("--rhs", ex.rhs);
    expand->add_option("--input", ex.input, "generator name for --op magnus");
    expand->add_option("--flavor", ex.flavor)->check(CLI::IsMember({"strat", "ito"}));
    expand->add_option("--order", ex.order)->check(CLI::Range(1, 6));

    MagnusArgs mg;
    CLI::App* magnus_cmd =
        app.add_subcommand("magnus", "Magnus truncation error against the exact exponential");
    magnus_cmd->add_option("--flavor", mg.flavor)->check(CLI::IsMember({"strat", "ito"}));
    magnus_cmd->add_option("--kind", mg.kind)->check(CLI::IsMember({"integer", "brownian"}));
    magnus_cmd->add_option("--dim", mg.dim)->check(CLI::Range(1, 8));
    magnus_cmd->add_option("--steps", mg.steps)->check(CLI::PositiveNumber);
    magnus_cmd->add_option("--order", mg.order)->check(CLI::Range(1, 8));
    magnus_cmd->add_option("--seeds", mg.seeds)->check(CLI::PositiveNumber);
    magnus_cmd->add_option("--scale", mg.scale)->check(CLI::PositiveNumber);
    magnus_cmd->add_option("--seed", mg.seed);
    magnus_cmd->add_option("--out", mg.out_path, "write the CSV here");
    magnus_cmd->add_option("--svg", mg.svg_path, "also write a log-scale SVG plot");

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "sample a path and dump it as CSV");
    simulate->add_option("--kind", sim.kind)
        ->check(CLI::IsMember({"brownian", "finite_variation", "compound_jump", "mixed"}));
    simulate->add_option("--dim", sim.dim)->check(CLI::Range(1, 8));
    simulate->add_option("--steps", sim.steps)->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed);
    simulate->add_option("--t-end", sim.t_end)->check(CLI::PositiveNumber);
    simulate->add_option("--out", sim.out_path, "write the CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        err << "run with --help for usage\n";
        return 2;
    }

    try {
        if (axioms->parsed()) return cmd_axioms(ax, out, err);
        if (expand->parsed()) return cmd_expand(ex, out, err);
        if (magnus_cmd->parsed()) return cmd_magnus(mg, out, err);
        if (simulate->parsed()) return cmd_simulate(sim, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace qsc
