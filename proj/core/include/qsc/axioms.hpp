#pragma once

#include "qsc/errors.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qsc {

// How a check's residual is judged.
//   ExactRational: residual must vanish identically (rational arithmetic)
//   ExactFloat:    relative residual <= tol (tol 0 on integer-valued data)
//   Asymptotic:    identity only holds in the refinement limit; the suite
//                  passes it when the median residual drops from K to 4K
enum class ExactClass { ExactRational, ExactFloat, Asymptotic };

std::string exact_class_str(ExactClass cls, double tol);

struct CheckOutcome {
    std::string id;
    std::string statement;  // serialized under the "paper_ref" key
    ExactClass cls;
    double tol = 0.0;
    double max_residual = 0.0;
    bool pass = true;
    bool skipped = false;
    std::string skip_reason;
    int first_fail_trial = -1;
    double seconds = 0.0;  // wall time; never serialized
};

struct AxiomReport {
    std::string backend;
    std::uint64_t seed = 0;
    int trials = 0;
    std::vector<CheckOutcome> checks;
    bool pass = true;
};

struct SuiteConfig {
    // words | jump | continuous | mixed | fv | rb
    std::string backend = "words";
    // karandikar | singular | strat | derived | prelie | rb | all
    std::string catalog = "all";
    std::uint64_t seed = 0;
    int trials = 100;
    int grid_steps = 256;  // process backends
    int dim = 2;           // process and rb backends
    int rb_length = 16;
    double tol = 0.0;  // 0 keeps per-class defaults
    int threads = 1;
};

// Runs every catalog check against freshly generated elements; the result
// is a pure function of (backend, catalog, seed, trials, shape parameters)
// regardless of thread count.
AxiomReport run_suite(const SuiteConfig& cfg);

// Pinned report schema:
// {backend, seed, trials, checks:[{id, paper_ref, class, max_residual,
//  pass}], pass} with stable key order. Skip reasons and timings are
// deliberately absent so reruns are byte-identical.
std::string report_to_json(const AxiomReport& report);

// Human-readable table, one line per check.
void print_report(std::ostream& out, const AxiomReport& report);

struct RefinementRow {
    int grid_steps = 0;
    double median_residual = 0.0;
};

// Median residual of one asymptotic check across a list of grid sizes,
// one generated triple per seed. Throws UnknownCheckId for unknown ids and
// Error when the check is not asymptotic on this backend.
std::vector<RefinementRow> refinement_study(const SuiteConfig& base, const std::string& check_id,
                                            const std::vector<int>& grid_sizes, int seeds);

bool strictly_decreasing(const std::vector<RefinementRow>& rows);

// All check ids the given backend registers (including skipped ones).
std::vector<std::string> catalog_check_ids(const std::string& backend, const std::string& catalog);

}  // namespace qsc
