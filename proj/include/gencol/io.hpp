#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gencol/gencol.hpp"
#include "gencol/oracles.hpp"

namespace gencol {

struct SummaryRecord {
  double final_cost = 0;
  std::optional<double> reference_cost;
  std::optional<bool> matched;
  long accepted_columns = 0;
  long sampled_columns = 0;
  double wall_seconds = 0;
  Termination termination = Termination::maxiter_reached;
};

SummaryRecord make_summary(const GenColResult& result,
                           std::optional<double> reference_cost, double match_tol,
                           double wall_seconds);

// Writes summary.json, trace.csv, columns.csv, potential.csv and
// pair_density.csv into out_dir (created if missing). All floating-point
// values are printed with 17 significant digits so files round-trip exactly.
void emit_results(const GenColResult& result, const Grid& grid,
                  const SummaryRecord& summary, const std::string& out_dir);

// Readers for the emitted artifacts.
WeightedColumns load_columns_csv(const std::string& path);
SummaryRecord load_summary_json(const std::string& path);

// Solver parameters in command-line vocabulary; also the keys understood by
// experiment manifests.
struct SolveParams {
  int particles = 0;
  int gridpoints = 0;
  int beta = 5;
  double epsilon = 0.1;
  std::string marginal = "uniform";  // uniform | sine | file:PATH
  std::uint64_t seed = 1;
  long maxiter = 0;    // 0 picks the default 200 * gridpoints
  long maxsamples = 1000;
  std::string init_random = "betaminus1";  // betaminus1 | ntimesl | <count>
  std::string mutation = "stochastic";     // stochastic | best_neighbor
  std::string reference = "none";          // none | full-lp | monge
  std::uint64_t full_lp_cap = 100000;
};

// Applies one "key = value" setting to params. Returns false when the key is
// not a per-run parameter (suite-level keys such as out, name or seeds).
// context prefixes error messages, e.g. "file.cfg:12".
bool apply_solve_key(SolveParams& params, const std::string& key,
                     const std::string& value, const std::string& context);

// Resolves grid, marginal, potential and counts into a runnable config.
GenColConfig build_config(const SolveParams& params);

// Computes the requested reference value (none -> empty). The monge reference
// requires the uniform marginal and particles | gridpoints; full-lp requires
// the column universe to fit under full_lp_cap.
std::optional<double> resolve_reference(const SolveParams& params,
                                        const GenColConfig& config,
                                        const CostMatrix& cost);

// Runs one solve end to end: builds captures, streams trace rows to
// out_dir/trace.csv as iterations finish, emits all artifacts, returns the
// summary. log (when given) receives a one-line result description.
SummaryRecord run_and_emit(const SolveParams& params, const std::string& out_dir,
                           std::ostream* log = nullptr);

// A manifest is a line-based key = value file. Keys before the first
// [experiment] section set defaults; each [experiment] section overrides them
// and contributes one experiment. "seeds" lists the seeds to sweep.
struct ExperimentManifest {
  std::string out_dir = "suite_out";
  struct Experiment {
    std::string name;
    SolveParams params;
    std::vector<std::uint64_t> seeds;
  };
  std::vector<Experiment> experiments;
};

ExperimentManifest load_manifest(const std::string& path);

// Runs every experiment x seed, writing per-run artifacts under
// <out>/<experiment>/seed<S>/ plus suite-level summary.csv and averages.csv.
// Returns the number of runs whose result failed to match its reference.
int run_suite(const ExperimentManifest& manifest, std::ostream& log);

}  // namespace gencol
