#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gencol/cost.hpp"
#include "gencol/grid.hpp"
#include "gencol/marginal.hpp"
#include "gencol/rmp.hpp"
#include "gencol/rng.hpp"

namespace gencol {

enum class MutationRule { stochastic, best_neighbor };

// What to do when an iteration exhausts its sampling budget without finding a
// positive-gain child: stop the run, or insert the last child anyway and keep
// going (only maxiter or the reference check terminate in the latter mode).
enum class BudgetPolicy { terminate, insert_last };

enum class Termination {
  maxiter_reached,
  sampling_budget_exhausted,
  converged_to_reference,
};
const char* to_string(Termination termination);

struct GenColConfig {
  int n_particles = 0;
  Grid grid;
  Marginal marginal;
  PairPotential potential = PairPotential::coulomb(0.1);
  int beta = 5;                   // pool holds at most beta * n_sites columns
  long maxiter = 0;               // 0 picks 200 * n_sites
  long maxsamples = 1000;         // per-iteration sampling budget
  std::uint64_t seed = 0;
  long init_random_columns = -1;  // < 0 picks (beta - 1) * n_sites
  double activity_tol = 1e-10;
  double lp_tol = 1e-9;
  MutationRule mutation = MutationRule::stochastic;
  BudgetPolicy budget_policy = BudgetPolicy::terminate;
  std::optional<double> reference_value;  // stop once the RMP value reaches this
  double reference_tol = 1e-9;
};
void validate_config(const GenColConfig& config);

struct PoolEntry {
  Column column;
  double cost = 0;
  long insertion_index = 0;  // strictly increasing over the run
  bool active = true;        // refreshed after each solve
};

// Duplicate-free working set of columns, kept in insertion order.
class ColumnPool {
 public:
  int size() const { return static_cast<int>(entries_.size()); }
  const PoolEntry& entry(int k) const { return entries_[k]; }
  bool contains(const Column& column) const { return index_.count(column) > 0; }

  // Returns false (and changes nothing) when the column is already present.
  bool insert(Column column, double cost);

  RestrictedProblem restricted_problem(const Marginal& marginal) const;

  // Marks entry k active iff alpha_k > activity_tol.
  void refresh_activity(const RmpSolution& solution, double activity_tol);

  // When the pool has reached max_columns, removes the oldest inactive
  // entries, at most clear_count of them. Returns the number removed.
  int prune(int max_columns, int clear_count);

  std::vector<int> active_indices() const;

 private:
  std::vector<PoolEntry> entries_;
  std::unordered_map<Column, int, ColumnHash> index_;
  long next_insertion_index_ = 0;
};

struct IterationRecord {
  double rmp_value = 0;
  double accepted_gain = 0;  // 0 when nothing was inserted
  long samples_used = 0;
  int pool_size = 0;         // pool size at the end of the iteration
};

struct RunTrace {
  std::vector<IterationRecord> iterations;
  long total_accepted = 0;  // columns inserted with positive gain
  long total_sampled = 0;   // children generated, duplicates included
  Termination termination = Termination::maxiter_reached;
};

struct GenColResult {
  std::vector<Column> active_columns;
  std::vector<double> weights;  // alpha restricted to the active columns
  std::vector<double> dual;
  double final_cost = 0;
  RunTrace trace;
};

// Reduced-cost gain of a candidate against the potential y: lambda^T y - c.
double gain(const Column& candidate, const std::vector<double>& dual, double cost);

// Stacked columns on every site plus i.i.d. random columns (duplicates are
// dropped, not redrawn, so up to init_random_columns are added).
ColumnPool initialize_pool(const GenColConfig& config, const CostMatrix& cost, Rng& rng);

struct CandidateSample {
  Column column;
  double cost = 0;
  double gain = 0;
};

struct SampleOutcome {
  std::optional<CandidateSample> accepted;
  // Most recent child not already in the pool; used by the insert_last policy.
  std::optional<CandidateSample> last_rejected;
  long samples_used = 0;
};

// Draws children from random active parents until one has positive gain or
// the budget runs out. Children already in the pool consume budget but are
// never accepted.
SampleOutcome sample_candidate(const ColumnPool& pool, const RmpSolution& solution,
                               const Grid& grid, const CostMatrix& cost, Rng& rng,
                               long maxsamples, MutationRule rule);

struct RunHooks {
  // Called after each RMP solve with the problem that was solved.
  std::function<void(const RestrictedProblem&, const RmpSolution&)> after_solve;
  // Called at the end of each iteration (1-based) with its trace record.
  std::function<void(long, const IterationRecord&)> on_iteration;
};

GenColResult run(const GenColConfig& config, const RunHooks& hooks = {});

}  // namespace gencol
