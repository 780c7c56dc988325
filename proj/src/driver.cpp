#include "gencol/gencol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gencol {

const char* to_string(Termination termination) {
  switch (termination) {
    case Termination::maxiter_reached: return "maxiter_reached";
    case Termination::sampling_budget_exhausted: return "sampling_budget_exhausted";
    case Termination::converged_to_reference: return "converged_to_reference";
  }
  return "unknown";
}

void validate_config(const GenColConfig& config) {
  validate_grid(config.grid);
  validate_marginal(config.marginal);
  if (config.marginal.size() != config.grid.n_sites())
    throw std::invalid_argument("config: marginal size does not match the grid");
  if (config.n_particles < 2)
    throw std::invalid_argument("config: need at least 2 particles");
  if (config.beta < 2)
    throw std::invalid_argument("config: beta must be at least 2");
  if (config.maxsamples < 1)
    throw std::invalid_argument("config: maxsamples must be positive");
  if (config.maxiter < 0)
    throw std::invalid_argument("config: maxiter must be nonnegative");
  if (!(config.activity_tol > 0) || !(config.lp_tol > 0) || !(config.reference_tol > 0))
    throw std::invalid_argument("config: tolerances must be positive");
}

bool ColumnPool::insert(Column column, double cost) {
  if (index_.count(column)) return false;
  PoolEntry entry;
  entry.column = std::move(column);
  entry.cost = cost;
  entry.insertion_index = next_insertion_index_++;
  entry.active = true;
  index_.emplace(entry.column, static_cast<int>(entries_.size()));
  entries_.push_back(std::move(entry));
  return true;
}

RestrictedProblem ColumnPool::restricted_problem(const Marginal& marginal) const {
  RestrictedProblem problem;
  problem.columns.reserve(entries_.size());
  problem.costs.reserve(entries_.size());
  for (const auto& e : entries_) {
    problem.columns.push_back(e.column);
    problem.costs.push_back(e.cost);
  }
  problem.marginal = marginal;
  return problem;
}

void ColumnPool::refresh_activity(const RmpSolution& solution, double activity_tol) {
  for (std::size_t k = 0; k < entries_.size(); ++k)
    entries_[k].active =
        k < solution.alpha.size() && solution.alpha[k] > activity_tol;
}

int ColumnPool::prune(int max_columns, int clear_count) {
  if (size() < max_columns) return 0;
  // entries_ is in insertion order, so the first inactive ones are the oldest
  int remaining = clear_count;
  std::vector<PoolEntry> kept;
  kept.reserve(entries_.size());
  for (auto& e : entries_) {
    if (remaining > 0 && !e.active) {
      --remaining;
      continue;
    }
    kept.push_back(std::move(e));
  }
  const int removed = static_cast<int>(entries_.size() - kept.size());
  entries_ = std::move(kept);
  index_.clear();
  for (std::size_t k = 0; k < entries_.size(); ++k)
    index_.emplace(entries_[k].column, static_cast<int>(k));
  return removed;
}

std::vector<int> ColumnPool::active_indices() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < entries_.size(); ++k)
    if (entries_[k].active) out.push_back(static_cast<int>(k));
  return out;
}

double gain(const Column& candidate, const std::vector<double>& dual, double cost) {
  const double inv = 1.0 / candidate.n_particles;
  double dot = 0;
  for (int i = 0; i < candidate.n_sites(); ++i)
    if (candidate.occupancy[i] != 0) dot += candidate.occupancy[i] * inv * dual[i];
  return dot - cost;
}

ColumnPool initialize_pool(const GenColConfig& config, const CostMatrix& cost, Rng& rng) {
  const int l = config.grid.n_sites();
  const long n_random = config.init_random_columns >= 0
                            ? config.init_random_columns
                            : static_cast<long>(config.beta - 1) * l;
  ColumnPool pool;
  for (int i = 0; i < l; ++i) {
    Column stacked = stack_column(l, i, config.n_particles);
    const double c = column_cost(stacked, cost);
    pool.insert(std::move(stacked), c);
  }
  // i.i.d. draws; a duplicate is skipped rather than redrawn, so the random
  // stream advances by exactly n_random columns
  for (long k = 0; k < n_random; ++k) {
    Column col = random_column(l, config.n_particles, rng);
    if (pool.contains(col)) continue;
    const double c = column_cost(col, cost);
    pool.insert(std::move(col), c);
  }
  return pool;
}

namespace {

// Child with the best gain over all neighbor destinations of one randomly
// chosen particle; the single draw counts as one sample.
Column best_neighbor_child(const Column& parent, const Grid& grid,
                           const RmpSolution& solution, const CostMatrix& cost,
                           Rng& rng) {
  const std::int64_t r = static_cast<std::int64_t>(
      rng.uniform_index(static_cast<std::uint64_t>(parent.n_particles)));
  int site = 0;
  std::int64_t acc = parent.occupancy[0];
  while (acc <= r) {
    ++site;
    acc += parent.occupancy[site];
  }
  Column best;
  double best_gain = 0;
  for (const int dest : grid.neighbors[site]) {
    Column child = parent;
    --child.occupancy[site];
    ++child.occupancy[dest];
    const double g = gain(child, solution.dual, column_cost(child, cost));
    if (best.occupancy.empty() || g > best_gain) {
      best = std::move(child);
      best_gain = g;
    }
  }
  return best;
}

}  // namespace

SampleOutcome sample_candidate(const ColumnPool& pool, const RmpSolution& solution,
                               const Grid& grid, const CostMatrix& cost, Rng& rng,
                               long maxsamples, MutationRule rule) {
  const std::vector<int> parents = pool.active_indices();
  if (parents.empty())
    throw std::logic_error("sample_candidate: no active columns to breed from");
  SampleOutcome outcome;
  while (outcome.samples_used < maxsamples) {
    const int parent_idx =
        parents[rng.uniform_index(static_cast<std::uint64_t>(parents.size()))];
    const Column& parent = pool.entry(parent_idx).column;
    Column child = rule == MutationRule::best_neighbor
                       ? best_neighbor_child(parent, grid, solution, cost, rng)
                       : mutate(parent, grid, rng);
    ++outcome.samples_used;
    if (pool.contains(child)) continue;  // duplicate: spent budget, nothing gained
    const double child_cost = column_cost(child, cost);
    const double g = gain(child, solution.dual, child_cost);
    CandidateSample sample{std::move(child), child_cost, g};
    if (g > 0) {
      outcome.accepted = std::move(sample);
      return outcome;
    }
    outcome.last_rejected = std::move(sample);
  }
  return outcome;
}

GenColResult run(const GenColConfig& config, const RunHooks& hooks) {
  validate_config(config);
  const int l = config.grid.n_sites();
  const long maxiter = config.maxiter > 0 ? config.maxiter : 200L * l;
  const int pool_cap = config.beta * l;

  const CostMatrix cost = build_cost_matrix(config.grid, config.potential);
  Rng rng(config.seed);
  ColumnPool pool = initialize_pool(config, cost, rng);

  RunTrace trace;
  trace.termination = Termination::maxiter_reached;
  RmpSolution solution;
  RestrictedProblem problem;
  std::vector<long> basis_ids;  // insertion indices of the last basis, for warm starts

  for (long iteration = 1; iteration <= maxiter; ++iteration) {
    problem = pool.restricted_problem(config.marginal);

    SolveOptions options;
    options.tol = config.lp_tol;
    if (!basis_ids.empty()) {
      // map surviving insertion indices back to pool positions
      std::vector<int> warm;
      warm.reserve(basis_ids.size());
      for (long id : basis_ids) {
        int pos = -1;
        for (int k = 0; k < pool.size(); ++k)
          if (pool.entry(k).insertion_index == id) {
            pos = k;
            break;
          }
        if (pos < 0) {
          warm.clear();
          break;
        }
        warm.push_back(pos);
      }
      options.warm_basis = std::move(warm);
    }

    solution = solve_rmp(problem, options);
    if (solution.status != SolveStatus::optimal)
      throw std::runtime_error(std::string("restricted solve failed: ") +
                               to_string(solution.status));
    if (hooks.after_solve) hooks.after_solve(problem, solution);
    pool.refresh_activity(solution, config.activity_tol);

    basis_ids.clear();
    for (int pos : solution.basis) {
      if (pos < 0) {
        basis_ids.clear();
        break;
      }
      basis_ids.push_back(pool.entry(pos).insertion_index);
    }

    IterationRecord record;
    record.rmp_value = solution.value;

    if (config.reference_value &&
        std::abs(solution.value - *config.reference_value) <= config.reference_tol) {
      record.pool_size = pool.size();
      trace.iterations.push_back(record);
      if (hooks.on_iteration) hooks.on_iteration(iteration, record);
      trace.termination = Termination::converged_to_reference;
      break;
    }

    SampleOutcome outcome = sample_candidate(pool, solution, config.grid, cost, rng,
                                             config.maxsamples, config.mutation);
    trace.total_sampled += outcome.samples_used;
    record.samples_used = outcome.samples_used;

    bool stop = false;
    if (outcome.accepted) {
      ++trace.total_accepted;
      record.accepted_gain = outcome.accepted->gain;
      pool.insert(std::move(outcome.accepted->column), outcome.accepted->cost);
      pool.prune(pool_cap, l);
    } else if (config.budget_policy == BudgetPolicy::insert_last) {
      // literal variant: keep the last child even without improvement and
      // never stop on the budget; the iteration cap bounds the loop
      if (outcome.last_rejected) {
        record.accepted_gain = outcome.last_rejected->gain;
        pool.insert(std::move(outcome.last_rejected->column),
                    outcome.last_rejected->cost);
        pool.prune(pool_cap, l);
      }
    } else {
      trace.termination = Termination::sampling_budget_exhausted;
      stop = true;
    }

    record.pool_size = pool.size();
    trace.iterations.push_back(record);
    if (hooks.on_iteration) hooks.on_iteration(iteration, record);
    if (stop) break;
  }

  GenColResult result;
  result.final_cost = solution.value;
  result.dual = solution.dual;
  result.trace = std::move(trace);
  for (int k = 0; k < static_cast<int>(solution.alpha.size()); ++k) {
    if (!is_active(solution, k, config.activity_tol)) continue;
    result.active_columns.push_back(problem.columns[k]);
    result.weights.push_back(solution.alpha[k]);
  }
  return result;
}

}  // namespace gencol
