#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "gencol/gencol.hpp"
#include "gencol/oracles.hpp"

using namespace gencol;

namespace {

GenColConfig small_config(int particles, int gridpoints, std::uint64_t seed) {
  GenColConfig config;
  config.n_particles = particles;
  config.grid = make_uniform_grid_1d(gridpoints, 1.0);
  config.marginal = make_uniform_marginal(gridpoints);
  config.potential = PairPotential::coulomb(0.1);
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("gain against the stack-only potential") {
  // identity pool on two sites with N=2: y = (10, 10); the split column costs
  // 1/sqrt(1.01), so its gain is 10 - 1/sqrt(1.01)
  const std::vector<double> dual = {10.0, 10.0};
  const Column candidate = make_column({1, 1});
  const double g = gain(candidate, dual, 1.0 / std::sqrt(1.01));
  CHECK(g == doctest::Approx(9.004962809790011).epsilon(1e-13));
}

TEST_CASE("column pool rejects duplicates and keeps insertion order") {
  ColumnPool pool;
  CHECK(pool.insert(make_column({2, 0}), 1.0));
  CHECK(pool.insert(make_column({1, 1}), 2.0));
  CHECK_FALSE(pool.insert(make_column({2, 0}), 9.0));
  CHECK(pool.size() == 2);
  CHECK(pool.contains(make_column({1, 1})));
  CHECK_FALSE(pool.contains(make_column({0, 2})));
  CHECK(pool.entry(0).insertion_index < pool.entry(1).insertion_index);
  CHECK(pool.entry(0).cost == 1.0);
}

TEST_CASE("prune removes only the oldest inactive entries") {
  ColumnPool pool;
  for (int i = 0; i < 6; ++i) pool.insert(stack_column(6, i, 2), 1.0 + i);
  RmpSolution sol;
  sol.alpha = {0.0, 0.5, 0.0, 0.0, 0.5, 0.0};  // entries 1 and 4 active
  pool.refresh_activity(sol, 1e-10);

  SUBCASE("below the cap nothing happens") {
    CHECK(pool.prune(7, 3) == 0);
    CHECK(pool.size() == 6);
  }
  SUBCASE("at the cap the oldest inactive go first") {
    CHECK(pool.prune(6, 3) == 3);  // removes entries 0, 2, 3
    REQUIRE(pool.size() == 3);
    CHECK(pool.entry(0).column == stack_column(6, 1, 2));
    CHECK(pool.entry(1).column == stack_column(6, 4, 2));
    CHECK(pool.entry(2).column == stack_column(6, 5, 2));
    CHECK_FALSE(pool.contains(stack_column(6, 0, 2)));
  }
  SUBCASE("never removes more than the inactive count") {
    CHECK(pool.prune(6, 6) == 4);
    CHECK(pool.size() == 2);
    CHECK(pool.entry(0).column == stack_column(6, 1, 2));
  }
}

TEST_CASE("initial pool holds stacks plus deduplicated random columns") {
  GenColConfig config = small_config(3, 6, 2024);
  const CostMatrix cost = build_cost_matrix(config.grid, config.potential);
  Rng rng(config.seed);
  const ColumnPool pool = initialize_pool(config, cost, rng);
  // 6 stacks plus at most (beta-1)*6 = 24 random columns
  CHECK(pool.size() >= 6);
  CHECK(pool.size() <= 30);
  for (int i = 0; i < 6; ++i) CHECK(pool.contains(stack_column(6, i, 3)));
  // every entry cost is the interaction energy of its column
  for (int k = 0; k < pool.size(); ++k)
    CHECK(pool.entry(k).cost ==
          doctest::Approx(column_cost(pool.entry(k).column, cost)).epsilon(1e-13));
}

TEST_CASE("config validation") {
  GenColConfig config = small_config(3, 6, 1);
  CHECK_NOTHROW(validate_config(config));
  config.n_particles = 1;
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
  config = small_config(3, 6, 1);
  config.beta = 1;
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
  config = small_config(3, 6, 1);
  config.marginal = make_uniform_marginal(5);
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
  config = small_config(3, 6, 1);
  config.maxsamples = 0;
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
}

TEST_CASE("small run reaches the enumerated optimum") {
  GenColConfig config = small_config(3, 8, 7);
  const CostMatrix cost = build_cost_matrix(config.grid, config.potential);
  const FullLpSolution exact =
      solve_full_lp(8, 3, cost, config.marginal);
  config.reference_value = exact.value;

  const GenColResult result = run(config);
  CHECK(result.trace.termination == Termination::converged_to_reference);
  CHECK(std::abs(result.final_cost - exact.value) <= 1e-9);
  REQUIRE(!result.active_columns.empty());
  // weights form a probability vector over the active columns
  double sum = 0;
  for (double w : result.weights) {
    CHECK(w > 0);
    sum += w;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("run invariants: monotone value, positive gains, bounded pool") {
  GenColConfig config = small_config(3, 8, 11);
  const GenColResult result = run(config);
  const auto& iterations = result.trace.iterations;
  REQUIRE(!iterations.empty());
  long accepted = 0;
  for (std::size_t k = 0; k < iterations.size(); ++k) {
    if (k > 0) CHECK(iterations[k].rmp_value <= iterations[k - 1].rmp_value + 1e-8);
    if (iterations[k].accepted_gain != 0.0) {
      CHECK(iterations[k].accepted_gain > 0);
      ++accepted;
    }
    CHECK(iterations[k].pool_size >= 8);
    CHECK(iterations[k].pool_size <= 5 * 8);
    CHECK(iterations[k].samples_used <= config.maxsamples);
  }
  CHECK(accepted == result.trace.total_accepted);
}

TEST_CASE("same seed reproduces the trace, different seed differs") {
  const GenColConfig config = small_config(3, 8, 42);
  const GenColResult a = run(config);
  const GenColResult b = run(config);
  REQUIRE(a.trace.iterations.size() == b.trace.iterations.size());
  for (std::size_t k = 0; k < a.trace.iterations.size(); ++k) {
    CHECK(a.trace.iterations[k].rmp_value == b.trace.iterations[k].rmp_value);
    CHECK(a.trace.iterations[k].samples_used == b.trace.iterations[k].samples_used);
    CHECK(a.trace.iterations[k].accepted_gain == b.trace.iterations[k].accepted_gain);
  }
  CHECK(a.final_cost == b.final_cost);
  CHECK(a.weights == b.weights);

  GenColConfig other = small_config(3, 8, 43);
  const GenColResult c = run(other);
  const bool same_length = c.trace.iterations.size() == a.trace.iterations.size();
  bool identical = same_length;
  if (same_length)
    for (std::size_t k = 0; k < a.trace.iterations.size(); ++k)
      identical = identical && a.trace.iterations[k].samples_used ==
                                   c.trace.iterations[k].samples_used;
  CHECK_FALSE(identical);
}

TEST_CASE("budget exhaustion terminates by default and can insert instead") {
  // maxsamples=1 on a tiny instance stalls quickly
  GenColConfig config = small_config(2, 4, 3);
  config.maxsamples = 1;
  config.maxiter = 40;
  const GenColResult result = run(config);
  const bool stalled =
      result.trace.termination == Termination::sampling_budget_exhausted;
  const bool ran_out = result.trace.termination == Termination::maxiter_reached;
  CHECK((stalled || ran_out));
  if (stalled) {
    const auto& last = result.trace.iterations.back();
    CHECK(last.accepted_gain == 0.0);
  }

  GenColConfig insert_config = small_config(2, 4, 3);
  insert_config.maxsamples = 1;
  insert_config.maxiter = 40;
  insert_config.budget_policy = BudgetPolicy::insert_last;
  const GenColResult inserted = run(insert_config);
  // the literal policy never stops on exhaustion
  CHECK(inserted.trace.termination != Termination::sampling_budget_exhausted);
  CHECK(inserted.trace.iterations.size() == 40);
}

TEST_CASE("best neighbor mutation also reaches the optimum") {
  GenColConfig config = small_config(3, 6, 5);
  config.mutation = MutationRule::best_neighbor;
  const CostMatrix cost = build_cost_matrix(config.grid, config.potential);
  config.reference_value = solve_full_lp(6, 3, cost, config.marginal).value;
  const GenColResult result = run(config);
  CHECK(result.trace.termination == Termination::converged_to_reference);
}

TEST_CASE("after_solve hook sees every restricted solve") {
  GenColConfig config = small_config(3, 6, 9);
  const CostMatrix cost = build_cost_matrix(config.grid, config.potential);
  config.reference_value = solve_full_lp(6, 3, cost, config.marginal).value;
  long solves = 0;
  double worst = 0;
  RunHooks hooks;
  hooks.after_solve = [&](const RestrictedProblem& problem, const RmpSolution& sol) {
    ++solves;
    worst = std::max(worst, verify_certificates(problem, sol).max_residual());
  };
  const GenColResult result = run(config, hooks);
  CHECK(solves == static_cast<long>(result.trace.iterations.size()));
  CHECK(worst <= 1e-8);
}
