#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gencol/gencol.hpp"
#include "gencol/io.hpp"
#include "gencol/oracles.hpp"

namespace py = pybind11;

namespace {

using namespace gencol;

SolveParams make_params(int particles, int gridpoints, double epsilon,
                        const std::string& marginal, std::uint64_t seed, int beta,
                        long maxiter, long maxsamples, const std::string& init_random,
                        const std::string& mutation, const std::string& reference) {
  SolveParams p;
  p.particles = particles;
  p.gridpoints = gridpoints;
  p.epsilon = epsilon;
  p.marginal = marginal;
  p.seed = seed;
  p.beta = beta;
  p.maxiter = maxiter;
  p.maxsamples = maxsamples;
  p.init_random = init_random;
  p.mutation = mutation;
  p.reference = reference;
  return p;
}

std::vector<std::vector<double>> matrix_rows(int n, const std::vector<double>& flat) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    rows[i].assign(flat.begin() + static_cast<std::ptrdiff_t>(i) * n,
                   flat.begin() + static_cast<std::ptrdiff_t>(i + 1) * n);
  return rows;
}

CostMatrix cost_from_rows(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("cost matrix rows must all have length n");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return CostMatrix(n, std::move(flat));
}

std::vector<std::vector<std::int32_t>> occupancy_lists(const std::vector<Column>& columns) {
  std::vector<std::vector<std::int32_t>> out;
  out.reserve(columns.size());
  for (const auto& c : columns) out.push_back(c.occupancy);
  return out;
}

py::dict solve_impl(const SolveParams& params) {
  const GenColConfig base = build_config(params);
  const CostMatrix cost = build_cost_matrix(base.grid, base.potential);
  GenColConfig config = base;
  config.reference_value = resolve_reference(params, base, cost);

  const GenColResult result = run(config);

  py::dict d;
  d["final_cost"] = result.final_cost;
  if (config.reference_value) {
    d["reference_cost"] = *config.reference_value;
    d["matched"] =
        std::abs(result.final_cost - *config.reference_value) <= config.reference_tol;
  } else {
    d["reference_cost"] = py::none();
    d["matched"] = py::none();
  }
  d["accepted"] = result.trace.total_accepted;
  d["sampled"] = result.trace.total_sampled;
  d["termination"] = to_string(result.trace.termination);
  d["columns"] = occupancy_lists(result.active_columns);
  d["weights"] = result.weights;
  d["dual"] = result.dual;
  std::vector<double> values;
  values.reserve(result.trace.iterations.size());
  for (const auto& it : result.trace.iterations) values.push_back(it.rmp_value);
  d["trace_values"] = std::move(values);
  return d;
}

py::dict summary_to_dict(const SummaryRecord& s) {
  py::dict d;
  d["final_cost"] = s.final_cost;
  d["reference_cost"] = s.reference_cost ? py::cast(*s.reference_cost) : py::none();
  d["matched"] = s.matched ? py::cast(*s.matched) : py::none();
  d["accepted_columns"] = s.accepted_columns;
  d["sampled_columns"] = s.sampled_columns;
  d["termination"] = to_string(s.termination);
  d["wall_seconds"] = s.wall_seconds;
  return d;
}

constexpr const char* kSolveArgsDoc =
    "particles, gridpoints, epsilon, marginal (uniform | sine | file:PATH), seed, "
    "beta, maxiter (0 = 200 * gridpoints), maxsamples, init_random (betaminus1 | "
    "ntimesl | count), mutation (stochastic | best_neighbor), reference (none | "
    "full-lp | monge)";

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Genetic column generation for symmetric pairwise-cost transport";

  m.def(
      "universe_size",
      [](int gridpoints, int particles) {
        return column_universe_size(gridpoints, particles);
      },
      py::arg("gridpoints"), py::arg("particles"),
      "Number of distinct occupancy columns, binom(gridpoints + particles - 1, "
      "particles).");

  m.def(
      "enumerate_occupancies",
      [](int gridpoints, int particles, std::uint64_t cap) {
        return occupancy_lists(enumerate_columns(gridpoints, particles, cap));
      },
      py::arg("gridpoints"), py::arg("particles"), py::arg("cap") = 1000000,
      "All occupancy vectors with the given totals, in deterministic order.");

  m.def(
      "coulomb_cost_matrix",
      [](int gridpoints, double epsilon, double spacing) {
        const CostMatrix c = build_cost_matrix(make_uniform_grid_1d(gridpoints, spacing),
                                               PairPotential::coulomb(epsilon));
        return matrix_rows(c.size(), c.entries());
      },
      py::arg("gridpoints"), py::arg("epsilon") = 0.1, py::arg("spacing") = 1.0,
      "Pair interaction 1/sqrt(epsilon^2 + |x-y|^2) on the uniform 1D grid.");

  m.def(
      "configuration_cost",
      [](const std::vector<std::int32_t>& occupancy,
         const std::vector<std::vector<double>>& cost_rows) {
        return column_cost(make_column(occupancy), cost_from_rows(cost_rows));
      },
      py::arg("occupancy"), py::arg("cost"),
      "Interaction energy of one occupancy vector: sum of pair costs over "
      "unordered particle pairs.");

  m.def(
      "pair_marginal",
      [](const std::vector<std::int32_t>& occupancy) {
        const PairDensity d = pair_marginal(make_column(occupancy));
        return matrix_rows(d.size(), d.entries());
      },
      py::arg("occupancy"),
      "Two-point marginal of the symmetrized configuration (needs >= 2 particles).");

  m.def(
      "solve",
      [](int particles, int gridpoints, double epsilon, const std::string& marginal,
         std::uint64_t seed, int beta, long maxiter, long maxsamples,
         const std::string& init_random, const std::string& mutation,
         const std::string& reference) {
        return solve_impl(make_params(particles, gridpoints, epsilon, marginal, seed,
                                      beta, maxiter, maxsamples, init_random, mutation,
                                      reference));
      },
      py::arg("particles"), py::arg("gridpoints"), py::arg("epsilon") = 0.1,
      py::arg("marginal") = "uniform", py::arg("seed") = 1, py::arg("beta") = 5,
      py::arg("maxiter") = 0, py::arg("maxsamples") = 1000,
      py::arg("init_random") = "betaminus1", py::arg("mutation") = "stochastic",
      py::arg("reference") = "none",
      (std::string("Run the solver and return a result dict. Arguments: ") +
       kSolveArgsDoc)
          .c_str());

  m.def(
      "solve_and_write",
      [](const std::string& out_dir, int particles, int gridpoints, double epsilon,
         const std::string& marginal, std::uint64_t seed, int beta, long maxiter,
         long maxsamples, const std::string& init_random, const std::string& mutation,
         const std::string& reference) {
        return summary_to_dict(
            run_and_emit(make_params(particles, gridpoints, epsilon, marginal, seed,
                                     beta, maxiter, maxsamples, init_random, mutation,
                                     reference),
                         out_dir));
      },
      py::arg("out_dir"), py::arg("particles"), py::arg("gridpoints"),
      py::arg("epsilon") = 0.1, py::arg("marginal") = "uniform", py::arg("seed") = 1,
      py::arg("beta") = 5, py::arg("maxiter") = 0, py::arg("maxsamples") = 1000,
      py::arg("init_random") = "betaminus1", py::arg("mutation") = "stochastic",
      py::arg("reference") = "none",
      "Run the solver and write summary.json, trace.csv, columns.csv, "
      "potential.csv and pair_density.csv into out_dir; returns the summary.");

  m.def(
      "full_lp_value",
      [](int particles, int gridpoints, double epsilon, const std::string& marginal,
         std::uint64_t cap) {
        SolveParams params = make_params(particles, gridpoints, epsilon, marginal, 1, 5,
                                         0, 1000, "betaminus1", "stochastic", "none");
        const GenColConfig config = build_config(params);
        const CostMatrix cost = build_cost_matrix(config.grid, config.potential);
        return solve_full_lp(config.grid.n_sites(), config.n_particles, cost,
                             config.marginal, cap)
            .value;
      },
      py::arg("particles"), py::arg("gridpoints"), py::arg("epsilon") = 0.1,
      py::arg("marginal") = "uniform", py::arg("cap") = 100000,
      "Exact optimum by enumerating the full column universe (must fit under cap).");

  m.def(
      "monge_plan",
      [](int particles, int gridpoints) {
        WeightedColumns plan = homogeneous_monge_solution(gridpoints, particles);
        py::dict d;
        d["columns"] = occupancy_lists(plan.columns);
        d["weights"] = plan.weights;
        return d;
      },
      py::arg("particles"), py::arg("gridpoints"),
      "Closed-form optimal plan for the uniform marginal when particles divides "
      "gridpoints.");

  m.def(
      "monge_value",
      [](int particles, int gridpoints, double epsilon) {
        const CostMatrix cost = build_cost_matrix(make_uniform_grid_1d(gridpoints, 1.0),
                                                  PairPotential::coulomb(epsilon));
        return weighted_plan_cost(homogeneous_monge_solution(gridpoints, particles),
                                  cost);
      },
      py::arg("particles"), py::arg("gridpoints"), py::arg("epsilon") = 0.1,
      "Cost of the closed-form plan under the regularized interaction.");

  m.def(
      "clique_decision",
      [](int n_vertices, const std::vector<std::pair<int, int>>& edges, int k) {
        return cdp_bruteforce(make_graph(n_vertices, edges), k);
      },
      py::arg("n_vertices"), py::arg("edges"), py::arg("k"),
      "Does the graph (0-based edge list) contain a clique of size k?");

  m.def(
      "pricing_decision",
      [](int n_vertices, const std::vector<std::pair<int, int>>& edges, int k) {
        return pdp_bruteforce(clique_to_pdp(make_graph(n_vertices, edges), k));
      },
      py::arg("n_vertices"), py::arg("edges"), py::arg("k"),
      "Answer of the pricing decision instance the clique question reduces to.");

  m.def(
      "ematrix_extremum",
      [](int q) {
        const EMatrixExtremum r = e_matrix_extremum_check(q);
        return py::make_tuple(r.max_value, r.maximizers);
      },
      py::arg("q"),
      "Max of lambda^T E lambda over occupancies of total q, with all maximizers; "
      "E is all-ones with zero diagonal.");
}
