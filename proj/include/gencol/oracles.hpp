#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gencol/column.hpp"
#include "gencol/cost.hpp"
#include "gencol/marginal.hpp"
#include "gencol/rmp.hpp"

namespace gencol {

// Simple undirected graph on vertices 0..n_vertices-1, no loops, no parallel
// edges. Edges are normalized to u < v and kept sorted.
struct Graph {
  int n_vertices = 0;
  std::vector<std::pair<int, int>> edges;
};

Graph make_graph(int n_vertices, std::vector<std::pair<int, int>> edges);

// Text file with one "u v" pair per line, vertices 1-based. The vertex count
// is the largest endpoint seen.
Graph load_graph_edge_list(const std::string& path);

// Row-major n x n matrix of 0/1 entries.
std::vector<double> adjacency_matrix(const Graph& graph);

// Decision instance over integer occupation vectors: does some lambda >= 0
// with sum(lambda) = capacity satisfy
//   lambda^T quadratic lambda + linear^T lambda >= threshold ?
struct PdpInstance {
  int capacity = 0;
  int dimension = 0;
  double threshold = 0;
  std::vector<double> linear;     // length dimension
  std::vector<double> quadratic;  // dimension x dimension, symmetric, row-major
};

// Clique-of-size-k existence encoded as a pricing decision instance:
// capacity = clique_size, threshold = clique_size*(clique_size-1),
// quadratic = adjacency matrix, linear = 0.
PdpInstance clique_to_pdp(const Graph& graph, int clique_size);

// Exhaustive answers, for instances whose search space fits under cap.
bool pdp_bruteforce(const PdpInstance& instance, std::uint64_t cap = 1000000);
bool cdp_bruteforce(const Graph& graph, int clique_size);

// Maximum of lambda^T E lambda over integer lambda >= 0 with sum(lambda) = q,
// where E is the q x q all-ones matrix with zero diagonal, together with
// every maximizing vector. The maximum equals q(q-1), attained only at the
// all-ones vector.
struct EMatrixExtremum {
  long max_value = 0;
  std::vector<std::vector<int>> maximizers;
};
EMatrixExtremum e_matrix_extremum_check(int q);

// Exact solve of the unrestricted transport LP by enumerating every column.
struct FullLpSolution {
  double value = 0;
  std::vector<Column> columns;  // full enumeration, deterministic order
  std::vector<double> weights;  // one weight per enumerated column
  std::vector<double> dual;
};
FullLpSolution solve_full_lp(int n_sites, int n_particles, const CostMatrix& cost,
                             const Marginal& marginal, std::uint64_t cap = 100000);

struct WeightedColumns {
  std::vector<Column> columns;
  std::vector<double> weights;
};

// Closed-form optimal plan for the uniform marginal on the 1D chain when
// n_particles divides n_sites: the n_sites/n_particles configurations that
// place one particle on every (n_sites/n_particles)-th site, each carrying
// weight n_particles/n_sites.
WeightedColumns homogeneous_monge_solution(int n_sites, int n_particles);

double weighted_plan_cost(const WeightedColumns& plan, const CostMatrix& cost);

}  // namespace gencol
