#include "gencol/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "text_util.hpp"

namespace gencol {

Graph make_graph(int n_vertices, std::vector<std::pair<int, int>> edges) {
  if (n_vertices < 1) throw std::invalid_argument("graph: needs at least one vertex");
  std::set<std::pair<int, int>> normalized;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n_vertices || v >= n_vertices)
      throw std::invalid_argument("graph: vertex out of range");
    if (u == v) throw std::invalid_argument("graph: self-loop");
    normalized.emplace(std::min(u, v), std::max(u, v));
  }
  Graph graph;
  graph.n_vertices = n_vertices;
  graph.edges.assign(normalized.begin(), normalized.end());
  return graph;
}

Graph load_graph_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::pair<int, int>> edges;
  int max_vertex = 0;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream row(t);
    long long u = 0, v = 0;
    if (!(row >> u >> v))
      throw std::invalid_argument(path + ": expected 'u v' per line");
    std::string rest;
    if (row >> rest) throw std::invalid_argument(path + ": trailing tokens on a line");
    if (u < 1 || v < 1) throw std::invalid_argument(path + ": vertices are 1-based");
    max_vertex = std::max(max_vertex, static_cast<int>(std::max(u, v)));
    edges.emplace_back(static_cast<int>(u - 1), static_cast<int>(v - 1));
  }
  if (edges.empty()) throw std::invalid_argument(path + ": no edges");
  return make_graph(max_vertex, std::move(edges));
}

std::vector<double> adjacency_matrix(const Graph& graph) {
  const int n = graph.n_vertices;
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  for (const auto& [u, v] : graph.edges) {
    a[static_cast<std::size_t>(u) * n + v] = 1.0;
    a[static_cast<std::size_t>(v) * n + u] = 1.0;
  }
  return a;
}

PdpInstance clique_to_pdp(const Graph& graph, int clique_size) {
  if (clique_size < 1) throw std::invalid_argument("clique size must be positive");
  PdpInstance instance;
  instance.capacity = clique_size;
  instance.dimension = graph.n_vertices;
  instance.threshold = static_cast<double>(clique_size) * (clique_size - 1);
  instance.linear.assign(graph.n_vertices, 0.0);
  instance.quadratic = adjacency_matrix(graph);
  return instance;
}

bool pdp_bruteforce(const PdpInstance& instance, std::uint64_t cap) {
  if (instance.capacity < 1 || instance.dimension < 1)
    throw std::invalid_argument("pdp: capacity and dimension must be positive");
  const int n = instance.dimension;
  if (static_cast<int>(instance.linear.size()) != n ||
      instance.quadratic.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("pdp: coefficient dimensions do not match");
  // occupancy vectors with sum = capacity are exactly the columns of an
  // n-site, capacity-particle state space
  const auto candidates = enumerate_columns(n, instance.capacity, cap);
  for (const auto& col : candidates) {
    double value = 0;
    for (int i = 0; i < n; ++i) {
      if (col.occupancy[i] == 0) continue;
      const double li = col.occupancy[i];
      value += instance.linear[i] * li;
      for (int j = 0; j < n; ++j) {
        if (col.occupancy[j] == 0) continue;
        value += li * instance.quadratic[static_cast<std::size_t>(i) * n + j] *
                 col.occupancy[j];
      }
    }
    if (value >= instance.threshold - 1e-9) return true;
  }
  return false;
}

bool cdp_bruteforce(const Graph& graph, int clique_size) {
  if (clique_size < 1) throw std::invalid_argument("clique size must be positive");
  const int n = graph.n_vertices;
  if (n > 20) throw std::invalid_argument("clique bruteforce: too many vertices");
  if (clique_size > n) return false;
  const auto adj = adjacency_matrix(graph);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != clique_size) continue;
    bool ok = true;
    for (int u = 0; u < n && ok; ++u) {
      if (!(mask & (1u << u))) continue;
      for (int v = u + 1; v < n && ok; ++v) {
        if (!(mask & (1u << v))) continue;
        if (adj[static_cast<std::size_t>(u) * n + v] == 0.0) ok = false;
      }
    }
    if (ok) return true;
  }
  return false;
}

EMatrixExtremum e_matrix_extremum_check(int q) {
  if (q < 2 || q > 7) throw std::invalid_argument("extremum check supports 2 <= q <= 7");
  EMatrixExtremum result;
  // lambda^T E lambda = (sum lambda)^2 - sum lambda^2 = q^2 - sum lambda^2
  for (const auto& col : enumerate_columns(q, q)) {
    long value = static_cast<long>(q) * q;
    for (int i = 0; i < q; ++i)
      value -= static_cast<long>(col.occupancy[i]) * col.occupancy[i];
    if (value > result.max_value) {
      result.max_value = value;
      result.maximizers.clear();
    }
    if (value == result.max_value) {
      std::vector<int> lambda(col.occupancy.begin(), col.occupancy.end());
      result.maximizers.push_back(std::move(lambda));
    }
  }
  return result;
}

FullLpSolution solve_full_lp(int n_sites, int n_particles, const CostMatrix& cost,
                             const Marginal& marginal, std::uint64_t cap) {
  if (marginal.size() != n_sites)
    throw std::invalid_argument("full lp: marginal size does not match the grid");
  auto columns = enumerate_columns(n_sites, n_particles, cap);
  auto problem = make_restricted_problem(std::move(columns), cost, marginal);
  const RmpSolution solution = solve_rmp(problem);
  if (solution.status != SolveStatus::optimal)
    throw std::runtime_error(std::string("full lp solve failed: ") +
                             to_string(solution.status));
  FullLpSolution out;
  out.value = solution.value;
  out.columns = std::move(problem.columns);
  out.weights = solution.alpha;
  out.dual = solution.dual;
  return out;
}

WeightedColumns homogeneous_monge_solution(int n_sites, int n_particles) {
  if (n_particles < 1 || n_sites < 1 || n_sites % n_particles != 0)
    throw std::invalid_argument(
        "monge solution: particle count must divide the number of sites");
  const int stride = n_sites / n_particles;
  WeightedColumns plan;
  const double weight = static_cast<double>(n_particles) / n_sites;
  for (int start = 0; start < stride; ++start) {
    Column col;
    col.occupancy.assign(n_sites, 0);
    col.n_particles = n_particles;
    for (int k = 0; k < n_particles; ++k) col.occupancy[start + k * stride] = 1;
    plan.columns.push_back(std::move(col));
    plan.weights.push_back(weight);
  }
  return plan;
}

double weighted_plan_cost(const WeightedColumns& plan, const CostMatrix& cost) {
  double total = 0;
  for (std::size_t k = 0; k < plan.columns.size(); ++k)
    total += plan.weights[k] * column_cost(plan.columns[k], cost);
  return total;
}

}  // namespace gencol
