// Command-line front end: solve | suite | oracle | reduce.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gencol/io.hpp"
#include "gencol/oracles.hpp"
#include "text_util.hpp"

namespace fs = std::filesystem;
using namespace gencol;

namespace {

// Flat key = value file mirroring the solve flags; "out" names the output dir.
void load_flat_config(const std::string& path, SolveParams& params,
                      std::string& out_dir) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(where + ": expected key = value");
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string value = detail::trim(t.substr(eq + 1));
    if (key == "out") {
      out_dir = value;
    } else if (!apply_solve_key(params, key, value, where)) {
      throw std::invalid_argument(where + ": unknown key '" + key + "'");
    }
  }
}

void write_columns_csv(const std::string& path, const std::vector<Column>& columns,
                       const std::vector<double>& weights, int n_sites) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << "weight";
  for (int i = 1; i <= n_sites; ++i) out << ",n" << i;
  out << "\n";
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (weights[k] <= 1e-12) continue;  // keep only the support
    out << detail::format_double(weights[k]);
    for (const auto v : columns[k].occupancy) out << ',' << v;
    out << "\n";
  }
}

struct SolveFlags {
  SolveParams params;
  std::string out_dir = "run_out";
  std::string config_path;
};

int run_solve(const CLI::App& cmd, SolveFlags& flags) {
  if (!flags.config_path.empty()) {
    SolveParams merged;
    std::string file_out;
    load_flat_config(flags.config_path, merged, file_out);
    // explicit flags win over file values
    if (cmd.count("--particles")) merged.particles = flags.params.particles;
    if (cmd.count("--gridpoints")) merged.gridpoints = flags.params.gridpoints;
    if (cmd.count("--beta")) merged.beta = flags.params.beta;
    if (cmd.count("--epsilon")) merged.epsilon = flags.params.epsilon;
    if (cmd.count("--marginal")) merged.marginal = flags.params.marginal;
    if (cmd.count("--seed")) merged.seed = flags.params.seed;
    if (cmd.count("--maxiter")) merged.maxiter = flags.params.maxiter;
    if (cmd.count("--maxsamples")) merged.maxsamples = flags.params.maxsamples;
    if (cmd.count("--init-random")) merged.init_random = flags.params.init_random;
    if (cmd.count("--mutation")) merged.mutation = flags.params.mutation;
    if (cmd.count("--reference")) merged.reference = flags.params.reference;
    if (cmd.count("--full-lp-cap")) merged.full_lp_cap = flags.params.full_lp_cap;
    if (!file_out.empty() && !cmd.count("--out")) flags.out_dir = file_out;
    flags.params = merged;
  }
  run_and_emit(flags.params, flags.out_dir, &std::cout);
  return 0;
}

struct OracleFlags {
  std::string kind;
  int particles = 0;
  int gridpoints = 0;
  double epsilon = 0.1;
  std::string marginal = "uniform";
  std::uint64_t cap = 100000;
  int q = 0;
  std::string out_dir;
};

int run_oracle(const OracleFlags& flags) {
  if (flags.kind == "ematrix") {
    if (flags.q < 2) throw std::invalid_argument("ematrix needs --q >= 2");
    const EMatrixExtremum result = e_matrix_extremum_check(flags.q);
    std::cout << "max_value " << result.max_value << "\n";
    std::cout << "maximizers " << result.maximizers.size() << "\n";
    for (const auto& m : result.maximizers) {
      std::cout << "maximizer";
      for (const int v : m) std::cout << ' ' << v;
      std::cout << "\n";
    }
    return 0;
  }

  SolveParams params;
  params.particles = flags.particles;
  params.gridpoints = flags.gridpoints;
  params.epsilon = flags.epsilon;
  params.marginal = flags.marginal;
  const GenColConfig config = build_config(params);
  const CostMatrix cost = build_cost_matrix(config.grid, config.potential);

  std::vector<Column> columns;
  std::vector<double> weights;
  double value = 0;
  if (flags.kind == "full-lp") {
    const FullLpSolution lp = solve_full_lp(config.grid.n_sites(), config.n_particles,
                                            cost, config.marginal, flags.cap);
    value = lp.value;
    columns = lp.columns;
    weights = lp.weights;
  } else if (flags.kind == "monge") {
    if (flags.marginal != "uniform")
      throw std::invalid_argument("the monge oracle requires the uniform marginal");
    WeightedColumns plan =
        homogeneous_monge_solution(config.grid.n_sites(), config.n_particles);
    value = weighted_plan_cost(plan, cost);
    columns = std::move(plan.columns);
    weights = std::move(plan.weights);
  } else {
    throw std::invalid_argument("unknown oracle kind: " + flags.kind);
  }

  long support = 0;
  for (const double w : weights)
    if (w > 1e-12) ++support;
  std::cout << "value " << detail::format_double(value) << "\n";
  std::cout << "columns " << support << "\n";
  if (!flags.out_dir.empty()) {
    fs::create_directories(flags.out_dir);
    write_columns_csv(flags.out_dir + "/columns.csv", columns, weights,
                      config.grid.n_sites());
  }
  return 0;
}

struct ReduceFlags {
  std::string graph_path;
  int clique_size = 0;
  std::string out_dir = ".";
};

int run_reduce(const ReduceFlags& flags) {
  const Graph graph = load_graph_edge_list(flags.graph_path);
  const PdpInstance instance = clique_to_pdp(graph, flags.clique_size);

  nlohmann::json j;
  j["capacity"] = instance.capacity;
  j["dimension"] = instance.dimension;
  j["threshold"] = instance.threshold;
  j["linear"] = instance.linear;
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < instance.dimension; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < instance.dimension; ++c)
      row.push_back(instance.quadratic[static_cast<std::size_t>(r) * instance.dimension + c]);
    rows.push_back(std::move(row));
  }
  j["quadratic"] = std::move(rows);

  fs::create_directories(flags.out_dir);
  const std::string path = flags.out_dir + "/pdp_instance.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";

  const bool cdp = cdp_bruteforce(graph, flags.clique_size);
  const bool pdp = pdp_bruteforce(instance);
  std::cout << "cdp " << (cdp ? "true" : "false") << "\n";
  std::cout << "pdp " << (pdp ? "true" : "false") << "\n";
  return cdp == pdp ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genetic column generation for symmetric pairwise-cost transport"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  CLI::App* solve = app.add_subcommand("solve", "Run the solver and emit artifacts");
  solve->add_option("--config", solve_flags.config_path,
                    "Flat key = value file; explicit flags override its values");
  solve->add_option("--particles", solve_flags.params.particles, "Particle count N");
  solve->add_option("--gridpoints", solve_flags.params.gridpoints, "Grid site count");
  solve->add_option("--beta", solve_flags.params.beta,
                    "Pool capacity factor (capacity = beta * gridpoints)");
  solve->add_option("--epsilon", solve_flags.params.epsilon,
                    "Interaction regularization parameter");
  solve->add_option("--marginal", solve_flags.params.marginal,
                    "uniform | sine | file:PATH");
  solve->add_option("--seed", solve_flags.params.seed, "Random seed");
  solve->add_option("--maxiter", solve_flags.params.maxiter,
                    "Outer iteration cap (0 = 200 * gridpoints)");
  solve->add_option("--maxsamples", solve_flags.params.maxsamples,
                    "Mutation sampling budget per iteration");
  solve->add_option("--init-random", solve_flags.params.init_random,
                    "betaminus1 | ntimesl | COUNT extra random start columns");
  solve->add_option("--mutation", solve_flags.params.mutation,
                    "stochastic | best_neighbor");
  solve->add_option("--reference", solve_flags.params.reference,
                    "none | full-lp | monge");
  solve->add_option("--full-lp-cap", solve_flags.params.full_lp_cap,
                    "Largest column universe the full-lp reference may enumerate");
  solve->add_option("--out", solve_flags.out_dir, "Output directory");

  std::string manifest_path;
  CLI::App* suite = app.add_subcommand("suite", "Run every experiment in a manifest");
  suite->add_option("--manifest", manifest_path, "Manifest file")->required();

  OracleFlags oracle_flags;
  CLI::App* oracle =
      app.add_subcommand("oracle", "Exact references: full-lp | monge | ematrix");
  oracle->add_option("kind", oracle_flags.kind, "full-lp | monge | ematrix")
      ->required();
  oracle->add_option("--particles", oracle_flags.particles, "Particle count N");
  oracle->add_option("--gridpoints", oracle_flags.gridpoints, "Grid site count");
  oracle->add_option("--epsilon", oracle_flags.epsilon, "Interaction regularization");
  oracle->add_option("--marginal", oracle_flags.marginal, "uniform | sine | file:PATH");
  oracle->add_option("--cap", oracle_flags.cap, "Column enumeration cap (full-lp)");
  oracle->add_option("--q", oracle_flags.q, "Dimension for the ematrix check");
  oracle->add_option("--out", oracle_flags.out_dir,
                     "Directory for the oracle plan's columns.csv");

  ReduceFlags reduce_flags;
  CLI::App* reduce = app.add_subcommand(
      "reduce", "Encode clique existence as a pricing decision instance");
  reduce->add_option("--graph", reduce_flags.graph_path, "Edge list file")->required();
  reduce->add_option("--k", reduce_flags.clique_size, "Clique size")->required();
  reduce->add_option("--out", reduce_flags.out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(*solve, solve_flags);
    if (suite->parsed()) {
      const ExperimentManifest manifest = load_manifest(manifest_path);
      const int mismatches = run_suite(manifest, std::cout);
      if (mismatches > 0) {
        std::cerr << "error: " << mismatches << " run(s) missed their reference\n";
        return 1;
      }
      return 0;
    }
    if (oracle->parsed()) return run_oracle(oracle_flags);
    if (reduce->parsed()) return run_reduce(reduce_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
