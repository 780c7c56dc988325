#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gencol/io.hpp"

using namespace gencol;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("emitted artifacts round-trip") {
  const fs::path dir = fresh_dir("gencol_io_emit");
  SolveParams params;
  params.particles = 3;
  params.gridpoints = 6;
  params.seed = 4;
  params.reference = "full-lp";
  const SummaryRecord summary = run_and_emit(params, dir.string());

  REQUIRE(fs::exists(dir / "summary.json"));
  REQUIRE(fs::exists(dir / "trace.csv"));
  REQUIRE(fs::exists(dir / "columns.csv"));
  REQUIRE(fs::exists(dir / "potential.csv"));
  REQUIRE(fs::exists(dir / "pair_density.csv"));

  const SummaryRecord loaded = load_summary_json((dir / "summary.json").string());
  CHECK(loaded.final_cost == summary.final_cost);  // exact through 17 digits
  REQUIRE(loaded.reference_cost.has_value());
  CHECK(*loaded.reference_cost == *summary.reference_cost);
  REQUIRE(loaded.matched.has_value());
  CHECK(*loaded.matched == *summary.matched);
  CHECK(loaded.accepted_columns == summary.accepted_columns);
  CHECK(loaded.sampled_columns == summary.sampled_columns);
  CHECK(loaded.termination == summary.termination);

  const WeightedColumns columns = load_columns_csv((dir / "columns.csv").string());
  REQUIRE(!columns.columns.empty());
  double sum = 0;
  for (double w : columns.weights) sum += w;
  CHECK(std::abs(sum - 1.0) <= 1e-9);
  for (const auto& col : columns.columns) CHECK(col.n_particles == 3);

  // re-costing the loaded plan reproduces the reported optimum
  const CostMatrix cost = build_cost_matrix(make_uniform_grid_1d(6, 1.0),
                                            PairPotential::coulomb(params.epsilon));
  CHECK(std::abs(weighted_plan_cost(columns, cost) - loaded.final_cost) <=
        1e-12 * (1.0 + std::abs(loaded.final_cost)));

  // pair_density holds strictly positive entries with 1-based indices
  std::ifstream pd(dir / "pair_density.csv");
  std::string line;
  std::getline(pd, line);
  CHECK(line == "i,j,value");
  int rows = 0;
  while (std::getline(pd, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    int i = 0, j = 0;
    double v = 0;
    REQUIRE((row >> i >> j >> v));
    CHECK(i >= 1);
    CHECK(i <= 6);
    CHECK(j >= 1);
    CHECK(j <= 6);
    CHECK(v > 0);
    ++rows;
  }
  CHECK(rows > 0);
  fs::remove_all(dir);
}

TEST_CASE("identical seeds produce byte-identical traces") {
  const fs::path dir_a = fresh_dir("gencol_io_trace_a");
  const fs::path dir_b = fresh_dir("gencol_io_trace_b");
  SolveParams params;
  params.particles = 2;
  params.gridpoints = 6;
  params.seed = 99;
  params.reference = "monge";
  run_and_emit(params, dir_a.string());
  run_and_emit(params, dir_b.string());
  CHECK(slurp(dir_a / "trace.csv") == slurp(dir_b / "trace.csv"));
  CHECK(slurp(dir_a / "summary.json").find("\"matched\": true") != std::string::npos);
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("build_config resolves named marginals and init modes") {
  SolveParams params;
  params.particles = 3;
  params.gridpoints = 9;
  params.marginal = "sine";
  params.init_random = "ntimesl";
  const GenColConfig config = build_config(params);
  CHECK(config.grid.n_sites() == 9);
  CHECK(config.init_random_columns == 27);
  CHECK(config.marginal.weights[0] < config.marginal.weights[4]);

  params.init_random = "17";
  CHECK(build_config(params).init_random_columns == 17);
  params.init_random = "betaminus1";
  CHECK(build_config(params).init_random_columns == -1);

  params.marginal = "nope";
  CHECK_THROWS_AS(build_config(params), std::invalid_argument);
  params.marginal = "uniform";
  params.mutation = "nope";
  CHECK_THROWS_AS(build_config(params), std::invalid_argument);
}

TEST_CASE("build_config reads a marginal file with coordinates") {
  const fs::path dir = fresh_dir("gencol_io_marginal");
  {
    std::ofstream out(dir / "marginal.csv");
    out << "coordinate,weight\n0.0,1\n0.5,2\n1.5,3\n3.0,2\n";
  }
  SolveParams params;
  params.particles = 2;
  params.marginal = "file:" + (dir / "marginal.csv").string();
  const GenColConfig config = build_config(params);
  CHECK(config.grid.n_sites() == 4);
  CHECK(config.grid.sites[2][0] == doctest::Approx(1.5));
  CHECK(config.marginal.weights[1] == doctest::Approx(0.25));

  params.gridpoints = 5;  // disagrees with the file
  CHECK_THROWS_AS(build_config(params), std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("reference resolution") {
  SolveParams params;
  params.particles = 2;
  params.gridpoints = 6;
  const GenColConfig config = build_config(params);
  const CostMatrix cost = build_cost_matrix(config.grid, config.potential);

  params.reference = "none";
  CHECK_FALSE(resolve_reference(params, config, cost).has_value());

  params.reference = "monge";
  const auto monge = resolve_reference(params, config, cost);
  REQUIRE(monge.has_value());
  params.reference = "full-lp";
  const auto lp = resolve_reference(params, config, cost);
  REQUIRE(lp.has_value());
  CHECK(std::abs(*monge - *lp) <= 1e-10);  // 2 divides 6, so they agree

  params.reference = "weird";
  CHECK_THROWS_AS(resolve_reference(params, config, cost), std::invalid_argument);

  SolveParams sine = params;
  sine.marginal = "sine";
  sine.reference = "monge";
  const GenColConfig sine_config = build_config(sine);
  CHECK_THROWS_AS(resolve_reference(sine, sine_config, cost), std::invalid_argument);
}

TEST_CASE("manifest parsing with defaults and sections") {
  const fs::path dir = fresh_dir("gencol_io_manifest");
  {
    std::ofstream out(dir / "suite.cfg");
    out << "# shared settings\n";
    out << "out = " << (dir / "runs").string() << "\n";
    out << "epsilon = 0.1\n";
    out << "beta = 5\n";
    out << "reference = monge\n";
    out << "\n[experiment]\n";
    out << "name = tiny\n";
    out << "particles = 2\n";
    out << "gridpoints = 4\n";
    out << "seeds = 1 2\n";
    out << "\n[experiment]\n";
    out << "name = wide\n";
    out << "particles = 2\n";
    out << "gridpoints = 6\n";
    out << "maxsamples = 500\n";
    out << "seeds = 7,8,9\n";
  }
  const ExperimentManifest manifest = load_manifest((dir / "suite.cfg").string());
  REQUIRE(manifest.experiments.size() == 2);
  CHECK(manifest.out_dir == (dir / "runs").string());
  CHECK(manifest.experiments[0].name == "tiny");
  CHECK(manifest.experiments[0].params.beta == 5);
  CHECK(manifest.experiments[0].params.reference == "monge");
  CHECK(manifest.experiments[0].seeds == std::vector<std::uint64_t>{1, 2});
  CHECK(manifest.experiments[1].params.maxsamples == 500);
  CHECK(manifest.experiments[1].seeds == std::vector<std::uint64_t>{7, 8, 9});

  {
    std::ofstream out(dir / "dup.cfg");
    out << "[experiment]\nparticles = 2\ngridpoints = 4\nseeds = 1 1\n";
  }
  CHECK_THROWS_AS(load_manifest((dir / "dup.cfg").string()), std::invalid_argument);
  {
    std::ofstream out(dir / "empty.cfg");
    out << "epsilon = 0.2\n";
  }
  CHECK_THROWS_AS(load_manifest((dir / "empty.cfg").string()), std::invalid_argument);
  {
    std::ofstream out(dir / "unknown.cfg");
    out << "[experiment]\nwat = 7\n";
  }
  CHECK_THROWS_AS(load_manifest((dir / "unknown.cfg").string()), std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("suite runner writes per-run and aggregate artifacts") {
  const fs::path dir = fresh_dir("gencol_io_suite");
  {
    std::ofstream out(dir / "suite.cfg");
    out << "out = " << (dir / "runs").string() << "\n";
    out << "reference = full-lp\n";
    out << "[experiment]\n";
    out << "name = demo\n";
    out << "particles = 2\n";
    out << "gridpoints = 5\n";
    out << "seeds = 1 2\n";
  }
  const ExperimentManifest manifest = load_manifest((dir / "suite.cfg").string());
  std::ostringstream log;
  const int mismatches = run_suite(manifest, log);
  CHECK(mismatches == 0);
  CHECK(fs::exists(dir / "runs" / "summary.csv"));
  CHECK(fs::exists(dir / "runs" / "averages.csv"));
  CHECK(fs::exists(dir / "runs" / "demo" / "seed1" / "summary.json"));
  CHECK(fs::exists(dir / "runs" / "demo" / "seed2" / "trace.csv"));
  const std::string averages = slurp(dir / "runs" / "averages.csv");
  CHECK(averages.find("demo,2,5,2,2,") != std::string::npos);
  CHECK(log.str().find("demo: 2/2 matched") != std::string::npos);
  fs::remove_all(dir);
}
