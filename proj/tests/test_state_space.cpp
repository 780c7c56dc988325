#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "gencol/column.hpp"
#include "gencol/grid.hpp"
#include "gencol/marginal.hpp"

using namespace gencol;

TEST_CASE("uniform 1d grid is a chain") {
  const Grid g = make_uniform_grid_1d(5, 0.5);
  CHECK(g.n_sites() == 5);
  CHECK(g.dim == 1);
  CHECK(g.sites[0][0] == doctest::Approx(0.5));
  CHECK(g.sites[4][0] == doctest::Approx(2.5));
  CHECK(g.neighbors[0] == std::vector<int>{1});
  CHECK(g.neighbors[2] == std::vector<int>{1, 3});
  CHECK(g.neighbors[4] == std::vector<int>{3});
  CHECK_NOTHROW(validate_grid(g));
}

TEST_CASE("grid validation rejects broken structures") {
  CHECK_THROWS_AS(make_uniform_grid_1d(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_uniform_grid_1d(5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_chain_grid({1.0, 1.0}), std::invalid_argument);

  Grid g = make_uniform_grid_1d(3, 1.0);
  g.neighbors[0] = {2};  // 2 does not point back to 0
  CHECK_THROWS_AS(validate_grid(g), std::invalid_argument);
  g = make_uniform_grid_1d(3, 1.0);
  g.neighbors[1] = {1};
  CHECK_THROWS_AS(validate_grid(g), std::invalid_argument);
  g = make_uniform_grid_1d(3, 1.0);
  g.neighbors[2] = {};
  CHECK_THROWS_AS(validate_grid(g), std::invalid_argument);
}

TEST_CASE("marginals") {
  const Marginal u = make_uniform_marginal(4);
  CHECK(u.weights == std::vector<double>(4, 0.25));
  CHECK_NOTHROW(validate_marginal(u));

  const Marginal s = make_sine_marginal(10);
  double sum = 0;
  for (double w : s.weights) {
    CHECK(w > 0);
    sum += w;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  // density proportional to 0.2 + sin^2(i/11)
  const double raw1 = 0.2 + std::pow(std::sin(1.0 / 11.0), 2);
  const double raw2 = 0.2 + std::pow(std::sin(2.0 / 11.0), 2);
  CHECK(s.weights[1] / s.weights[0] == doctest::Approx(raw2 / raw1).epsilon(1e-14));

  CHECK_THROWS_AS(make_marginal({0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_marginal({0.5, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(validate_marginal(Marginal{{0.5, 0.6}}), std::invalid_argument);
  CHECK_NOTHROW(validate_marginal(make_marginal({3.0, 1.0})));
}

TEST_CASE("column construction and probability vector") {
  const Column c = make_column({2, 0, 1});
  CHECK(c.n_particles == 3);
  const auto p = column_to_probability(c);
  CHECK(p[0] == doctest::Approx(2.0 / 3.0));
  CHECK(p[1] == 0.0);
  CHECK(p[2] == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(make_column({1, -1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(make_column({0, 0}), std::invalid_argument);

  const Column s = stack_column(4, 2, 5);
  CHECK(s.occupancy == std::vector<std::int32_t>{0, 0, 5, 0});
}

TEST_CASE("universe sizes") {
  CHECK(column_universe_size(3, 1) == 3);
  CHECK(column_universe_size(5, 3) == 35);
  CHECK(column_universe_size(20, 5) == 42504);
  CHECK(column_universe_size(40, 10) == 8217822536ull);
  CHECK(column_universe_size_approx(40, 10) ==
        doctest::Approx(8217822536.0).epsilon(1e-9));
  CHECK(column_universe_size_approx(60, 15) ==
        doctest::Approx(1.824010149372864e15).epsilon(1e-9));
  // 15 particles on 1000 sites overflows 64 bits around site count 2500+;
  // pick something guaranteed past the limit
  CHECK_THROWS_AS(column_universe_size(100000, 15), std::overflow_error);
}

TEST_CASE("column enumeration is complete, unique and ordered") {
  const auto cols = enumerate_columns(4, 3);
  CHECK(cols.size() == column_universe_size(4, 3));
  std::set<std::vector<std::int32_t>> seen;
  for (const auto& c : cols) {
    CHECK(c.n_particles == 3);
    std::int32_t total = 0;
    for (auto v : c.occupancy) total += v;
    CHECK(total == 3);
    CHECK(seen.insert(c.occupancy).second);
  }
  // lexicographic in sorted particle positions: first all on site 0, last all
  // on the final site
  CHECK(cols.front().occupancy == std::vector<std::int32_t>{3, 0, 0, 0});
  CHECK(cols[1].occupancy == std::vector<std::int32_t>{2, 1, 0, 0});
  CHECK(cols.back().occupancy == std::vector<std::int32_t>{0, 0, 0, 3});

  CHECK_THROWS_AS(enumerate_columns(20, 5, 1000), std::length_error);
}

TEST_CASE("mutation moves one particle to a neighbor") {
  const Grid g = make_uniform_grid_1d(3, 1.0);
  Rng rng(7);
  const Column parent = make_column({0, 3, 0});
  int to_left = 0, to_right = 0;
  const int trials = 30000;
  for (int t = 0; t < trials; ++t) {
    const Column child = mutate(parent, g, rng);
    std::int32_t total = 0;
    for (auto v : child.occupancy) total += v;
    REQUIRE(total == 3);
    if (child.occupancy == std::vector<std::int32_t>{1, 2, 0}) {
      ++to_left;
    } else if (child.occupancy == std::vector<std::int32_t>{0, 2, 1}) {
      ++to_right;
    } else {
      REQUIRE(false);
    }
  }
  // each neighbor with probability 1/2; allow 4 sigma
  const double sigma = std::sqrt(trials * 0.25);
  CHECK(std::abs(to_left - trials / 2.0) < 4 * sigma);
  CHECK(std::abs(to_right - trials / 2.0) < 4 * sigma);
}

TEST_CASE("mutation picks the source site with mass weighting") {
  const Grid g = make_uniform_grid_1d(2, 1.0);
  Rng rng(11);
  const Column parent = make_column({1, 2});
  int from_first = 0;
  const int trials = 30000;
  for (int t = 0; t < trials; ++t) {
    const Column child = mutate(parent, g, rng);
    if (child.occupancy == std::vector<std::int32_t>{0, 3}) ++from_first;
  }
  // site 0 holds 1 of 3 particles
  const double expected = trials / 3.0;
  const double sigma = std::sqrt(trials * (1.0 / 3.0) * (2.0 / 3.0));
  CHECK(std::abs(from_first - expected) < 4 * sigma);
}

TEST_CASE("rng stream is reproducible and uniform_index unbiased") {
  Rng a(42), b(42);
  for (int t = 0; t < 1000; ++t) CHECK(a.next_u64() == b.next_u64());

  Rng r(1);
  std::vector<int> counts(5, 0);
  const int trials = 50000;
  for (int t = 0; t < trials; ++t) ++counts[r.uniform_index(5)];
  for (int c : counts) {
    const double sigma = std::sqrt(trials * 0.2 * 0.8);
    CHECK(std::abs(c - trials * 0.2) < 4 * sigma);
  }
}

TEST_CASE("site table and neighbor csv loading") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gencol_grid_test";
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "sites.csv");
    out << "x,weight\n1.0,0.2\n2.5,0.3\n4.0,0.5\n";
  }
  const SiteTable table = load_site_table_csv((dir / "sites.csv").string());
  REQUIRE(table.coordinates.size() == 3);
  CHECK(table.coordinates[1][0] == doctest::Approx(2.5));
  CHECK(table.weights == std::vector<double>{0.2, 0.3, 0.5});

  {
    std::ofstream out(dir / "neighbors.csv");
    out << "2\n1,3\n2\n";
  }
  const auto lists = load_neighbor_lists_csv((dir / "neighbors.csv").string(), 3);
  CHECK(lists[0] == std::vector<int>{1});
  CHECK(lists[1] == std::vector<int>{0, 2});
  CHECK(lists[2] == std::vector<int>{1});

  const Grid g = make_grid(table.coordinates, lists);
  CHECK(g.n_sites() == 3);

  {
    std::ofstream out(dir / "bad.csv");
    out << "1.0,0.2\n2.0,oops\n";
  }
  CHECK_THROWS(load_site_table_csv((dir / "bad.csv").string()));
  CHECK_THROWS(load_site_table_csv((dir / "missing.csv").string()));
  fs::remove_all(dir);
}
