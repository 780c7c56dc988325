import pytest

import gencol


def test_universe_counts_match_enumeration():
    assert gencol.universe_size(gridpoints=5, particles=3) == 35
    assert gencol.universe_size(gridpoints=20, particles=5) == 42504
    cols = gencol.enumerate_occupancies(gridpoints=5, particles=3)
    assert len(cols) == 35
    assert all(len(c) == 5 and sum(c) == 3 for c in cols)
    assert len({tuple(c) for c in cols}) == 35


def test_configuration_cost_matches_direct_pair_sum():
    cost = gencol.coulomb_cost_matrix(gridpoints=6, epsilon=0.1)
    occ = [2, 0, 1, 0, 0, 1]
    positions = [i for i, n in enumerate(occ) for _ in range(n)]
    brute = sum(
        cost[positions[a]][positions[b]]
        for a in range(len(positions))
        for b in range(a + 1, len(positions))
    )
    assert gencol.configuration_cost(occ, cost) == pytest.approx(brute, rel=1e-12)


def test_pair_marginal_rows_reproduce_site_weights():
    occ = [1, 2, 0, 1]
    m = gencol.pair_marginal(occ)
    lam = [n / 4 for n in occ]
    assert all(m[i][j] == pytest.approx(m[j][i], abs=1e-15) for i in range(4) for j in range(4))
    for i, row in enumerate(m):
        assert sum(row) == pytest.approx(lam[i], abs=1e-12)


def test_small_solve_reaches_enumerated_optimum():
    out = gencol.solve(particles=3, gridpoints=6, seed=1, reference="full-lp")
    assert out["matched"] is True
    assert out["termination"] == "converged_to_reference"
    assert sum(out["weights"]) == pytest.approx(1.0, abs=1e-9)
    assert out["final_cost"] == pytest.approx(
        gencol.full_lp_value(particles=3, gridpoints=6), abs=1e-8
    )
    # the trace never increases
    values = out["trace_values"]
    assert all(b <= a + 1e-8 for a, b in zip(values, values[1:]))


def test_closed_form_plan_and_value():
    assert gencol.monge_value(particles=5, gridpoints=20) == pytest.approx(
        1.6038180122295602, abs=1e-12
    )
    plan = gencol.monge_plan(particles=5, gridpoints=20)
    assert len(plan["columns"]) == 4
    assert plan["weights"] == pytest.approx([0.25] * 4)
    for k, col in enumerate(plan["columns"]):
        assert [i % 4 for i, n in enumerate(col) if n == 1] == [k] * 5


def test_reduction_equivalence_on_small_graphs():
    triangle = [(0, 1), (1, 2), (0, 2)]
    for k in range(1, 6):
        assert gencol.clique_decision(3, triangle, k) == gencol.pricing_decision(
            3, triangle, k
        )
    assert gencol.clique_decision(3, triangle, 3) is True
    assert gencol.clique_decision(3, triangle, 4) is False


def test_ematrix_extremum_is_all_ones():
    value, maximizers = gencol.ematrix_extremum(4)
    assert value == 12
    assert maximizers == [[1, 1, 1, 1]]


def test_solve_and_write_emits_artifacts(tmp_path):
    summary = gencol.solve_and_write(
        str(tmp_path), particles=2, gridpoints=6, seed=2, reference="monge"
    )
    assert summary["matched"] is True
    for name in (
        "summary.json",
        "trace.csv",
        "columns.csv",
        "potential.csv",
        "pair_density.csv",
    ):
        assert (tmp_path / name).exists()


def test_bad_arguments_raise():
    with pytest.raises(ValueError):
        gencol.solve(particles=1, gridpoints=6)  # needs at least two particles
    with pytest.raises(ValueError):
        gencol.coulomb_cost_matrix(gridpoints=6, epsilon=0.0)
    with pytest.raises(ValueError):
        gencol.monge_plan(particles=3, gridpoints=20)  # 3 does not divide 20
