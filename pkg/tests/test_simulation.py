import numpy as np
import pytest
from numpy.testing import assert_allclose

from blendgev import simulation as sim
from blendgev._rng import make_rng
from blendgev.diagnostics import ks_distance
from blendgev.gev import frechet_block_max_params, gev_cdf


def test_frechet_block_maxima_follow_exact_law():
    x = sim.frechet_block_maxima(30, 20_000, 10.0, make_rng(7))
    u = gev_cdf(x, frechet_block_max_params(30, 10.0))
    assert ks_distance(u) < 1.63 / np.sqrt(x.size)


def test_study1_self_comparison_is_zero():
    rep = sim.study1(ns=[30], Ns=[30], Ts=[30, 100], M=6, models=("gev", "gev"))
    for key in ("n=30;N=30;T=30", "n=30;N=30;T=100"):
        assert rep.get(key, "rmse_diff") == 0.0
        assert rep.get(key, "rmse_gev") > 0


def test_study1_deterministic():
    a = sim.study1(ns=[30], Ns=[50], Ts=[50], M=5, seed=3)
    b = sim.study1(ns=[30], Ns=[50], Ts=[50], M=5, seed=3)
    c = sim.study1(ns=[30], Ns=[50], Ts=[50], M=5, seed=4)
    assert a.to_csv() == b.to_csv()
    assert a.to_csv() != c.to_csv()
    assert a.to_csv().splitlines()[0] == "study,cell_key,metric,value,replicates,seed"


def test_study1_cells_independent_of_grid():
    # each cell has its own streams, so a cell's value does not depend on its neighbours
    a = sim.study1(ns=[30], Ns=[30], Ts=[30], M=4)
    b = sim.study1(ns=[30, 50], Ns=[30, 100], Ts=[30, 100], M=4)
    assert a.get("n=30;N=30;T=30", "rmse_bgev") == b.get("n=30;N=30;T=30", "rmse_bgev")


def test_study2_small_run_and_widening_note():
    rep = sim.study2(p_as=[0.05], p_bs=[0.2, 0.3], cs=[5], M=8, seed=2)
    keys = {c.key for c in rep.cells}
    assert {"gev", "pa=0.05;pb=0.2;c=5", "pa=0.05;pb=0.3;c=5"} <= keys
    note = [c.note for c in rep.cells if c.key == "pa=0.05;pb=0.3;c=5"][0]
    assert "beta=0.6" in note
    with pytest.raises(ValueError):
        sim.study2(p_as=[0.05], p_bs=[0.3], cs=[5], M=2, strict=True)
    assert "GEV" in rep.pretty() or "gev" in rep.pretty()


def test_study3_small_run():
    rep = sim.study3(alphas=[0.5, 0.7], betas=[0.5], M=5)
    assert np.isfinite(rep.get("alpha=0.7;beta=0.5", "rmse"))
    assert rep.pretty()


def test_reliability_flag():
    rep = sim.SimReport("study2", 100, 1)
    rep.add("x", "rmse", 1.0, failures=5)
    rep.add("y", "rmse", 1.0, failures=6)
    assert rep.cells[0].reliable and not rep.cells[1].reliable


def test_cauchy_demo_exact_and_empirical():
    rep = sim.demo_cauchy(n_list=(2, 5, 10, 1000, 10000), reps=200_000, seed=1)
    for n in (2, 5, 10):
        exact = rep.get(f"n={n}", "exact_mass_below_0")
        assert exact == 0.5**n
        mc = rep.get(f"n={n}", "mass_below_0")
        assert mc > 0
        assert abs(mc - exact) <= 2.576 * np.sqrt(exact * (1 - exact) / 200_000) + 1 / 200_000
    exact_sup = [rep.get(f"n={n}", "exact_sup_dist") for n in (2, 5, 10, 1000, 10000)]
    assert np.all(np.diff(exact_sup) < 0)
    assert rep.get("n=10000", "sup_dist") < rep.get("n=10", "sup_dist")


def test_cauchy_inversion_matches_exact_cdf():
    u = make_rng(9).random(50_000)
    m = sim.cauchy_max_standardised(20, u)
    assert ks_distance(sim.cauchy_max_cdf(m, 20)) < 1.63 / np.sqrt(u.size)
    assert_allclose(sim.cauchy_max_cdf(0.0, 7), 0.5**7, rtol=1e-14)
