"""Acceptance criteria 1-10, each at its stated tolerance.

Every test records one ``#k PASS|FAIL`` line that is printed in the pytest
terminal summary.  The three simulation criteria run the full M = 500 studies
and take a couple of minutes in total.
"""

import math
import time

import numpy as np
import pytest
from numpy.testing import assert_allclose

from blendgev import simulation as sim
from blendgev.bgev import (
    BlendConfig,
    bgev_cdf,
    bgev_pdf,
    bgev_pdf_derivs,
    bgev_quantile,
    bgev_sample,
    derive_blend,
)
from blendgev.diagnostics import pit
from blendgev.estimation import fit
from blendgev.gev import ClassicParams, QuantileParams, gev_quantile_q, to_classic, to_quantile
from blendgev.numerics import integrate
from blendgev.priors import PcPrior, p3c_density, pc_density

from conftest import ACCEPTANCE_LINES

SEED = 1


def report(cid: float, label: str, ok: bool, detail: str):
    ACCEPTANCE_LINES.append((cid, f"#{label} {'PASS' if ok else 'FAIL'}: {detail}"))
    assert ok, detail


def _random_blend(rng):
    alpha = rng.uniform(0.2, 0.9)
    beta = rng.uniform(0.3, 0.95)
    top = min(alpha, beta / 2)
    p_b = rng.uniform(0.3 * top, top)
    p_a = rng.uniform(0.1 * p_b, 0.8 * p_b)
    c1, c2 = rng.uniform(3.0, 10.0, 2)
    xi = 0.0 if rng.random() < 0.1 else rng.uniform(0.0, 0.8)
    qp = QuantileParams(rng.normal(0, 5), rng.uniform(0.2, 5.0), xi, alpha, beta)
    return qp, BlendConfig(alpha, beta, p_a, p_b, c1, c2)


# ---------------------------------------------------------------------------
# 1. study 2 (Table 2)

REF_T2_BGEV, REF_T2_GEV = 1.11, 2.53
T2_BGEV_BOUNDS, T2_GEV_BOUNDS = (0.95, 1.30), (2.0, 3.1)
REF_CELL = "pa=0.05;pb=0.2;c=5"


def _widen(bounds, centre, factor):
    return (centre - factor * (centre - bounds[0]), centre + factor * (bounds[1] - centre))


def _check_study2(rep, bgev_bounds, gev_bounds):
    gev = rep.get("gev", "rmse")
    ref = rep.get(REF_CELL, "rmse")
    cells = [c.value for c in rep.cells if c.key != "gev"]
    ordered = max(cells) < gev
    in_b = bgev_bounds[0] <= ref <= bgev_bounds[1]
    in_g = gev_bounds[0] <= gev <= gev_bounds[1]
    detail = (
        f"bGEV ref cell {ref:.3f} in [{bgev_bounds[0]:.3g}, {bgev_bounds[1]:.3g}]: {in_b}; "
        f"GEV {gev:.3f} in [{gev_bounds[0]:.3g}, {gev_bounds[1]:.3g}]: {in_g}; "
        f"all {len(cells)} bGEV cells < GEV (max {max(cells):.3f}): {ordered}"
    )
    return in_b and in_g and ordered, detail


@pytest.fixture(scope="module")
def study2_full():
    t0 = time.perf_counter()
    rep = sim.study2(M=500, seed=SEED)
    return rep, time.perf_counter() - t0


def test_1_table2_reproduction(study2_full):
    rep, elapsed = study2_full
    ok, detail = _check_study2(rep, T2_BGEV_BOUNDS, T2_GEV_BOUNDS)
    ok = ok and elapsed <= 600
    report(1, "1 ", ok, f"M=500 {detail}; {elapsed:.0f}s")


def test_1b_table2_fast_variant():
    t0 = time.perf_counter()
    rep = sim.study2(M=sim.FAST_M, seed=SEED)
    elapsed = time.perf_counter() - t0
    b = _widen(T2_BGEV_BOUNDS, REF_T2_BGEV, 1.5)
    g = _widen(T2_GEV_BOUNDS, REF_T2_GEV, 1.5)
    ok, detail = _check_study2(rep, b, g)
    ok = ok and elapsed <= 120
    report(1.5, "1b", ok, f"M=100 {detail}; {elapsed:.0f}s")


# ---------------------------------------------------------------------------
# 2. study 1 (Table 1)


def test_2_table1_reproduction():
    t0 = time.perf_counter()
    rep = sim.study1(ns=[30, 100], Ns=[30, 100, 1000], Ts=[30, 100], M=500, seed=SEED)
    elapsed = time.perf_counter() - t0
    diffs = {c.key: c.value for c in rep.cells if c.metric == "rmse_diff_rounded"}
    bad = {k: v for k, v in diffs.items() if abs(v) > 0.05}
    ok = len(diffs) == 12 and not bad and elapsed <= 900
    worst = max(diffs.items(), key=lambda kv: abs(kv[1]))
    report(
        2, "2 ", ok,
        f"{len(diffs)} cells, max |diff| {abs(worst[1]):.2f} at {worst[0]}; "
        f"cells over 0.05: {bad or 'none'}; {elapsed:.0f}s",
    )


# ---------------------------------------------------------------------------
# 3. study 3 (Table 3)


def test_3_table3_reproduction():
    rep = sim.study3(M=500, seed=SEED)
    gev = rep.get("gev", "rmse")
    cells = {c.key: c.value for c in rep.cells if c.metric == "rmse" and c.key != "gev"}
    high = ("alpha=0.7;beta=0.7", "alpha=0.7;beta=0.9")
    high_ok = all(cells[k] > 1.8 for k in high)
    rest_ok = all(v < gev for k, v in cells.items() if k not in high)
    report(
        3, "3 ", high_ok and rest_ok,
        f"cells {[f'{cells[k]:.3f}' for k in high]} > 1.8: {high_ok}; "
        f"other {len(cells) - 2} cells < GEV {gev:.3f}: {rest_ok} "
        f"(range {min(cells.values()):.3f}..{max(cells.values()):.3f})",
    )


# ---------------------------------------------------------------------------
# 4. density validity


def _total_mass(qp, cfg):
    d = derive_blend(qp, cfg)
    probs = [1e-13, cfg.p_a, cfg.p_b, 0.5, 0.9, 0.99, 0.999, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12, 1e-13]
    upper = [1 - p for p in probs[7:]]
    knots = [bgev_quantile(probs[0], qp, cfg), d.a, d.b] + list(gev_quantile_q(np.array(probs[3:7] + upper), qp))
    f = lambda t: float(bgev_pdf(t, qp, cfg))  # noqa: E731
    return sum(integrate(f, lo, hi, tol=1e-11) for lo, hi in zip(knots[:-1], knots[1:]))


def test_4_density_validity():
    rng = np.random.default_rng(404)
    worst_mass, worst_fd = 0.0, 0.0
    for _ in range(50):
        qp, cfg = _random_blend(rng)
        worst_mass = max(worst_mass, abs(_total_mass(qp, cfg) - 1.0))
        x = bgev_quantile(rng.uniform(0.005, 0.995, 20), qp, cfg)
        h = 1e-6 * qp.s_beta
        fd = (bgev_cdf(x + h, qp, cfg) - bgev_cdf(x - h, qp, cfg)) / (2 * h)
        worst_fd = max(worst_fd, float(np.max(np.abs(bgev_pdf(x, qp, cfg) - fd) / np.abs(fd))))
    ok = worst_mass <= 1e-6 and worst_fd <= 1e-5
    report(4, "4 ", ok, f"max |mass - 1| = {worst_mass:.1e} (<= 1e-6), max FD rel err {worst_fd:.1e} (<= 1e-5)")


# ---------------------------------------------------------------------------
# 5. derivative verification


def _fd5(f, x, h):
    f2, f1, f0, fm1, fm2 = (f(x + k * h) for k in (2, 1, 0, -1, -2))
    return (-f2 + 8 * f1 - 8 * fm1 + fm2) / (12 * h), (-f2 + 16 * f1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h)


def test_5_pdf_derivatives():
    qp, cfg = QuantileParams(1.0, 2.0, 0.2), BlendConfig()
    d = derive_blend(qp, cfg)
    rng = np.random.default_rng(505)
    width = d.b - d.a
    step = 1e-3 * width
    branches = {
        "left": bgev_quantile(rng.uniform(1e-4, 0.9 * cfg.p_a, 50), qp, cfg),
        "mix": d.a + width * rng.uniform(0.01, 0.99, 50),
        "right": gev_quantile_q(rng.uniform(cfg.p_b + 0.01, 0.999, 50), qp),
    }
    worst = {}
    pdf = lambda t: bgev_pdf(t, qp, cfg)  # noqa: E731
    for name, x in branches.items():
        _, dh, d2h = bgev_pdf_derivs(x, qp, cfg)
        d1, d2 = _fd5(pdf, x, step)
        worst[name] = max(np.max(np.abs(dh - d1) / np.abs(d1)), np.max(np.abs(d2h - d2) / np.abs(d2)))
    seam = []
    for s in (d.a, d.b):
        lo = bgev_pdf_derivs(s - 1e-12 * width, qp, cfg)[2]
        hi = bgev_pdf_derivs(s + 1e-12 * width, qp, cfg)[2]
        seam.append(abs(lo - hi) / abs(lo))
    ok = max(worst.values()) <= 1e-4 and max(seam) <= 1e-3
    report(
        5, "5 ", ok,
        "max FD rel err " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
        + f" (<= 1e-4); h'' seam mismatch a {seam[0]:.1e}, b {seam[1]:.1e} (<= 1e-3)",
    )


# ---------------------------------------------------------------------------
# 6. parametrisation round trip


def test_6_parametrisation_round_trip():
    rng = np.random.default_rng(606)
    worst = 0.0
    for i in range(200):
        xi = rng.uniform(-1e-6, 1e-6) if i % 4 == 0 else rng.uniform(-0.9, 0.9)
        cp = ClassicParams(rng.normal(0, 10), rng.uniform(0.05, 10), xi)
        alpha, beta = rng.uniform(0.05, 0.95, 2)
        qp = to_quantile(cp, alpha, beta)
        back = to_classic(qp)
        again = to_quantile(back, alpha, beta)
        err = max(
            abs(back.mu - cp.mu), abs(back.sigma - cp.sigma) / cp.sigma, abs(back.xi - cp.xi),
            abs(again.q_alpha - qp.q_alpha), abs(again.s_beta - qp.s_beta) / qp.s_beta,
        )
        worst = max(worst, err)
    report(6, "6 ", worst <= 1e-10, f"200 triples (50 with |xi| <= 1e-6), max error {worst:.1e} (<= 1e-10)")


# ---------------------------------------------------------------------------
# 7. prior normalisation


def test_7_prior_normalisation():
    errs = {}
    for lam in (1.0, 7.0, 20.0):
        # the density vanishes like exp(-c / sqrt(1 - xi)) at 1
        errs[f"pc lam={lam:g}"] = abs(
            integrate(lambda x: float(pc_density(x, lam)), 0.0, 1.0 - 1e-9, tol=1e-12) - 1.0
        )
    prior = PcPrior(7.0, 0.5)
    errs["p3c lam=7"] = abs(integrate(lambda x: float(p3c_density(x, prior)), 0.0, 0.5, tol=1e-12) - 1.0)
    worst = max(errs.values())
    report(7, "7 ", worst <= 1e-6, ", ".join(f"{k}: {v:.1e}" for k, v in errs.items()) + " (<= 1e-6)")


# ---------------------------------------------------------------------------
# 8. recovery


def test_8_penalised_recovery():
    truth = QuantileParams(1.0, 2.0, 0.2)
    prior = PcPrior()
    est = []
    for r in range(50):
        x = bgev_sample(2000, truth, BlendConfig(), seed=np.random.default_rng([808, r]))
        fr = fit(x, "bgev", prior=prior)
        est.append((fr.params.q_alpha, fr.params.s_beta, fr.params.xi))
    est = np.array(est)
    mean, sd = est.mean(axis=0), est.std(axis=0, ddof=1)
    z = np.abs(mean - [1.0, 2.0, 0.2]) / sd
    max_xi = est[:, 2].max()
    ok = bool(np.all(z <= 3.0)) and max_xi < 0.5
    report(
        8, "8 ", ok,
        "|mean - truth| / MC sd: " + ", ".join(f"{n} {v:.2f}" for n, v in zip(("q", "s", "xi"), z))
        + f" (<= 3); max xi_hat {max_xi:.3f} (< 0.5)",
    )


# ---------------------------------------------------------------------------
# 9. Cauchy demonstration


def test_9_cauchy_demo():
    stats = pytest.importorskip("scipy.stats")
    reps = 100_000
    ns = (2, 5, 10, 20)
    rep = sim.demo_cauchy(n_list=ns, reps=reps, seed=SEED)
    lines, ok = [], True
    for n in ns:
        exact = rep.get(f"n={n}", "exact_mass_below_0")
        analytic = exact == 0.5**n and abs(float(sim.cauchy_max_cdf(0.0, n)) - 0.5**n) <= 1e-15 * 0.5**n
        count = round(rep.get(f"n={n}", "mass_below_0") * reps)
        lo, hi = stats.binom.ppf([0.005, 0.995], reps, exact)
        within = lo <= count <= hi
        ok &= analytic and within
        lines.append(f"n={n} count {count} in [{lo:.0f}, {hi:.0f}]")
    positive = all(rep.get(f"n={n}", "mass_below_0") > 0 for n in (2, 5, 10))
    ok &= positive
    report(9, "9 ", ok, "; ".join(lines) + f"; positive mass below 0 for n<=10: {positive}")


# ---------------------------------------------------------------------------
# 10. PIT calibration


def test_10_pit_calibration():
    qp, cfg = QuantileParams(1.0, 2.0, 0.2), BlendConfig()
    x = bgev_sample(10_000, qp, cfg, seed=1010)
    good = pit(x, "bgev", qp, cfg)
    sigma = to_classic(qp).sigma
    shifted = pit(x, "bgev", QuantileParams(qp.q_alpha + 10 * sigma, qp.s_beta, qp.xi), cfg)
    ok = good.passes() and not shifted.passes()
    report(10, "10", ok, f"KS generating {good.ks:.4f} passes: {good.passes()}; KS shifted {shifted.ks:.4f} fails: {not shifted.passes()}")
