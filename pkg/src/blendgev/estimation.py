"""Likelihoods, a Nelder-Mead simplex optimiser and GEV / bGEV fitting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import bgev as _bgev
from . import gev as _gev
from .bgev import BlendConfig, bgev_loglik_sum, blend_scalars
from .gev import ClassicParams, QuantileParams, classic_from_quantile, gev_loglik_sum
from .priors import PcPrior, pc_logdensity_scalar


class StartInfeasibleError(ValueError):
    """The objective is not finite at the starting point."""


def _as_data(data) -> np.ndarray:
    x = np.ascontiguousarray(np.asarray(data, dtype=float).ravel())
    if x.size == 0:
        raise ValueError("no observations")
    return x


def loglik_gev(data, qp: QuantileParams) -> float:
    """GEV log-likelihood; ``-inf`` as soon as one point leaves the support."""
    x = _as_data(data)
    mu, sigma = classic_from_quantile(qp.q_alpha, qp.s_beta, qp.xi, qp.alpha, qp.beta)
    return gev_loglik_sum(x, mu, sigma, qp.xi)


def loglik_bgev(data, qp: QuantileParams, cfg: BlendConfig = BlendConfig()) -> float:
    x = _as_data(data)
    _, _, args = _bgev._kernel_args(qp, cfg)
    return bgev_loglik_sum(x, *args)


# ---------------------------------------------------------------------------
# Nelder-Mead


@dataclass(frozen=True)
class OptimiserSettings:
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    max_iter: int = 5000
    x_tol: float = 1e-8
    f_tol: float = 1e-8
    restarts: int = 1
    initial_step: float = 0.1

    def __post_init__(self):
        if not self.reflection > 0:
            raise ValueError("reflection coefficient must be positive")
        if not self.expansion > 1:
            raise ValueError("expansion coefficient must exceed 1")
        if not 0 < self.contraction < 1:
            raise ValueError("contraction coefficient must lie in (0, 1)")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink coefficient must lie in (0, 1)")
        if self.max_iter < 1 or self.restarts < 0:
            raise ValueError("max_iter must be >= 1 and restarts >= 0")


@dataclass
class SimplexResult:
    x: np.ndarray
    fun: float
    iterations: int
    n_evals: int
    converged: bool
    trace: list = field(default_factory=list)


def _safe(f: Callable[[np.ndarray], float]):
    def g(x):
        v = f(x)
        return v if v == v and v != -math.inf else math.inf

    return g


def _simplex_run(f, x0, fx0, s: OptimiserSettings, trace):
    n = x0.size
    pts = np.empty((n + 1, n))
    vals = np.empty(n + 1)
    pts[0], vals[0] = x0, fx0
    for i in range(n):
        p = x0.copy()
        p[i] += s.initial_step * max(abs(x0[i]), 1.0)
        pts[i + 1], vals[i + 1] = p, f(p)
    evals = n
    converged = False
    it = 0
    while it < s.max_iter:
        order = np.argsort(vals, kind="stable")
        pts, vals = pts[order], vals[order]
        trace.append(float(vals[0]))
        spread = vals[-1] - vals[0]
        diameter = np.max(np.abs(pts[1:] - pts[0]))
        if diameter <= s.x_tol or spread <= s.f_tol:
            converged = True
            break
        it += 1

        centroid = pts[:-1].mean(axis=0)
        worst = pts[-1]
        xr = centroid + s.reflection * (centroid - worst)
        fr = f(xr)
        evals += 1
        if fr < vals[0]:
            xe = centroid + s.expansion * (xr - centroid)
            fe = f(xe)
            evals += 1
            if fe < fr:
                pts[-1], vals[-1] = xe, fe
            else:
                pts[-1], vals[-1] = xr, fr
            continue
        if fr < vals[-2]:
            pts[-1], vals[-1] = xr, fr
            continue
        if fr < vals[-1]:
            xc = centroid + s.contraction * (xr - centroid)
        else:
            xc = centroid + s.contraction * (worst - centroid)
        fc = f(xc)
        evals += 1
        if fc < min(fr, vals[-1]):
            pts[-1], vals[-1] = xc, fc
            continue
        for i in range(1, n + 1):
            pts[i] = pts[0] + s.shrink * (pts[i] - pts[0])
            vals[i] = f(pts[i])
        evals += n
    else:
        order = np.argsort(vals, kind="stable")
        pts, vals = pts[order], vals[order]
        trace.append(float(vals[0]))
    return pts[0].copy(), float(vals[0]), it, evals, converged


def nelder_mead(
    objective: Callable[[np.ndarray], float],
    start: Sequence[float],
    settings: OptimiserSettings = OptimiserSettings(),
) -> SimplexResult:
    """Minimise ``objective`` with the Nelder-Mead simplex method.

    Non-finite values are ranked as the worst possible vertex.  After the
    first run the search restarts ``settings.restarts`` times from the best
    point with a fresh simplex.  ``trace`` holds the best value at every
    iteration and is nonincreasing.
    """
    f = _safe(objective)
    x = np.array(start, dtype=float)
    fx = f(x)
    if not math.isfinite(fx):
        raise StartInfeasibleError(f"objective is not finite at the start point {x}")
    trace: list = []
    iterations = 0
    evals = 1
    converged = False
    for _ in range(settings.restarts + 1):
        x, fx, it, ev, converged = _simplex_run(f, x, fx, settings, trace)
        iterations += it
        evals += ev
    return SimplexResult(x, fx, iterations, evals, converged, trace)


# ---------------------------------------------------------------------------
# fitting


@dataclass
class FitResult:
    model: str
    params: QuantileParams
    classic: ClassicParams
    objective: float
    loglik: float
    iterations: int
    n_evals: int
    converged: bool
    cfg: Optional[BlendConfig] = None
    prior: Optional[PcPrior] = None
    trace: list = field(default_factory=list, repr=False)

    def as_dict(self) -> dict:
        cfg = self.cfg or BlendConfig(self.params.alpha, self.params.beta)
        return {
            "model": self.model,
            "q_alpha": self.params.q_alpha,
            "s_beta": self.params.s_beta,
            "xi": self.params.xi,
            "mu": self.classic.mu,
            "sigma": self.classic.sigma,
            "alpha": self.params.alpha,
            "beta": self.params.beta,
            "p_a": cfg.p_a,
            "p_b": cfg.p_b,
            "c1": cfg.c1,
            "c2": cfg.c2,
            "prior_lambda": self.prior.lam if self.prior else "",
            "prior_upper": self.prior.upper if self.prior else "",
            "objective": self.objective,
            "loglik": self.loglik,
            "iterations": self.iterations,
            "converged": int(self.converged),
        }

    def to_text(self) -> str:
        return "".join(f"{k}={_fmt(v)}\n" for k, v in self.as_dict().items())

    def csv_header(self) -> str:
        return ",".join(self.as_dict())

    def to_csv_row(self) -> str:
        return ",".join(_fmt(v) for v in self.as_dict().values())

    @classmethod
    def from_text(cls, text: str) -> FitResult:
        """Rebuild a result from :meth:`to_text` output (trace is not stored)."""
        kv = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                key, _, value = line.partition("=")
                kv[key.strip()] = value.strip()
        model = kv["model"]
        qp = QuantileParams(
            float(kv["q_alpha"]), float(kv["s_beta"]), float(kv["xi"]),
            float(kv.get("alpha", 0.5)), float(kv.get("beta", 0.5)),
        )
        cfg = None
        if model == "bgev":
            cfg = BlendConfig(
                qp.alpha, qp.beta, float(kv["p_a"]), float(kv["p_b"]),
                float(kv["c1"]), float(kv["c2"]),
            )
        prior = None
        if kv.get("prior_lambda"):
            prior = PcPrior(float(kv["prior_lambda"]), float(kv["prior_upper"]))
        return cls(
            model, qp, _gev.to_classic(qp), float(kv.get("objective", "nan")),
            float(kv.get("loglik", "nan")), int(kv.get("iterations", 0)), 0,
            bool(int(kv.get("converged", 1))), cfg, prior,
        )


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _softplus(t: float) -> float:
    return t + math.log1p(math.exp(-t)) if t > 0 else math.log1p(math.exp(t))


def _softplus_inv(x: float) -> float:
    return x + math.log(-math.expm1(-x))


def _logistic(t: float) -> float:
    if t >= 0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


# GEV maximum likelihood keeps xi inside this open window
GEV_XI_RANGE = (-0.5, 1.0)


def _xi_transform(model: str, prior: Optional[PcPrior]):
    """(to_xi, from_xi) mapping the third optimisation coordinate to xi."""
    if prior is not None:
        u = prior.upper
        return (lambda t: u * _logistic(t)), (lambda xi: math.log(xi / (u - xi)))
    if model == "bgev":
        return _softplus, _softplus_inv
    return (lambda t: t), (lambda xi: xi)


def start_values(data, alpha: float = 0.5, beta: float = 0.5, xi0: float = 0.1):
    """Empirical alpha-quantile, empirical quantile range and a fixed shape."""
    x = np.asarray(data, dtype=float)
    q0, lo, hi = np.quantile(x, [alpha, beta / 2, 1 - beta / 2])
    s0 = hi - lo
    if not s0 > 0:
        s0 = max(np.ptp(x), 1e-6 * max(1.0, abs(q0)))
    return float(q0), float(s0), xi0


def fit(
    data,
    model: str = "bgev",
    cfg: BlendConfig = BlendConfig(),
    prior: Optional[PcPrior] = None,
    settings: OptimiserSettings = OptimiserSettings(),
    start: Optional[tuple] = None,
) -> FitResult:
    """Maximum likelihood (or, with ``prior``, posterior mode) fit.

    The simplex works on ``(q_alpha, log s_beta, t)`` where ``t`` maps to the
    shape: identity restricted to ``GEV_XI_RANGE`` for the GEV, softplus for
    the unpenalised bGEV, and a logistic onto ``(0, prior.upper)`` when a
    prior is given.  Non-convergence and a collapsing spread are reported
    through ``converged`` rather than raised.
    """
    if model not in ("gev", "bgev"):
        raise ValueError(f"unknown model {model!r}")
    x = _as_data(data)
    alpha, beta = cfg.alpha, cfg.beta
    to_xi, from_xi = _xi_transform(model, prior)

    if model == "bgev":
        c1, c2, lbeta = float(cfg.c1), float(cfg.c2), cfg.shape.log_beta
        p_a, p_b = cfg.p_a, cfg.p_b

        def loglik(q, s, xi):
            if xi < 0:
                return -math.inf
            return bgev_loglik_sum(x, *blend_scalars(q, s, xi, alpha, beta, p_a, p_b), c1, c2, lbeta)

    else:

        def loglik(q, s, xi):
            if not GEV_XI_RANGE[0] < xi < GEV_XI_RANGE[1]:
                return -math.inf
            mu, sigma = classic_from_quantile(q, s, xi, alpha, beta)
            return gev_loglik_sum(x, mu, sigma, xi)

    if prior is not None:
        log_norm, lam = prior.log_norm, prior.lam

        def log_prior(xi):
            if not 0 <= xi < prior.upper:
                return -math.inf
            return pc_logdensity_scalar(xi, lam) - log_norm

    else:

        def log_prior(xi):
            return 0.0

    def objective(theta):
        s = math.exp(theta[1])
        xi = to_xi(theta[2])
        if not s > 0:
            return math.inf
        return -(loglik(theta[0], s, xi) + log_prior(xi))

    q0, s0, xi0 = start if start is not None else start_values(x, alpha, beta)
    if prior is not None:
        xi0 = min(max(xi0, 1e-3 * prior.upper), 0.999 * prior.upper)
    theta0 = np.array([q0, math.log(s0), from_xi(xi0)])
    res = nelder_mead(objective, theta0, settings)

    q, s, xi = float(res.x[0]), math.exp(res.x[1]), to_xi(res.x[2])
    qp = QuantileParams(q, s, xi, alpha, beta)
    ll = loglik(q, s, xi)
    degenerate = np.ptp(x) == 0 or s < 1e-8 * max(1.0, abs(q))
    return FitResult(
        model=model,
        params=qp,
        classic=_gev.to_classic(qp),
        objective=-res.fun,
        loglik=ll,
        iterations=res.iterations,
        n_evals=res.n_evals,
        converged=res.converged and not degenerate and math.isfinite(res.fun),
        cfg=cfg if model == "bgev" else None,
        prior=prior,
        trace=res.trace,
    )


def return_level(fr: FitResult, T):
    """Level exceeded on average once every ``T`` blocks, the (1 - 1/T)-quantile."""
    T = np.asarray(T, dtype=float)
    if np.any(T <= 1):
        raise ValueError("return period must exceed 1")
    prob = 1.0 - 1.0 / T
    if fr.model == "bgev":
        return _bgev.bgev_quantile(prob, fr.params, fr.cfg)
    return _gev.gev_quantile_q(prob, fr.params)

