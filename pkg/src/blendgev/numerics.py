"""Special functions, quadrature and root finding used across the package.

Everything here is self-contained: the regularised incomplete beta function
is evaluated with a Lentz continued fraction compiled by numba so it can be
called from the likelihood kernels without leaving nopython mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numba as nb
import numpy as np

_CF_MAX_ITER = 300
_CF_EPS = 1e-16
_TINY = 1e-300


class BracketError(ValueError):
    """Raised when a root-finding bracket does not change sign."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative routine exhausts its budget."""


@dataclass(frozen=True)
class BetaShape:
    c1: float
    c2: float

    def __post_init__(self):
        if not (self.c1 > 0 and self.c2 > 0):
            raise ValueError(f"Beta shapes must be positive, got ({self.c1}, {self.c2})")

    @property
    def log_beta(self) -> float:
        return log_beta(self.c1, self.c2)

    def swap(self) -> BetaShape:
        return BetaShape(self.c2, self.c1)


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def log_beta(c1: float, c2: float) -> float:
    return log_gamma(c1) + log_gamma(c2) - log_gamma(c1 + c2)


@nb.njit(cache=True)
def _betacf(y, c1, c2):
    # modified Lentz evaluation of the incomplete beta continued fraction
    qab = c1 + c2
    qap = c1 + 1.0
    qam = c1 - 1.0
    c = 1.0
    d = 1.0 - qab * y / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (c2 - m) * y / ((qam + m2) * (c1 + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(c1 + m) * (qab + m) * y / ((c1 + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            break
    return h


@nb.njit(cache=True)
def incbeta(y, c1, c2, lbeta):
    """I_y(c1, c2) given the precomputed log B(c1, c2); y is clipped to [0, 1]."""
    if y <= 0.0:
        return 0.0
    if y >= 1.0:
        return 1.0
    front = math.exp(c1 * math.log(y) + c2 * math.log1p(-y) - lbeta)
    if y < (c1 + 1.0) / (c1 + c2 + 2.0):
        return front * _betacf(y, c1, c2) / c1
    return 1.0 - front * _betacf(1.0 - y, c2, c1) / c2


@nb.njit(cache=True)
def _incbeta_array(y, c1, c2, lbeta):
    out = np.empty(y.shape[0])
    for i in range(y.shape[0]):
        out[i] = incbeta(y[i], c1, c2, lbeta)
    return out


def reg_inc_beta(y, shape: BetaShape):
    """Regularised incomplete beta function I_y(c1, c2).

    Accepts a scalar or array ``y`` in [0, 1] and returns the same shape.
    """
    arr = np.asarray(y, dtype=float)
    if np.any((arr < 0) | (arr > 1)) or np.any(np.isnan(arr)):
        raise ValueError("reg_inc_beta requires 0 <= y <= 1")
    out = _incbeta_array(arr.ravel(), float(shape.c1), float(shape.c2), shape.log_beta)
    out = out.reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def beta_pdf_and_derivs(y, shape: BetaShape):
    """Beta density together with its first and second derivatives in ``y``.

    Valid on the open interval (0, 1).  Returns a tuple ``(f, df, d2f)``.
    """
    y = np.asarray(y, dtype=float)
    if np.any((y <= 0) | (y >= 1)):
        raise ValueError("beta_pdf_and_derivs requires 0 < y < 1")
    c1, c2 = shape.c1, shape.c2
    f = np.exp((c1 - 1) * np.log(y) + (c2 - 1) * np.log1p(-y) - shape.log_beta)
    # with f = C y^(c1-1) (1-y)^(c2-1), d/dy log f = (c1-1)/y - (c2-1)/(1-y)
    u = (c1 - 1) / y - (c2 - 1) / (1 - y)
    du = -(c1 - 1) / y**2 - (c2 - 1) / (1 - y) ** 2
    df = f * u
    d2f = f * (u * u + du)
    if y.ndim == 0:
        return float(f), float(df), float(d2f)
    return f, df, d2f


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Root of a continuous function on a sign-changing bracket.

    Illinois-style regula falsi steps are taken when they land inside the
    bracket and shrink it fast enough; otherwise the step is a bisection, so
    the bracket always contracts.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise BracketError(f"f({lo})={flo} and f({hi})={fhi} have the same sign")
    side = 0
    bisect = False
    for _ in range(max_iter):
        width = hi - lo
        if width <= tol:
            break
        x = 0.5 * (lo + hi)
        if not bisect:
            xs = (lo * fhi - hi * flo) / (fhi - flo)
            if lo < xs < hi:
                x = xs
        fx = f(x)
        if fx == 0.0:
            return x
        if np.sign(fx) == np.sign(flo):
            lo, flo = x, fx
            if side == -1:
                fhi *= 0.5
            side = -1
        else:
            hi, fhi = x, fx
            if side == 1:
                flo *= 0.5
            side = 1
        # a step that fails to halve the bracket is followed by a bisection
        bisect = hi - lo > 0.5 * width
    else:
        raise ConvergenceError("find_root did not reach the requested tolerance")
    return lo if abs(flo) <= abs(fhi) else hi


_EPS = float(np.finfo(float).eps)


def integrate(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    max_depth: int = 50,
) -> float:
    """Adaptive Simpson quadrature of ``f`` over ``[lo, hi]``."""
    if lo == hi:
        return 0.0
    if lo > hi:
        return -integrate(f, hi, lo, tol, max_depth)
    mid = 0.5 * (lo + hi)
    flo, fmid, fhi = f(lo), f(mid), f(hi)
    whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
    return _simpson(f, lo, hi, flo, fmid, fhi, whole, tol, max_depth)


def _simpson(f, lo, hi, flo, fmid, fhi, whole, tol, depth):
    mid = 0.5 * (lo + hi)
    lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
    flm, frm = f(lm), f(rm)
    left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
    right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol or abs(delta) <= 1e-14 * abs(left + right):
        return left + right + delta / 15.0
    # an interval a few ulps wide cannot be refined further (jump at an endpoint)
    if hi - lo <= 64.0 * _EPS * max(abs(lo), abs(hi)):
        return left + right
    if depth <= 0:
        raise ConvergenceError(f"adaptive Simpson hit the depth cap on [{lo}, {hi}]")
    return _simpson(f, lo, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1) + _simpson(
        f, mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1
    )
