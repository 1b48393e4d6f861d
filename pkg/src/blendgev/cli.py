"""Command-line interface: ``blendgev {fit,sample,rl,pit,simulate,prior}``.

Settings are resolved as command-line flag > config file > built-in default.
The config file is a flat ``key = value`` list with ``#`` comments; its path
comes from ``--config`` or the ``BLENDGEV_CONFIG`` environment variable.

Exit codes: 0 success, 1 input or configuration error, 2 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import simulation
from .bgev import BlendConfig, bgev_sample
from .diagnostics import pit
from .estimation import FitResult, OptimiserSettings, fit, return_level
from .gev import QuantileParams, gev_sample
from .priors import PcPrior, p3c_density, pc_density

CONFIG_ENV = "BLENDGEV_CONFIG"
MIN_OBS = 5

EXIT_OK, EXIT_INPUT, EXIT_NONCONV = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    model: str = "bgev"
    alpha: float = 0.5
    beta: float = 0.5
    pa: float = 0.05
    pb: float = 0.2
    c1: float = 5.0
    c2: float = 5.0
    prior: bool = False
    prior_lambda: float = 7.0
    prior_upper: float = 0.5
    seed: int = 1
    optimiser: OptimiserSettings = field(default_factory=OptimiserSettings)

    def blend(self) -> BlendConfig:
        return BlendConfig(self.alpha, self.beta, self.pa, self.pb, self.c1, self.c2)

    def fit_blend(self) -> BlendConfig:
        """Blend config handed to ``fit``; the GEV fit only reads alpha and beta."""
        if self.model == "bgev":
            return self.blend()
        p_b = min(self.alpha, self.beta / 2)
        return BlendConfig(self.alpha, self.beta, p_b / 2, p_b)

    def pc_prior(self) -> Optional[PcPrior]:
        return PcPrior(self.prior_lambda, self.prior_upper) if self.prior else None

    def validate(self):
        if self.model not in ("gev", "bgev"):
            raise InputError(f"model: expected 'gev' or 'bgev', got {self.model!r}")
        try:
            QuantileParams(0.0, 1.0, 0.0, self.alpha, self.beta)
            self.fit_blend()
            if self.prior:
                self.pc_prior()
        except ValueError as exc:
            raise InputError(f"invalid configuration: {exc}") from None


_OPT_FIELDS = {f.name: f.type for f in dataclasses.fields(OptimiserSettings)}
_RUN_FIELDS = [f.name for f in dataclasses.fields(RunConfig) if f.name != "optimiser"]


_ALIASES = {"p_a": "pa", "p_b": "pb", "lambda": "prior_lambda"}


def _coerce(key: str, value: str, default):
    try:
        if isinstance(default, bool):
            low = value.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(value)
        return type(default)(value)
    except ValueError:
        raise InputError(f"{key}: cannot interpret {value!r}") from None


def read_config_file(path: str) -> dict:
    entries = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InputError(f"{path}:{lineno}: expected key = value")
        key = key.strip().replace("-", "_")
        entries[_ALIASES.get(key, key)] = value.strip()
    return entries


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    opt = dataclasses.asdict(cfg.optimiser)
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    layers = [read_config_file(path)] if path else []
    layers.append({k: v for k, v in vars(args).items() if k in _RUN_FIELDS or k in opt})
    for layer in layers:
        for key, value in layer.items():
            if value is None:
                continue
            if key in opt:
                opt[key] = _coerce(key, value, opt[key]) if isinstance(value, str) else value
            elif key in _RUN_FIELDS:
                default = getattr(cfg, key)
                setattr(cfg, key, _coerce(key, value, default) if isinstance(value, str) else value)
            else:
                raise InputError(f"unknown config key {key!r}")
    try:
        cfg.optimiser = OptimiserSettings(**opt)
    except (TypeError, ValueError) as exc:
        raise InputError(f"optimiser settings: {exc}") from None
    cfg.validate()
    return cfg


def read_observations(path: str) -> np.ndarray:
    """Single-column CSV with an optional header line."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    values = []
    for lineno, raw in enumerate(lines, 1):
        cell = raw.strip()
        if not cell:
            continue
        if "," in cell:
            raise InputError(f"line {lineno}: expected a single column, got {raw!r}")
        try:
            v = float(cell)
        except ValueError:
            if lineno == 1:
                continue
            raise InputError(f"line {lineno}: cannot parse {raw!r} as a number") from None
        if not math.isfinite(v):
            raise InputError(f"line {lineno}: non-finite value {raw!r}")
        values.append(v)
    if not values:
        raise InputError("no observations")
    if len(values) < MIN_OBS:
        raise InputError(f"need at least {MIN_OBS} observations, got {len(values)}")
    return np.array(values)


def _read_fit(path: str) -> FitResult:
    try:
        with open(path) as fh:
            return FitResult.from_text(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read fit file {path}: {exc.strerror}") from None
    except (KeyError, ValueError) as exc:
        raise InputError(f"malformed fit file {path}: {exc}") from None


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _model_params(args, cfg: RunConfig):
    """(model, params, blend config) from --fit or from --q/--s/--xi."""
    if args.fit:
        fr = _read_fit(args.fit)
        return fr.model, fr.params, fr.cfg
    if args.q is None or args.s is None or args.xi is None:
        raise InputError("give either --fit FILE or all of --q, --s, --xi")
    try:
        qp = QuantileParams(args.q, args.s, args.xi, cfg.alpha, cfg.beta)
        return cfg.model, qp, cfg.blend() if cfg.model == "bgev" else None
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_fit(args) -> int:
    cfg = resolve_config(args)
    x = read_observations(args.data)
    fr = fit(x, cfg.model, cfg.fit_blend(), cfg.pc_prior(), cfg.optimiser)
    _emit(fr.to_text(), args.out)
    if not fr.converged:
        print("warning: optimiser did not converge", file=sys.stderr)
        return EXIT_NONCONV
    return EXIT_OK


def cmd_sample(args) -> int:
    cfg = resolve_config(args)
    model, qp, blend = _model_params(args, cfg)
    if args.n < 0:
        raise InputError("n must be nonnegative")
    if model == "bgev":
        try:
            x = bgev_sample(args.n, qp, blend, seed=cfg.seed)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    else:
        x = gev_sample(args.n, qp, seed=cfg.seed)
    _emit("index,value\n" + "".join(f"{i},{float(v)!r}\n" for i, v in enumerate(x)), args.out)
    return EXIT_OK


def cmd_rl(args) -> int:
    fr = _read_fit(args.fit)
    try:
        levels = return_level(fr, args.T)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    levels = np.atleast_1d(levels)
    _emit("T,return_level\n" + "".join(f"{t!r},{float(v)!r}\n" for t, v in zip(args.T, levels)), args.out)
    return EXIT_OK


def cmd_pit(args) -> int:
    cfg = resolve_config(args)
    x = read_observations(args.data)
    model, qp, blend = _model_params(args, cfg)
    rep = pit(x, model, qp, blend, bins=args.bins)
    _emit(rep.to_csv(x), args.out)
    print(f"ks_distance={rep.ks!r} n={rep.n} bins={','.join(map(str, rep.counts))}", file=sys.stderr)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = resolve_config(args)
    M = args.M or (simulation.FAST_M if args.fast else simulation.DEFAULT_M)
    common = dict(M=M, seed=cfg.seed, settings=cfg.optimiser)
    if args.study == "study1":
        grid = {k: v for k, v in (("ns", args.n), ("Ns", args.N), ("Ts", args.T)) if v}
        rep = simulation.study1(cfg=cfg.blend(), **grid, **common)
    elif args.study == "study2":
        rep = simulation.study2(**common)
    elif args.study == "study3":
        rep = simulation.study3(**common)
    else:
        rep = simulation.demo_cauchy(seed=cfg.seed, reps=args.M or 100_000)
    if args.out:
        _emit(rep.to_csv(), args.out)
        sys.stdout.write(rep.pretty())
    else:
        sys.stdout.write(rep.to_csv())
        sys.stderr.write(rep.pretty())
    if any(not c.reliable for c in rep.cells):
        print("warning: some cells exceeded the failed-fit limit", file=sys.stderr)
        return EXIT_NONCONV
    return EXIT_OK


def _parse_grid(spec: str) -> np.ndarray:
    try:
        start, step, stop = (float(p) for p in spec.split(":"))
    except ValueError:
        raise InputError(f"grid must be start:step:stop, got {spec!r}") from None
    if step <= 0 or stop < start:
        raise InputError(f"empty grid {spec!r}")
    k = int(math.floor((stop - start) / step + 1e-9))
    return np.round(start + step * np.arange(k + 1), 12)


def cmd_prior(args) -> int:
    cfg = resolve_config(args)
    grid = _parse_grid(args.grid)
    if np.any(grid < 0) or np.any(grid >= 1):
        raise InputError("grid values must lie in [0, 1)")
    try:
        prior = PcPrior(cfg.prior_lambda, cfg.prior_upper)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    p3c = np.atleast_1d(p3c_density(grid, prior))
    pc = np.atleast_1d(pc_density(grid, cfg.prior_lambda))
    rows = "".join(f"{x!r},{a!r},{b!r}\n" for x, a, b in zip(map(float, grid), map(float, p3c), map(float, pc)))
    _emit("xi,p3c_density,pc_density\n" + rows, args.out)
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser):
    g = p.add_argument_group("model configuration")
    g.add_argument("--model", choices=("gev", "bgev"))
    g.add_argument("--alpha", type=float)
    g.add_argument("--beta", type=float)
    g.add_argument("--pa", type=float)
    g.add_argument("--pb", type=float)
    g.add_argument("--c1", type=float)
    g.add_argument("--c2", type=float)
    g.add_argument("--prior", action=argparse.BooleanOptionalAction, default=None,
                   help="add the truncated PC prior on xi (posterior-mode fit)")
    g.add_argument("--prior-lambda", type=float)
    g.add_argument("--prior-upper", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--config", help=f"key = value config file (default: ${CONFIG_ENV})")
    p.add_argument("--out", help="output file (default: stdout)")


def _add_params(p: argparse.ArgumentParser):
    p.add_argument("--fit", help="fitted-parameter file written by 'fit'")
    p.add_argument("--q", type=float, help="q_alpha")
    p.add_argument("--s", type=float, help="s_beta")
    p.add_argument("--xi", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blendgev", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a GEV or bGEV to a single-column CSV")
    p.add_argument("data")
    _add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("sample", help="draw a seeded sample")
    p.add_argument("n", type=int)
    _add_params(p)
    _add_common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("rl", help="return levels from a fitted-parameter file")
    p.add_argument("--fit", required=True)
    p.add_argument("--T", type=float, nargs="+", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_rl)

    p = sub.add_parser("pit", help="PIT values and KS distance")
    p.add_argument("data")
    p.add_argument("--bins", type=int, default=10)
    _add_params(p)
    _add_common(p)
    p.set_defaults(func=cmd_pit)

    p = sub.add_parser("simulate", help="run a Monte Carlo study")
    p.add_argument("study", choices=("study1", "study2", "study3", "demo"))
    p.add_argument("--fast", action="store_true", help=f"M = {simulation.FAST_M} replicates")
    p.add_argument("--M", type=int, help="number of replicates")
    p.add_argument("--n", type=int, nargs="+", help="study1 block sizes")
    p.add_argument("--N", type=int, nargs="+", help="study1 numbers of maxima")
    p.add_argument("--T", type=float, nargs="+", help="study1 return periods")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("prior", help="tabulate the PC and truncated PC priors")
    p.add_argument("--grid", default="0:0.01:0.49")
    _add_common(p)
    p.set_defaults(func=cmd_prior)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
