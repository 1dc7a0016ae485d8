"""Command-line front end: parse a model config, run analyses, emit tables.

Configuration is flat ``key=value`` lines with ``#`` comments, e.g.::

    model.type = brownian
    model.drift = -1
    model.sigma = 1

Subcommands: analyze (asymptotics only), simulate (Monte Carlo only),
compare (asymptotics + Monte Carlo + oracle when the model admits one),
clt (crossing-time normality diagnostic), sweep (asymptotics vs oracle
over a geometric grid of horizons at fixed slope).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from . import asymptotics, oracles, simulation
from .asymptotics import Regime
from .errors import (
    DomainError,
    LevyPassageError,
    NoRootError,
    ParseError,
    RangeError,
    UnsupportedModelError,
    ValidationError,
)
from .models import LevyModel, ModelKind, brownian, cramer_lundberg, jump_diffusion, model_id

_COLUMNS = (
    "model_id",
    "x",
    "t",
    "v",
    "regime",
    "gamma",
    "Gamma_v",
    "psi_star",
    "log_asymptotic",
    "log_mc",
    "mc_se_rel",
    "log_oracle",
    "n_paths",
    "seed",
)

_MODEL_KEYS = {
    "brownian": {"model.drift": True, "model.sigma": True},
    "cramer_lundberg": {"model.lambda": True, "model.claim_rate": True, "model.premium": True},
    "jump_diffusion": {
        "model.drift": True,
        "model.sigma": False,
        "model.intensity": True,
        "model.components": True,
    },
}
_SIM_KEYS = {"sim.paths": int, "sim.seed": int, "sim.step": float, "sim.tilt": str}


@dataclass
class RunRow:
    model_id: str
    x: float
    t: float
    v: float
    regime: str
    gamma: float
    Gamma_v: float | None
    psi_star: float | None
    log_asymptotic: float | None = None
    log_mc: float | None = None
    mc_se_rel: float | None = None
    log_oracle: float | None = None
    n_paths: int | None = None
    seed: int | None = None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return f"{value:.17g}"
    return str(value)


def _row_values(row: RunRow) -> list:
    return [getattr(row, col) for col in _COLUMNS]


def _emit(rows: list[RunRow], fmt: str, out) -> None:
    if fmt == "csv":
        out.write(",".join(_COLUMNS) + "\n")
        for row in rows:
            out.write(",".join(_fmt(v) for v in _row_values(row)) + "\n")
    else:
        for row in rows:
            record = {}
            for col, val in zip(_COLUMNS, _row_values(row)):
                if isinstance(val, float) and math.isnan(val):
                    val = None
                record[col] = val
            out.write(json.dumps(record) + "\n")


def _parse_number(value: str, lineno: int, key: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ParseError(f"line {lineno}: key '{key}' has non-numeric value {value!r}") from None


def _parse_components(value: str, lineno: int) -> list[tuple[float, float, int]]:
    comps = []
    for token in value.split(","):
        token = token.strip()
        sign = 1
        if token.startswith("-"):
            sign, token = -1, token[1:]
        elif token.startswith("+"):
            token = token[1:]
        rate_s, sep, weight_s = token.partition(":")
        if not sep:
            raise ParseError(f"line {lineno}: component {token!r} must look like '+RATE:WEIGHT'")
        rate = _parse_number(rate_s, lineno, "model.components")
        weight = _parse_number(weight_s, lineno, "model.components")
        comps.append((weight, rate, sign))
    return comps


def parse_config(text: str) -> tuple[LevyModel, dict]:
    """Parse the key=value configuration format into a validated model plus
    run defaults (sim.* keys).  Unknown keys are errors."""
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in entries:
            raise ParseError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = (value, lineno)

    if "model.type" not in entries:
        raise ParseError("missing required key 'model.type'")
    type_value, type_line = entries.pop("model.type")
    if type_value not in _MODEL_KEYS:
        raise ParseError(f"line {type_line}: unknown model.type {type_value!r}")
    allowed = _MODEL_KEYS[type_value]

    model_entries: dict[str, tuple[str, int]] = {}
    defaults: dict = {}
    for key, (value, lineno) in entries.items():
        if key in allowed:
            model_entries[key] = (value, lineno)
        elif key in _SIM_KEYS:
            if key == "sim.tilt":
                defaults["tilt"] = value if value == "auto" else _parse_number(value, lineno, key)
            else:
                caster = _SIM_KEYS[key]
                try:
                    defaults[key.split(".", 1)[1]] = caster(value)
                except ValueError:
                    raise ParseError(f"line {lineno}: key '{key}' has invalid value {value!r}") from None
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
    for key, required in allowed.items():
        if required and key not in model_entries:
            raise ParseError(f"missing required key '{key}' for model.type={type_value}")

    def num(key: str, default: float | None = None) -> float:
        if key not in model_entries:
            return default
        value, lineno = model_entries[key]
        return _parse_number(value, lineno, key)

    if type_value == "brownian":
        model = brownian(num("model.drift"), num("model.sigma"))
    elif type_value == "cramer_lundberg":
        model = cramer_lundberg(num("model.lambda"), num("model.claim_rate"), num("model.premium"))
    else:
        comp_value, comp_line = model_entries["model.components"]
        comps = _parse_components(comp_value, comp_line)
        model = jump_diffusion(num("model.drift"), num("model.sigma", 0.0), num("model.intensity"), comps)
    return model, defaults


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="levypassage", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("analyze", "simulate", "compare", "clt", "sweep"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to the model configuration file")
        p.add_argument("--x", type=float, default=None, help="barrier level")
        p.add_argument("--t", type=str, default=None, help="time horizon (sweep: T1:T2:N geometric grid)")
        p.add_argument("--v", type=float, default=None, help="slope x/t")
        p.add_argument("--paths", type=int, default=None, help="Monte Carlo paths (default 100000)")
        p.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
        p.add_argument("--tilt", type=str, default=None, help="tilt parameter or 'auto' (default auto)")
        p.add_argument("--step", type=float, default=None, help="Brownian sub-step (default 0.01)")
        p.add_argument("--format", choices=("csv", "json-lines"), default="csv")
        p.add_argument("--out", type=str, default=None, help="output path (default stdout)")
    return parser


def _resolve_xt(args) -> tuple[float, float]:
    if args.t is None:
        raise ParseError(f"{args.command}: --t is required")
    try:
        t = float(args.t)
    except ValueError:
        raise ParseError(f"{args.command}: --t must be a number, got {args.t!r}") from None
    if args.x is not None:
        return args.x, t
    if args.v is not None:
        return args.v * t, t
    raise ParseError(f"{args.command}: one of --x or --v is required")


def _resolve_tilt(model: LevyModel, x: float, t: float, tilt_spec) -> float | None:
    """None means plain sampling (Cramer regime); a float is the tilt c."""
    if tilt_spec is None or tilt_spec == "auto":
        regime = asymptotics.classify_regime(model, x, t)
        if regime is Regime.CRAMER:
            return None
        from .exponents import inverse_psi_prime

        return inverse_psi_prime(model, x / t)
    return float(tilt_spec)


def _analysis_fields(model: LevyModel, x: float, t: float):
    est = asymptotics.approx_passage_prob(model, x, t)
    regime = asymptotics.classify_regime(model, x, t)
    log_asym = None if est.regime is Regime.INDETERMINATE else est.log_prob
    gamma_v = est.report.Gamma_v
    psi_star = est.report.psi_star_v
    return regime.value, est.report.gamma, gamma_v, psi_star, log_asym


def _oracle_log(model: LevyModel, x: float, t: float) -> float | None:
    if model.kind is ModelKind.BROWNIAN:
        return oracles.bm_exact_passage(model.drift, model.sigma, x, t).value
    return None


def _run_table_command(args, model: LevyModel, defaults: dict, out) -> None:
    paths = args.paths if args.paths is not None else defaults.get("paths", 100_000)
    seed = args.seed if args.seed is not None else defaults.get("seed", 0)
    step = args.step if args.step is not None else defaults.get("step", 0.01)
    tilt_spec = args.tilt if args.tilt is not None else defaults.get("tilt", "auto")
    mid = model_id(model)

    rows: list[RunRow] = []
    if args.command == "sweep":
        if args.v is None:
            raise ParseError("sweep: --v is required")
        if args.t is None or args.t.count(":") != 2:
            raise ParseError("sweep: --t must be a grid T1:T2:N")
        t1_s, t2_s, n_s = args.t.split(":")
        try:
            t1, t2, n = float(t1_s), float(t2_s), int(n_s)
        except ValueError:
            raise ParseError(f"sweep: bad grid {args.t!r}") from None
        if t1 <= 0 or t2 <= 0 or n < 1 or (n == 1 and t1 != t2):
            raise ParseError(f"sweep: bad grid {args.t!r}")
        grid = [t1 * (t2 / t1) ** (k / (n - 1)) for k in range(n)] if n > 1 else [t1]
        for t in grid:
            x = args.v * t
            regime, gamma, gamma_v, psi_star, log_asym = _analysis_fields(model, x, t)
            rows.append(
                RunRow(mid, x, t, x / t, regime, gamma, gamma_v, psi_star, log_asymptotic=log_asym,
                       log_oracle=_oracle_log(model, x, t))
            )
        _emit(rows, args.format, out)
        return

    x, t = _resolve_xt(args)
    regime, gamma, gamma_v, psi_star, log_asym = _analysis_fields(model, x, t)
    row = RunRow(mid, x, t, x / t, regime, gamma, gamma_v, psi_star)
    if args.command in ("analyze", "compare"):
        row.log_asymptotic = log_asym
    if args.command == "compare":
        row.log_oracle = _oracle_log(model, x, t)
    if args.command in ("simulate", "compare"):
        config = simulation.SimConfig(n_paths=paths, master_seed=seed, time_step=step)
        c = _resolve_tilt(model, x, t, tilt_spec)
        if c is None:
            sim = simulation.mc_plain(model, x, t, config)
        else:
            sim = simulation.mc_tilted(model, x, t, simulation.SimConfig(
                n_paths=paths, master_seed=seed, time_step=step, tilt=c))
        row.log_mc = sim.log_estimate
        row.mc_se_rel = sim.std_err_rel
        row.n_paths = sim.n_paths
        row.seed = seed
    _emit([row], args.format, out)


def _run_clt(args, model: LevyModel, defaults: dict, out) -> None:
    if args.x is None or args.v is None:
        raise ParseError("clt: --x and --v are required")
    paths = args.paths if args.paths is not None else defaults.get("paths", 100_000)
    seed = args.seed if args.seed is not None else defaults.get("seed", 0)
    step = args.step if args.step is not None else defaults.get("step", 0.01)
    config = simulation.SimConfig(n_paths=paths, master_seed=seed, time_step=step)
    diag = simulation.clt_diagnostic(model, args.x, args.v, config)
    if args.format == "csv":
        out.write("mean_z,var_z,n\n")
        out.write(f"{_fmt(diag.mean_z)},{_fmt(diag.var_z)},{diag.n}\n")
    else:
        out.write(json.dumps({"mean_z": diag.mean_z, "var_z": diag.var_z, "n": diag.n}) + "\n")


def run(argv: list[str]) -> int:
    """Entry point; returns the process exit status (0 ok, 2 parse/validation,
    3 numerical failure)."""
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            model, defaults = parse_config(fh.read())
        out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
        try:
            if args.command == "clt":
                _run_clt(args, model, defaults, out)
            else:
                _run_table_command(args, model, defaults, out)
        finally:
            if args.out:
                out.close()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, NoRootError, RangeError, UnsupportedModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except LevyPassageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))
