"""Command-line front end: ``nessdrag {sweep,point,spectrum,asymptotics,average,check}``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import asymptotics
from .friction import MODES, ForceConvergenceError, SweepRow, forces, sweep
from .material import make_model
from .params import (
    DEFAULT_CONFIG,
    NormalizationInfo,
    SystemParams,
    load_config,
    params_from_config,
    to_si,
)
from .quadrature import IntegrationError
from .response import ResponseContext, spectrum_parts

EXIT_USAGE = 2
EXIT_NONCONVERGED = 3

CSV_COLUMNS = ("V", "F_full", "F_lte", "F_j", "rel_diff_lte", "rel_diff_full",
               "F_asym_low", "F_asym_high", "err_full")


def _fmt(x: float) -> str:
    return "%.8e" % x


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams
    norm: NormalizationInfo | None
    material: str
    r0: float
    v_min: float
    v_max: float
    n_points: int
    log_grid: bool
    modes: tuple[str, ...]
    out: str | None
    fmt: str

    def context(self) -> ResponseContext:
        model = make_model(self.material, self.params.eta, self.r0)
        return ResponseContext.from_params(self.params, model)

    def grid(self) -> list[float]:
        if self.n_points == 1:
            return [self.v_min]
        if self.log_grid:
            return [float(v) for v in np.geomspace(self.v_min, self.v_max, self.n_points)]
        return [float(v) for v in np.linspace(self.v_min, self.v_max, self.n_points)]


def build_config(ns: argparse.Namespace) -> RunConfig:
    cfg = dict(DEFAULT_CONFIG)
    if ns.config:
        cfg.update(load_config(ns.config))
    for flag, key in (("Z", "Z"), ("xi_a", "xi_a"), ("eta", "eta"), ("alpha_sp", "alpha_sp"),
                      ("dipole", "dipole"), ("material", "material"), ("r0", "r0")):
        value = getattr(ns, flag, None)
        if value is not None:
            cfg[key] = str(value)
    params, norm = params_from_config(cfg)
    modes = tuple(m.strip() for m in ns.mode.split(",") if m.strip())
    bad = [m for m in modes if m not in MODES]
    if bad or not modes:
        raise ValueError(f"--mode must list a subset of {','.join(MODES)}")
    if not (0 < ns.v_min <= ns.v_max < 1):
        raise ValueError("velocity grid needs 0 < v-min <= v-max < 1")
    if ns.points < 0:
        raise ValueError("--points must be >= 0")
    return RunConfig(params, norm, cfg.get("material", "drude"), float(cfg.get("r0", 1.0)),
                     ns.v_min, ns.v_max, ns.points, ns.log, modes, ns.out, ns.format)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _row_values(row: SweepRow) -> list[float]:
    rdl = row.rel_diff_lte if row.lte != 0 else math.nan
    rdf = row.rel_diff_full if row.full != 0 else math.nan
    return [row.V, row.full, row.lte, row.j, rdl, rdf, row.asym_low, row.asym_high, row.err_full]


def format_sweep(rows: Sequence[SweepRow], fmt: str = "csv") -> str:
    if fmt == "json":
        records = []
        for row in rows:
            rec = {k: (v if math.isfinite(v) else None) for k, v in zip(CSV_COLUMNS, _row_values(row))}
            rec["error"] = row.error
            records.append(rec)
        return json.dumps(records, indent=2) + "\n"
    lines = [",".join(CSV_COLUMNS)]
    lines += [",".join(_fmt(v) for v in _row_values(row)) for row in rows]
    return "\n".join(lines) + "\n"


def cmd_sweep(rc: RunConfig) -> int:
    rows = sweep(rc.context(), rc.grid(), rc.modes)
    _emit(format_sweep(rows, rc.fmt), rc.out)
    failed = [r for r in rows if r.error]
    for r in failed:
        print(f"row V={_fmt(r.V)}: {r.error}", file=sys.stderr)
    return EXIT_NONCONVERGED if failed else 0


def cmd_point(rc: RunConfig, V: float) -> int:
    ctx = rc.context()
    res = forces(ctx, V, rc.modes)
    record = {"V": V}
    for m, r in res.items():
        record[f"F_{m}"] = r.f_over_f0
        record[f"err_{m}"] = r.error_estimate
    record["F_asym_low"] = asymptotics.total_low_v(ctx, V)
    record["F_asym_high"] = asymptotics.high_v(ctx, V)
    if rc.norm is not None and "full" in res:
        record["F_full_SI_N"] = to_si(rc.params, rc.norm, res["full"].f_over_f0)
    if rc.fmt == "json":
        text = json.dumps(record, indent=2) + "\n"
    else:
        text = "".join(f"{k} = {_fmt(v)}\n" for k, v in record.items())
    _emit(text, rc.out)
    return 0


def cmd_spectrum(rc: RunConfig, V: float, xi_min: float, xi_max: float, n: int) -> int:
    ctx = rc.context().at_velocity(V)
    cols = ("xi", "S", "S_lte", "J", "alpha_I")
    lines = [",".join(cols)]
    for xi in np.linspace(xi_min, xi_max, n):
        parts = spectrum_parts(ctx, float(xi))
        lines.append(",".join(_fmt(v) for v in [float(xi)] + [parts[c] for c in cols[1:]]))
    _emit("\n".join(lines) + "\n", rc.out)
    return 0


def cmd_asymptotics(rc: RunConfig, V: float) -> int:
    ctx = rc.context()
    high, underflow = asymptotics.high_v(ctx, V, with_flag=True)
    record = {
        "V": V,
        "lte_low_v": asymptotics.lte_low_v(ctx, V),
        "j_low_v": asymptotics.j_low_v(ctx, V),
        "total_low_v": asymptotics.total_low_v(ctx, V),
        "total_low_v_averaged": asymptotics.total_low_v(ctx, V, averaged=True),
        "gamma_form": asymptotics.gamma_form(ctx, V),
        "high_v": high,
    }
    lines = [f"{k} = {_fmt(v)}" for k, v in record.items()]
    if underflow:
        lines.append("high_v underflow = true")
    try:
        lines.append(f"crossover_velocity = {_fmt(asymptotics.crossover_velocity(ctx))}")
    except asymptotics.CrossoverError as exc:
        lines.append(f"crossover_velocity = none ({exc})")
    _emit("\n".join(lines) + "\n", rc.out)
    return 0


def cmd_average(rc: RunConfig) -> int:
    from .orientation import sphere_average

    lte = sphere_average(lambda f: f.A_lte)
    j = sphere_average(lambda f: f.A_j)
    text = (f"A_LTE = {asymptotics.AVG_A_LTE} ({lte:.12f})\n"
            f"A_J = {asymptotics.AVG_A_J} ({j:.12f})\n")
    _emit(text, rc.out)
    ok = (Fraction(lte).limit_denominator(1000) == asymptotics.AVG_A_LTE
          and Fraction(j).limit_denominator(1000) == asymptotics.AVG_A_J)
    return 0 if ok else 1


def run_checks(rc: RunConfig) -> list[tuple[str, bool, str]]:
    """Quick invariant suite; each entry is (name, passed, detail)."""
    from .orientation import sphere_average

    ctx = rc.context()
    out = []

    def add(name, ok, detail=""):
        out.append((name, bool(ok), detail))

    lte = sphere_average(lambda f: f.A_lte)
    j = sphere_average(lambda f: f.A_j)
    add("average A_LTE = 21/20", abs(lte - 1.05) < 1e-9, f"{lte:.12f}")
    add("average A_J = 87/80", abs(j - 1.0875) < 1e-9, f"{j:.12f}")
    add("90*21/20 + 72*87/80 = 864/5", asymptotics.total_si_identity())
    add("45/16 + 9/4 = 81/16", asymptotics.dimensionless_identity())
    xi = np.linspace(-3, 3, 61)
    add("reflection passivity", bool(np.all(ctx.model.reflection_im(xi) * xi >= 0)))
    s_ctx = ctx.at_velocity(1e-3)
    spec = [spectrum_parts(s_ctx, float(x))["S"] for x in np.linspace(-1, 1, 21)]
    add("power spectrum >= 0", min(spec) >= 0, f"min {min(spec):.3e}")
    V = 1e-5
    res = forces(ctx, V)
    gap = abs(res["full"].f_over_f0 - res["lte"].f_over_f0 - res["j"].f_over_f0)
    tol = 2 * sum(r.error_estimate for r in res.values())
    add("full = lte + j", gap <= tol, f"gap {gap:.3e} tol {tol:.3e}")
    low = asymptotics.total_low_v(ctx, V)
    add("low-V law within 5%", abs(res["full"].f_over_f0 / low - 1) < 0.05,
        f"ratio {res['full'].f_over_f0 / low:.5f}")
    return out


def cmd_check(rc: RunConfig) -> int:
    results = run_checks(rc)
    lines = [f"{'PASS' if ok else 'FAIL'} {name}" + (f" ({d})" if d else "") for name, ok, d in results]
    _emit("\n".join(lines) + "\n", rc.out)
    return 0 if all(ok for _, ok, _ in results) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value parameter file")
    common.add_argument("--Z", type=float, help="z_a omega_sp / c")
    common.add_argument("--xi-a", dest="xi_a", type=float, help="omega_a / omega_sp")
    common.add_argument("--eta", type=float, help="Gamma / omega_sp")
    common.add_argument("--alpha-sp", dest="alpha_sp", type=float)
    common.add_argument("--dipole", help="x,y,z (normalised internally)")
    common.add_argument("--material", choices=("drude", "ohmic"))
    common.add_argument("--r0", type=float, help="static reflection for the ohmic model")
    common.add_argument("--v-min", dest="v_min", type=float, default=1e-6)
    common.add_argument("--v-max", dest="v_max", type=float, default=1e-2)
    common.add_argument("--points", type=int, default=48)
    grid = common.add_mutually_exclusive_group()
    grid.add_argument("--log", dest="log", action="store_true", default=True)
    grid.add_argument("--linear", dest="log", action="store_false")
    common.add_argument("--mode", default=",".join(MODES))
    common.add_argument("--out")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(prog="nessdrag", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common], help="force over a velocity grid")
    p = sub.add_parser("point", parents=[common], help="force at one velocity")
    p.add_argument("--V", type=float, required=True)
    p = sub.add_parser("spectrum", parents=[common], help="dipole power spectrum at one velocity")
    p.add_argument("--V", type=float, required=True)
    p.add_argument("--xi-min", type=float, default=-1.0)
    p.add_argument("--xi-max", type=float, default=1.0)
    p.add_argument("--xi-points", type=int, default=201)
    p = sub.add_parser("asymptotics", parents=[common], help="closed-form laws at one velocity")
    p.add_argument("--V", type=float, required=True)
    sub.add_parser("average", parents=[common], help="orientation averages of the angular factors")
    sub.add_parser("check", parents=[common], help="run the invariant suite")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        rc = build_config(ns)
        if ns.command == "sweep":
            return cmd_sweep(rc)
        if ns.command == "average":
            return cmd_average(rc)
        if ns.command == "check":
            return cmd_check(rc)
        V = ns.V
        if not (V > 0 and math.isfinite(V)):
            raise ValueError(f"V must be > 0, got {V!r}")
        if ns.command == "point":
            return cmd_point(rc, V)
        if ns.command == "spectrum":
            return cmd_spectrum(rc, V, ns.xi_min, ns.xi_max, ns.xi_points)
        return cmd_asymptotics(rc, V)
    except (ForceConvergenceError, IntegrationError) as exc:
        print(f"nessdrag: not converged: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except (ValueError, OSError) as exc:
        print(f"nessdrag: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
