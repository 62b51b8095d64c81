"""Batch driver: ``zpd --command NAME [flags]`` or ``zpd --config run.cfg``.

Config files are flat ``key = value`` lines; ``#`` starts a comment.  Flags
given on the command line override the file.  Every verification prints one
PASS/FAIL line with the measured quantity and writes a CSV, a JSON summary
and two-column plot data under ``--out``.

Exit codes: 0 pass, 1 verification failure, 2 input error, 3 numeric budget
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path

import numpy as np

from .arith import (ModularTwist, characters_mod, char_inversion_check, gauss_sum, mobius,
                    ramanujan_sum)
from .bump import BumpFunction
from .errors import BudgetError, IncompleteTableError, InputError, ZPDError
from .operators import class_after, dl_power, envelope_bound
from .oscillatory import (OscIntegralSpec, fresnel_tail_errors, mandalorian_integral,
                          out_of_band_envelope, quad_I, sp_I, star_params)
from .sums import (ExperimentSpec, character_sum, character_sum_via_gauss, explicit_formula_terms,
                   choose_height,
                   fit_exponent, superbound_dilated, superbound_parts, theorem41_defect)
from .zeros.cache import MAGIC, cache_load, cache_store
from .zeros.hardy import DEFAULT_CEILING
from .zeros.search import find_zeros
from .zeros.table import ZeroTable, ingest_zero_table  # noqa: F401

COMMANDS = ("zeros-find", "zeros-import", "verify-explicit-formula", "verify-stationary-phase",
            "verify-theorem41", "verify-superbound", "verify-characters", "verify-lemmas", "fit")

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

_DEFAULT_GRIDS = {
    "verify-explicit-formula": "20,40",
    "verify-stationary-phase": "100,1000,10000",
    "verify-theorem41": "50,100,200,400,800",
    "verify-superbound": "100,316.22776601683796,1000,3162.2776601683795,10000",
    "verify-characters": "100,1000",
    "verify-lemmas": "20,40,80,160",
}
_DEFAULT_TOL = {"verify-explicit-formula": 1e-6, "verify-characters": 1e-12}


@dataclass
class RunConfig:
    command: str = ""
    xi: str = "1/3"
    bump: str = "1,2"
    xgrid: str = ""
    zeros: str = ""
    height: float = 0.0
    tol: float = 0.0
    out: str = "zpd-out"
    workers: int = 1
    data: str = ""
    ceiling: float = DEFAULT_CEILING
    qmax: int = 30
    seed: int = 20240101
    samples: int = 50

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        if self.workers < 1:
            raise InputError("workers must be at least 1")
        for name in ("zeros", "data"):
            p = getattr(self, name)
            if p and self.command != "zeros-find" and not (name == "zeros" and self.command == "zeros-import"):
                if not Path(p).exists():
                    raise InputError(f"{name} file {p!r} does not exist")
        if self.command == "zeros-import" and not self.data:
            raise InputError("zeros-import needs --data PATH")
        if self.command == "fit" and not self.data:
            raise InputError("fit needs --data PATH")
        grid = self.grid()
        if any(b <= a for a, b in zip(grid[:-1], grid[1:])):
            raise InputError("X grid must be strictly ascending")

    def grid(self) -> list[float]:
        text = self.xgrid or _DEFAULT_GRIDS.get(self.command, "")
        if not text:
            return []
        try:
            return [float(Fraction(s.strip())) for s in text.split(",") if s.strip()]
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot parse X grid {text!r}") from None

    def twist(self) -> ModularTwist:
        return ModularTwist.parse(self.xi)

    def xi_value(self) -> float:
        if "/" in self.xi:
            return self.twist().xi
        try:
            v = float(self.xi)
        except ValueError:
            raise InputError(f"cannot parse xi {self.xi!r}") from None
        if not v > 0:
            raise InputError("xi must be positive")
        return v

    def twist_or_real(self):
        return self.twist() if "/" in self.xi else self.xi_value()

    def tolerance(self) -> float:
        return self.tol or _DEFAULT_TOL.get(self.command, 1e-10)


def _coerce(name: str, text: str):
    typ = {f.name: f.type for f in fields(RunConfig)}[name]
    try:
        if typ in ("int", int):
            return int(text)
        if typ in ("float", float):
            return float(text)
    except ValueError:
        raise InputError(f"bad value for {name}: {text!r}") from None
    return text


def read_config(path) -> dict:
    known = {f.name for f in fields(RunConfig)}
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as e:
        raise InputError(f"cannot read config {path!r}: {e}") from None
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{no}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        k = k.replace("-", "_")
        if k not in known:
            raise InputError(f"{path}:{no}: unknown key {k!r}")
        out[k] = _coerce(k, v)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zpd", description="zeta-zero phase experiments")
    p.add_argument("--config")
    p.add_argument("--command", choices=COMMANDS)
    p.add_argument("--xi", help="twist M/Q (or a positive decimal where allowed)")
    p.add_argument("--bump", help="a,b (canonical) or a,b,c,d (plateau)")
    p.add_argument("--xgrid", help="ascending X values, comma separated")
    p.add_argument("--zeros", help="zero table: a cache file or a plain text table")
    p.add_argument("--height", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.add_argument("--data", help="input table for zeros-import or fit")
    p.add_argument("--ceiling", type=float, help="largest height the zero engine may reach")
    p.add_argument("--qmax", type=int)
    return p


def config_from_args(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    values = read_config(args.config) if args.config else {}
    for k, v in vars(args).items():
        if k != "config" and v is not None:
            values[k] = v
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


# -- shared plumbing -------------------------------------------------------------------

def _fmt(x) -> str:
    return repr(float(x))


class Outputs:
    """Collects CSV rows, plot series and a summary, then writes them."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.dir = Path(cfg.out)
        self.rows: list[list] = []
        self.header = ["experiment", "X", "re", "im", "abs", "budget"]
        self.plots: dict[str, tuple[str, str, list]] = {}
        self.summary: dict = {"command": cfg.command, "checks": []}
        self.ok = True

    def row(self, exp: str, X: float, value: complex, budget: float) -> None:
        value = complex(value)
        self.rows.append([exp, _fmt(X), _fmt(value.real), _fmt(value.imag), _fmt(abs(value)), _fmt(budget)])

    def plot(self, name: str, xlabel: str, ylabel: str, pts) -> None:
        self.plots[name] = (xlabel, ylabel, [(float(x), float(y)) for x, y in pts])

    def check(self, name: str, passed: bool, measured: str, **extra) -> None:
        self.ok &= bool(passed)
        print(f"{'PASS' if passed else 'FAIL'} {name}: {measured}")
        self.summary["checks"].append({"name": name, "pass": bool(passed), "measured": measured, **extra})

    def write(self) -> None:
        self.dir.mkdir(parents=True, exist_ok=True)
        stem = self.cfg.command
        if self.rows:
            lines = [",".join(self.header)] + [",".join(r) for r in self.rows]
            (self.dir / f"{stem}.csv").write_text("\n".join(lines) + "\n")
        axes = []
        for name, (xl, yl, pts) in sorted(self.plots.items()):
            body = "".join(f"{_fmt(x)} {_fmt(y)}\n" for x, y in pts)
            (self.dir / f"{stem}.{name}.dat").write_text(f"# {xl} {yl}\n" + body)
            axes.append(f"- `{stem}.{name}.dat`: x = {xl}, y = {yl}")
        if axes:
            (self.dir / f"{stem}.plots.md").write_text(
                "# Plot data\n\nTwo whitespace-separated columns per file; the first line is a comment.\n\n"
                + "\n".join(axes) + "\n")
        self.summary["pass"] = self.ok
        (self.dir / f"{stem}.summary.json").write_text(json.dumps(self.summary, indent=2, sort_keys=True) + "\n")


def _pmap(func, items, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(func, items))


def load_table(path: str) -> ZeroTable:
    with open(path, "rb") as fh:
        head = fh.read(len(MAGIC))
    if head == MAGIC.encode():
        return cache_load(path)
    return ingest_zero_table(path)


def obtain_table(cfg: RunConfig, height: float) -> ZeroTable:
    """The table named by --zeros, or a freshly computed one reaching ``height``."""
    if cfg.zeros:
        t = load_table(cfg.zeros)
        t.require_height(height)
        return t
    h = max(height, cfg.height)
    if h > cfg.ceiling:
        raise IncompleteTableError(
            f"zeros up to {h:.6g} are needed, above the engine ceiling {cfg.ceiling:g}; "
            f"raise --ceiling or pass --zeros", required_height=h)
    return find_zeros(h, workers=cfg.workers, ceiling=cfg.ceiling)


# -- commands --------------------------------------------------------------------------

def cmd_zeros_find(cfg: RunConfig, out: Outputs) -> None:
    if not cfg.height > 0:
        raise InputError("zeros-find needs --height H > 0")
    table = find_zeros(cfg.height, workers=cfg.workers, ceiling=max(cfg.ceiling, cfg.height))
    target = Path(cfg.out) / "zeros.cache"
    for i, e in enumerate(table.gamma.tolist()):
        out.rows.append(["zeros", str(i + 1), _fmt(e), "0.0", _fmt(e), "0.0"])
    out.header = ["experiment", "index", "gamma", "unused", "abs", "budget"]
    out.summary.update({"n_zeros": len(table), "height_max": table.height_max,
                        "stats": {k: v for k, v in (table.stats or {}).items() if k != "seconds"}})
    out.check("zeros-find", True, f"{len(table)} zeros below {cfg.height:g}")
    if cfg.zeros and Path(cfg.zeros).exists():
        ref = load_table(cfg.zeros)
        h = min(ref.height_max, table.height_max)
        a, b = ref.truncated(h).gamma, table.truncated(h).gamma
        same = a.size == b.size
        err = float(np.max(np.abs(a - b))) if same and a.size else 0.0
        out.check("consistency", same and err <= 1e-8,
                  f"{a.size} reference vs {b.size} computed zeros below {h:g}, max |diff| = {err:.3g}")
    Path(cfg.out).mkdir(parents=True, exist_ok=True)
    cache_store(target, table)


def cmd_zeros_import(cfg: RunConfig, out: Outputs) -> None:
    table = ingest_zero_table(cfg.data)
    target = Path(cfg.zeros) if cfg.zeros else Path(cfg.out) / "zeros.cache"
    target.parent.mkdir(parents=True, exist_ok=True)
    cache_store(target, table)
    out.summary.update({"n_zeros": len(table), "height_max": table.height_max, "cache": str(target)})
    out.check("zeros-import", True, f"{len(table)} ordinates up to {table.height_max:g} -> {target}")


def _ef_job(args):
    xi, bump, X, table, tol = args
    return explicit_formula_terms(xi, bump, X, table, tol=tol)


def cmd_explicit_formula(cfg: RunConfig, out: Outputs) -> None:
    bump = BumpFunction.parse(cfg.bump)
    xi = cfg.twist_or_real()
    x = cfg.xi_value()
    tol = cfg.tolerance()
    grid = cfg.grid()
    need = cfg.height or max(choose_height(bump, x, X, 0.05 * tol, cfg.ceiling)[0] for X in grid)
    table = obtain_table(cfg, need)
    res = _pmap(_ef_job, [(xi, bump, X, table, 0.1 * tol) for X in grid], cfg.workers)
    worst = 0.0
    for X, r in zip(grid, res):
        out.row("residual", X, r.residual, r.budget)
        out.row("prime_sum", X, r.prime_sum, 0.0)
        out.row("integral", X, r.integral, 0.0)
        out.row("zero_sum", X, r.zero_sum, r.tail_bound)
        worst = max(worst, abs(r.residual))
        out.summary.setdefault("per_X", []).append(
            {"X": X, "height": r.height, "k": r.k, "n_zeros": r.n_zeros,
             "tail_bound": r.tail_bound, "quad_budget": r.quad_budget})
    out.plot("residual", "X", "abs_residual", [(X, abs(r.residual)) for X, r in zip(grid, res)])
    out.check("explicit-formula", worst <= tol, f"max |residual| = {worst:.3g} (tol {tol:g})")


def _sp_job(args):
    xi, bump, X, gammas, tol = args
    return [abs(quad_I(OscIntegralSpec(xi, bump, X, g), tol).value - sp_I(OscIntegralSpec(xi, bump, X, g)))
            for g in gammas]


def _oob_job(args):
    xi, bump, X, g, tol = args
    v = abs(quad_I(OscIntegralSpec(xi, bump, X, g), tol).value)
    return v / out_of_band_envelope(X, g)


def oob_samples(xi: float, bump: BumpFunction, X: float, n: int, seed: int) -> np.ndarray:
    """Deterministic out-of-band ordinates: half above the band, half negative."""
    band = star_params(bump.a, bump.b, 1.0, xi, X)
    s = 2 * math.pi * xi * X
    rng = np.random.default_rng(seed)
    hi = rng.uniform(s * band.b_star * 1.1, s * band.b_star * 10, n - n // 2)
    lo = -rng.uniform(1.0, s * band.b_star * 10, n // 2)
    return np.concatenate([np.sort(hi), np.sort(lo)])


def cmd_stationary_phase(cfg: RunConfig, out: Outputs) -> None:
    bump = BumpFunction.parse(cfg.bump)
    xi = cfg.xi_value()
    grid = cfg.grid()
    tol = min(cfg.tolerance(), 1e-12)
    band = star_params(bump.a, bump.b, 1.0, xi, 1.0)
    table = obtain_table(cfg, 2 * math.pi * xi * max(grid) * band.b_star)
    jobs = []
    for X in grid:
        s = 2 * math.pi * xi * X
        g = table.gamma[(table.gamma >= s * band.a_star) & (table.gamma <= s * band.b_star)]
        if g.size > cfg.samples:
            g = g[np.linspace(0, g.size - 1, cfg.samples).round().astype(int)]
        if g.size == 0:
            raise InputError(f"no in-band zeros at X = {X:g}")
        jobs.append((xi, bump, X, tuple(g.tolist()), tol))
    diffs = _pmap(_sp_job, jobs, cfg.workers)
    med = [float(np.median(d)) for d in diffs]
    for X, m in zip(grid, med):
        out.row("median_abs_quad_minus_sp", X, m, tol)
    out.plot("median_diff", "X", "median_abs_quad_minus_sp", zip(grid, med))
    fit = fit_exponent(list(zip(grid, med)))
    out.summary["fit"] = {"slope": fit.slope, "intercept": fit.intercept, "rms": fit.residual_rms}
    # the band is wider than supp(B); report the zeros with gamma_star in supp(B) separately
    inner = []
    for (_, _, X, gs, _), d in zip(jobs, diffs):
        gstar = np.array(gs) / (2 * math.pi * xi * X)
        sel = np.asarray(d)[(gstar > bump.a) & (gstar < bump.b)]
        inner.append((X, float(np.median(sel)) if sel.size else 0.0))
    out.plot("median_diff_support", "X", "median_abs_quad_minus_sp_in_support", inner)
    try:
        ifit = fit_exponent(inner)
        out.summary["support_fit"] = {"slope": ifit.slope, "intercept": ifit.intercept}
    except InputError:
        pass
    out.check("stationary-phase decay", fit.slope <= -0.05, f"fitted exponent {fit.slope:.4f} (need <= -0.05)")
    X0 = grid[0]
    gs = oob_samples(xi, bump, X0, cfg.samples, cfg.seed)
    ratios = _pmap(_oob_job, [(xi, bump, X0, float(g), tol) for g in gs], cfg.workers)
    for g, r in zip(gs, ratios):
        out.row("oob_ratio", X0, r, float(g))
    const = float(max(ratios))
    out.summary["oob_constant"] = const
    out.check("out-of-band envelope", math.isfinite(const),
              f"max |quad_I| / envelope over {len(gs)} samples at X={X0:g}: {const:.4g}")


def _t41_job(args):
    twist, bump, X, table = args
    rows, _ = theorem41_defect(ExperimentSpec(twist, bump, (X,), table), fit=False)
    return rows[0]


def cmd_theorem41(cfg: RunConfig, out: Outputs) -> None:
    bump = BumpFunction.parse(cfg.bump)
    twist = cfg.twist_or_real()
    spec = ExperimentSpec(twist, bump, tuple(cfg.grid()), None, cfg.tolerance())
    table = obtain_table(cfg, spec.required_height())
    rows = _pmap(_t41_job, [(twist, bump, X, table) for X in spec.X_grid], cfg.workers)
    for X, D, b in rows:
        out.row("D", X, D, b)
    out.plot("defect", "X", "abs_D", [(X, abs(D)) for X, D, _ in rows])
    out.plot("normalised", "X", "abs_D_over_X^0.9", [(X, abs(D) / X ** 0.9) for X, D, _ in rows])
    fit = fit_exponent([(X, D) for X, D, _ in rows])
    out.summary["fit"] = {"slope": fit.slope, "intercept": fit.intercept, "rms": fit.residual_rms,
                          "dropped": fit.dropped}
    out.check("theorem41 exponent", fit.slope <= 1.0, f"fitted slope {fit.slope:.4f} (need <= 1.0)")


def _sb_job(args):
    twist, bump, X, table = args
    p = superbound_parts(twist, bump, X, table)
    return p, superbound_dilated(twist, bump, X, table)


def cmd_superbound(cfg: RunConfig, out: Outputs) -> None:
    bump = BumpFunction.parse(cfg.bump)
    twist = cfg.twist()
    grid = cfg.grid()
    table = obtain_table(cfg, 2 * math.pi * max(grid) * bump.b)
    res = _pmap(_sb_job, [(twist, bump, X, table) for X in grid], cfg.workers)
    for X, (p, d) in zip(grid, res):
        out.row("superbound", X, p["value"], 0.0)
        out.row("second_term", X, p["second"], 0.0)
        out.row("dilated", X, d, 0.0)
    out.plot("superbound", "X", "abs_value", [(X, abs(p["value"])) for X, (p, _) in zip(grid, res)])
    fit = fit_exponent([(X, p["value"]) for X, (p, _) in zip(grid, res)])
    dfit = fit_exponent([(X, d) for X, (_, d) in zip(grid, res)])
    out.summary["fit"] = {"slope": fit.slope, "intercept": fit.intercept, "rms": fit.residual_rms}
    out.summary["dilated_fit"] = {"slope": dfit.slope, "intercept": dfit.intercept}
    out.check("superbound exponent", fit.slope <= 1.0,
              f"fitted slope {fit.slope:.4f} (need <= 1.0); dilated form {dfit.slope:.4f}")
    if mobius(twist.q) == 0:
        zero = all(p["second"] == 0 for p, _ in res)
        out.check("mu(q) = 0 second term", zero, "second term exactly 0" if zero else "non-zero second term")


def cmd_characters(cfg: RunConfig, out: Outputs) -> None:
    qmax = cfg.qmax
    tol = cfg.tolerance()
    bump = BumpFunction.parse(cfg.bump)
    inv = tau = 0.0
    gauss_rel = 0.0
    nmax = 1000
    for q in range(2, max(qmax, 50) + 1):
        for chi in characters_mod(q):
            if not chi.is_primitive:
                continue
            t = gauss_sum(chi)
            tau = max(tau, abs(abs(t) - math.sqrt(q)))
            if q > qmax:
                continue
            for n in range(-5, nmax + 1):
                lhs, rhs = char_inversion_check(chi, n)
                inv = max(inv, abs(lhs - rhs))
            for X in cfg.grid():
                a = character_sum(chi, bump, X).value
                b = character_sum_via_gauss(chi, bump, X).value
                gauss_rel = max(gauss_rel, abs(a - b) / (1 + abs(a)))
                out.row(f"chi_{q}_{chi.index}", X, a - b, 0.0)
    ram = 0.0
    for q in range(2, 101):
        for m in range(1, q):
            if math.gcd(m, q) == 1:
                ram = max(ram, abs(ramanujan_sum(q, m) - mobius(q)))
    out.summary.update({"inversion": inv, "tau": tau, "ramanujan": ram, "gauss_route": gauss_rel})
    out.check("character inversion", inv <= tol, f"max error {inv:.3g} (q <= {qmax})")
    out.check("|tau| = sqrt(q)", tau <= tol, f"max error {tau:.3g} (q <= {max(qmax, 50)})")
    out.check("Ramanujan sums", ram <= tol, f"max error {ram:.3g} (q <= 100)")
    out.check("Gauss-sum route", gauss_rel <= 1e-9, f"max relative error {gauss_rel:.3g}")


def lemma_checks(xis=(1 / 3, 2 / 5), grid=(20.0, 40.0, 80.0, 160.0), bump=None) -> dict:
    """The three lemma-level checks: the mandalorian integral, the Fresnel tail
    and the operator envelope."""
    bump = bump or BumpFunction.canonical(1.0, 2.0)
    mand = {xi: [abs(mandalorian_integral(xi, bump, X)) * X for X in grid] for xi in xis}
    fres = {lam: fresnel_tail_errors(lam) for lam in (0.5, 1.0, 2.0, 10.0)}
    ops = {}
    for u0 in (0.2, 3.0):
        for k in range(1, 4):
            e = dl_power(k, u0)
            ops[(u0, k)] = {**envelope_bound(bump, u0, k), "cls": e.cls, "in_class": e.in_class(),
                            "expected": class_after(k)}
            ops[(u0, k, "L")] = envelope_bound(bump, u0, k, leading_L=True)
    return {"mandalorian": mand, "fresnel": fres, "operators": ops}


def cmd_lemmas(cfg: RunConfig, out: Outputs) -> None:
    grid = tuple(cfg.grid())
    r = lemma_checks(grid=grid)
    for xi, vals in r["mandalorian"].items():
        for X, v in zip(grid, vals):
            out.row(f"mandalorian_xi={xi:.6g}", X, v, 0.0)
        growth = max(vals[i + 1] / vals[i] for i in range(len(vals) - 1)) if vals[0] else 0.0
        out.check(f"mandalorian xi={xi:.4g}", all(v <= vals[0] * 1.0000001 + 1e-14 for v in vals),
                  f"|M| X = {', '.join(f'{v:.3g}' for v in vals)}; largest step ratio {growth:.3g}")
    worst = max(abs(f["closed"] - f["direct"]) for f in r["fresnel"].values())
    lam_bound = max(abs(f["direct"]) * lam for lam, f in r["fresnel"].items())
    for lam, f in r["fresnel"].items():
        out.row("fresnel_closed_minus_direct", lam, f["closed"] - f["direct"], f["closed_err"] + f["direct_err"])
    out.check("fresnel closed form", worst <= 1e-8, f"max |closed - direct| = {worst:.3g}")
    out.check("fresnel lambda bound", lam_bound <= 2.0, f"max |direct| lambda = {lam_bound:.4f}")
    printed = max(abs(f["closed_unit_coefficient"] - f["direct"]) for f in r["fresnel"].values())
    out.summary["fresnel_unit_coefficient_gap"] = printed
    ops = r["operators"]
    ok_cls = all(v["cls"] == v["expected"] and v["in_class"] for key, v in ops.items() if len(key) == 2)
    spread = max(v["spread"] for v in ops.values())
    finite = all(v["finite"] and math.isfinite(v["bound"]) for v in ops.values())
    for key, v in sorted(ops.items(), key=str):
        out.row("operator_bound_" + "_".join(str(x) for x in key), key[1], v["bound"], v["spread"])
    out.summary["operator_bounds"] = {"_".join(str(x) for x in key): v["bound"] for key, v in ops.items()}
    out.check("operator classes", ok_cls, "class after k steps = (k, k, k! 3^k) for k <= 3")
    out.check("operator envelope", finite and spread < 10.0, f"ratio spread {spread:.3g} (need < 10)")


def read_points(path: str) -> list[tuple[float, complex]]:
    """(X, D) from a two-column file, a three-column X re im file, or a CSV
    written by this tool (columns X, re, im)."""
    pts = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("experiment"):
            continue
        parts = [p for p in line.replace(",", " ").split()]
        try:
            if len(parts) == 6:
                pts.append((float(parts[1]), complex(float(parts[2]), float(parts[3]))))
            elif len(parts) == 3:
                pts.append((float(parts[0]), complex(float(parts[1]), float(parts[2]))))
            elif len(parts) == 2:
                pts.append((float(parts[0]), complex(float(parts[1]))))
            else:
                raise ValueError
        except ValueError:
            raise InputError(f"cannot read point from line {raw!r}") from None
    return pts


def cmd_fit(cfg: RunConfig, out: Outputs) -> None:
    pts = read_points(cfg.data)
    fit = fit_exponent(pts)
    out.summary["fit"] = {"slope": fit.slope, "intercept": fit.intercept, "rms": fit.residual_rms,
                          "dropped": fit.dropped}
    out.plot("points", "log_X", "log_abs_D", fit.points)
    out.check("fit", math.isfinite(fit.slope),
              f"slope {fit.slope:.6f}, intercept {fit.intercept:.6f}, {fit.dropped} dropped")


HANDLERS = {
    "zeros-find": cmd_zeros_find,
    "zeros-import": cmd_zeros_import,
    "verify-explicit-formula": cmd_explicit_formula,
    "verify-stationary-phase": cmd_stationary_phase,
    "verify-theorem41": cmd_theorem41,
    "verify-superbound": cmd_superbound,
    "verify-characters": cmd_characters,
    "verify-lemmas": cmd_lemmas,
    "fit": cmd_fit,
}


def run(cfg: RunConfig) -> int:
    out = Outputs(cfg)
    try:
        HANDLERS[cfg.command](cfg, out)
    except BudgetError as e:
        print(f"ERROR budget: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, FileNotFoundError) as e:
        print(f"ERROR input: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ZPDError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_INPUT
    out.write()
    return EXIT_PASS if out.ok else EXIT_FAIL


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except InputError as e:
        print(f"ERROR input: {e}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
