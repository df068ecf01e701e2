"""Command-line experiment runner.

Subcommands cover single stationary-state solves, correlation-vs-size sweeps,
two-axis phase grids, occupancy profiles, an oracle validation suite, and a
timing benchmark.  Output is CSV (RFC-4180, one header row) or JSON lines,
streamed row by row so long sweeps can be tailed.  The pipeline is seedless;
identical configs produce identical output apart from the runtime column.

Exit codes: 0 success, 1 usage, 2 physical degeneracy (non-unique stationary
state), 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .exceptions import (
    ClosureViolation,
    NessfoldError,
    NonUniqueNess,
    SingularEigenbasis,
    StackDegenerate,
    VacuumVanishes,
)
from .folding import EPS_FOLD_DEFAULT
from .model import EndBathParams, KitaevParams, build_kitaev, end_baths
from .observables import log_linear_fit
from .oracle import (
    analytic_n1,
    dense_first_space_ness,
    dense_second_space_ness,
    error_metric,
    occupancy_from_vec,
    rho_to_second_space,
)
from .pipeline import solve_end_bath
from .spectral import EPS_Z_DEFAULT
from .tns import TRUNC_TOL_DEFAULT, dense_coefficients

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEGENERATE = 2
EXIT_NUMERICAL = 3

STATUS_OK = "ok"
STATUS_NON_UNIQUE = "non_unique"
STATUS_CLOSURE = "closure_violation"
STATUS_VACUUM = "vacuum_vanishes"
STATUS_SINGULAR = "singular_eigenbasis"

_STATUS_EXIT = {
    STATUS_OK: EXIT_OK,
    STATUS_NON_UNIQUE: EXIT_DEGENERATE,
    STATUS_CLOSURE: EXIT_NUMERICAL,
    STATUS_VACUUM: EXIT_NUMERICAL,
    STATUS_SINGULAR: EXIT_NUMERICAL,
}

BASE_COLUMNS = [
    "N", "w", "mu", "delta",
    "gamma11", "gamma21", "gamma12", "gamma22",
    "eec", "occupancy", "maxBond", "foldResidual", "orthoResidual",
    "runtimeSeconds", "status",
]
PHASE_COLUMNS = BASE_COLUMNS + ["fitSlope", "fitResidual", "boundaryMu"]
BENCH_COLUMNS = [
    "N", "w", "mu", "delta",
    "gamma11", "gamma21", "gamma12", "gamma22",
    "runsSeconds", "medianSeconds", "logLogSlope",
]

_FIG1_BATHS = EndBathParams(gamma11=1.3, gamma21=2.2, gamma12=3.4, gamma22=4.1)
_HALF_GRID = [0.5 * k for k in range(9)]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; the contract here reserves 2 for physics."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- config


class RunConfig:
    """Flat run description; file keys and flag overrides share these names."""

    def __init__(self):
        self.N = 2
        self.w = 1.0
        self.mu = 1.0
        self.delta = 1.0
        self.gamma11 = 0.0
        self.gamma21 = 1.0
        self.gamma12 = 0.0
        self.gamma22 = 1.0
        self.sizes = []
        self.wSweep = None
        self.muSweep = None
        self.truncTol = TRUNC_TOL_DEFAULT
        self.maxChi = 0
        self.epsZ = EPS_Z_DEFAULT
        self.epsFold = EPS_FOLD_DEFAULT
        self.out = "-"
        self.format = "csv"
        self.jobs = 1
        self.dumpFold = None

    _SCALARS = {
        "N": int, "w": float, "mu": float, "delta": float,
        "gamma11": float, "gamma21": float, "gamma12": float, "gamma22": float,
        "trunc_tol": ("truncTol", float), "max_chi": ("maxChi", int),
        "eps_z": ("epsZ", float), "eps_fold": ("epsFold", float),
        "out": str, "format": str, "jobs": int,
    }

    def load_file(self, path: str) -> None:
        with open(path) as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise _UsageError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise _UsageError(f"config {path} must hold a JSON object")
        for key, value in doc.items():
            if key in ("w", "mu") and isinstance(value, dict):
                self._set_sweep(key, value)
            elif key == "sizes":
                self.sizes = [int(v) for v in value]
            elif key in self._SCALARS:
                spec = self._SCALARS[key]
                attr, cast = spec if isinstance(spec, tuple) else (key, spec)
                setattr(self, attr, cast(value))
            else:
                raise _UsageError(f"unknown config key {key!r}")

    def _set_sweep(self, axis: str, d: dict) -> None:
        missing = {"start", "stop"} - set(d)
        if missing:
            raise _UsageError(f"{axis} sweep needs start/stop, missing {sorted(missing)}")
        sweep = {"start": float(d["start"]), "stop": float(d["stop"]),
                 "step": float(d.get("step", 1.0))}
        if sweep["step"] <= 0:
            raise _UsageError(f"{axis} sweep step must be positive")
        setattr(self, axis + "Sweep", sweep)

    def apply_flags(self, args: argparse.Namespace) -> None:
        for flag, attr in [
            ("N", "N"), ("w", "w"), ("mu", "mu"), ("delta", "delta"),
            ("gamma11", "gamma11"), ("gamma21", "gamma21"),
            ("gamma12", "gamma12"), ("gamma22", "gamma22"),
            ("trunc_tol", "truncTol"), ("max_chi", "maxChi"),
            ("eps_z", "epsZ"), ("eps_fold", "epsFold"),
            ("out", "out"), ("format", "format"), ("jobs", "jobs"),
            ("dump_fold", "dumpFold"),
        ]:
            value = getattr(args, flag, None)
            if value is not None:
                setattr(self, attr, value)
        if getattr(args, "sizes", None) is not None:
            self.sizes = args.sizes
        if getattr(args, "w_range", None) is not None:
            self._set_sweep("w", args.w_range)
        if getattr(args, "mu_range", None) is not None:
            self._set_sweep("mu", args.mu_range)

    def validate_common(self) -> None:
        if self.format not in ("csv", "json"):
            raise _UsageError(f"format must be csv or json, got {self.format!r}")
        if self.jobs < 1:
            raise _UsageError("jobs must be >= 1")
        if self.truncTol < 0 or self.epsZ <= 0 or self.epsFold <= 0:
            raise _UsageError("tolerances must be positive (truncTol may be 0)")
        if self.maxChi < 0:
            raise _UsageError("max-chi must be >= 0 (0 = unlimited)")


def _sweep_values(sweep: dict) -> list:
    n = int(math.floor((sweep["stop"] - sweep["start"]) / sweep["step"] + 1e-9)) + 1
    if n < 1:
        raise _UsageError("sweep stop lies before start")
    return [round(sweep["start"] + k * sweep["step"], 12) for k in range(n)]


def _parse_range(text: str) -> dict:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("range must look like start:stop:step")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from exc
    return {"start": start, "stop": stop, "step": step}


def _parse_sizes(text: str) -> list:
    try:
        sizes = [int(p) for p in text.split(",") if p]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad sizes list {text!r}") from exc
    if not sizes:
        raise argparse.ArgumentTypeError("sizes list is empty")
    return sizes


# ---------------------------------------------------------------- workers


def _task_from_config(cfg: RunConfig, **overrides) -> dict:
    task = {
        "N": cfg.N, "w": cfg.w, "mu": cfg.mu, "delta": cfg.delta,
        "gamma11": cfg.gamma11, "gamma21": cfg.gamma21,
        "gamma12": cfg.gamma12, "gamma22": cfg.gamma22,
        "truncTol": cfg.truncTol, "maxChi": cfg.maxChi,
        "epsZ": cfg.epsZ, "epsFold": cfg.epsFold,
        "withOccupancy": False, "dumpFold": None,
    }
    task.update(overrides)
    return task


def _solve_task(task: dict) -> dict:
    """Run one parameter point; must stay module-level and picklable."""
    t0 = time.perf_counter()
    row = {key: task[key] for key in
           ("N", "w", "mu", "delta", "gamma11", "gamma21", "gamma12", "gamma22")}
    row.update(eec="", occupancy="", maxBond="", foldResidual="", orthoResidual="",
               status=STATUS_OK)
    try:
        params = KitaevParams(N=task["N"], w=task["w"], mu=task["mu"], delta=task["delta"])
        bath_params = EndBathParams(
            gamma11=task["gamma11"], gamma21=task["gamma21"],
            gamma12=task["gamma12"], gamma22=task["gamma22"],
        )
        sol = solve_end_bath(
            params, bath_params,
            trunc_tol=task["truncTol"], max_chi=task["maxChi"],
            eps_z=task["epsZ"], eps_fold=task["epsFold"],
        )
        row["eec"] = sol.report.eec if params.N >= 2 else ""
        if task["withOccupancy"]:
            row["occupancy"] = ";".join(repr(float(v)) for v in sol.report.occupancy)
        row["maxBond"] = sol.report.maxBond
        row["foldResidual"] = sol.report.foldResidual
        row["orthoResidual"] = sol.orthoResidual
        if task["dumpFold"]:
            _dump_fold(sol, task["dumpFold"])
    except NonUniqueNess:
        row["status"] = STATUS_NON_UNIQUE
    except SingularEigenbasis:
        row["status"] = STATUS_SINGULAR
    except (ClosureViolation, StackDegenerate):
        row["status"] = STATUS_CLOSURE
    except VacuumVanishes:
        row["status"] = STATUS_VACUUM
    row["runtimeSeconds"] = time.perf_counter() - t0
    return row


def _map_tasks(tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        yield from map(_solve_task, tasks)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_solve_task, tasks)


def _dump_fold(sol, path: str) -> None:
    doc = {
        "rotations": [{"m": r.m, "theta": r.theta, "kind": r.kind}
                      for r in sol.foldResult.rotations],
        "rDiag": [float(v) for v in sol.foldResult.rDiag],
        "signs": [int(v) for v in sol.foldResult.signs],
        "foldResidual": float(sol.foldResult.residual),
        "orthoResidual": float(sol.orthoResidual),
        "bondDims": list(sol.state.bondDims),
        "modes": {"real": [float(v) for v in sol.spectrum.z.real],
                  "imag": [float(v) for v in sol.spectrum.z.imag]},
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


# ---------------------------------------------------------------- emitters


class RowEmitter:
    """Streams dict rows to CSV or JSON lines with a fixed column order."""

    def __init__(self, stream, columns, fmt: str):
        self.stream = stream
        self.columns = columns
        self.fmt = fmt
        self._csv = None
        if fmt == "csv":
            self._csv = csv.writer(stream, lineterminator="\n")
            self._csv.writerow(columns)
            stream.flush()

    @staticmethod
    def _cell(value) -> str:
        if value == "" or value is None:
            return ""
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        if isinstance(value, (float, np.floating)):
            return repr(float(value))
        return str(value)

    def write(self, row: dict) -> None:
        if self._csv is not None:
            self._csv.writerow([self._cell(row.get(c, "")) for c in self.columns])
        else:
            doc = {}
            for c in self.columns:
                v = row.get(c, "")
                if v == "":
                    v = None
                elif isinstance(v, (np.integer,)):
                    v = int(v)
                elif isinstance(v, (np.floating,)):
                    v = float(v)
                doc[c] = v
            self.stream.write(json.dumps(doc) + "\n")
        self.stream.flush()


def _open_out(path: str):
    if path in (None, "", "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _aggregate_exit(statuses) -> int:
    codes = {_STATUS_EXIT[s] for s in statuses}
    for code in (EXIT_NUMERICAL, EXIT_DEGENERATE):
        if code in codes:
            return code
    return EXIT_OK


# ---------------------------------------------------------------- commands


def cmd_ness(cfg: RunConfig) -> int:
    if cfg.wSweep or cfg.muSweep:
        raise _UsageError("ness runs a single point; ranges belong to phase-grid")
    stream, owned = _open_out(cfg.out)
    try:
        emitter = RowEmitter(stream, BASE_COLUMNS, cfg.format)
        row = _solve_task(_task_from_config(cfg, dumpFold=cfg.dumpFold))
        emitter.write(row)
        return _STATUS_EXIT[row["status"]]
    finally:
        if owned:
            stream.close()


def cmd_occupancy(cfg: RunConfig) -> int:
    if cfg.wSweep or cfg.muSweep:
        raise _UsageError("occupancy runs a single point; ranges belong to phase-grid")
    stream, owned = _open_out(cfg.out)
    try:
        emitter = RowEmitter(stream, BASE_COLUMNS, cfg.format)
        row = _solve_task(_task_from_config(cfg, withOccupancy=True, dumpFold=cfg.dumpFold))
        emitter.write(row)
        return _STATUS_EXIT[row["status"]]
    finally:
        if owned:
            stream.close()


def cmd_sweep_size(cfg: RunConfig) -> int:
    if not cfg.sizes:
        raise _UsageError("sweep-size needs a nonempty sizes list")
    if min(cfg.sizes) < 2:
        raise _UsageError("correlation sweeps need sizes >= 2")
    if cfg.wSweep or cfg.muSweep:
        raise _UsageError("sweep-size sweeps N only; ranges belong to phase-grid")
    tasks = [_task_from_config(cfg, N=n) for n in cfg.sizes]
    stream, owned = _open_out(cfg.out)
    try:
        emitter = RowEmitter(stream, BASE_COLUMNS, cfg.format)
        statuses = []
        for row in _map_tasks(tasks, cfg.jobs):
            emitter.write(row)
            statuses.append(row["status"])
        return _aggregate_exit(statuses)
    finally:
        if owned:
            stream.close()


def _series_fit(rows) -> tuple:
    xs = [row["N"] for row in rows
          if row["status"] == STATUS_OK and row["eec"] != "" and row["eec"] > 1e-13]
    ys = [row["eec"] for row in rows
          if row["status"] == STATUS_OK and row["eec"] != "" and row["eec"] > 1e-13]
    if len(xs) < 3:
        return "", ""
    slope, _, residual = log_linear_fit(xs, ys)
    return slope, residual


def cmd_phase_grid(cfg: RunConfig) -> int:
    if not cfg.sizes:
        raise _UsageError("phase-grid needs a nonempty sizes list")
    if min(cfg.sizes) < 2:
        raise _UsageError("correlation sweeps need sizes >= 2")
    w_values = _sweep_values(cfg.wSweep) if cfg.wSweep else [cfg.w]
    mu_values = _sweep_values(cfg.muSweep) if cfg.muSweep else [cfg.mu]
    points = [(w, mu) for w in w_values for mu in mu_values]
    tasks = [_task_from_config(cfg, N=n, w=w, mu=mu)
             for (w, mu) in points for n in cfg.sizes]
    per_point = len(cfg.sizes)
    stream, owned = _open_out(cfg.out)
    try:
        emitter = RowEmitter(stream, PHASE_COLUMNS, cfg.format)
        statuses = []
        buffer = []
        for row in _map_tasks(tasks, cfg.jobs):
            buffer.append(row)
            if len(buffer) == per_point:
                slope, residual = _series_fit(buffer)
                for r in buffer:
                    r["fitSlope"] = slope
                    r["fitResidual"] = residual
                    r["boundaryMu"] = 2.0 * r["w"]
                    emitter.write(r)
                    statuses.append(r["status"])
                buffer = []
        return _aggregate_exit(statuses)
    finally:
        if owned:
            stream.close()


def cmd_bench(cfg: RunConfig) -> int:
    if not cfg.sizes:
        raise _UsageError("bench needs a nonempty sizes list")
    stream, owned = _open_out(cfg.out)
    try:
        emitter = RowEmitter(stream, BENCH_COLUMNS, cfg.format)
        medians = []
        rows = []
        for n in cfg.sizes:
            task = _task_from_config(cfg, N=n)
            runs = []
            for _ in range(3):
                runs.append(_solve_task(task)["runtimeSeconds"])
            med = statistics.median(runs)
            medians.append(med)
            row = {key: task[key] for key in
                   ("N", "w", "mu", "delta", "gamma11", "gamma21", "gamma12", "gamma22")}
            row["runsSeconds"] = ";".join(repr(float(r)) for r in runs)
            row["medianSeconds"] = med
            row["logLogSlope"] = ""
            rows.append(row)
        if len(cfg.sizes) >= 2:
            slope = np.polyfit(np.log(np.asarray(cfg.sizes, dtype=float)),
                               np.log(np.maximum(medians, 1e-9)), 1)[0]
            rows[-1]["logLogSlope"] = float(slope)
        for row in rows:
            emitter.write(row)
        return EXIT_OK
    finally:
        if owned:
            stream.close()


# ---------------------------------------------------------------- validate


def _pipeline_vec(params: KitaevParams, bath_params: EndBathParams) -> np.ndarray:
    sol = solve_end_bath(params, bath_params)
    return sol.state.z0 * dense_coefficients(sol.state)


def _check_analytic_n1() -> tuple:
    worst = 0.0
    for k in range(1, 9):
        gamma2 = 0.5 * k
        bp = EndBathParams(gamma11=1.0, gamma21=gamma2, gamma12=0.0, gamma22=0.0)
        vec = _pipeline_vec(KitaevParams(N=1, w=0.0, mu=1.0, delta=0.0), bp)
        worst = max(worst, error_metric(vec, analytic_n1(1.0, gamma2)))
    return worst <= 1e-12, f"max rel err {worst:.3e} over 8 rates (tol 1e-12)"


def _fig1_points():
    for w in _HALF_GRID:
        yield w, 1.0
    for mu in _HALF_GRID:
        yield 1.5, mu


def _check_second_space_oracle() -> tuple:
    worst = 0.0
    for n in (2, 3):
        for w, mu in _fig1_points():
            params = KitaevParams(N=n, w=w, mu=mu, delta=1.0)
            vec = _pipeline_vec(params, _FIG1_BATHS)
            ref = dense_second_space_ness(build_kitaev(params), end_baths(n, _FIG1_BATHS)).vec
            worst = max(worst, error_metric(vec, ref))
    return worst <= 1e-10, f"max rel err {worst:.3e} over 36 points (tol 1e-10)"


def _check_cross_oracle() -> tuple:
    worst = 0.0
    for n in (2, 3):
        for w, mu in _fig1_points():
            params = KitaevParams(N=n, w=w, mu=mu, delta=1.0)
            channels = end_baths(n, _FIG1_BATHS)
            first = rho_to_second_space(dense_first_space_ness(params, channels).rho)
            second = dense_second_space_ness(build_kitaev(params), channels).vec
            worst = max(worst, error_metric(first, second))
    return worst <= 1e-10, f"max rel err {worst:.3e} over 36 points (tol 1e-10)"


def _check_decay_profile() -> tuple:
    bp = EndBathParams(gamma11=0.0, gamma21=1.0, gamma12=0.0, gamma22=1.0)
    odd_max = 0.0
    for n in (3, 5, 7):
        sol = solve_end_bath(KitaevParams(N=n, w=0.0, mu=4.0, delta=1.0), bp)
        odd_max = max(odd_max, sol.report.eec)
    evens = []
    for n in (4, 6, 8, 10):
        sol = solve_end_bath(KitaevParams(N=n, w=0.0, mu=4.0, delta=1.0), bp)
        evens.append(sol.report.eec)
    decreasing = all(a > b for a, b in zip(evens, evens[1:]))
    _, _, residual = log_linear_fit([4, 6, 8, 10], evens)

    params5 = KitaevParams(N=5, w=0.0, mu=4.0, delta=1.0)
    sol5 = solve_end_bath(params5, bp)
    ref = dense_second_space_ness(build_kitaev(params5), end_baths(5, bp)).vec
    occ_err = max(abs(sol5.report.occupancy[j - 1] - occupancy_from_vec(ref, 5, j))
                  for j in (1, 5))
    occ_min = min(sol5.report.occupancy[0], sol5.report.occupancy[4])
    ok = (odd_max <= 1e-10 and decreasing and residual <= 0.10
          and occ_err <= 1e-8 and occ_min > 0.99)
    return ok, (f"odd max {odd_max:.3e}, even decreasing {decreasing}, "
                f"fit residual {residual:.3f}, end occupancy err {occ_err:.3e}")


def _check_degeneracy() -> tuple:
    bp = EndBathParams(gamma11=0.0, gamma21=1.0, gamma12=0.0, gamma22=1.0)
    for n in (4, 8):
        try:
            solve_end_bath(KitaevParams(N=n, w=1.0, mu=0.0, delta=1.0), bp)
            return False, f"N={n} at w=1, mu=0 did not report a degeneracy"
        except NonUniqueNess:
            continue
    return True, "w=1, mu=0 flagged non-unique at N=4 and N=8"


def _check_dense_equivalence() -> tuple:
    params = KitaevParams(N=4, w=1.5, mu=1.0, delta=1.0)
    bp = EndBathParams(gamma11=0.0, gamma21=1.0, gamma12=0.0, gamma22=1.0)
    vec = _pipeline_vec(params, bp)
    ref = dense_second_space_ness(build_kitaev(params), end_baths(4, bp)).vec
    err = error_metric(vec, ref)
    return err <= 1e-9, f"rel err {err:.3e} at N=4 (tol 1e-9)"


def cmd_validate(cfg: RunConfig) -> int:
    checks = [
        ("analytic_single_site", _check_analytic_n1),
        ("second_space_oracle", _check_second_space_oracle),
        ("cross_oracle", _check_cross_oracle),
        ("decay_profile", _check_decay_profile),
        ("degeneracy_detection", _check_degeneracy),
        ("dense_equivalence", _check_dense_equivalence),
    ]
    stream, owned = _open_out(cfg.out)
    try:
        failures = 0
        for name, fn in checks:
            t0 = time.perf_counter()
            try:
                ok, detail = fn()
            except NessfoldError as exc:
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            dt = time.perf_counter() - t0
            failures += 0 if ok else 1
            stream.write(f"{'PASS' if ok else 'FAIL'}  {name:<22} {detail}  [{dt:.1f}s]\n")
            stream.flush()
        stream.write(f"{len(checks) - failures}/{len(checks)} checks passed\n")
        return EXIT_OK if failures == 0 else EXIT_NUMERICAL
    finally:
        if owned:
            stream.close()


# ---------------------------------------------------------------- parser


def _add_common(sp) -> None:
    sp.add_argument("--config", help="JSON config file; flags override its keys")
    sp.add_argument("--out", help="output path (default stdout)")
    sp.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    sp.add_argument("--jobs", type=int, help="concurrent parameter points (default 1)")
    sp.add_argument("--trunc-tol", type=float, dest="trunc_tol",
                    help="relative singular-value cutoff (default 1e-12)")
    sp.add_argument("--max-chi", type=int, dest="max_chi",
                    help="bond dimension cap, 0 = unlimited (default 0)")
    sp.add_argument("--eps-z", type=float, dest="eps_z",
                    help="relative dead-mode threshold (default 1e-8)")
    sp.add_argument("--eps-fold", type=float, dest="eps_fold",
                    help="closure tolerance (default 1e-10)")


def _add_point(sp) -> None:
    sp.add_argument("--N", type=int, help="chain length (default 2)")
    sp.add_argument("--w", type=float, help="hopping intensity (default 1)")
    sp.add_argument("--mu", type=float, help="chemical potential (default 1)")
    sp.add_argument("--delta", type=float, help="pairing intensity (default 1)")
    sp.add_argument("--gamma11", type=float, help="left annihilation rate (default 0)")
    sp.add_argument("--gamma21", type=float, help="left creation rate (default 1)")
    sp.add_argument("--gamma12", type=float, help="right annihilation rate (default 0)")
    sp.add_argument("--gamma22", type=float, help="right creation rate (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nessfold",
                     description="Stationary states of dissipative quadratic chains "
                                 "by next-neighbor rotation folding.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ness", help="solve one parameter point")
    _add_point(p)
    _add_common(p)
    p.add_argument("--dump-fold", dest="dump_fold",
                   help="write rotation/diagnostic JSON to this path")

    p = sub.add_parser("occupancy", help="solve one point and report the site profile")
    _add_point(p)
    _add_common(p)
    p.add_argument("--dump-fold", dest="dump_fold",
                   help="write rotation/diagnostic JSON to this path")

    p = sub.add_parser("sweep-size", help="correlation vs chain length")
    _add_point(p)
    _add_common(p)
    p.add_argument("--sizes", type=_parse_sizes, help="comma-separated chain lengths")

    p = sub.add_parser("phase-grid", help="size sweeps over a (w, mu) grid")
    _add_point(p)
    _add_common(p)
    p.add_argument("--sizes", type=_parse_sizes, help="comma-separated chain lengths")
    p.add_argument("--w-range", type=_parse_range, dest="w_range",
                   help="hopping sweep start:stop:step")
    p.add_argument("--mu-range", type=_parse_range, dest="mu_range",
                   help="potential sweep start:stop:step")

    p = sub.add_parser("validate", help="run the oracle cross-check suite")
    _add_common(p)

    p = sub.add_parser("bench", help="median runtime per chain length (3 runs each)")
    _add_point(p)
    _add_common(p)
    p.add_argument("--sizes", type=_parse_sizes, help="comma-separated chain lengths")

    return parser


_COMMANDS = {
    "ness": cmd_ness,
    "occupancy": cmd_occupancy,
    "sweep-size": cmd_sweep_size,
    "phase-grid": cmd_phase_grid,
    "validate": cmd_validate,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig()
    try:
        if getattr(args, "config", None):
            cfg.load_file(args.config)
        cfg.apply_flags(args)
        cfg.validate_common()
        return _COMMANDS[args.command](cfg)
    except _UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonUniqueNess as exc:
        print(f"{parser.prog}: degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (NessfoldError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"{parser.prog}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
