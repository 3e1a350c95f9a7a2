"""Command-line front end: ``rectwell <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 numerical
failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import sys
from dataclasses import dataclass

import numpy as np

from . import tables
from .errors import GeometryError, InconsistentSystem, NoConvergence, SpectrumIncomplete
from .oracle import numerov_spectrum
from .potential import PotentialSpec, make_spec
from .rootfind import (
    CRITICAL_WINDOW,
    TOL_F,
    TOL_X,
    find_special_depths,
    find_special_heights,
    find_spectrum,
    resolve_spec,
)
from .wavefunction import (
    build_wavefunction,
    count_nodes,
    gram_matrix,
    local_residual,
    sample,
)

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC, EXIT_IO = range(5)

log = logging.getLogger("rectwell")


@dataclass(frozen=True)
class RunConfig:
    spec: PotentialSpec | None
    n_levels: int
    tol_x: float
    tol_f: float
    critical_window: float
    fmt: str
    out: str | None


def _num(x: float) -> str:
    return f"{x:.12g}"


class _Writer:
    """Rows of dicts as a pretty table, CSV or JSON lines."""

    def __init__(self, stream, fmt: str, columns: list[str]):
        self.stream, self.fmt, self.columns = stream, fmt, columns
        self.rows: list[dict] = []

    def add(self, **row):
        self.rows.append(row)

    def close(self):
        cols = self.columns
        if self.fmt == "jsonl":
            for r in self.rows:
                self.stream.write(json.dumps({k: r[k] for k in cols}) + "\n")
            return
        text = [[_num(r[k]) if isinstance(r[k], float) else str(r[k]) for k in cols] for r in self.rows]
        if self.fmt == "csv":
            w = csv.writer(self.stream, lineterminator="\n")
            w.writerow(cols)
            w.writerows(text)
            return
        widths = [max(len(c), *(len(t[i]) for t in text)) if text else len(c) for i, c in enumerate(cols)]
        self.stream.write("  ".join(c.rjust(w) for c, w in zip(cols, widths)) + "\n")
        for t in text:
            self.stream.write("  ".join(v.rjust(w) for v, w in zip(t, widths)) + "\n")


@contextlib.contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", newline="") as fh:
        yield fh


def _geometry_args(p: argparse.ArgumentParser, v0: bool = True):
    g = p.add_argument_group("geometry (give a, c or d1, d2)")
    g.add_argument("--a", type=float, help="left wall at x=-a")
    g.add_argument("--b", type=float, default=1.0, help="inner half-width (default 1)")
    g.add_argument("--c", type=float, help="right wall at x=c")
    g.add_argument("--d1", type=float, help="left outer width a-b")
    g.add_argument("--d2", type=float, help="right outer width c-b")
    if v0:
        g.add_argument("--v0", type=float, required=True, help="inner height (>0) or depth (<0)")


def _solver_args(p: argparse.ArgumentParser):
    p.add_argument("--levels", type=int, default=6, help="number of levels (default 6)")
    p.add_argument("--tol-x", type=float, default=TOL_X)
    p.add_argument("--tol-f", type=float, default=TOL_F)
    p.add_argument(
        "--critical-window", type=float, default=CRITICAL_WINDOW,
        help="snap v0 onto a critical value this close (0 disables)",
    )


def _format_args(p: argparse.ArgumentParser, choices=("table", "csv", "jsonl"), default="table"):
    p.add_argument("--format", choices=choices, default=default)
    p.add_argument("--out", help="output file (default stdout)")


def _geometry(ns) -> tuple[float, float, float]:
    """Return ``(a, b, c)`` from either flag pair."""
    if ns.a is not None or ns.c is not None:
        if ns.a is None or ns.c is None or ns.d1 is not None or ns.d2 is not None:
            raise GeometryError("give both --a and --c, or both --d1 and --d2")
        return ns.a, ns.b, ns.c
    if ns.d1 is None or ns.d2 is None:
        raise GeometryError("geometry needs --a/--c or --d1/--d2")
    return ns.b + ns.d1, ns.b, ns.b + ns.d2


def _config(ns) -> RunConfig:
    spec = None
    if getattr(ns, "v0", None) is not None:
        spec = make_spec(*_geometry(ns), ns.v0)
    if getattr(ns, "levels", 1) < 1:
        raise GeometryError("--levels must be >= 1")
    return RunConfig(
        spec=spec,
        n_levels=getattr(ns, "levels", 6),
        tol_x=getattr(ns, "tol_x", TOL_X),
        tol_f=getattr(ns, "tol_f", TOL_F),
        critical_window=getattr(ns, "critical_window", CRITICAL_WINDOW),
        fmt=getattr(ns, "format", "table"),
        out=getattr(ns, "out", None),
    )


def _spectrum(cfg: RunConfig, spec: PotentialSpec | None = None):
    return find_spectrum(
        spec or cfg.spec, cfg.n_levels, tol_x=cfg.tol_x, tol_f=cfg.tol_f,
        critical_window=cfg.critical_window,
    )


def cmd_spectrum(ns) -> int:
    cfg = _config(ns)
    levels = _spectrum(cfg)
    eff, _ = resolve_spec(cfg.spec, cfg.critical_window)
    if eff.v0 != cfg.spec.v0:
        log.info("v0=%s snapped to critical %s", _num(cfg.spec.v0), _num(eff.v0))
    with _output(cfg.out) as fh:
        w = _Writer(fh, cfg.fmt, ["n", "E", "kind", "nodes"])
        for lv in levels:
            w.add(n=lv.n, E=lv.energy, kind=lv.kind.value, nodes=lv.nodes)
        w.close()
    return EXIT_OK


def cmd_special(ns) -> int:
    cfg = _config(ns)
    if ns.count < 1:
        raise GeometryError("--count must be >= 1")
    a, b, c = _geometry(ns)
    geometry = make_spec(a, b, c, 0.0)
    finder = find_special_heights if ns.mode == "heights" else find_special_depths
    roots = finder((geometry.b, geometry.d1, geometry.d2), ns.count)
    cols = ["n", "v0"] + [f"E{i}" for i in range(cfg.n_levels)]
    with _output(cfg.out) as fh:
        w = _Writer(fh, cfg.fmt, cols)
        for root in roots:
            levels = _spectrum(cfg, geometry.with_v0(root.v0))
            w.add(n=root.order, v0=root.v0, **{f"E{lv.n}": lv.energy for lv in levels})
        w.close()
    return EXIT_OK


def cmd_wavefunction(ns) -> int:
    cfg = _config(ns)
    if not 0 <= ns.level:
        raise GeometryError("--level must be >= 0")
    if ns.points < 2:
        raise GeometryError("--points must be >= 2")
    levels = find_spectrum(
        cfg.spec, max(cfg.n_levels, ns.level + 1), tol_x=cfg.tol_x, tol_f=cfg.tol_f,
        critical_window=cfg.critical_window,
    )
    lv = levels[ns.level]
    wf = build_wavefunction(cfg.spec, lv, critical_window=cfg.critical_window)
    x, psi = sample(wf, ns.points)
    s = wf.spec
    with _output(cfg.out) as fh:
        fh.write(
            f"# a={_num(s.a)} b={_num(s.b)} c={_num(s.c)} v0={_num(s.v0)} "
            f"n={lv.n} E={_num(lv.energy)} kind={lv.kind.value} nodes={lv.nodes}\n"
        )
        if cfg.fmt == "jsonl":
            for xi, pi in zip(x, psi):
                fh.write(json.dumps({"x": float(xi), "psi": float(pi)}) + "\n")
        else:
            fh.write("x,psi\n")
            for xi, pi in zip(x, psi):
                fh.write(f"{_num(float(xi))},{_num(float(pi) + 0.0)}\n")
    return EXIT_OK


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    limit: float

    @property
    def ok(self) -> bool:
        return bool(self.value < self.limit)


def verify_spec(spec: PotentialSpec, n_levels: int = 6, *, critical_window: float = CRITICAL_WINDOW,
                h: float = 1e-3, seed: int = 0) -> list[Check]:
    """Orthonormality, node count, local residual, continuity and oracle checks."""
    levels = find_spectrum(spec, n_levels, critical_window=critical_window)
    eff, _ = resolve_spec(spec, critical_window)
    wfs = [build_wavefunction(spec, lv, critical_window=critical_window) for lv in levels]
    gram = gram_matrix(wfs)
    node_err = max(abs(count_nodes(wf) - lv.n) for wf, lv in zip(wfs, levels))
    rng = np.random.default_rng(seed)
    res = cont = 0.0
    for wf in wfs:
        xs = np.concatenate([rng.uniform(r.lo, r.hi, 100) for r in wf.regions])
        scale = max(1.0, abs(wf.level.energy) + abs(eff.v0)) * np.max(np.abs(sample(wf, 2001)[1]))
        res = max(res, float(np.max(np.abs(local_residual(wf, xs)))) / scale)
        for k, x in ((0, -eff.b), (2, eff.b)):
            outer = wf.regions[k]
            for order in (0, 1):
                jump = wf.norm_constant * (outer.derivative(x, order) - wf.regions[1].derivative(x, order))
                cont = max(cont, abs(float(jump)) / scale)
    oracle = numerov_spectrum(eff, n_levels, h)
    return [
        Check("orthonormality max|G-I|", float(np.max(np.abs(gram - np.eye(len(wfs))))), 1e-6),
        Check("nodes max|nodes-n|", float(node_err), 0.5),
        Check("schrodinger residual (relative)", res, 1e-6),
        Check("continuity at +-b (relative)", cont, 1e-8),
        Check(f"oracle max|E_numerov-E| (h={h:g})",
              max(abs(o - lv.energy) for o, lv in zip(oracle, levels)), 1e-4),
    ]


def cmd_verify(ns) -> int:
    cfg = _config(ns)
    checks = verify_spec(cfg.spec, cfg.n_levels, critical_window=cfg.critical_window)
    with _output(cfg.out) as fh:
        for ch in checks:
            fh.write(f"{'PASS' if ch.ok else 'FAIL'}  {ch.name}: {ch.value:.3e} (limit {ch.limit:.0e})\n")
    return EXIT_OK if all(ch.ok for ch in checks) else EXIT_VERIFY


def cmd_reproduce_tables(ns) -> int:
    rows = tables.golden_rows(ns.table)
    out_fmt = getattr(ns, "format", "table")
    failures: list[tables.CellDiff] = []
    errata: list[tables.CellDiff] = []
    cols = ["table", "row", "v0"] + [f"E{i}" for i in range(tables.N_LEVELS)] + ["max_err", "status"]
    with _output(ns.out) as fh:
        w = _Writer(fh, out_fmt, cols)
        for row in rows:
            levels = tables.compute_row(row)
            diffs = tables.diff_row(row, levels, strict=ns.strict)
            errata.extend(d for d in diffs if d.erratum is not None)
            bad = [d for d in diffs if d.error > ns.tolerance]
            failures.extend(bad)
            w.add(table=row.table, row=row.row, v0=tables.row_spec(row).v0,
                  **{f"E{lv.n}": lv.energy for lv in levels},
                  max_err=max(d.error for d in diffs), status="ok" if not bad else "FAIL")
        w.close()
        for d in errata:
            e = d.erratum
            fh.write(f"# erratum {d.label} {d.column}: printed {e.printed:g}, compared against "
                     f"{e.corrected:g} ({e.note})\n")
        for d in failures:
            fh.write(f"# {d.label} {d.column}: expected {d.expected:g}, got {_num(d.computed)} "
                     f"(|diff| {d.error:.2e} > {ns.tolerance:g})\n")
    return EXIT_OK if not failures else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rectwell",
        description="Bound states of a rectangular barrier or well between rigid walls.",
        epilog="exit codes: 0 ok, 1 verification failure, 2 input error, 3 numerical failure, 4 I/O failure",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="lowest levels at fixed v0")
    _geometry_args(sp)
    _solver_args(sp)
    _format_args(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("special", help="critical depths or heights and their spectra")
    _geometry_args(sp, v0=False)
    sp.add_argument("--mode", choices=("depths", "heights"), required=True)
    sp.add_argument("--count", type=int, default=4)
    _solver_args(sp)
    _format_args(sp)
    sp.set_defaults(func=cmd_special)

    sp = sub.add_parser("wavefunction", help="sampled normalized eigenfunction as CSV")
    _geometry_args(sp)
    _solver_args(sp)
    sp.add_argument("--level", type=int, default=0)
    sp.add_argument("--points", type=int, default=601)
    _format_args(sp, choices=("csv", "jsonl"), default="csv")
    sp.set_defaults(func=cmd_wavefunction)

    sp = sub.add_parser("verify", help="orthogonality, nodes, residual and oracle checks")
    _geometry_args(sp)
    _solver_args(sp)
    sp.add_argument("--out", help="report file (default stdout)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("reproduce-tables", help="recompute the golden tables and diff them")
    sp.add_argument("--table", type=int, choices=(1, 2))
    sp.add_argument("--tolerance", type=float, default=2e-3)
    sp.add_argument("--strict", action="store_true", help="ignore known errata, compare printed values")
    _format_args(sp)
    sp.set_defaults(func=cmd_reproduce_tables)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return ns.func(ns)
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NoConvergence, SpectrumIncomplete, InconsistentSystem) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
