"""Golden eigenvalue tables and their reproduction.

Rows 4-7 of each table sit at critical hole depths and rows 10-13 at
critical barrier heights.  Reproduction solves for those critical values
first and computes the spectrum there, rather than trusting the rounded
``v0`` printed in the row.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .potential import EnergyLevel, PotentialSpec, SpecialRoot, make_spec
from .rootfind import find_special_depths, find_special_heights, find_spectrum

N_LEVELS = 6
DEPTH_ROWS = range(4, 8)
HEIGHT_ROWS = range(10, 14)


@dataclass(frozen=True)
class GoldenRow:
    table: int
    row: int
    use: bool
    spec: PotentialSpec
    energies: tuple[float, ...]
    #: index of the cell printed as "V0", if any
    barrier_top: int | None = None

    @property
    def label(self) -> str:
        return f"T{self.table}R{self.row}"

    @property
    def geometry(self) -> tuple[float, float, float]:
        return self.spec.b, self.spec.d1, self.spec.d2

    def special_order(self) -> int | None:
        if self.row in DEPTH_ROWS:
            return self.row - DEPTH_ROWS.start
        if self.row in HEIGHT_ROWS:
            return self.row - HEIGHT_ROWS.start
        return None


@dataclass(frozen=True)
class CellDiff:
    label: str
    column: str
    expected: float
    computed: float
    erratum: Erratum | None = None

    @property
    def error(self) -> float:
        return abs(self.computed - self.expected)


def _data_rows(name: str) -> list[dict[str, str]]:
    text = resources.files(__package__).joinpath(f"data/{name}").read_text()
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


@dataclass(frozen=True)
class Erratum:
    table: int
    row: int
    column: str
    printed: float
    corrected: float
    note: str


@lru_cache(maxsize=1)
def load_errata() -> dict[tuple[int, int, str], Erratum]:
    out = {}
    for rec in _data_rows("errata.csv"):
        e = Erratum(int(rec["table"]), int(rec["row"]), rec["column"],
                    float(rec["printed"]), float(rec["corrected"]), rec["note"])
        out[e.table, e.row, e.column] = e
    return out


@lru_cache(maxsize=1)
def load_golden() -> tuple[GoldenRow, ...]:
    rows = []
    for rec in _data_rows("golden_tables.csv"):
        v0 = float(rec["v0"])
        cells = [rec[f"E{i}"] for i in range(N_LEVELS)]
        top = cells.index("V0") if "V0" in cells else None
        energies = tuple(v0 if c == "V0" else float(c) for c in cells)
        spec = make_spec(float(rec["a"]), float(rec["b"]), float(rec["c"]), v0)
        rows.append(GoldenRow(int(rec["table"]), int(rec["row"]), rec["use"] == "1", spec, energies, top))
    return tuple(rows)


def golden_rows(table: int | None = None, *, include_unused: bool = False) -> list[GoldenRow]:
    return [
        r for r in load_golden()
        if (table is None or r.table == table) and (include_unused or r.use)
    ]


@lru_cache(maxsize=None)
def _critical(geometry: tuple[float, float, float], heights: bool) -> tuple[SpecialRoot, ...]:
    finder = find_special_heights if heights else find_special_depths
    return tuple(finder(geometry, len(DEPTH_ROWS)))


def critical_root(row: GoldenRow) -> SpecialRoot | None:
    order = row.special_order()
    if order is None:
        return None
    return _critical(row.geometry, row.row in HEIGHT_ROWS)[order]


def row_spec(row: GoldenRow) -> PotentialSpec:
    """Spec at which the row is reproduced: the solved critical ``v0`` for special rows."""
    root = critical_root(row)
    return row.spec if root is None else row.spec.with_v0(root.v0)


def compute_row(row: GoldenRow, **kw) -> list[EnergyLevel]:
    return find_spectrum(row_spec(row), N_LEVELS, **kw)


def diff_row(row: GoldenRow, levels: list[EnergyLevel], *, strict: bool = False) -> list[CellDiff]:
    """Per-cell differences; known errata compare against the corrected value unless ``strict``."""
    errata = {} if strict else load_errata()
    out = []
    root = critical_root(row)
    if root is not None:
        out.append(CellDiff(row.label, "V0", row.spec.v0, root.v0))
    for i, (want, lvl) in enumerate(zip(row.energies, levels)):
        fix = errata.get((row.table, row.row, f"E{i}"))
        out.append(CellDiff(row.label, f"E{i}", fix.corrected if fix else want, lvl.energy, fix))
    return out
