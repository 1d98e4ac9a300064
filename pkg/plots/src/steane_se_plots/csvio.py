"""Reading and validating the simulator's sweep CSV format.

The header below is the interface contract with the simulator package;
it is spelled out here on purpose rather than imported.  Lines starting
with `#` are comments (the simulator's CLI prepends one metadata line)
and are skipped wherever they appear.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

CSV_HEADER = (
    "p_phys,n_cycles,shots,failures,fail_z,fail_x,"
    "p_l,wilson_lo,wilson_hi,seed,convention"
)
_COLUMNS = CSV_HEADER.split(",")


class SchemaError(ValueError):
    """The file's header or row layout does not match the sweep schema."""


class EmptyDataError(ValueError):
    """The file is schema-valid but carries no data rows."""


@dataclass(frozen=True)
class SweepRow:
    p_phys: float
    n_cycles: int
    shots: int
    failures: int
    fail_z: int
    fail_x: int
    p_l: float
    wilson_lo: float
    wilson_hi: float
    seed: int
    convention: str


def read_sweep_csv(path: str | Path) -> list[SweepRow]:
    """Parse one sweep CSV, enforcing the exact schema.

    Raises SchemaError for a wrong header or malformed row, and
    EmptyDataError when the header is fine but no rows follow.
    """
    path = Path(path)
    lines = [
        line
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise SchemaError(f"{path}: no header found")
    if lines[0] != CSV_HEADER:
        raise SchemaError(
            f"{path}: header does not match the sweep schema\n"
            f"  expected: {CSV_HEADER}\n"
            f"  found:    {lines[0]}"
        )
    rows = []
    for record in csv.reader(lines[1:]):
        if len(record) != len(_COLUMNS):
            raise SchemaError(
                f"{path}: row has {len(record)} fields, expected {len(_COLUMNS)}: "
                f"{','.join(record)!r}"
            )
        try:
            rows.append(
                SweepRow(
                    p_phys=float(record[0]),
                    n_cycles=int(record[1]),
                    shots=int(record[2]),
                    failures=int(record[3]),
                    fail_z=int(record[4]),
                    fail_x=int(record[5]),
                    p_l=float(record[6]),
                    wilson_lo=float(record[7]),
                    wilson_hi=float(record[8]),
                    seed=int(record[9]),
                    convention=record[10],
                )
            )
        except ValueError as exc:
            raise SchemaError(f"{path}: unparseable row {','.join(record)!r}: {exc}") from exc
    if not rows:
        raise EmptyDataError(f"{path}: header only, no data rows")
    return rows
