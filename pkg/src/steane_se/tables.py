"""GF(2) check matrices and the small linear-algebra kit behind syndrome maps.

Binary matrices are stored as one integer bitmask per row, bit j holding
column j (data qubit j, 0-based).  The text form of a row is a bitstring
whose k-th character is column k, so the [[7,1,3]] check matrix reads

    1111000
    0110110
    0011011

with data-qubit columns fixed to labels 1..7 left to right.
"""

from __future__ import annotations

from dataclasses import dataclass


class LinearAlgebraError(ValueError):
    """Raised when a matrix fails a rank/row-space precondition."""


def _parity(x: int) -> int:
    return x.bit_count() & 1


@dataclass(frozen=True)
class CheckMatrix:
    """Binary matrix over GF(2), one bitmask per row."""

    cols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.cols <= 0:
            raise ValueError("cols must be positive")
        full = (1 << self.cols) - 1
        for r in self.rows:
            if r < 0 or r & ~full:
                raise ValueError(f"row mask {r:#x} exceeds {self.cols} columns")

    @classmethod
    def from_strings(cls, lines: list[str] | tuple[str, ...]) -> "CheckMatrix":
        if not lines:
            raise ValueError("need at least one row")
        cols = len(lines[0])
        rows = []
        for line in lines:
            if len(line) != cols or set(line) - {"0", "1"}:
                raise ValueError(f"bad row {line!r}")
            rows.append(sum(1 << j for j, ch in enumerate(line) if ch == "1"))
        return cls(cols, tuple(rows))

    def to_strings(self) -> list[str]:
        return ["".join("1" if r >> j & 1 else "0" for j in range(self.cols)) for r in self.rows]

    @classmethod
    def identity(cls, n: int) -> "CheckMatrix":
        return cls(n, tuple(1 << i for i in range(n)))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> int:
        return self.rows[i] >> j & 1

    def column(self, j: int) -> int:
        """Column j packed as an integer with bit i = row i."""
        return sum((self.rows[i] >> j & 1) << i for i in range(self.n_rows))

    def mul_vec(self, v: int) -> int:
        """Matrix times column vector; v has bit j = component j."""
        return sum(_parity(self.rows[i] & v) << i for i in range(self.n_rows))

    def mul(self, other: "CheckMatrix") -> "CheckMatrix":
        if self.cols != other.n_rows:
            raise ValueError("dimension mismatch")
        out = []
        for r in self.rows:
            acc = 0
            for j in range(self.cols):
                if r >> j & 1:
                    acc ^= other.rows[j]
            out.append(acc)
        return CheckMatrix(other.cols, tuple(out))

    def rank(self) -> int:
        return len(_eliminate(list(self.rows)))

    def row_space_contains(self, v: int) -> bool:
        basis = _eliminate(list(self.rows))
        return _reduce_against(v, basis) == 0

    def same_row_space(self, other: "CheckMatrix") -> bool:
        if self.cols != other.cols:
            return False
        mine = _eliminate(list(self.rows))
        theirs = _eliminate(list(other.rows))
        return len(mine) == len(theirs) and all(_reduce_against(r, mine) == 0 for r in theirs)

    def is_invertible(self) -> bool:
        return self.n_rows == self.cols and self.rank() == self.cols

    def inverse(self) -> "CheckMatrix":
        if self.n_rows != self.cols:
            raise LinearAlgebraError("inverse requires a square matrix")
        n = self.cols
        # Augment each row with an identity tag in the high bits and eliminate.
        aug = [self.rows[i] | (1 << (n + i)) for i in range(n)]
        low = (1 << n) - 1
        for col in range(n):
            pivot = next((k for k in range(col, n) if aug[k] >> col & 1), None)
            if pivot is None:
                raise LinearAlgebraError("matrix is singular")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            for k in range(n):
                if k != col and aug[k] >> col & 1:
                    aug[k] ^= aug[col]
        return CheckMatrix(n, tuple((row >> n) & low for row in aug))


def _eliminate(rows: list[int]) -> list[int]:
    """Row-reduce in place; returns the nonzero rows (a row echelon basis)."""
    basis: list[int] = []
    for row in rows:
        row = _reduce_against(row, basis)
        if row:
            basis.append(row)
            basis.sort(key=lambda r: r & -r)
    return basis


def _reduce_against(row: int, basis: list[int]) -> int:
    for b in basis:
        low = b & -b
        if row & low:
            row ^= b
    return row


# [[7,1,3]] parity checks: the same 3x7 matrix serves the X-type and Z-type
# stabilizer generators (the code is self-dual CSS).
STEANE_H = CheckMatrix.from_strings(["1111000", "0110110", "0011011"])

# The 3x3 effective transform of the compact three-ancilla readout: the raw
# measured parities b relate to the standard syndrome by s = EFFECTIVE_CHECK . b.
EFFECTIVE_CHECK = CheckMatrix.from_strings(["110", "111", "010"])


@dataclass(frozen=True)
class SyndromeMapSpec:
    """Pairing of the rows a circuit actually measures with the 3x3 transform
    taking raw bits to the standard syndrome: to_standard . measured = H."""

    measured: CheckMatrix
    to_standard: CheckMatrix

    def __post_init__(self) -> None:
        if not self.to_standard.is_invertible():
            raise LinearAlgebraError("to_standard must be invertible")


def solve_to_standard(measured: CheckMatrix, target: CheckMatrix = STEANE_H) -> CheckMatrix:
    """Solve T . measured = target for the invertible transform T.

    Requires measured to have full rank equal to target's rank and the same
    row space; each row of T is then the unique combination of measured rows
    reproducing the corresponding target row.
    """
    r = target.rank()
    if measured.rank() != r:
        raise LinearAlgebraError(f"measured matrix has rank {measured.rank()}, need {r}")
    if not measured.same_row_space(target):
        raise LinearAlgebraError("measured rows do not span the target row space")
    n = measured.n_rows
    t_rows = []
    for want in target.rows:
        combo = next(
            (
                x
                for x in range(1 << n)
                if _xor_rows(measured.rows, x) == want
            ),
            None,
        )
        if combo is None:  # unreachable given the row-space check
            raise LinearAlgebraError("no row combination found")
        t_rows.append(combo)
    return CheckMatrix(n, tuple(t_rows))


def _xor_rows(rows: tuple[int, ...], picks: int) -> int:
    acc = 0
    for i, row in enumerate(rows):
        if picks >> i & 1:
            acc ^= row
    return acc


def derive_syndrome_map(measured: CheckMatrix, target: CheckMatrix = STEANE_H) -> SyndromeMapSpec:
    return SyndromeMapSpec(measured, solve_to_standard(measured, target))


def effective_syndrome_map() -> SyndromeMapSpec:
    """The compact readout map: measured = EFFECTIVE_CHECK^-1 . H, transform = EFFECTIVE_CHECK."""
    measured = EFFECTIVE_CHECK.inverse().mul(STEANE_H)
    return derive_syndrome_map(measured)
