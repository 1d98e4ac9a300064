"""Phaseless Pauli operators, the [[7,1,3]] stabilizer group, and coset reduction.

Operators are (x_bits, z_bits) bitmask pairs over a register; global phases are
dropped throughout (they never affect syndromes, frames, or logical classes
here).  The text form uses 1-based data-qubit indices: "Z2.Z5", "X1.Y3", "I".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .tables import STEANE_H, CheckMatrix


class PauliFormatError(ValueError):
    """Raised for malformed Pauli text."""


@dataclass(frozen=True)
class QubitRegister:
    """Data qubits first, then syndrome ancillas, then flag qubits."""

    n_data: int
    n_ancilla: int = 0
    n_flag: int = 0

    def __post_init__(self) -> None:
        if self.n_data < 0 or self.n_ancilla < 0 or self.n_flag < 0:
            raise ValueError("register sizes must be nonnegative")

    @property
    def n_total(self) -> int:
        return self.n_data + self.n_ancilla + self.n_flag

    @property
    def data_mask(self) -> int:
        return (1 << self.n_data) - 1

    def ancilla(self, i: int) -> int:
        if not 0 <= i < self.n_ancilla:
            raise IndexError(f"ancilla index {i} out of range")
        return self.n_data + i

    def flag(self, i: int) -> int:
        if not 0 <= i < self.n_flag:
            raise IndexError(f"flag index {i} out of range")
        return self.n_data + self.n_ancilla + i

    def name(self, q: int) -> str:
        if 0 <= q < self.n_data:
            return f"d{q}"
        if q < self.n_data + self.n_ancilla:
            return f"a{q - self.n_data}"
        if q < self.n_total:
            return f"f{q - self.n_data - self.n_ancilla}"
        raise IndexError(f"qubit {q} out of range")

    def parse_name(self, token: str) -> int:
        m = re.fullmatch(r"([daf])(\d+)", token)
        if not m:
            raise ValueError(f"bad qubit name {token!r}")
        role, idx = m.group(1), int(m.group(2))
        if role == "d":
            if idx >= self.n_data:
                raise ValueError(f"data qubit {token!r} out of range")
            return idx
        if role == "a":
            return self.ancilla(idx)
        return self.flag(idx)


DATA7 = QubitRegister(7)


@dataclass(frozen=True)
class PauliOperator:
    """Phaseless n-qubit Pauli as an (x_bits, z_bits) pair over a register."""

    register: QubitRegister
    x_bits: int = 0
    z_bits: int = 0

    def __post_init__(self) -> None:
        full = (1 << self.register.n_total) - 1
        if self.x_bits & ~full or self.z_bits & ~full or self.x_bits < 0 or self.z_bits < 0:
            raise ValueError("Pauli support outside register")

    @classmethod
    def identity(cls, register: QubitRegister = DATA7) -> "PauliOperator":
        return cls(register)

    @classmethod
    def single(cls, letter: str, qubit: int, register: QubitRegister = DATA7) -> "PauliOperator":
        if letter not in "XYZ":
            raise ValueError(f"bad Pauli letter {letter!r}")
        x = 1 << qubit if letter in "XY" else 0
        z = 1 << qubit if letter in "YZ" else 0
        return cls(register, x, z)

    @property
    def support(self) -> int:
        return self.x_bits | self.z_bits

    @property
    def weight(self) -> int:
        return self.support.bit_count()

    @property
    def is_identity(self) -> bool:
        return self.support == 0

    def letter_at(self, q: int) -> str:
        x, z = self.x_bits >> q & 1, self.z_bits >> q & 1
        return "IXZY"[x + 2 * z]

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        if self.register != other.register:
            raise ValueError("operators act on different registers")
        return PauliOperator(self.register, self.x_bits ^ other.x_bits, self.z_bits ^ other.z_bits)

    def commutes(self, other: "PauliOperator") -> bool:
        if self.register != other.register:
            raise ValueError("operators act on different registers")
        overlap = (self.x_bits & other.z_bits).bit_count() + (self.z_bits & other.x_bits).bit_count()
        return overlap % 2 == 0

    def restricted_to_data(self) -> "PauliOperator":
        """Drop ancilla/flag support and land on the bare data register."""
        m = self.register.data_mask
        return PauliOperator(QubitRegister(self.register.n_data), self.x_bits & m, self.z_bits & m)

    def to_text(self) -> str:
        if self.is_identity:
            return "I"
        if self.support & ~self.register.data_mask:
            raise PauliFormatError("text format covers data-qubit support only")
        parts = []
        for q in range(self.register.n_data):
            letter = self.letter_at(q)
            if letter != "I":
                parts.append(f"{letter}{q + 1}")
        return ".".join(parts)

    @classmethod
    def from_text(cls, text: str, register: QubitRegister = DATA7) -> "PauliOperator":
        text = text.strip()
        if text == "I":
            return cls.identity(register)
        x = z = 0
        for part in text.split("."):
            m = re.fullmatch(r"([XYZ])(\d+)", part)
            if not m:
                raise PauliFormatError(f"bad Pauli factor {part!r}")
            q = int(m.group(2)) - 1
            if not 0 <= q < register.n_data:
                raise PauliFormatError(f"data index {m.group(2)} out of range 1..{register.n_data}")
            bit = 1 << q
            if (x | z) & bit:
                raise PauliFormatError(f"qubit {q + 1} listed twice")
            if m.group(1) in "XY":
                x |= bit
            if m.group(1) in "YZ":
                z |= bit
        return cls(register, x, z)


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    return a * b


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    return a.commutes(b)


class PauliClass(Enum):
    IDENTITY = "identity"
    STABILIZER = "stabilizer"
    LOGICAL_X = "logical_x"
    LOGICAL_Y = "logical_y"
    LOGICAL_Z = "logical_z"

    @property
    def is_logical(self) -> bool:
        return self in (PauliClass.LOGICAL_X, PauliClass.LOGICAL_Y, PauliClass.LOGICAL_Z)


@dataclass(frozen=True)
class StabilizerGroup:
    """Generators plus one representative of each logical operator."""

    register: QubitRegister
    generators: tuple[PauliOperator, ...]
    logical_x: PauliOperator
    logical_z: PauliOperator

    def elements(self) -> tuple[PauliOperator, ...]:
        out = [PauliOperator.identity(self.register)]
        for g in self.generators:
            out += [e * g for e in out]
        return tuple(out)


@lru_cache(maxsize=None)
def steane_group() -> StabilizerGroup:
    """X-type and Z-type generators read off the shared check matrix, with
    logical representatives fixed to the all-ones operators (coset choices
    never matter downstream; tests assert coset-level facts only)."""
    gens = [PauliOperator(DATA7, x_bits=row) for row in STEANE_H.rows]
    gens += [PauliOperator(DATA7, z_bits=row) for row in STEANE_H.rows]
    all_ones = DATA7.data_mask
    return StabilizerGroup(
        DATA7,
        tuple(gens),
        logical_x=PauliOperator(DATA7, x_bits=all_ones),
        logical_z=PauliOperator(DATA7, z_bits=all_ones),
    )


@dataclass(frozen=True)
class Reduction:
    pauli_class: PauliClass
    min_weight_rep: PauliOperator


@lru_cache(maxsize=None)
def _group_masks(group: StabilizerGroup) -> tuple[tuple[int, int], ...]:
    return tuple((e.x_bits, e.z_bits) for e in group.elements())


def syndrome_of(e: PauliOperator, check: CheckMatrix = STEANE_H) -> tuple[int, int]:
    """(syndrome of the X part, syndrome of the Z part), each bit i = check row i."""
    return check.mul_vec(e.x_bits), check.mul_vec(e.z_bits)


def _standard_correction(e: PauliOperator, check: CheckMatrix) -> PauliOperator:
    """Weight-minimal correction matching e's syndrome pair: at most one X and
    one Z factor, since every nonzero syndrome is a unique column of the check."""
    sx, sz = syndrome_of(e, check)
    x = z = 0
    for j in range(check.cols):
        col = check.column(j)
        if sx and col == sx:
            x = 1 << j
        if sz and col == sz:
            z = 1 << j
    if (sx and not x) or (sz and not z):
        raise ValueError("syndrome does not match any single column")
    return PauliOperator(e.register, x, z)


def reduce_mod_stabilizers(e: PauliOperator, group: StabilizerGroup | None = None) -> Reduction:
    """Classify a data-register Pauli against the stabilizer group.

    min_weight_rep is the minimum-weight element of the coset e*S (brute force
    over all 64 products; ties broken toward lower-indexed support).  The class
    is what the standard weight<=1 decoder would leave behind: multiply e by
    the correction matching its syndrome, then sort the zero-syndrome result
    into identity / stabilizer / logical X, Y, Z.
    """
    group = group or steane_group()
    if e.register != group.register:
        raise ValueError("operator register does not match the group register")

    best = None
    for gx, gz in _group_masks(group):
        x, z = e.x_bits ^ gx, e.z_bits ^ gz
        key = ((x | z).bit_count(), x | z, x)
        if best is None or key < best[0]:
            best = (key, x, z)
    rep = PauliOperator(e.register, best[1], best[2])

    post = e * _standard_correction(e, STEANE_H)
    assert syndrome_of(post) == (0, 0)
    if post.is_identity:
        cls = PauliClass.IDENTITY
    elif (post.x_bits, post.z_bits) in set(_group_masks(group)):
        cls = PauliClass.STABILIZER
    else:
        flips_x = not post.commutes(group.logical_x)
        flips_z = not post.commutes(group.logical_z)
        if flips_x and flips_z:
            cls = PauliClass.LOGICAL_Y
        elif flips_x:
            cls = PauliClass.LOGICAL_Z
        else:
            cls = PauliClass.LOGICAL_X
    return Reduction(cls, rep)
