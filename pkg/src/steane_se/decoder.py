"""Lookup decoding for extraction outcomes, standard and post-flag.

The standard table is the textbook weight-one decoder: a measured bit
pattern is mapped through the circuit's `to_standard` matrix to the true
3-bit syndrome, which either is zero (no correction) or matches exactly one
column of the check matrix (correct that qubit).

After a flagged cycle the protocol discards the flagged outcome, runs the
opposite-basis recovery extraction, and decodes its syndrome with the remap
table instead: syndromes that a flag-caught dangerous fault would produce
are remapped from the usual single-qubit correction to the fault's actual
weight-two remainder.  The remap table is derived, not hardcoded: every
dangerous flagged fault of the primary circuit is pushed through the
recovery circuit to find the syndrome it will present, and that syndrome's
entry is replaced by the remainder's minimum-weight representative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .circuit import Basis, Circuit
from .faults import _walk, dangerous_faults
from .pauli import PauliOperator, reduce_mod_stabilizers
from .tables import STEANE_H, SyndromeMapSpec


class DecoderBuildError(ValueError):
    """Raised when two dangerous faults demand incompatible remap entries."""


def raw_to_syndrome(spec: SyndromeMapSpec, bits: int) -> int:
    """True 3-bit syndrome from raw measured bits: GF(2) product with the
    circuit's to_standard matrix (bit i of each mask = row/slot i)."""
    return spec.to_standard.mul_vec(bits)


def standard_table(basis: Basis) -> dict[int, PauliOperator]:
    """Weight-<=1 corrections per check-matrix column, in the error type the
    given extraction basis diagnoses."""
    letter = "X" if basis is Basis.X else "Z"
    table = {0: PauliOperator.identity()}
    for q in range(STEANE_H.cols):
        table[STEANE_H.column(q)] = PauliOperator.single(letter, q)
    return table


@dataclass(frozen=True)
class DecoderTables:
    """Derived decode tables for one primary circuit.

    `standard` corrections are in the primary's basis; `remap` corrections
    are in the recovery (opposite) basis and are consulted only on the
    recovery run after a flag.  Treat both maps as immutable.
    """

    basis: Basis
    standard: dict[int, PauliOperator] = field(repr=False)
    remap: dict[int, PauliOperator] = field(repr=False)

    @property
    def remap_basis(self) -> Basis:
        return Basis.Z if self.basis is Basis.X else Basis.X

    @property
    def remapped_syndromes(self) -> frozenset[int]:
        return frozenset(
            s for s, p in self.remap.items() if p != standard_table(self.remap_basis)[s]
        )


def decode_standard(tables: DecoderTables, syndrome: int) -> PauliOperator:
    """Total map: identity on zero, else the matching single-qubit error."""
    return tables.standard[syndrome & 0b111]


def build_remap(primary: Circuit, recovery: Circuit) -> DecoderTables:
    """Derive the full decode tables for a primary/recovery pair.

    Every dangerous fault of the primary that raises the flag is pushed
    through the recovery circuit noiselessly; the syndrome the recovery then
    reports gets remapped to the minimum-weight representative of the
    remainder's recovery-type component.  Dangerous faults that do not raise
    the flag are outside this table's reach (they are condition (ii)(a)'s
    problem) and are skipped.  Raises DecoderBuildError when two flagged
    faults present the same syndrome but inequivalent remainders, since no
    single entry could correct both.
    """
    remap = standard_table(recovery.basis)
    source: dict[int, PauliOperator] = {}
    for effect in dangerous_faults(primary):
        if not effect.flag_flip:
            continue
        residual = effect.residual_data
        bits, _, _ = _walk(recovery, _on_register(residual, recovery.register))
        syndrome = raw_to_syndrome(recovery.syndrome_map, bits)
        part = _typed_part(residual, recovery.basis)
        rep = reduce_mod_stabilizers(part).min_weight_rep
        if syndrome in source:
            if source[syndrome] != rep:
                raise DecoderBuildError(
                    f"syndrome {syndrome:03b} claimed by inequivalent remainders "
                    f"{source[syndrome].to_text()} and {rep.to_text()}"
                )
            continue
        source[syndrome] = rep
        if rep.weight > 0:
            remap[syndrome] = rep
    return DecoderTables(
        basis=primary.basis,
        standard=standard_table(primary.basis),
        remap=remap,
    )


def _typed_part(p: PauliOperator, basis: Basis) -> PauliOperator:
    """The component of p that a given-basis extraction diagnoses."""
    bits = p.x_bits if basis is Basis.X else p.z_bits
    return (
        PauliOperator(p.register, bits, 0)
        if basis is Basis.X
        else PauliOperator(p.register, 0, bits)
    )


def _on_register(p: PauliOperator, register) -> PauliOperator:
    return PauliOperator(register, p.x_bits, p.z_bits)


def tables_to_text(tables: DecoderTables) -> str:
    """Deterministic text dump (syndrome bits high-to-low per row index)."""
    lines = [f"standard ({tables.basis.value}-type corrections)"]
    for s in range(8):
        lines.append(f"  {_bits(s)} -> {tables.standard[s].to_text()}")
    lines.append(f"remap ({tables.remap_basis.value}-type corrections, post-flag)")
    for s in range(8):
        marker = "  *" if s in tables.remapped_syndromes else "   "
        lines.append(f"{marker}{_bits(s)} -> {tables.remap[s].to_text()}")
    return "\n".join(lines)


def _bits(s: int) -> str:
    return f"({s & 1},{s >> 1 & 1},{s >> 2 & 1})"
