"""The dynamic flag-and-fallback extraction cycle.

One cycle extracts one syndrome type with the flagged primary circuit.  A
quiet flag means the standard weight-one decode is trusted and applied.  A
raised flag means the primary's outcomes are discarded wholesale and the
bare opposite-basis recovery circuit runs instead; its syndrome is decoded
through the remap table, whose entries account for the weight-two errors a
flag-caught fault can have left behind.

An experiment alternates basis cycles on one logical qubit starting in the
codespace, then terminates with one noiseless extraction of each type plus
standard decodes (an ideal readout, standard for memory experiments) and
classifies the leftover frame modulo stabilizers; the shot fails logically
when a logical operator remains.  The Z-type failure column counts leftover
logical-Z and logical-Y classes, the X-type column logical-X and logical-Y.

Scalar entry points (`run_cycle`, `run_experiment`) execute one shot and
return full outcome records; `simulate_chunk` is the vectorized engine the
Monte Carlo layer drives, bit-identical to the scalar path shot for shot.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .circuit import Basis, Circuit
from .decoder import DecoderTables, raw_to_syndrome, standard_table
from .noise import CHUNK, ZERO_NOISE, FrameState, NoiseParams, run_batch, run_noisy
from .pauli import PauliClass, PauliOperator, reduce_mod_stabilizers
from .reference import ReferencePair, load_reference


@lru_cache(maxsize=8)
def _tables_for(pair: ReferencePair, basis: Basis) -> DecoderTables:
    from .decoder import build_remap

    return build_remap(pair.primary(basis), pair.recovery_after(basis))


class CycleBranch(Enum):
    STANDARD = "standard"
    RECOVERY = "recovery"


@dataclass(frozen=True)
class CycleOutcome:
    """What one cycle did: whether the flag fired, which branch decoded, the
    correction applied to the frame, and the raw bits that branch kept (the
    primary's if unflagged, the recovery's if flagged)."""

    flag_raised: bool
    branch: CycleBranch
    applied_correction: PauliOperator
    bits: int

    def __post_init__(self) -> None:
        if self.flag_raised != (self.branch is CycleBranch.RECOVERY):
            raise ValueError("recovery branch exactly when the flag is raised")


@dataclass(frozen=True)
class ShotRecord:
    """One experiment's outcome: terminal logical classification plus how
    often the flag fired along the way."""

    n_cycles: int
    final_class: PauliClass
    flags_raised: int

    @property
    def failed(self) -> bool:
        return self.final_class.is_logical

    @property
    def fail_z(self) -> bool:
        return self.final_class in (PauliClass.LOGICAL_Z, PauliClass.LOGICAL_Y)

    @property
    def fail_x(self) -> bool:
        return self.final_class in (PauliClass.LOGICAL_X, PauliClass.LOGICAL_Y)


def _order(basis_order: str) -> tuple[Basis, ...]:
    try:
        return tuple(Basis(ch) for ch in basis_order.upper())
    except ValueError:
        raise ValueError(f"basis_order must combine 'Z' and 'X', got {basis_order!r}")


def run_cycle(
    basis: Basis,
    frame: PauliOperator,
    noise: NoiseParams,
    seed: int,
    *,
    stream: int = 0,
    shot: int = 0,
    pair: ReferencePair | None = None,
    tables: DecoderTables | None = None,
    use_remap: bool = True,
    fault=None,
) -> tuple[CycleOutcome, PauliOperator]:
    """One extraction cycle on one shot's frame.

    Consumes RNG streams `stream` (primary run) and `stream + 1` (recovery
    run, only when flagged); callers running several cycles must space
    streams accordingly.  `fault` injects one deterministic Pauli into the
    primary run (the forced-fault probes of the protocol's soundness).
    """
    pair = pair or load_reference()
    tables = tables or _tables_for(pair, basis)
    primary = pair.primary(basis)
    bits, flags, frame = run_noisy(primary, frame, noise, seed, stream, shot, fault)
    if not flags:
        corr = tables.standard[raw_to_syndrome(primary.syndrome_map, bits)]
        outcome = CycleOutcome(False, CycleBranch.STANDARD, corr, bits)
        return outcome, frame * corr
    recovery = pair.recovery_after(basis)
    bits, _, frame = run_noisy(recovery, frame, noise, seed, stream + 1, shot)
    table = tables.remap if use_remap else standard_table(recovery.basis)
    corr = table[raw_to_syndrome(recovery.syndrome_map, bits)]
    outcome = CycleOutcome(True, CycleBranch.RECOVERY, corr, bits)
    return outcome, frame * corr


def run_experiment(
    n_cycles: int,
    noise: NoiseParams,
    seed: int,
    *,
    basis_order: str = "ZX",
    use_remap: bool = True,
    pair: ReferencePair | None = None,
    shot: int = 0,
    forced_fault: tuple[int, object] | None = None,
) -> ShotRecord:
    """One complete memory shot: `n_cycles` alternating cycles from the
    codespace, ideal terminal readout, logical classification.

    `forced_fault = (cycle_index, location)` injects one deterministic fault
    into that cycle's primary run — combined with zero noise this probes the
    protocol's single-fault soundness end to end.
    """
    if n_cycles < 1:
        raise ValueError("n_cycles must be >= 1")
    pair = pair or load_reference()
    order = _order(basis_order)
    frame = PauliOperator.identity()
    flags_raised = 0
    for i in range(n_cycles):
        basis = order[i % len(order)]
        fault = forced_fault[1] if forced_fault and forced_fault[0] == i else None
        outcome, frame = run_cycle(
            basis,
            frame,
            noise,
            seed,
            stream=2 * i,
            shot=shot,
            pair=pair,
            use_remap=use_remap,
            fault=fault,
        )
        flags_raised += outcome.flag_raised
    for circuit in (pair.bare_z, pair.bare_x):
        bits, _, frame = run_noisy(circuit, frame, ZERO_NOISE, seed=0)
        frame = frame * standard_table(circuit.basis)[
            raw_to_syndrome(circuit.syndrome_map, bits)
        ]
    final_class = reduce_mod_stabilizers(frame).pauli_class
    return ShotRecord(n_cycles, final_class, flags_raised)


# ---------------------------------------------------------------------------
# vectorized engine


@dataclass(frozen=True)
class ChunkCounts:
    shots: int = 0
    failures: int = 0
    fail_z: int = 0
    fail_x: int = 0
    flags_raised: int = 0

    def __add__(self, other: "ChunkCounts") -> "ChunkCounts":
        return ChunkCounts(
            self.shots + other.shots,
            self.failures + other.failures,
            self.fail_z + other.fail_z,
            self.fail_x + other.fail_x,
            self.flags_raised + other.flags_raised,
        )


@dataclass(frozen=True)
class _DecodeLuts:
    """Syndrome and correction lookups as flat arrays over the 8 raw bit
    patterns: raw bits -> standard syndrome -> correction frame masks."""

    corr_x: np.ndarray
    corr_z: np.ndarray

    @classmethod
    def build(cls, circuit: Circuit, table: dict[int, PauliOperator]) -> "_DecodeLuts":
        cx = np.zeros(8, dtype=np.uint16)
        cz = np.zeros(8, dtype=np.uint16)
        for raw in range(8):
            corr = table[raw_to_syndrome(circuit.syndrome_map, raw)]
            cx[raw] = corr.x_bits
            cz[raw] = corr.z_bits
        return cls(cx, cz)


@dataclass(frozen=True)
class _CycleBundle:
    primary: Circuit
    recovery: Circuit
    standard: _DecodeLuts
    post_flag: _DecodeLuts


@lru_cache(maxsize=8)
def _bundles(
    pair: ReferencePair, use_remap: bool
) -> tuple[dict[Basis, _CycleBundle], dict[Basis, _DecodeLuts]]:
    from .decoder import build_remap

    cycle = {}
    for basis in Basis:
        primary = pair.primary(basis)
        recovery = pair.recovery_after(basis)
        tables = build_remap(primary, recovery)
        post = tables.remap if use_remap else standard_table(recovery.basis)
        cycle[basis] = _CycleBundle(
            primary=primary,
            recovery=recovery,
            standard=_DecodeLuts.build(primary, tables.standard),
            post_flag=_DecodeLuts.build(recovery, post),
        )
    final = {
        basis: _DecodeLuts.build(circ, standard_table(circ.basis))
        for basis, circ in ((Basis.Z, pair.bare_z), (Basis.X, pair.bare_x))
    }
    return cycle, final


def simulate_chunk(
    chunk: int,
    n_shots: int,
    n_cycles: int,
    noise: NoiseParams,
    seed: int,
    *,
    basis_order: str = "ZX",
    use_remap: bool = True,
    pair: ReferencePair | None = None,
) -> ChunkCounts:
    """Run one chunk of shots vectorized; shot s of the experiment lives at
    row s % CHUNK of chunk s // CHUNK, and its outcome is identical to
    `run_experiment(..., shot=s)`."""
    pair = pair or load_reference()
    order = _order(basis_order)
    cycle_bundles, final_luts = _bundles(pair, use_remap)
    frame = FrameState.identity(n_shots)
    flags_total = 0
    for i in range(n_cycles):
        b = cycle_bundles[order[i % len(order)]]
        bits, flags = run_batch(b.primary, frame, noise, seed, stream=2 * i, chunk=chunk)
        flagged = np.flatnonzero(flags)
        flags_total += int(flagged.size)
        quiet = np.flatnonzero(flags == 0)
        if quiet.size:
            raw = bits[quiet]
            frame.x[quiet] ^= b.standard.corr_x[raw]
            frame.z[quiet] ^= b.standard.corr_z[raw]
        if flagged.size:
            sub = FrameState(frame.x[flagged].copy(), frame.z[flagged].copy())
            rbits, _ = run_batch(
                b.recovery,
                sub,
                noise,
                seed,
                stream=2 * i + 1,
                chunk=chunk,
                rows=flagged,
                chunk_rows=n_shots,
            )
            frame.x[flagged] = sub.x ^ b.post_flag.corr_x[rbits]
            frame.z[flagged] = sub.z ^ b.post_flag.corr_z[rbits]
    for basis, circ in ((Basis.Z, pair.bare_z), (Basis.X, pair.bare_x)):
        bits, _ = run_batch(circ, frame, ZERO_NOISE, seed=0)
        frame.x ^= final_luts[basis].corr_x[bits]
        frame.z ^= final_luts[basis].corr_z[bits]
    z_par = (np.bitwise_count(frame.z) & 1).astype(bool)
    x_par = (np.bitwise_count(frame.x) & 1).astype(bool)
    return ChunkCounts(
        shots=n_shots,
        failures=int(np.count_nonzero(z_par | x_par)),
        fail_z=int(np.count_nonzero(z_par)),
        fail_x=int(np.count_nonzero(x_par)),
        flags_raised=flags_total,
    )
