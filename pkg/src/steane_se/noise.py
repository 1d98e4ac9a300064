"""Pauli-frame sampler under circuit-level depolarizing noise.

Every circuit here is Clifford with Pauli noise and a codeword input, so
tracking the Pauli frame relative to the noiseless run is exact and bit
packable: a shot's frame is one pair of integers (x_bits, z_bits), and a
batch of shots is two numpy arrays that every gate, noise channel and
measurement updates with a handful of vector operations.

Randomness is counter-based and stateless: the draw behind any noise event
is fully determined by (seed, stream, site, chunk, row), where `site`
enumerates the circuit's noise locations in layer order, `stream`
distinguishes runs within a larger experiment (e.g. cycle number), and
shots are partitioned into fixed-size chunks so results never depend on
how many workers processed them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.random import Generator, Philox

from .circuit import Basis, Circuit, InstrKind
from .faults import PAIR_PAULIS, FaultLocation, FaultSite, InvalidFaultLocation
from .pauli import PauliOperator, QubitRegister

#: Fixed shot-partition size for RNG purposes; independent of worker count.
CHUNK = 1 << 16


@dataclass(frozen=True)
class NoiseParams:
    """Circuit-level depolarizing model: `p2` uniform two-qubit depolarizing
    after each CNOT, `p_spam` classical flip of each measurement outcome,
    `p_mem` Z on each idle qubit per layer."""

    p2: float
    p_spam: float
    p_mem: float

    def __post_init__(self) -> None:
        for name in ("p2", "p_spam", "p_mem"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} = {v} outside [0, 1]")

    @classmethod
    def from_p_phys(cls, p_phys: float) -> "NoiseParams":
        """The tied default: p2 = p_spam = p_phys, p_mem = p_phys / 10."""
        return cls(p2=p_phys, p_spam=p_phys, p_mem=0.1 * p_phys)

    @property
    def is_zero(self) -> bool:
        return self.p2 == self.p_spam == self.p_mem == 0.0


ZERO_NOISE = NoiseParams(0.0, 0.0, 0.0)


@dataclass
class FrameState:
    """Per-shot Pauli frames for a batch, supported on data qubits between
    runs.  There is no stored RNG state: every draw is recomputed from its
    (seed, stream, site, chunk, row) key, and measured bits are returned by
    each run rather than accumulated here."""

    x: np.ndarray
    z: np.ndarray

    @classmethod
    def identity(cls, n: int) -> "FrameState":
        return cls(np.zeros(n, dtype=np.uint16), np.zeros(n, dtype=np.uint16))

    @classmethod
    def from_pauli(cls, p: PauliOperator, n: int) -> "FrameState":
        return cls(
            np.full(n, p.x_bits, dtype=np.uint16),
            np.full(n, p.z_bits, dtype=np.uint16),
        )

    def pauli(self, row: int, register: QubitRegister) -> PauliOperator:
        return PauliOperator(register, int(self.x[row]), int(self.z[row]))


# Two-qubit Pauli patterns in the fault enumeration's order; index 0 is the
# identity pattern so a zero draw means "no injection".
def _pattern_arrays() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    xc = [0]
    zc = [0]
    xt = [0]
    zt = [0]
    for pair in PAIR_PAULIS:
        xc.append(1 if pair[0] in "XY" else 0)
        zc.append(1 if pair[0] in "YZ" else 0)
        xt.append(1 if pair[1] in "XY" else 0)
        zt.append(1 if pair[1] in "YZ" else 0)
    as_arr = lambda v: np.asarray(v, dtype=np.uint16)  # noqa: E731
    return as_arr(xc), as_arr(zc), as_arr(xt), as_arr(zt)


_XC, _ZC, _XT, _ZT = _pattern_arrays()


@dataclass(frozen=True)
class _Compiled:
    """Flattened execution plan: per-step opcodes with preassigned noise-site
    ids, in deterministic layer order (gate steps first within a layer, then
    one idle-noise step per untouched qubit, ascending)."""

    steps: tuple[tuple, ...]
    n_sites: int
    data_mask: int


@lru_cache(maxsize=32)
def _compile(c: Circuit) -> _Compiled:
    steps: list[tuple] = []
    site = 0
    idx = 0
    n_total = c.register.n_total
    for layer in c.layers:
        touched = 0
        for ins in layer:
            for q in ins.qubits:
                touched |= 1 << q
            if ins.kind is InstrKind.CNOT:
                steps.append(("cnot", idx, ins.control, ins.target, site))
                site += 1
            elif ins.kind in (InstrKind.RESET_Z, InstrKind.RESET_X):
                steps.append(("reset", idx, ins.qubits[0]))
            else:
                read_x = ins.kind is InstrKind.MEASURE_Z
                if ins.out.startswith("flag"):
                    kind, slot = "mflag", int(ins.out[4:])
                else:
                    kind, slot = "mbit", int(ins.out[1:])
                steps.append((kind, idx, ins.qubits[0], read_x, slot, site))
                site += 1
            idx += 1
        for q in range(n_total):
            if not touched >> q & 1:
                steps.append(("idle", None, q, site))
                site += 1
    return _Compiled(tuple(steps), site, c.register.data_mask)


def _rng(seed: int, stream: int, site: int, chunk: int) -> Generator:
    key = ((stream & 0xFFFFF) << 44) | ((site & 0xFFFFF) << 24) | (chunk & 0xFFFFFF)
    return Generator(Philox(key=[seed & 0xFFFFFFFFFFFFFFFF, key]))


def _fault_masks(c: Circuit, fault: FaultLocation) -> tuple[int, int]:
    flat = [ins for layer in c.layers for ins in layer]
    if not 0 <= fault.index < len(flat):
        raise InvalidFaultLocation(f"instruction index {fault.index} out of range")
    ins = flat[fault.index]
    site_of = {
        InstrKind.CNOT: FaultSite.AFTER_GATE,
        InstrKind.RESET_Z: FaultSite.AFTER_RESET,
        InstrKind.RESET_X: FaultSite.AFTER_RESET,
        InstrKind.MEASURE_Z: FaultSite.BEFORE_MEASURE,
        InstrKind.MEASURE_X: FaultSite.BEFORE_MEASURE,
    }
    if (
        site_of[ins.kind] is not fault.site
        or ins.qubits != fault.qubits
        or len(fault.pauli) != len(ins.qubits)
    ):
        raise InvalidFaultLocation(
            f"{fault} does not match instruction {fault.index} ({ins.kind.value})"
        )
    mx = mz = 0
    for q, letter in zip(fault.qubits, fault.pauli):
        if letter in "XY":
            mx |= 1 << q
        if letter in "YZ":
            mz |= 1 << q
    return mx, mz


def run_batch(
    c: Circuit,
    frame: FrameState,
    noise: NoiseParams,
    seed: int,
    stream: int = 0,
    chunk: int = 0,
    rows: np.ndarray | None = None,
    chunk_rows: int | None = None,
    fault: FaultLocation | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Execute the circuit over a batch of frames, in place.

    Returns (bits, flags) as uint8 arrays: bit i of `bits` is measurement
    slot b_i, bit j of `flags` is flag slot j.  `rows` gives the global
    chunk-row index of each frame when the batch is a subset of a chunk
    (adaptive branches), so each shot keeps its own random draws;
    `chunk_rows` is the full chunk's row count in that case.  `fault`
    injects one deterministic Pauli at its location (after gates and
    resets, before measurements) into every shot of the batch.
    """
    plan = _compile(c)
    x, z = frame.x, frame.z
    n = len(x)
    draw_rows = n if rows is None else chunk_rows
    if rows is not None and chunk_rows is None:
        raise ValueError("chunk_rows required when rows is given")
    bits = np.zeros(n, dtype=np.uint8)
    flags = np.zeros(n, dtype=np.uint8)
    fx = fz = 0
    if fault is not None:
        fx, fz = _fault_masks(c, fault)

    def uniforms(site: int) -> np.ndarray:
        u = _rng(seed, stream, site, chunk).random(draw_rows)
        return u if rows is None else u[rows]

    for step in plan.steps:
        op = step[0]
        if op == "cnot":
            _, idx, ctrl, tgt, site = step
            x ^= ((x >> ctrl) & 1) << tgt
            z ^= ((z >> tgt) & 1) << ctrl
            if noise.p2 > 0.0:
                u = uniforms(site)
                k = np.zeros(n, dtype=np.intp)
                fire = u < noise.p2
                k[fire] = np.minimum(
                    (u[fire] * (15.0 / noise.p2)).astype(np.intp) + 1, 15
                )
                x ^= (_XC[k] << ctrl) | (_XT[k] << tgt)
                z ^= (_ZC[k] << ctrl) | (_ZT[k] << tgt)
            if fault is not None and idx == fault.index:
                x ^= np.uint16(fx)
                z ^= np.uint16(fz)
        elif op == "reset":
            _, idx, q = step
            keep = np.uint16(~(1 << q) & 0xFFFF)
            x &= keep
            z &= keep
            if fault is not None and idx == fault.index:
                x ^= np.uint16(fx)
                z ^= np.uint16(fz)
        elif op == "idle":
            _, _, q, site = step
            if noise.p_mem > 0.0:
                z ^= (uniforms(site) < noise.p_mem).astype(np.uint16) << q
        else:  # mbit / mflag
            _, idx, q, read_x, slot, site = step
            if fault is not None and idx == fault.index:
                x ^= np.uint16(fx)
                z ^= np.uint16(fz)
            out = ((x if read_x else z) >> q & 1).astype(np.uint8)
            if noise.p_spam > 0.0:
                out ^= (uniforms(site) < noise.p_spam).astype(np.uint8)
            target = bits if op == "mbit" else flags
            target |= out << slot
    mask = np.uint16(plan.data_mask)
    x &= mask
    z &= mask
    return bits, flags


def run_noisy(
    c: Circuit,
    frame_in: PauliOperator,
    noise: NoiseParams,
    seed: int,
    stream: int = 0,
    shot: int = 0,
    fault: FaultLocation | None = None,
) -> tuple[int, int, PauliOperator]:
    """Single-shot convenience wrapper: returns (bits, flag_bits, frame_out)
    with the outgoing frame restricted to the data register.  The shot index
    selects which row of the chunk's random draws this run consumes."""
    chunk, row = divmod(shot, CHUNK)
    frame = FrameState.from_pauli(frame_in, 1)
    bits, flags = run_batch(
        c,
        frame,
        noise,
        seed,
        stream=stream,
        chunk=chunk,
        rows=np.asarray([row]),
        chunk_rows=row + 1,
        fault=fault,
    )
    return int(bits[0]), int(flags[0]), frame.pauli(0, c.register).restricted_to_data()


def run_deterministic_fault(
    c: Circuit,
    f: FaultLocation | None,
    frame_in: PauliOperator,
) -> tuple[int, int, PauliOperator]:
    """Noiseless run with exactly one injected fault (or none): the
    independent cross-check of the fault enumeration's propagate."""
    frame = FrameState.from_pauli(frame_in, 1)
    bits, flags = run_batch(c, frame, ZERO_NOISE, seed=0, fault=f)
    return int(bits[0]), int(flags[0]), frame.pauli(0, c.register).restricted_to_data()
