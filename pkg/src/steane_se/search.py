"""Minimal-CNOT search for three-row syndrome extraction circuits.

States are 3x7 binary matrices packed into 21-bit integers (bit i*7+j holds
row i, column j): the parity rows accumulated on the three ancillas.  Moves
are the two CNOT kinds available to the circuit family:

    EntryFlip(i, j)  <->  CX data_j -> ancilla_i   (toggles one matrix entry)
    RowAdd(r, s)     <->  CX ancilla_r -> ancilla_s (row_s ^= row_r)

Both move kinds are involutions, so the move graph is undirected and a single
breadth-first sweep from the zero matrix gives exact CNOT distances for every
reachable matrix.  The distance table doubles as the parent structure: a
geodesic is extracted by walking from the target to zero, always taking the
first move (in the fixed EntryFlip-row-major-then-RowAdd-lexicographic order)
that decreases the distance, which also fixes the canonical geodesic.

The flag search augments a base move sequence with CNOTs coupling one extra
flag qubit to the ancillas, looking for the fewest couplings after which
every dangerous single ancilla fault (one whose deposited data error reduces
to weight two modulo stabilizers) flips the flag readout.  Two facts shape
the search:

* Catching is a parity, not a union: each coupling the travelling ancilla
  fault reaches toggles the flag, so a fault seen by two couplings goes
  unreported.  A placement catches a fault when an odd number of couplings
  read it strictly after injection and no coupling reads it inside its own
  injection gap (the sibling fault injected just behind that coupling would
  otherwise flip the flag an even number of times).
* The couplings pollute the readout unless their pullback factors cancel:
  the flag observable picks up an ancilla-X factor at every coupling, and
  each syndrome observable picks up a flag-Z factor at every coupling on its
  ancilla.  Leftover factors anticommute with a reset and randomize the
  outcome.  Row additions move these factors between ancillas, which is what
  lets an odd number of couplings cancel; placements are prefiltered by
  replaying exactly the cancellation the circuit validator checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator

import numpy as np

from .pauli import QubitRegister
from .tables import STEANE_H, CheckMatrix
from .circuit import (
    Basis,
    Circuit,
    CircuitValidationError,
    Instruction,
    InstrKind,
    cnot,
    measure_x,
    measure_z,
    reset_x,
    reset_z,
    schedule,
)

N_ROWS = 3
N_COLS = 7
N_STATES = 1 << (N_ROWS * N_COLS)


class MoveKind(Enum):
    ENTRY_FLIP = "flip"
    ROW_ADD = "add"


@dataclass(frozen=True)
class SearchMove:
    """ENTRY_FLIP: a = ancilla row, b = data column.  ROW_ADD: row b ^= row a."""

    kind: MoveKind
    a: int
    b: int

    def apply(self, state: int) -> int:
        if self.kind is MoveKind.ENTRY_FLIP:
            return state ^ (1 << (self.a * N_COLS + self.b))
        row = (state >> (self.a * N_COLS)) & ((1 << N_COLS) - 1)
        return state ^ (row << (self.b * N_COLS))

    def to_cnot(self, register: QubitRegister) -> Instruction:
        if self.kind is MoveKind.ENTRY_FLIP:
            return cnot(self.b, register.ancilla(self.a))
        return cnot(register.ancilla(self.a), register.ancilla(self.b))


def _all_moves() -> tuple[SearchMove, ...]:
    flips = [
        SearchMove(MoveKind.ENTRY_FLIP, i, j)
        for i in range(N_ROWS)
        for j in range(N_COLS)
    ]
    adds = [
        SearchMove(MoveKind.ROW_ADD, r, s)
        for r in range(N_ROWS)
        for s in range(N_ROWS)
        if r != s
    ]
    return tuple(flips + adds)


MOVES = _all_moves()


def pack_state(matrix: CheckMatrix) -> int:
    if matrix.n_rows != N_ROWS or matrix.cols != N_COLS:
        raise ValueError("expected a 3x7 matrix")
    return sum(row << (i * N_COLS) for i, row in enumerate(matrix.rows))


def unpack_state(state: int) -> CheckMatrix:
    mask = (1 << N_COLS) - 1
    return CheckMatrix(N_COLS, tuple((state >> (i * N_COLS)) & mask for i in range(N_ROWS)))


def _vector_move(move: SearchMove) -> Callable[[np.ndarray], np.ndarray]:
    if move.kind is MoveKind.ENTRY_FLIP:
        bit = np.uint32(1 << (move.a * N_COLS + move.b))
        return lambda v: v ^ bit
    src, dst = move.a * N_COLS, move.b * N_COLS
    mask = np.uint32((1 << N_COLS) - 1)
    return lambda v: v ^ (((v >> np.uint32(src)) & mask) << np.uint32(dst))


@dataclass
class BfsResult:
    """Exact CNOT distances from the zero matrix for all 2^21 states."""

    dist: np.ndarray
    target: int

    @property
    def distance(self) -> int:
        return int(self.dist[self.target])

    def distance_to(self, matrix: CheckMatrix) -> int:
        return int(self.dist[pack_state(matrix)])


def bfs_min_cnots(target: CheckMatrix = STEANE_H) -> BfsResult:
    """Level-by-level vectorized BFS over the full move graph."""
    funcs = [_vector_move(m) for m in MOVES]
    dist = np.full(N_STATES, -1, dtype=np.int8)
    dist[0] = 0
    frontier = np.zeros(1, dtype=np.uint32)
    level = 0
    while frontier.size:
        level += 1
        candidates = np.concatenate([f(frontier) for f in funcs])
        fresh = candidates[dist[candidates] < 0]
        fresh = np.unique(fresh)
        dist[fresh] = level
        frontier = fresh
    return BfsResult(dist, pack_state(target))


def extract_geodesic(result: BfsResult, target: CheckMatrix | None = None) -> list[SearchMove]:
    """Walk target -> zero taking the first distance-decreasing move each step."""
    state = result.target if target is None else pack_state(target)
    d = int(result.dist[state])
    if d < 0:
        raise ValueError("target not reached by the move set")
    reversed_moves: list[SearchMove] = []
    while d > 0:
        for move in MOVES:
            nxt = move.apply(state)
            if result.dist[nxt] == d - 1:
                reversed_moves.append(move)
                state, d = nxt, d - 1
                break
        else:  # unreachable: BFS guarantees a predecessor
            raise AssertionError("no distance-decreasing move")
    return reversed_moves[::-1]


def extract_circuit(moves: list[SearchMove], register: QubitRegister | None = None) -> Circuit:
    """Turn a move sequence into a full extraction circuit (basis X: Z-basis
    ancillas read out the Z-type stabilizer rows the moves accumulate).

    The accumulated rows may be any invertible combination of the check
    rows; the scheduled circuit carries the solved raw-to-standard
    transform in its syndrome map.
    """
    if not moves:
        raise ValueError("empty move sequence")
    state = 0
    for move in moves:
        state = move.apply(state)
    if not unpack_state(state).same_row_space(STEANE_H):
        raise ValueError("moves do not span the check-matrix row space")
    register = register or QubitRegister(N_COLS, N_ROWS, 0)
    if register.n_flag:
        raise ValueError("flag insertion is handled by the flag search")
    instrs = [reset_z(register.ancilla(i)) for i in range(N_ROWS)]
    instrs += [m.to_cnot(register) for m in moves]
    instrs += [measure_z(register.ancilla(i), f"b{i}") for i in range(N_ROWS)]
    return schedule(register, Basis.X, instrs)


def moves_from_circuit(circuit: Circuit) -> list[SearchMove]:
    """Recover the base move sequence from a flag-free extraction circuit.

    CNOTs are read in time order; basis-Z circuits are reversed-CNOT duals,
    so their directions are flipped back before classification.
    """
    reg = circuit.register
    nd, na = reg.n_data, reg.n_ancilla
    moves: list[SearchMove] = []
    for ins in circuit.instructions():
        if ins.kind is not InstrKind.CNOT:
            continue
        c, t = ins.control, ins.target
        if circuit.basis is Basis.Z:
            c, t = t, c
        if c < nd and nd <= t < nd + na:
            moves.append(SearchMove(MoveKind.ENTRY_FLIP, t - nd, c))
        elif nd <= c < nd + na and nd <= t < nd + na:
            moves.append(SearchMove(MoveKind.ROW_ADD, c - nd, t - nd))
        else:
            raise ValueError("circuit couples a flag qubit; pass the bare base")
    return moves


def _touch_key(moves: list[SearchMove]) -> tuple:
    """Per-ancilla touch sequences: the canonical form used to deduplicate
    geodesics that differ only in the interleaving of disjoint gates."""
    seqs: list[list[tuple]] = [[] for _ in range(N_ROWS)]
    for m in moves:
        if m.kind is MoveKind.ENTRY_FLIP:
            seqs[m.a].append(("d", m.b))
        else:
            seqs[m.a].append(("to", m.b))
            seqs[m.b].append(("from", m.a))
    return tuple(tuple(s) for s in seqs)


def enumerate_geodesic_moves(result: BfsResult, limit: int | None = None) -> Iterator[list[SearchMove]]:
    """Stream distinct shortest move sequences to the target, deduplicated by
    per-ancilla touch sequences.  Deterministic order; the canonical geodesic
    comes first."""
    seen: set[tuple] = set()
    emitted = 0
    # Depth-first over predecessors; the path is built back-to-front.
    stack: list[tuple[int, list[SearchMove]]] = [(result.target, [])]
    while stack:
        state, suffix = stack.pop()
        d = int(result.dist[state])
        if d == 0:
            key = _touch_key(suffix)
            if key not in seen:
                seen.add(key)
                emitted += 1
                yield list(suffix)
                if limit is not None and emitted >= limit:
                    return
            continue
        # Push in reverse so the first move in canonical order is explored first.
        for move in reversed(MOVES):
            nxt = move.apply(state)
            if result.dist[nxt] == d - 1:
                stack.append((nxt, [move] + suffix))


def enumerate_geodesics(result: BfsResult, limit: int | None = None) -> Iterator[Circuit]:
    for moves in enumerate_geodesic_moves(result, limit):
        yield extract_circuit(moves)


# ---------------------------------------------------------------------------
# flag search


class FlagOrientation(Enum):
    """Coupling direction of the flag gadget.  The flag qubit is always reset
    and measured in the basis conjugate to the syndrome ancillas; only the
    CNOT direction is searched (both are tried)."""

    FLAG_TO_ANCILLA = "flag-to-ancilla"  # CX flag -> ancilla
    ANCILLA_TO_FLAG = "ancilla-to-flag"  # CX ancilla -> flag


@dataclass(frozen=True)
class FlagPlacement:
    """Flag couplings at (gap, ancilla) positions of a base move sequence.

    Gap g sits after base move g-1 and before base move g (gap == len(moves)
    is after the last move); couplings sharing a gap execute in slot order,
    all before the gap's base move.
    """

    orientation: FlagOrientation
    slots: tuple[tuple[int, int], ...]


@dataclass
class FlagSearchResult:
    base_moves: list[SearchMove]
    min_extra: int | None  # None when nothing was found within max_extra
    witness: Circuit | None
    placement: FlagPlacement | None
    dangerous_count: int


@dataclass(frozen=True)
class _ZFault:
    """Single ancilla-Z fault of the bare move sequence: injected on `row` at
    `gap` (before that gap's couplings and base move), with the data-Z mask
    it deposits by the end."""

    row: int
    gap: int
    residual: int


def _z_coset_reps() -> np.ndarray:
    """Minimum-weight representative of every 7-bit Z mask modulo the Z-type
    stabilizer rows, ties broken by smaller mask."""
    products = [0]
    for row in STEANE_H.rows:
        products += [p ^ row for p in products]
    reps = np.empty(128, dtype=np.int16)
    for m in range(128):
        reps[m] = min((m ^ p for p in products), key=lambda v: (v.bit_count(), v))
    return reps


_Z_REP = _z_coset_reps()


def _z_fault_scan(
    moves: list[SearchMove],
) -> tuple[list[_ZFault], dict[tuple[int, int], dict[int, int]]]:
    """Every (ancilla row, gap) Z fault with its deposited data mask, plus the
    ancilla support it occupies at each later gap.

    A Z on a row-add target toggles a copy of itself on the control row; a Z
    on an entry-flip target toggles a copy on that data qubit.  Support at
    gap g is taken before the gap's couplings and move execute, so the fault
    injected at gap g is read by couplings from gap g onward.
    """
    n = len(moves)
    faults: list[_ZFault] = []
    supports: dict[tuple[int, int], dict[int, int]] = {}
    for row in range(N_ROWS):
        for gap in range(n + 1):
            support = 1 << row
            residual = 0
            traj: dict[int, int] = {}
            for g in range(gap, n + 1):
                traj[g] = support
                if g == n:
                    break
                m = moves[g]
                if m.kind is MoveKind.ENTRY_FLIP:
                    if support >> m.a & 1:
                        residual ^= 1 << m.b
                elif support >> m.b & 1:
                    support ^= 1 << m.a
            faults.append(_ZFault(row, gap, residual))
            supports[(row, gap)] = traj
    return faults, supports


def _dangerous_z_faults(
    moves: list[SearchMove],
) -> tuple[list[_ZFault], dict[tuple[int, int], dict[int, int]]]:
    """Ancilla-Z faults whose deposited error reduces to weight exactly two:
    the requirement set of the flag search.  (The fault audit's broader
    weight >= 2 criterion is re-checked on any chosen primary circuit.)"""
    faults, supports = _z_fault_scan(moves)
    dangerous = [f for f in faults if int(_Z_REP[f.residual]).bit_count() == 2]
    return dangerous, supports


def dangerous_coset_reps(moves: list[SearchMove]) -> frozenset[int]:
    """Reduced representatives of the weight-two data errors a single
    ancilla-Z fault can deposit through the bare move sequence."""
    dangerous, _ = _dangerous_z_faults(moves)
    return frozenset(int(_Z_REP[f.residual]) for f in dangerous)


def _coverage_masks(
    dangerous: list[_ZFault],
    supports: dict[tuple[int, int], dict[int, int]],
    n_moves: int,
) -> tuple[dict[tuple[int, int], int], dict[tuple[int, int], int]]:
    """Per-slot bitmasks over the dangerous faults.

    read[slot]: faults the coupling reads strictly after their injection
    gap.  kill[slot]: faults injected in the coupling's own gap that it
    would read; the sibling fault injected just behind the coupling shares
    the residual but loses that one read, so the two parities can never both
    be odd and any such slot disqualifies a placement.
    """
    read: dict[tuple[int, int], int] = {}
    kill: dict[tuple[int, int], int] = {}
    for gap in range(n_moves + 1):
        for anc in range(N_ROWS):
            r = k = 0
            for i, f in enumerate(dangerous):
                sup = supports[(f.row, f.gap)].get(gap)
                if sup is None or not sup >> anc & 1:
                    continue
                if gap == f.gap:
                    k |= 1 << i
                else:
                    r |= 1 << i
            read[(gap, anc)] = r
            kill[(gap, anc)] = k
    return read, kill


def _parity_covers(
    combo: tuple[tuple[int, int], ...],
    read: dict[tuple[int, int], int],
    kill: dict[tuple[int, int], int],
    full: int,
) -> bool:
    acc = 0
    for slot in combo:
        if kill[slot]:
            return False
        acc ^= read[slot]
    return acc == full


def _placement_deterministic(moves: list[SearchMove], slots: tuple[tuple[int, int], ...]) -> bool:
    """Fast mirror of the circuit validator's pullback for flag-to-ancilla
    couplings: the flag observable must shed every ancilla-X factor it picks
    up at the couplings (a leftover anticommutes with that ancilla's reset),
    and each syndrome observable must pick up the flag-Z factor an even
    number of times (a leftover anticommutes with the conjugate flag reset).
    Row additions shuttle the factors between ancillas on the way back."""
    by_gap: dict[int, list[int]] = {}
    for gap, anc in slots:
        by_gap.setdefault(gap, []).append(anc)
    n = len(moves)
    events: list[tuple[int, object]] = []  # (0, ancilla) coupling | (1, move)
    for g in range(n + 1):
        events.extend((0, a) for a in by_gap.get(g, ()))
        if g < n:
            events.append((1, moves[g]))

    anc_x = 0  # ancilla-X support of the flag observable, walked backward
    for tag, payload in reversed(events):
        if tag == 0:
            anc_x ^= 1 << payload  # type: ignore[operator]
        elif payload.kind is MoveKind.ROW_ADD and anc_x >> payload.a & 1:  # type: ignore[union-attr]
            anc_x ^= 1 << payload.b  # type: ignore[union-attr]
    if anc_x:
        return False

    for i in range(N_ROWS):
        anc_z = 1 << i  # ancilla-Z support of syndrome observable i
        flag_z = 0
        for tag, payload in reversed(events):
            if tag == 0:
                flag_z ^= anc_z >> payload & 1  # type: ignore[operator]
            elif payload.kind is MoveKind.ROW_ADD and anc_z >> payload.b & 1:  # type: ignore[union-attr]
                anc_z ^= 1 << payload.a  # type: ignore[union-attr]
        if flag_z:
            return False
    return True


def build_flagged_circuit(
    moves: list[SearchMove], placement: FlagPlacement, register: QubitRegister | None = None
) -> Circuit:
    """Insert flag-coupling CNOTs into a base move sequence and rebuild the
    circuit, revalidating determinism from scratch."""
    register = register or QubitRegister(N_COLS, N_ROWS, 1)
    flag = register.flag(0)
    instrs: list[Instruction] = [reset_z(register.ancilla(i)) for i in range(N_ROWS)]
    instrs.append(reset_x(flag))
    by_gap: dict[int, list[int]] = {}
    for gap, anc in placement.slots:
        by_gap.setdefault(gap, []).append(anc)
    for g in range(len(moves) + 1):
        for anc in by_gap.get(g, ()):
            a = register.ancilla(anc)
            if placement.orientation is FlagOrientation.FLAG_TO_ANCILLA:
                instrs.append(cnot(flag, a))
            else:
                instrs.append(cnot(a, flag))
        if g < len(moves):
            instrs.append(moves[g].to_cnot(register))
    instrs += [measure_z(register.ancilla(i), f"b{i}") for i in range(N_ROWS)]
    instrs.append(measure_x(flag, "flag0"))
    return schedule(register, Basis.X, instrs)


def _as_moves(base: Circuit | list[SearchMove]) -> list[SearchMove]:
    return moves_from_circuit(base) if isinstance(base, Circuit) else list(base)


def min_flag_cnots(
    base: Circuit | list[SearchMove],
    max_extra: int = 3,
    require_full_ft: bool = False,
) -> FlagSearchResult:
    """Smallest number of flag-coupling insertions after which every
    dangerous ancilla-Z fault flips the flag, with a validated witness.

    Placements are enumerated over all time positions for k = 1..max_extra
    couplings and both gadget orientations, cheapest filters first: parity
    coverage, then pullback determinism, then a rebuild of the real circuit
    (full validation) with every dangerous fault re-verified to flip the
    flag through the fault enumeration.  With require_full_ft the witness
    must additionally pass the complete fault-tolerance audit with its
    derived decoder.  The first passing candidate in deterministic order
    (k, orientation, slot lexicographic) is returned.

    A CX(ancilla -> flag) coupling never hands the ancilla's Z factor to the
    flag (a CNOT control keeps its Z), so that orientation reads nothing
    dangerous and survives only the m = 0 case; it is filtered analytically
    rather than rebuilt per candidate.
    """
    moves = _as_moves(base)
    dangerous, supports = _dangerous_z_faults(moves)
    if not dangerous:
        witness = base if isinstance(base, Circuit) else None
        placement = FlagPlacement(FlagOrientation.FLAG_TO_ANCILLA, ())
        return FlagSearchResult(moves, 0, witness, placement, 0)

    from . import faults as _faults  # deferred: faults builds on this module

    n = len(moves)
    read, kill = _coverage_masks(dangerous, supports, n)
    full = (1 << len(dangerous)) - 1
    slots = sorted(read)
    for k in range(1, max_extra + 1):
        for orientation in FlagOrientation:
            if orientation is FlagOrientation.ANCILLA_TO_FLAG:
                continue  # cannot receive ancilla-Z; see docstring
            for combo in itertools.combinations(slots, k):
                if not _parity_covers(combo, read, kill, full):
                    continue
                if not _placement_deterministic(moves, combo):
                    continue
                placement = FlagPlacement(orientation, combo)
                try:
                    circuit = build_flagged_circuit(moves, placement)
                except CircuitValidationError:  # pragma: no cover - prefiltered
                    continue
                if not _faults.flags_all_dangerous(circuit):
                    continue
                if require_full_ft and not _full_ft_ok(moves, circuit):
                    continue
                return FlagSearchResult(moves, k, circuit, placement, len(dangerous))
    return FlagSearchResult(moves, None, None, None, len(dangerous))


def _full_ft_ok(moves: list[SearchMove], primary: Circuit) -> bool:
    from .circuit import dualize
    from .decoder import DecoderBuildError, build_remap
    from .faults import audit_unflagged_decode, verify_ft_conditions

    recovery = dualize(extract_circuit(moves))
    try:
        tables = build_remap(primary, recovery)
    except DecoderBuildError:
        return False
    if not verify_ft_conditions(primary, recovery, tables).ok:
        return False
    return not audit_unflagged_decode(primary, tables)
