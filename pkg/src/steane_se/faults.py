"""Exhaustive single-fault enumeration and propagation through a circuit.

Faults are Pauli errors injected at circuit sites: after any gate (all 15
nontrivial two-qubit patterns on a CNOT), after any reset, and before any
measurement (which subsumes classical readout flips for terminal
measurements: the post-measurement state is discarded, so an anticommuting
Pauli right before the readout is exactly a bit flip).

Propagation tracks the Pauli frame relative to the noiseless run, which is
exact for Clifford circuits: X copies forward through a CNOT from control to
target, Z copies backward from target to control, resets erase the frame on
their qubit, and a measurement outcome flips when the frame on the measured
qubit anticommutes with the readout basis.  The data-register remainder is
classified modulo the stabilizer group; a fault is dangerous when no
stabilizer multiple brings it down to weight one, which is precisely when
the standard weight-one decoder would misidentify it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from .circuit import Basis, Circuit, InstrKind, dualize
from .pauli import (
    PauliOperator,
    QubitRegister,
    Reduction,
    reduce_mod_stabilizers,
)
from .tables import STEANE_H, CheckMatrix


class InvalidFaultLocation(ValueError):
    """Raised when a fault location does not match the circuit."""


class FaultSite(Enum):
    AFTER_GATE = "after-gate"
    AFTER_RESET = "after-reset"
    BEFORE_MEASURE = "before-measure"


_SITE_OF_KIND = {
    InstrKind.CNOT: FaultSite.AFTER_GATE,
    InstrKind.RESET_Z: FaultSite.AFTER_RESET,
    InstrKind.RESET_X: FaultSite.AFTER_RESET,
    InstrKind.MEASURE_Z: FaultSite.BEFORE_MEASURE,
    InstrKind.MEASURE_X: FaultSite.BEFORE_MEASURE,
}

SINGLE_PAULIS = ("X", "Y", "Z")
# All 15 nontrivial two-qubit patterns, control letter first.
PAIR_PAULIS = tuple(
    a + b for a in "IXYZ" for b in "IXYZ" if (a, b) != ("I", "I")
)


@dataclass(frozen=True)
class FaultLocation:
    """One injected Pauli at one circuit position.

    `index` is the flattened instruction index (layer order, then in-layer
    order); `layer` and `qubits` are carried redundantly for reporting.  The
    pauli string has one letter per site qubit: a single letter for resets
    and measurements, control letter then target letter for a CNOT (with
    "I" allowed on one side).
    """

    layer: int
    site: FaultSite
    qubits: tuple[int, ...]
    pauli: str
    index: int

    def describe(self, register: QubitRegister) -> str:
        spot = ":".join(register.name(q) for q in self.qubits)
        return f"layer {self.layer} {self.site.value} {spot} {self.pauli}"


@dataclass(frozen=True)
class FaultEffect:
    """Where a single fault ends up: the data-register remainder, which raw
    syndrome bits flipped (bit i = slot b_i), whether any flag flipped, and
    the remainder's classification modulo stabilizers."""

    location: FaultLocation
    residual_data: PauliOperator
    bit_flips: int
    flag_flip: bool
    class_after_reduction: Reduction

    @property
    def reduced_weight(self) -> int:
        return self.class_after_reduction.min_weight_rep.weight


def enumerate_fault_locations(c: Circuit) -> list[FaultLocation]:
    """Deterministically ordered fault set covering every circuit site."""
    locations: list[FaultLocation] = []
    n_cnots = n_singles = 0
    for index, (layer, ins) in enumerate(_flat(c)):
        site = _SITE_OF_KIND[ins.kind]
        if ins.kind is InstrKind.CNOT:
            n_cnots += 1
            paulis: tuple[str, ...] = PAIR_PAULIS
        else:
            n_singles += 1
            paulis = SINGLE_PAULIS
        locations.extend(
            FaultLocation(layer, site, ins.qubits, p, index) for p in paulis
        )
    # Completeness: a CNOT carries five single-Pauli slots (15 = 3 x 5 pair
    # patterns), a reset or measurement carries one; three Pauli choices per
    # slot cover every fault the depolarizing + readout model can produce.
    assert len(locations) == 3 * (5 * n_cnots + n_singles)
    return locations


def _flat(c: Circuit) -> list[tuple[int, object]]:
    return [(no, ins) for no, layer in enumerate(c.layers) for ins in layer]


_XY = {"X": True, "Y": True, "Z": False, "I": False}
_ZY = {"Z": True, "Y": True, "X": False, "I": False}


def _walk(
    c: Circuit,
    data_frame: PauliOperator | None = None,
    fault: FaultLocation | None = None,
) -> tuple[int, int, PauliOperator]:
    """Forward Pauli-frame pass: returns (syndrome-bit mask, flag-bit mask,
    final frame on the full register).

    The incoming frame covers data qubits; the optional fault injects its
    Pauli at the located site (after the instruction for gates and resets,
    before it for measurements).
    """
    reg = c.register
    x = data_frame.x_bits if data_frame else 0
    z = data_frame.z_bits if data_frame else 0
    if data_frame and (x | z) & ~reg.data_mask:
        raise ValueError("incoming frame must be supported on data qubits")
    bits = 0
    flags = 0
    hit = False
    for index, (_, ins) in enumerate(_flat(c)):
        inject = fault is not None and fault.index == index
        if inject:
            if (
                _SITE_OF_KIND.get(ins.kind) is not fault.site
                or ins.qubits != fault.qubits
                or len(fault.pauli) != len(ins.qubits)
            ):
                raise InvalidFaultLocation(
                    f"{fault} does not match instruction {index} ({ins.kind.value})"
                )
            hit = True
        if inject and fault.site is FaultSite.BEFORE_MEASURE:
            x, z = _inject(x, z, fault)
        if ins.kind is InstrKind.CNOT:
            c_q, t_q = ins.control, ins.target
            if x >> c_q & 1:
                x ^= 1 << t_q
            if z >> t_q & 1:
                z ^= 1 << c_q
        elif ins.kind in (InstrKind.RESET_Z, InstrKind.RESET_X):
            q = ins.qubits[0]
            x &= ~(1 << q)
            z &= ~(1 << q)
        else:
            q = ins.qubits[0]
            flipped = x >> q & 1 if ins.kind is InstrKind.MEASURE_Z else z >> q & 1
            if flipped:
                if ins.out.startswith("flag"):
                    flags |= 1 << int(ins.out[4:])
                else:
                    bits |= 1 << int(ins.out[1:])
        if inject and fault.site is not FaultSite.BEFORE_MEASURE:
            x, z = _inject(x, z, fault)
    if fault is not None and not hit:
        raise InvalidFaultLocation(f"instruction index {fault.index} out of range")
    return bits, flags, PauliOperator(reg, x, z)


def _inject(x: int, z: int, fault: FaultLocation) -> tuple[int, int]:
    for q, letter in zip(fault.qubits, fault.pauli):
        if _XY[letter]:
            x ^= 1 << q
        if _ZY[letter]:
            z ^= 1 << q
    return x, z


def propagate(c: Circuit, f: FaultLocation) -> FaultEffect:
    """Push one fault through the rest of the circuit and classify it."""
    bits, flags, frame = _walk(c, fault=f)
    residual = frame.restricted_to_data()
    return FaultEffect(
        location=f,
        residual_data=residual,
        bit_flips=bits,
        flag_flip=bool(flags),
        class_after_reduction=reduce_mod_stabilizers(residual),
    )


def iter_fault_effects(c: Circuit) -> Iterator[FaultEffect]:
    for loc in enumerate_fault_locations(c):
        yield propagate(c, loc)


def dangerous_faults(c: Circuit) -> list[FaultEffect]:
    """Single faults whose data remainder keeps weight >= 2 after reduction:
    exactly the ones a weight-one standard decoder misidentifies."""
    return [e for e in iter_fault_effects(c) if e.reduced_weight >= 2]


def _is_single_ancilla_z(reg: QubitRegister, loc: FaultLocation) -> bool:
    live = [
        (q, p) for q, p in zip(loc.qubits, loc.pauli) if p != "I"
    ]
    if len(live) != 1 or live[0][1] != "Z":
        return False
    q = live[0][0]
    return reg.n_data <= q < reg.n_data + reg.n_ancilla


def flags_all_dangerous(c: Circuit) -> bool:
    """Does every dangerous single ancilla-Z fault flip the flag?  This is
    the flag search's acceptance check, run on the real circuit."""
    for e in iter_fault_effects(c):
        if (
            _is_single_ancilla_z(c.register, e.location)
            and e.reduced_weight >= 2
            and not e.flag_flip
        ):
            return False
    return True


# ---------------------------------------------------------------------------
# fault-tolerance conditions


@dataclass
class FtReport:
    """Outcome of the three-part fault-tolerance audit, with counterexamples.

    condition_i:   every single data error, extracted noiselessly in both
                   bases and decoded, returns the state to the codespace.
    condition_iia: every unflagged single internal fault leaves a data
                   remainder of reduced weight <= 1.
    condition_iib: every flagged single internal fault, followed by a
                   noiseless recovery run decoded with the remap table, is
                   fully corrected in the recovery basis with at most a
                   weight-one remainder of the opposite type.
    """

    condition_i: bool
    condition_iia: bool
    condition_iib: bool
    counterexamples_i: list[str]
    counterexamples_iia: list[FaultLocation]
    counterexamples_iib: list[FaultLocation]
    n_data_errors: int
    n_faults: int
    n_flagged: int

    @property
    def ok(self) -> bool:
        return self.condition_i and self.condition_iia and self.condition_iib

    def to_text(self, register: QubitRegister) -> str:
        lines = [
            _verdict_line(
                "(i)     single data errors corrected",
                self.condition_i,
                f"{self.n_data_errors} errors",
            ),
            *(f"    fails for data error {t}" for t in self.counterexamples_i),
            _verdict_line(
                "(ii)(a) unflagged faults reduce to weight <= 1",
                self.condition_iia,
                f"{self.n_faults - self.n_flagged} unflagged of {self.n_faults}",
            ),
            *(
                f"    fails for {loc.describe(register)}"
                for loc in self.counterexamples_iia
            ),
            _verdict_line(
                "(ii)(b) flagged faults corrected by recovery",
                self.condition_iib,
                f"{self.n_flagged} flagged",
            ),
            *(
                f"    fails for {loc.describe(register)}"
                for loc in self.counterexamples_iib
            ),
        ]
        return "\n".join(lines)


def _verdict_line(label: str, ok: bool, detail: str) -> str:
    return f"{label:<52} {'PASS' if ok else 'FAIL'} ({detail})"


def _column_correction(syndrome: int, basis: Basis, check: CheckMatrix = STEANE_H) -> PauliOperator:
    """Standard weight-<=1 decode: the data qubit whose check column equals
    the syndrome, in the error type this basis diagnoses (identity for 0)."""
    if syndrome == 0:
        return PauliOperator.identity()
    for j in range(check.cols):
        if check.column(j) == syndrome:
            letter = "X" if basis is Basis.X else "Z"
            return PauliOperator.single(letter, j)
    raise ValueError(f"syndrome {syndrome:03b} matches no column")


def _standard_syndrome(c: Circuit, bits: int) -> int:
    return c.syndrome_map.to_standard.mul_vec(bits)


def _split_types(p: PauliOperator) -> tuple[PauliOperator, PauliOperator]:
    """(X-type part, Z-type part) on the same register."""
    return (
        PauliOperator(p.register, p.x_bits, 0),
        PauliOperator(p.register, 0, p.z_bits),
    )


def verify_ft_conditions(primary: Circuit, recovery: Circuit, decoder) -> FtReport:
    """Audit the protocol's three fault-tolerance conditions exhaustively.

    `decoder` provides the tables derived for this primary/recovery pair:
    `standard[s]` corrections in the primary's basis and `remap[s]`
    corrections in the recovery's basis (duck-typed to avoid a cycle with
    the decoder module, which builds its tables from this module's output).
    """
    bad_i: list[str] = []
    dual_primary = dualize(primary)
    n_data_errors = 0
    for q in range(primary.register.n_data):
        for letter in SINGLE_PAULIS:
            n_data_errors += 1
            e = PauliOperator.single(letter, q)
            frame = e
            for circ in (primary, dual_primary):
                bits, flags, out = _walk(circ, _on_register(frame, circ.register))
                if flags:
                    bad_i.append(f"{e.to_text()} (spurious flag)")
                    break
                corr = _column_correction(_standard_syndrome(circ, bits), circ.basis)
                frame = frame * corr
            else:
                if reduce_mod_stabilizers(frame).min_weight_rep.weight > 0:
                    bad_i.append(e.to_text())

    bad_iia: list[FaultLocation] = []
    bad_iib: list[FaultLocation] = []
    n_faults = n_flagged = 0
    for effect in iter_fault_effects(primary):
        n_faults += 1
        if not effect.flag_flip:
            if effect.reduced_weight > 1:
                bad_iia.append(effect.location)
            continue
        n_flagged += 1
        if not _recovery_corrects(effect.residual_data, recovery, decoder):
            bad_iib.append(effect.location)

    return FtReport(
        condition_i=not bad_i,
        condition_iia=not bad_iia,
        condition_iib=not bad_iib,
        counterexamples_i=bad_i,
        counterexamples_iia=bad_iia,
        counterexamples_iib=bad_iib,
        n_data_errors=n_data_errors,
        n_faults=n_faults,
        n_flagged=n_flagged,
    )


def _on_register(p: PauliOperator, register: QubitRegister) -> PauliOperator:
    """Re-host a data-supported Pauli onto a circuit's wider register."""
    return PauliOperator(register, p.x_bits, p.z_bits)


def _recovery_corrects(residual: PauliOperator, recovery: Circuit, decoder) -> bool:
    """Noiseless recovery run + remap decode: the recovery-basis component
    must be fully corrected; the opposite component (untouched by this run)
    must reduce to weight <= 1 so later cycles can finish."""
    bits, flags, _ = _walk(recovery, _on_register(residual, recovery.register))
    if flags:  # the bare recovery circuit has no flag qubit
        return False
    corr = decoder.remap[_standard_syndrome(recovery, bits)]
    post = residual * corr
    x_part, z_part = _split_types(post)
    corrected, leftover = (
        (z_part, x_part) if recovery.basis is Basis.Z else (x_part, z_part)
    )
    if reduce_mod_stabilizers(corrected).min_weight_rep.weight != 0:
        return False
    return reduce_mod_stabilizers(leftover).min_weight_rep.weight <= 1


def audit_unflagged_decode(primary: Circuit, decoder) -> list[FaultLocation]:
    """Stricter-than-(ii)(a) operational audit: apply the standard correction
    the cycle would actually derive from the fault's corrupted bits and
    require both Pauli-type components of the result to reduce to weight
    <= 1 (anything more could defeat the following noiseless cycles).
    Returns the violating locations (empty = sound)."""
    violations: list[FaultLocation] = []
    for effect in iter_fault_effects(primary):
        if effect.flag_flip:
            continue
        corr = decoder.standard[_standard_syndrome(primary, effect.bit_flips)]
        post = effect.residual_data * corr
        x_part, z_part = _split_types(post)
        if (
            reduce_mod_stabilizers(x_part).min_weight_rep.weight > 1
            or reduce_mod_stabilizers(z_part).min_weight_rep.weight > 1
        ):
            violations.append(effect.location)
    return violations
