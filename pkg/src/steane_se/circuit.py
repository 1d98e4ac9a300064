"""Layered Clifford circuit IR for syndrome extraction, with validation.

A circuit is a sequence of layers of non-overlapping instructions drawn from
{reset, CNOT, measure}.  The basis tag names the data-error type the circuit
diagnoses: a basis-X circuit (Z-basis ancillas, data->ancilla CNOTs, MZ
readout) measures Z-type stabilizers and so responds to X data errors; its
dual under `dualize` responds to Z data errors.  Every constructed circuit is
checked to be a deterministic extraction circuit: each measurement, pulled
back to the start of the circuit, must reduce to a product of reset-basis
stabilizers and code stabilizers, which also yields the measured matrix and
the raw-bits -> standard-syndrome transform.

Text format (one instruction per line, `---` between layers):

    register data=7 ancilla=3 flag=1 basis=X
    RZ a0
    RX f0
    ---
    CX d0 a0
    ---
    MZ a0 -> b0
    MX f0 -> flag0
    map
    100
    010
    001

The trailing map section lists the to_standard rows and is cross-checked
against the transform re-derived from the instructions on parse.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Iterator

from .pauli import QubitRegister
from .tables import (
    STEANE_H,
    CheckMatrix,
    LinearAlgebraError,
    SyndromeMapSpec,
    derive_syndrome_map,
)


class Basis(str, Enum):
    """Which data-error type the extracted syndrome diagnoses."""

    Z = "Z"
    X = "X"

    @property
    def dual(self) -> "Basis":
        return Basis.X if self is Basis.Z else Basis.Z


class InstrKind(str, Enum):
    RESET_Z = "RZ"
    RESET_X = "RX"
    CNOT = "CX"
    MEASURE_Z = "MZ"
    MEASURE_X = "MX"


RESETS = (InstrKind.RESET_Z, InstrKind.RESET_X)
MEASURES = (InstrKind.MEASURE_Z, InstrKind.MEASURE_X)


class CircuitValidationError(ValueError):
    """Raised when a circuit violates a structural or determinism rule."""


class CircuitParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class Instruction:
    kind: InstrKind
    qubits: tuple[int, ...]
    out: str | None = None

    def __post_init__(self) -> None:
        want = 2 if self.kind is InstrKind.CNOT else 1
        if len(self.qubits) != want:
            raise ValueError(f"{self.kind.value} takes {want} qubit(s)")
        if self.kind is InstrKind.CNOT and self.qubits[0] == self.qubits[1]:
            raise ValueError("CNOT control equals target")
        if (self.out is not None) != (self.kind in MEASURES):
            raise ValueError("only measurements carry an output slot")

    @property
    def control(self) -> int:
        return self.qubits[0]

    @property
    def target(self) -> int:
        return self.qubits[1]


def reset_z(q: int) -> Instruction:
    return Instruction(InstrKind.RESET_Z, (q,))


def reset_x(q: int) -> Instruction:
    return Instruction(InstrKind.RESET_X, (q,))


def cnot(control: int, target: int) -> Instruction:
    return Instruction(InstrKind.CNOT, (control, target))


def measure_z(q: int, out: str) -> Instruction:
    return Instruction(InstrKind.MEASURE_Z, (q,), out)


def measure_x(q: int, out: str) -> Instruction:
    return Instruction(InstrKind.MEASURE_X, (q,), out)


@dataclass(frozen=True)
class Circuit:
    register: QubitRegister
    basis: Basis
    layers: tuple[tuple[Instruction, ...], ...]
    syndrome_map: SyndromeMapSpec

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def cnot_count(self) -> int:
        return sum(1 for ins in self.instructions() if ins.kind is InstrKind.CNOT)

    def instructions(self) -> Iterator[Instruction]:
        for layer in self.layers:
            yield from layer

    @property
    def syndrome_slots(self) -> tuple[str, ...]:
        return tuple(f"b{i}" for i in range(self.register.n_ancilla))

    @property
    def flag_slots(self) -> tuple[str, ...]:
        return tuple(f"flag{i}" for i in range(self.register.n_flag))


# ---------------------------------------------------------------------------
# construction


def schedule(register: QubitRegister, basis: Basis, instructions: Iterable[Instruction]) -> Circuit:
    """Greedy ASAP layering preserving per-qubit instruction order."""
    instructions = list(instructions)
    if not instructions:
        raise CircuitValidationError("empty instruction list")
    busy = [-1] * register.n_total
    layers: list[list[Instruction]] = []
    for ins in instructions:
        at = 1 + max(busy[q] for q in ins.qubits)
        while len(layers) <= at:
            layers.append([])
        layers[at].append(ins)
        for q in ins.qubits:
            busy[q] = at
    return from_layers(register, basis, tuple(tuple(l) for l in layers))


def from_layers(
    register: QubitRegister, basis: Basis, layers: tuple[tuple[Instruction, ...], ...]
) -> Circuit:
    """Build and fully validate a circuit from an explicit layer structure."""
    _validate_structure(register, basis, layers)
    measured = _measured_matrix(register, basis, layers)
    try:
        syndrome_map = derive_syndrome_map(measured)
    except LinearAlgebraError as exc:
        raise CircuitValidationError(f"measured rows unusable: {exc}") from exc
    return Circuit(register, basis, layers, syndrome_map)


def _role(register: QubitRegister, q: int) -> str:
    return register.name(q)[0]


def _validate_structure(
    register: QubitRegister, basis: Basis, layers: tuple[tuple[Instruction, ...], ...]
) -> None:
    if not layers or all(not layer for layer in layers):
        raise CircuitValidationError("circuit has no instructions")
    # Ancillas hold the syndrome in the basis conjugate to the data-error type
    # being diagnosed; the flag lives in the opposite basis.
    anc_reset = InstrKind.RESET_Z if basis is Basis.X else InstrKind.RESET_X
    anc_meas = InstrKind.MEASURE_Z if basis is Basis.X else InstrKind.MEASURE_X
    flag_reset = InstrKind.RESET_X if basis is Basis.X else InstrKind.RESET_Z
    flag_meas = InstrKind.MEASURE_X if basis is Basis.X else InstrKind.MEASURE_Z

    seen_reset = [False] * register.n_total
    measured = [False] * register.n_total
    used_slots: set[str] = set()

    for layer in layers:
        touched: set[int] = set()
        for ins in layer:
            for q in ins.qubits:
                if q >= register.n_total:
                    raise CircuitValidationError(f"qubit {q} outside register")
                if q in touched:
                    raise CircuitValidationError(
                        f"layer touches qubit {register.name(q)} twice"
                    )
                if measured[q]:
                    raise CircuitValidationError(
                        f"{register.name(q)} used after measurement"
                    )
                touched.add(q)
            if ins.kind in RESETS:
                role = _role(register, ins.qubits[0])
                if role == "d":
                    raise CircuitValidationError("data qubits are never reset")
                want = anc_reset if role == "a" else flag_reset
                if ins.kind is not want:
                    raise CircuitValidationError(
                        f"{register.name(ins.qubits[0])} must use {want.value} in basis {basis.value}"
                    )
                if seen_reset[ins.qubits[0]]:
                    raise CircuitValidationError(
                        f"{register.name(ins.qubits[0])} reset twice"
                    )
                seen_reset[ins.qubits[0]] = True
            elif ins.kind is InstrKind.CNOT:
                pair = _role(register, ins.control) + _role(register, ins.target)
                # Data talks to ancillas only, in the one direction that copies
                # the measured stabilizer type onto the ancilla register.
                data_anc = "da" if basis is Basis.X else "ad"
                if pair not in (data_anc, "aa", "af", "fa"):
                    raise CircuitValidationError(
                        f"CNOT between roles {pair!r} not allowed in basis {basis.value}"
                    )
                for q in ins.qubits:
                    if _role(register, q) != "d" and not seen_reset[q]:
                        raise CircuitValidationError(
                            f"{register.name(q)} used before reset"
                        )
            else:
                role = _role(register, ins.qubits[0])
                if role == "d":
                    raise CircuitValidationError("data qubits are never measured")
                want = anc_meas if role == "a" else flag_meas
                if ins.kind is not want:
                    raise CircuitValidationError(
                        f"{register.name(ins.qubits[0])} must use {want.value} in basis {basis.value}"
                    )
                if not seen_reset[ins.qubits[0]]:
                    raise CircuitValidationError(
                        f"{register.name(ins.qubits[0])} measured before reset"
                    )
                expect = (
                    f"b{ins.qubits[0] - register.n_data}"
                    if role == "a"
                    else f"flag{ins.qubits[0] - register.n_data - register.n_ancilla}"
                )
                if ins.out != expect:
                    raise CircuitValidationError(
                        f"{register.name(ins.qubits[0])} must write slot {expect}, got {ins.out}"
                    )
                if ins.out in used_slots:
                    raise CircuitValidationError(f"output slot {ins.out} written twice")
                used_slots.add(ins.out)
                measured[ins.qubits[0]] = True

    for i in range(register.n_ancilla):
        q = register.ancilla(i)
        if not measured[q]:
            raise CircuitValidationError(f"ancilla a{i} never measured")
    for i in range(register.n_flag):
        q = register.flag(i)
        if not measured[q]:
            raise CircuitValidationError(f"flag f{i} never measured")


def _measured_matrix(
    register: QubitRegister, basis: Basis, layers: tuple[tuple[Instruction, ...], ...]
) -> CheckMatrix:
    """Pull every measurement back to t=0 and check determinism.

    The pulled-back observable may consume Z factors on Z-reset qubits and X
    factors on X-reset qubits (initial-state stabilizers); whatever remains on
    the data register must be a pure product of the measured stabilizer type.
    Flag measurements must pull back to nothing on data: they are pure fault
    detectors and read deterministically 0 on every fault-free run.
    """
    flat: list[Instruction] = [ins for layer in layers for ins in layer]
    rows: dict[int, int] = {}
    for idx, ins in enumerate(flat):
        if ins.kind not in MEASURES:
            continue
        x = 1 << ins.qubits[0] if ins.kind is InstrKind.MEASURE_X else 0
        z = 1 << ins.qubits[0] if ins.kind is InstrKind.MEASURE_Z else 0
        for prior in reversed(flat[:idx]):
            if prior.kind is InstrKind.CNOT:
                c, t = prior.control, prior.target
                if x >> c & 1:
                    x ^= 1 << t
                if z >> t & 1:
                    z ^= 1 << c
            elif prior.kind is InstrKind.RESET_Z:
                q = prior.qubits[0]
                if x >> q & 1:
                    raise CircuitValidationError(
                        f"measurement {ins.out} is nondeterministic: X component "
                        f"reaches {register.name(q)} at its RZ"
                    )
                z &= ~(1 << q)
            elif prior.kind is InstrKind.RESET_X:
                q = prior.qubits[0]
                if z >> q & 1:
                    raise CircuitValidationError(
                        f"measurement {ins.out} is nondeterministic: Z component "
                        f"reaches {register.name(q)} at its RX"
                    )
                x &= ~(1 << q)
            # Prior measurements act as identity: their observables are
            # themselves validated deterministic, so the state stays an
            # eigenstate and the projector does nothing.
        dm = register.data_mask
        if (x | z) & ~dm:
            raise CircuitValidationError(
                f"measurement {ins.out} depends on an unreset non-data qubit"
            )
        if ins.out.startswith("flag"):
            if (x | z) & dm:
                raise CircuitValidationError(
                    f"flag measurement {ins.out} must not measure data, got "
                    f"x={x:07b} z={z:07b}"
                )
            continue
        # Syndrome bit: data part must be the stabilizer type this basis reads.
        row = z & dm if basis is Basis.X else x & dm
        wrong = x & dm if basis is Basis.X else z & dm
        if wrong:
            raise CircuitValidationError(
                f"measurement {ins.out} mixes Pauli types on data"
            )
        rows[int(ins.out[1:])] = row
    ordered = [rows[i] for i in sorted(rows)]
    return CheckMatrix(register.n_data, tuple(ordered))


# ---------------------------------------------------------------------------
# transforms


_DUAL_KIND = {
    InstrKind.RESET_Z: InstrKind.RESET_X,
    InstrKind.RESET_X: InstrKind.RESET_Z,
    InstrKind.MEASURE_Z: InstrKind.MEASURE_X,
    InstrKind.MEASURE_X: InstrKind.MEASURE_Z,
}


def dualize(c: Circuit) -> Circuit:
    """Swap reset/measurement bases and reverse every CNOT.

    The dual circuit extracts the opposite syndrome type; the syndrome map
    carries over unchanged because the X and Z check matrices coincide.
    """
    new_layers = tuple(
        tuple(
            replace(ins, qubits=(ins.target, ins.control))
            if ins.kind is InstrKind.CNOT
            else replace(ins, kind=_DUAL_KIND[ins.kind])
            for ins in layer
        )
        for layer in c.layers
    )
    dual = from_layers(c.register, c.basis.dual, new_layers)
    assert dual.syndrome_map == c.syndrome_map, "self-dual code: map must carry over"
    return dual


# ---------------------------------------------------------------------------
# text format


def serialize(c: Circuit) -> str:
    reg = c.register
    lines = [
        f"register data={reg.n_data} ancilla={reg.n_ancilla} "
        f"flag={reg.n_flag} basis={c.basis.value}"
    ]
    for i, layer in enumerate(c.layers):
        if i:
            lines.append("---")
        for ins in layer:
            if ins.kind is InstrKind.CNOT:
                lines.append(f"CX {reg.name(ins.control)} {reg.name(ins.target)}")
            elif ins.kind in RESETS:
                lines.append(f"{ins.kind.value} {reg.name(ins.qubits[0])}")
            else:
                lines.append(f"{ins.kind.value} {reg.name(ins.qubits[0])} -> {ins.out}")
    lines.append("map")
    lines += c.syndrome_map.to_standard.to_strings()
    return "\n".join(lines) + "\n"


def parse(text: str) -> Circuit:
    register: QubitRegister | None = None
    basis: Basis | None = None
    layers: list[list[Instruction]] = [[]]
    map_rows: list[str] = []
    in_map = False
    saw_register = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if in_map:
            if set(line) - {"0", "1"}:
                raise CircuitParseError(line_no, f"bad map row {line!r}")
            map_rows.append(line)
            continue
        if line.startswith("register"):
            if saw_register:
                raise CircuitParseError(line_no, "duplicate register line")
            try:
                fields = dict(tok.split("=", 1) for tok in line.split()[1:])
                register = QubitRegister(
                    int(fields["data"]), int(fields["ancilla"]), int(fields["flag"])
                )
                basis = Basis(fields["basis"])
            except (KeyError, ValueError) as exc:
                raise CircuitParseError(line_no, f"bad register line: {exc}") from exc
            saw_register = True
            continue
        if register is None:
            raise CircuitParseError(line_no, "register line must come first")
        if line == "---":
            if not layers[-1]:
                raise CircuitParseError(line_no, "empty layer")
            layers.append([])
            continue
        if line == "map":
            in_map = True
            continue
        toks = line.split()
        try:
            kind = InstrKind(toks[0])
        except ValueError:
            raise CircuitParseError(line_no, f"unknown instruction {toks[0]!r}") from None
        try:
            if kind is InstrKind.CNOT:
                if len(toks) != 3:
                    raise ValueError("CX takes two qubits")
                ins = cnot(register.parse_name(toks[1]), register.parse_name(toks[2]))
            elif kind in RESETS:
                if len(toks) != 2:
                    raise ValueError("reset takes one qubit")
                ins = Instruction(kind, (register.parse_name(toks[1]),))
            else:
                if len(toks) != 4 or toks[2] != "->":
                    raise ValueError("measurement syntax: MZ q -> slot")
                ins = Instruction(kind, (register.parse_name(toks[1]),), toks[3])
        except ValueError as exc:
            raise CircuitParseError(line_no, str(exc)) from exc
        layers[-1].append(ins)

    if register is None:
        raise CircuitParseError(1, "missing register line")
    if not layers[-1] and len(layers) > 1:
        layers.pop()
    try:
        circuit = from_layers(register, basis, tuple(tuple(l) for l in layers))
    except CircuitValidationError as exc:
        raise CircuitParseError(0, str(exc)) from exc
    if map_rows:
        stated = CheckMatrix.from_strings(map_rows)
        if stated != circuit.syndrome_map.to_standard:
            raise CircuitParseError(
                0,
                "stored map disagrees with the transform derived from the instructions",
            )
    return circuit
