"""Circuit IR: scheduling, validation, duality, and the text format."""

from __future__ import annotations

import pytest

from steane_se.circuit import (
    Basis,
    Circuit,
    CircuitParseError,
    CircuitValidationError,
    InstrKind,
    cnot,
    dualize,
    from_layers,
    measure_z,
    parse,
    reset_z,
    schedule,
    serialize,
)
from steane_se.noise import run_deterministic_fault
from steane_se.pauli import PauliOperator, QubitRegister
from steane_se.tables import STEANE_H, CheckMatrix

REG = QubitRegister(7, 3, 0)


def direct_readout_instructions():
    """Sequential extraction measuring the three standard check rows."""
    ins = [reset_z(REG.ancilla(i)) for i in range(3)]
    for i, row in enumerate(STEANE_H.rows):
        for q in range(7):
            if row >> q & 1:
                ins.append(cnot(q, REG.ancilla(i)))
    for i in range(3):
        ins.append(measure_z(REG.ancilla(i), f"b{i}"))
    return ins


class TestSchedule:
    def test_disjoint_instructions_share_a_layer(self):
        c = schedule(REG, Basis.X, direct_readout_instructions())
        assert len(c.layers[0]) == 3  # all three resets coalesce
        assert any(
            sum(ins.kind is InstrKind.CNOT for ins in layer) >= 2 for layer in c.layers
        )

    def test_same_qubit_instructions_serialize(self):
        c = schedule(REG, Basis.X, direct_readout_instructions())
        assert c.depth < 1 + c.cnot_count + 1  # strictly better than sequential
        for layer in c.layers:
            touched = [q for ins in layer for q in ins.qubits]
            assert len(touched) == len(set(touched))

    def test_per_qubit_order_preserved(self):
        ins = direct_readout_instructions()
        c = schedule(REG, Basis.X, ins)
        placed = {}
        for li, layer in enumerate(c.layers):
            for i in layer:
                for q in i.qubits:
                    assert placed.get(q, -1) < li
                    placed[q] = li

    def test_direct_readout_has_identity_map(self):
        c = schedule(REG, Basis.X, direct_readout_instructions())
        assert c.syndrome_map.to_standard == CheckMatrix.identity(3)
        assert c.syndrome_map.measured == STEANE_H

    def test_empty_instruction_list_rejected(self):
        with pytest.raises(CircuitValidationError):
            schedule(REG, Basis.X, [])


class TestValidation:
    def test_missing_reset_rejected(self, pair):
        bare = pair.bare_x
        layers = tuple(
            tuple(ins for ins in layer if not (ins.kind is InstrKind.RESET_Z and ins.qubits == (7,)))
            for layer in bare.layers
        )
        with pytest.raises(CircuitValidationError, match="before reset"):
            from_layers(bare.register, bare.basis, layers)

    def test_data_reset_rejected(self, pair):
        bare = pair.bare_x
        layers = ((reset_z(0),),) + bare.layers
        with pytest.raises(CircuitValidationError, match="never reset"):
            from_layers(bare.register, bare.basis, layers)

    def test_use_after_measurement_rejected(self, pair):
        bare = pair.bare_x
        layers = bare.layers + ((cnot(5, 7),),)
        with pytest.raises(CircuitValidationError, match="after measurement"):
            from_layers(bare.register, bare.basis, layers)

    def test_layer_qubit_overlap_rejected(self, pair):
        bare = pair.bare_x
        layers = (bare.layers[0], (cnot(0, 7), cnot(1, 7))) + bare.layers[1:]
        with pytest.raises(CircuitValidationError, match="twice"):
            from_layers(bare.register, bare.basis, layers)

    def test_wrong_cnot_direction_rejected(self, pair):
        bare = pair.bare_x
        layers = (bare.layers[0], (cnot(7, 0),)) + bare.layers[1:]
        with pytest.raises(CircuitValidationError, match="not allowed"):
            from_layers(bare.register, bare.basis, layers)

    def test_double_reset_rejected(self, pair):
        bare = pair.bare_x
        layers = (bare.layers[0], (reset_z(7),)) + bare.layers[1:]
        with pytest.raises(CircuitValidationError, match="reset twice"):
            from_layers(bare.register, bare.basis, layers)

    def test_unmeasured_ancilla_rejected(self, pair):
        bare = pair.bare_x
        layers = tuple(
            tuple(ins for ins in layer if ins.out != "b1") for layer in bare.layers
        )
        layers = tuple(layer for layer in layers if layer)
        with pytest.raises(CircuitValidationError, match="never measured"):
            from_layers(bare.register, bare.basis, layers)

    def test_rank_deficient_readout_rejected(self):
        # Two ancillas read the same check row: raw bits cannot be solved back.
        ins = [reset_z(REG.ancilla(i)) for i in range(3)]
        for i, row in enumerate((15, 15, 108)):
            for q in range(7):
                if row >> q & 1:
                    ins.append(cnot(q, REG.ancilla(i)))
        for i in range(3):
            ins.append(measure_z(REG.ancilla(i), f"b{i}"))
        with pytest.raises(CircuitValidationError, match="measured rows unusable"):
            schedule(REG, Basis.X, ins)


class TestDualize:
    def test_involution(self, pair):
        for c in (pair.flagged_x, pair.bare_x):
            assert dualize(dualize(c)) == c

    def test_dual_swaps_basis_and_keeps_counts(self, pair):
        dual = dualize(pair.bare_x)
        assert dual.basis is Basis.Z
        assert dual.cnot_count == pair.bare_x.cnot_count
        assert dual.depth == pair.bare_x.depth
        assert dual.syndrome_map == pair.bare_x.syndrome_map

    def test_canonical_z_circuits_are_the_duals(self, pair):
        assert pair.bare_z == dualize(pair.bare_x)
        assert pair.flagged_z == dualize(pair.flagged_x)

    def test_dual_diagnoses_the_opposite_error_type(self, pair):
        x_err = PauliOperator.single("X", 3)
        z_err = PauliOperator.single("Z", 3)
        bits_x, _, _ = run_deterministic_fault(pair.bare_x, None, x_err)
        bits_z, _, _ = run_deterministic_fault(pair.bare_z, None, z_err)
        assert bits_x == bits_z != 0
        # and each circuit is blind to the other type
        blind, _, _ = run_deterministic_fault(pair.bare_x, None, z_err)
        assert blind == 0


class TestNoiselessReadout:
    def test_every_single_data_error_reads_its_column(self, pair):
        for circ, letter in ((pair.flagged_x, "X"), (pair.flagged_z, "Z")):
            for q in range(7):
                e = PauliOperator.single(letter, q)
                bits, flags, _ = run_deterministic_fault(circ, None, e)
                syndrome = circ.syndrome_map.to_standard.mul_vec(bits)
                assert syndrome == STEANE_H.column(q)
                assert flags == 0

    def test_flag_never_fires_on_any_data_error(self, pair):
        for q in range(7):
            for letter in "XYZ":
                e = PauliOperator.single(letter, q)
                _, flags, _ = run_deterministic_fault(pair.flagged_x, None, e)
                assert flags == 0


class TestTextFormat:
    def test_roundtrip_canonical_circuits(self, pair):
        for c in (pair.flagged_x, pair.bare_x, pair.flagged_z, pair.bare_z):
            assert parse(serialize(c)) == c
            assert serialize(parse(serialize(c))) == serialize(c)

    def test_serialized_map_section_is_the_transform(self, pair):
        text = serialize(pair.bare_x)
        tail = text.strip().splitlines()[-3:]
        assert tail == pair.bare_x.syndrome_map.to_standard.to_strings()

    def test_parse_reports_line_numbers(self):
        text = "register data=7 ancilla=3 flag=0 basis=X\nBADOP a0\n"
        with pytest.raises(CircuitParseError, match="line 2") as exc:
            parse(text)
        assert exc.value.line_no == 2

    def test_parse_rejects_duplicate_register(self):
        text = (
            "register data=7 ancilla=3 flag=0 basis=X\n"
            "register data=7 ancilla=3 flag=0 basis=X\n"
        )
        with pytest.raises(CircuitParseError, match="line 2: duplicate register"):
            parse(text)

    def test_parse_requires_register_first(self):
        with pytest.raises(CircuitParseError, match="line 1"):
            parse("RZ a0\n")

    def test_parse_rejects_empty_layer(self):
        text = "register data=7 ancilla=3 flag=0 basis=X\nRZ a0\n---\n---\n"
        with pytest.raises(CircuitParseError, match="empty layer"):
            parse(text)

    def test_parse_rejects_malformed_cnot(self):
        text = "register data=7 ancilla=3 flag=0 basis=X\nCX d0\n"
        with pytest.raises(CircuitParseError, match="line 2"):
            parse(text)

    def test_parse_rejects_missing_register(self):
        with pytest.raises(CircuitParseError, match="missing register"):
            parse("# just a comment\n")

    def test_parse_rejects_stale_map(self, pair):
        text = serialize(pair.bare_x)
        lines = text.strip().splitlines()
        lines[-3:] = ["100", "010", "001"]  # claims identity; instructions say otherwise
        with pytest.raises(CircuitParseError, match="disagrees"):
            parse("\n".join(lines) + "\n")

    def test_parse_ignores_comments_and_blanks(self, pair):
        text = serialize(pair.bare_x)
        noisy = "# header comment\n\n" + text.replace("\nmap\n", "\n# mid comment\nmap\n")
        assert parse(noisy) == pair.bare_x

    def test_structural_properties(self, pair):
        c = pair.flagged_x
        assert c.cnot_count == 14
        assert c.depth == 11
        assert pair.bare_x.cnot_count == 11
        assert c.syndrome_slots == ("b0", "b1", "b2")
        assert c.flag_slots == ("flag0",)
        assert pair.bare_x.flag_slots == ()


class TestDirectConstruction:
    def test_dataclass_bypass_allows_toy_circuits(self):
        # Validation lives in the builders; the frozen dataclass itself can
        # host deliberately tiny circuits for targeted fault probes.
        reg = QubitRegister(1, 1, 0)
        identity1 = CheckMatrix.identity(1)
        from steane_se.tables import SyndromeMapSpec

        toy = Circuit(
            reg,
            Basis.X,
            ((reset_z(1),), (cnot(0, 1),), (measure_z(1, "b0"),)),
            SyndromeMapSpec(identity1, identity1),
        )
        assert toy.cnot_count == 1
        assert toy.depth == 3
