"""The frozen reference pair: structure, maps, persistence, cached tables."""

from __future__ import annotations

from steane_se.circuit import Basis, dualize, parse, serialize
from steane_se.reference import (
    DEFAULT_DANGEROUS_PAIRS,
    load_reference,
    reference_tables,
    save_reference,
)
from steane_se.tables import EFFECTIVE_CHECK


class TestShippedPair:
    def test_structure(self, pair):
        assert pair.flagged_x.cnot_count == 14
        assert pair.bare_x.cnot_count == 11
        assert pair.flagged_x.basis is Basis.X
        assert pair.flagged_x.register.n_flag == 1
        assert pair.bare_x.register.n_flag == 0

    def test_z_circuits_are_duals(self, pair):
        assert pair.flagged_z == dualize(pair.flagged_x)
        assert pair.bare_z == dualize(pair.bare_x)

    def test_all_four_share_the_compact_readout_map(self, pair):
        for c in (pair.flagged_x, pair.flagged_z, pair.bare_x, pair.bare_z):
            assert c.syndrome_map.to_standard == EFFECTIVE_CHECK
            assert c.syndrome_map.measured.rows == (99, 108, 57)

    def test_primary_and_recovery_selection(self, pair):
        assert pair.primary(Basis.X) is pair.flagged_x
        assert pair.primary(Basis.Z) is pair.flagged_z
        assert pair.recovery_after(Basis.X) is pair.bare_z
        assert pair.recovery_after(Basis.Z) is pair.bare_x
        for basis in (Basis.X, Basis.Z):
            assert pair.recovery_after(basis).basis is basis.dual

    def test_dangerous_signature_constant(self):
        # Data bitmasks of the qubit pairs {1,2} and {2,5}
        assert DEFAULT_DANGEROUS_PAIRS == frozenset({0b0000011, 0b0010010})

    def test_load_is_cached(self):
        assert load_reference() is load_reference()


class TestPersistence:
    def test_save_then_parse_roundtrip(self, pair, tmp_path):
        save_reference(pair, tmp_path)
        flagged = parse((tmp_path / "flagged_x.circ").read_text())
        bare = parse((tmp_path / "bare_x.circ").read_text())
        assert flagged == pair.flagged_x
        assert bare == pair.bare_x

    def test_serialized_forms_are_stable(self, pair, tmp_path):
        save_reference(pair, tmp_path)
        assert (tmp_path / "flagged_x.circ").read_text() == serialize(pair.flagged_x)


class TestReferenceTables:
    def test_cached_per_basis(self):
        assert reference_tables(Basis.X) is reference_tables(Basis.X)
        assert reference_tables(Basis.X) is not reference_tables(Basis.Z)

    def test_tables_belong_to_their_basis(self, tables_x, tables_z):
        assert tables_x.basis is Basis.X
        assert tables_z.basis is Basis.Z
