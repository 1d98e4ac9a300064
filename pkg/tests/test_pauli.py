"""Pauli frame algebra, the stabilizer group, and coset reduction."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from steane_se.pauli import (
    DATA7,
    PauliClass,
    PauliFormatError,
    PauliOperator,
    QubitRegister,
    commutes,
    reduce_mod_stabilizers,
    steane_group,
    syndrome_of,
)

Z = lambda *qs: PauliOperator(DATA7, 0, sum(1 << (q - 1) for q in qs))  # noqa: E731
X = lambda *qs: PauliOperator(DATA7, sum(1 << (q - 1) for q in qs), 0)  # noqa: E731

masks7 = st.integers(min_value=0, max_value=127)


def pauli7(x: int, z: int) -> PauliOperator:
    return PauliOperator(DATA7, x, z)


class TestAlgebra:
    def test_square_is_identity(self):
        assert (Z(2) * Z(2)).is_identity

    def test_product_with_stabilizer_collapses_weight(self):
        s5 = Z(2, 3, 5, 6)
        assert Z(2, 3, 5) * s5 == Z(6)

    def test_x_times_z_is_y_on_same_qubit(self):
        y3 = X(3) * Z(3)
        assert y3.letter_at(2) == "Y"
        assert y3.weight == 1

    def test_weight_counts_nonidentity_sites(self):
        assert Z(2, 5).weight == 2
        assert PauliOperator.identity().weight == 0

    @given(masks7, masks7, masks7, masks7)
    def test_product_commutative_and_associative(self, x1, z1, x2, z2):
        a, b = pauli7(x1, z1), pauli7(x2, z2)
        assert a * b == b * a
        assert (a * b) * a == a * (b * a)

    @given(masks7, masks7)
    def test_self_inverse(self, x, z):
        assert (pauli7(x, z) * pauli7(x, z)).is_identity

    @given(masks7, masks7, masks7, masks7)
    def test_commutes_symmetric(self, x1, z1, x2, z2):
        a, b = pauli7(x1, z1), pauli7(x2, z2)
        assert commutes(a, b) == commutes(b, a)

    @given(masks7, masks7)
    def test_text_roundtrip(self, x, z):
        p = pauli7(x, z)
        assert PauliOperator.from_text(p.to_text()) == p

    def test_text_examples(self):
        assert Z(2, 5).to_text() == "Z2.Z5"
        assert (X(3) * Z(3)).to_text() == "Y3"
        assert PauliOperator.identity().to_text() == "I"
        assert PauliOperator.from_text("Z2.Z5") == Z(2, 5)

    def test_from_text_rejects_garbage(self):
        for bad in ("Z0", "Q3", "Z8", "Z2.Q5", ""):
            with pytest.raises(PauliFormatError):
                PauliOperator.from_text(bad)

    def test_single_uses_zero_based_qubit_index(self):
        assert PauliOperator.single("Z", 1) == Z(2)
        assert PauliOperator.single("X", 6).to_text() == "X7"


class TestCommutation:
    def test_stabilizers_commute_across_types(self):
        s1 = X(1, 2, 3, 4)
        s4 = Z(1, 2, 3, 4)
        assert commutes(s4, s1)

    def test_anticommuting_singles(self):
        assert not commutes(Z(1), X(1))

    def test_single_z_against_overlapping_x_stabilizer(self):
        assert not commutes(Z(4), X(1, 2, 3, 4))

    def test_group_generators_mutually_commute(self):
        gens = steane_group().generators
        assert all(commutes(a, b) for a in gens for b in gens)


class TestStabilizerGroup:
    def test_group_has_64_elements(self):
        elements = steane_group().elements()
        assert len(elements) == 64
        assert len(set(elements)) == 64

    def test_every_element_has_zero_syndrome(self):
        for e in steane_group().elements():
            assert syndrome_of(e) == (0, 0)

    def test_logicals_commute_with_group_and_each_other_anticommute(self):
        g = steane_group()
        for s in g.generators:
            assert commutes(g.logical_x, s)
            assert commutes(g.logical_z, s)
        assert not commutes(g.logical_x, g.logical_z)


class TestReduction:
    def test_stabilizer_multiple_reduces_to_weight_one(self):
        red = reduce_mod_stabilizers(Z(2, 3, 5))
        assert red.min_weight_rep == Z(6)
        assert not red.pauli_class.is_logical

    def test_weight_two_logical_z(self):
        red = reduce_mod_stabilizers(Z(2, 5))
        assert red.pauli_class is PauliClass.LOGICAL_Z
        assert red.min_weight_rep.weight == 2

    def test_weight_two_pair_from_first_check_row(self):
        red = reduce_mod_stabilizers(Z(1, 2))
        assert red.pauli_class is PauliClass.LOGICAL_Z
        assert red.min_weight_rep.weight == 2

    def test_identity_and_stabilizers_reduce_to_identity_class(self):
        assert (
            reduce_mod_stabilizers(PauliOperator.identity()).pauli_class
            is PauliClass.IDENTITY
        )
        for s in steane_group().generators:
            red = reduce_mod_stabilizers(s)
            assert red.pauli_class is PauliClass.STABILIZER
            assert red.min_weight_rep.weight == 0

    def test_single_errors_reduce_to_themselves(self):
        for q in range(1, 8):
            for make in (Z, X):
                red = reduce_mod_stabilizers(make(q))
                assert red.min_weight_rep == make(q)
                assert not red.pauli_class.is_logical

    @given(masks7, masks7)
    def test_rep_stays_in_the_coset(self, x, z):
        p = pauli7(x, z)
        red = reduce_mod_stabilizers(p)
        assert red.min_weight_rep * p in steane_group().elements()

    @given(masks7, masks7)
    def test_rep_weight_is_minimal(self, x, z):
        p = pauli7(x, z)
        rep = reduce_mod_stabilizers(p).min_weight_rep
        assert all(rep.weight <= (p * s).weight for s in steane_group().elements())


class TestRegister:
    def test_layout_and_names(self):
        reg = QubitRegister(7, 3, 1)
        assert reg.n_total == 11
        assert reg.name(0) == "d0"
        assert reg.name(7) == "a0"
        assert reg.name(10) == "f0"
        assert reg.parse_name("a2") == 9
        assert reg.parse_name("f0") == 10

    def test_parse_name_rejects_unknown(self):
        reg = QubitRegister(7, 3, 0)
        for bad in ("f0", "d7", "a3", "x1", "d-1"):
            with pytest.raises((ValueError, IndexError)):
                reg.parse_name(bad)
