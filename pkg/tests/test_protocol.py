"""The adaptive cycle: flag-gated branch selection, forced-fault soundness,
and the vectorized engine's equivalence to the scalar path."""

from __future__ import annotations

import pytest

from steane_se.circuit import Basis
from steane_se.decoder import DecoderTables, standard_table
from steane_se.faults import dangerous_faults, iter_fault_effects
from steane_se.noise import ZERO_NOISE, NoiseParams
from steane_se.pauli import PauliClass, PauliOperator
from steane_se.protocol import (
    ChunkCounts,
    CycleBranch,
    CycleOutcome,
    run_cycle,
    run_experiment,
    simulate_chunk,
)


def effects_with_residual(circuit, text):
    target = PauliOperator.from_text(text)
    return [e for e in iter_fault_effects(circuit) if e.residual_data == target]


class TestStandardBranch:
    def test_noiseless_z4_decodes_through_compact_readout(self, pair):
        e = PauliOperator.single("Z", 3)
        outcome, frame = run_cycle(Basis.Z, e, ZERO_NOISE, seed=0, pair=pair)
        assert outcome.branch is CycleBranch.STANDARD
        assert not outcome.flag_raised
        assert outcome.bits == 0b110  # raw (0,1,1): the worked example
        assert outcome.applied_correction == e
        assert frame.is_identity

    def test_noiseless_identity_applies_nothing(self, pair):
        for basis in (Basis.X, Basis.Z):
            outcome, frame = run_cycle(
                basis, PauliOperator.identity(), ZERO_NOISE, seed=0, pair=pair
            )
            assert outcome.branch is CycleBranch.STANDARD
            assert outcome.applied_correction.is_identity
            assert frame.is_identity

    def test_every_single_error_of_the_diagnosed_type_is_repaired(self, pair):
        for basis, letter in ((Basis.X, "X"), (Basis.Z, "Z")):
            for q in range(7):
                e = PauliOperator.single(letter, q)
                outcome, frame = run_cycle(basis, e, ZERO_NOISE, seed=0, pair=pair)
                assert outcome.applied_correction == e
                assert frame.is_identity

    def test_unflagged_branch_never_consults_remap(self, pair, tables_x):
        poisoned = DecoderTables(
            basis=Basis.X,
            standard=tables_x.standard,
            remap={s: PauliOperator.single("Z", 0) for s in range(8)},
        )
        for q in range(7):
            e = PauliOperator.single("X", q)
            clean = run_cycle(Basis.X, e, ZERO_NOISE, seed=0, pair=pair, tables=tables_x)
            dirty = run_cycle(Basis.X, e, ZERO_NOISE, seed=0, pair=pair, tables=poisoned)
            assert clean == dirty


class TestRecoveryBranch:
    def test_forced_dangerous_fault_is_fully_corrected(self, pair):
        hits = effects_with_residual(pair.flagged_x, "Z2.Z5")
        assert hits
        outcome, frame = run_cycle(
            Basis.X, PauliOperator.identity(), ZERO_NOISE, seed=0,
            pair=pair, fault=hits[0].location,
        )
        assert outcome.flag_raised
        assert outcome.branch is CycleBranch.RECOVERY
        assert outcome.applied_correction.to_text() == "Z2.Z5"
        assert frame.is_identity

    def test_flagged_branch_ignores_primary_bits(self, pair):
        # Faults sharing a residual but flipping different primary readout
        # bits must decode identically: the flagged branch discards them.
        hits = effects_with_residual(pair.flagged_x, "Z2.Z5")
        assert len({e.bit_flips for e in hits}) > 1
        outcomes = set()
        for e in hits:
            outcome, frame = run_cycle(
                Basis.X, PauliOperator.identity(), ZERO_NOISE, seed=0,
                pair=pair, fault=e.location,
            )
            outcomes.add((outcome.branch, outcome.applied_correction, frame))
        assert len(outcomes) == 1

    def test_recovery_without_remap_leaves_logical_damage(self, pair):
        hits = effects_with_residual(pair.flagged_x, "Z2.Z5")
        outcome, frame = run_cycle(
            Basis.X, PauliOperator.identity(), ZERO_NOISE, seed=0,
            pair=pair, fault=hits[0].location, use_remap=False,
        )
        assert outcome.flag_raised
        assert not frame.is_identity  # mis-corrected into the Z2.Z5 coset

    def test_branch_flag_consistency_enforced(self):
        with pytest.raises(ValueError):
            CycleOutcome(True, CycleBranch.STANDARD, PauliOperator.identity(), 0)


class TestExperiment:
    def test_noiseless_experiment_is_silent(self, pair):
        rec = run_experiment(4, ZERO_NOISE, seed=0, pair=pair)
        assert rec.final_class is PauliClass.IDENTITY
        assert not rec.failed
        assert rec.flags_raised == 0
        assert rec.n_cycles == 4

    def test_cycle_zero_basis_follows_the_order_string(self, pair):
        z_fault = dangerous_faults(pair.flagged_z)[0].location
        x_fault = dangerous_faults(pair.flagged_x)[0].location
        rec_zx = run_experiment(
            2, ZERO_NOISE, seed=0, pair=pair, basis_order="ZX", forced_fault=(0, z_fault)
        )
        rec_xz = run_experiment(
            2, ZERO_NOISE, seed=0, pair=pair, basis_order="XZ", forced_fault=(0, x_fault)
        )
        assert rec_zx.flags_raised == 1
        assert rec_xz.flags_raised == 1

    def test_rejects_bad_cycle_count_and_order(self, pair):
        with pytest.raises(ValueError):
            run_experiment(0, ZERO_NOISE, seed=0, pair=pair)
        with pytest.raises(ValueError):
            run_experiment(1, ZERO_NOISE, seed=0, pair=pair, basis_order="QQ")

    def test_every_forced_single_fault_is_harmless_with_remap(self, pair):
        # The end-to-end restatement of the audit: any one internal fault in
        # an otherwise noiseless run never produces a logical error.
        c = pair.primary(Basis.Z)  # cycle 0 under the default order
        for effect in iter_fault_effects(c):
            rec = run_experiment(
                2, ZERO_NOISE, seed=0, pair=pair, forced_fault=(0, effect.location)
            )
            assert not rec.failed, effect.location

    def test_dangerous_faults_break_the_protocol_without_remap(self, pair):
        c = pair.primary(Basis.Z)
        failures = 0
        for effect in dangerous_faults(c):
            rec = run_experiment(
                2, ZERO_NOISE, seed=0, pair=pair,
                forced_fault=(0, effect.location), use_remap=False,
            )
            failures += rec.failed
        assert failures > 0


class TestChunkEngine:
    def test_chunk_counts_add(self):
        a = ChunkCounts(10, 1, 1, 0, 3)
        b = ChunkCounts(5, 2, 1, 1, 0)
        assert a + b == ChunkCounts(15, 3, 2, 1, 3)

    def test_vectorized_engine_matches_scalar_shots(self, pair):
        noise = NoiseParams(p2=3e-3, p_spam=3e-3, p_mem=3e-4)
        n, cycles, seed = 512, 4, 6
        counts = simulate_chunk(0, n, cycles, noise, seed, basis_order="ZX",
                                use_remap=True, pair=pair)
        scalar = ChunkCounts()
        for shot in range(n):
            rec = run_experiment(cycles, noise, seed, pair=pair, shot=shot)
            scalar += ChunkCounts(1, rec.failed, rec.fail_z, rec.fail_x, rec.flags_raised)
        assert counts == scalar
        assert counts.shots == n

    def test_flags_do_fire_under_noise(self, pair):
        counts = simulate_chunk(0, 2048, 2, NoiseParams(5e-3, 5e-3, 5e-4), 1,
                                basis_order="ZX", use_remap=True, pair=pair)
        assert counts.flags_raised > 0
