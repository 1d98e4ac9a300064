"""End-to-end tests of the `steane-se` command-line tool.

Every test drives `cli.main` in-process so exit codes, stdout, and stderr
are asserted exactly as a shell user would see them.  The contract under
test: exit 0 on success, 1 for invalid configuration, 2 when a
fault-tolerance audit fails; CSV outputs carry a `# steane-se schema=1`
metadata line and are byte-identical for any thread count.
"""

from __future__ import annotations

import json
import re

import pytest

from steane_se import cli
from steane_se import montecarlo as mc
from steane_se.circuit import Basis, parse, serialize
from steane_se.reference import load_reference
from steane_se.search import moves_from_circuit


def run_cli(capsys, argv):
    rc = cli.main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def csv_lines(out):
    """Split CLI CSV output into (metadata line, header, data rows)."""
    lines = out.splitlines()
    assert lines[0].startswith("# steane-se schema=1 config=")
    config = json.loads(lines[0].split("config=", 1)[1])
    return config, lines[1], lines[2:]


class TestDecode:
    def test_worked_example(self, capsys):
        rc, out, _ = run_cli(capsys, ["decode", "--basis", "Z", "--bits", "011"])
        assert rc == 0
        assert out.strip() == (
            "raw bits (0,1,1) -> syndrome (1,0,1) -> correct qubit 4 (Z4)"
        )

    def test_remap_table_used_after_flag(self, capsys):
        rc, out, _ = run_cli(
            capsys, ["decode", "--basis", "Z", "--bits", "001", "--remap"]
        )
        assert rc == 0
        assert out.strip() == (
            "raw bits (0,0,1) -> syndrome (0,1,0) -> correct qubits 1,2 (Z1.Z2)"
        )

    def test_first_readout_bit_maps_to_qubit_2(self, capsys):
        rc, out, _ = run_cli(capsys, ["decode", "--basis", "X", "--bits", "100"])
        assert rc == 0
        assert out.strip() == (
            "raw bits (1,0,0) -> syndrome (1,1,0) -> correct qubit 2 (X2)"
        )

    def test_trivial_bits_lowercase_basis(self, capsys):
        rc, out, _ = run_cli(capsys, ["decode", "--basis", "x", "--bits", "000"])
        assert rc == 0
        assert out.strip().endswith("no correction (I)")

    @pytest.mark.parametrize("bits", ["21", "0110", "01", "abc"])
    def test_malformed_bits_exit_1(self, capsys, bits):
        rc, _, err = run_cli(capsys, ["decode", "--basis", "Z", "--bits", bits])
        assert rc == 1
        assert "steane-se: error:" in err


class TestVerifyFt:
    def test_both_bases_pass(self, capsys):
        rc, out, _ = run_cli(capsys, ["verify-ft"])
        assert rc == 0
        for fragment in ("(i)", "(ii)(a)", "(ii)(b)"):
            assert fragment in out
        assert out.count("PASS") == 8  # 3 conditions + 1 audit, per basis
        assert "FAIL" not in out
        assert "primary basis X" in out
        assert "primary basis Z" in out

    def test_single_basis_selection(self, capsys):
        rc, out, _ = run_cli(capsys, ["verify-ft", "--basis", "X"])
        assert rc == 0
        assert out.count("PASS") == 4
        assert "primary basis Z" not in out

    def test_failed_audit_exits_2(self, capsys, monkeypatch):
        # Force the operational audit to report a bad fault so the
        # failure branch (exit code 2, FAIL marker) is exercised.
        monkeypatch.setattr(cli, "audit_unflagged_decode", lambda *a, **k: [object()])
        rc, out, _ = run_cli(capsys, ["verify-ft", "--basis", "Z"])
        assert rc == 2
        assert "FAIL" in out


class TestExitCodes:
    def test_unknown_subcommand_exits_1(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["frobnicate"])
        assert exc.value.code == 1
        assert "error" in capsys.readouterr().err

    def test_missing_subcommand_exits_1(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main([])
        assert exc.value.code == 1

    def test_help_lists_every_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["--help"])
        assert exc.value.code == 0
        out = capsys.readouterr().out
        for name in ("decode", "verify-ft", "simulate", "sweep-p", "sweep-cycles",
                     "derive", "derive-decoder", "search-min-cnot", "search-flags"):
            assert name in out

    def test_conflicting_noise_styles_exit_1(self, capsys):
        rc, _, err = run_cli(capsys, [
            "simulate", "--p-phys", "1e-3", "--p2", "1e-3",
            "--cycles", "1", "--shots", "10", "--seed", "1",
        ])
        assert rc == 1
        assert "pick one style" in err

    def test_bad_threads_env_exit_1(self, capsys, monkeypatch):
        monkeypatch.setenv("STEANE_SE_THREADS", "four")
        rc, _, err = run_cli(capsys, [
            "simulate", "--cycles", "1", "--shots", "10",
            "--p-phys", "1e-3", "--seed", "1",
        ])
        assert rc == 1
        assert "STEANE_SE_THREADS" in err


SIM_ARGS = ["simulate", "--cycles", "1", "--shots", "300",
            "--p-phys", "2e-3", "--seed", "11"]


class TestSimulateCsv:
    def test_metadata_header_and_row(self, capsys):
        rc, out, err = run_cli(capsys, SIM_ARGS + ["--threads", "1"])
        assert rc == 0
        assert err == ""  # explicit seed: nothing announced
        config, header, rows = csv_lines(out)
        assert header == mc.CSV_HEADER
        assert len(rows) == 1
        assert config["command"] == "simulate"
        assert config["seed"] == 11
        assert config["cycles"] == 1
        assert config["shots"] == 300
        assert "threads" not in config
        assert list(config) == sorted(config)
        fields = rows[0].split(",")
        assert fields[:3] == [repr(2e-3), "1", "300"]
        assert fields[9] == "11"
        assert fields[10] == "per-extraction-cycle;basis_order=ZX"

    def test_byte_identical_across_thread_counts(self, capsys):
        args = ["simulate", "--cycles", "2", "--shots", "2000",
                "--p-phys", "3e-3", "--seed", "7"]
        _, out1, _ = run_cli(capsys, args + ["--threads", "1"])
        _, out4, _ = run_cli(capsys, args + ["--threads", "4"])
        assert out1 == out4

    def test_env_var_sets_thread_count(self, capsys, monkeypatch):
        _, ref, _ = run_cli(capsys, SIM_ARGS + ["--threads", "1"])
        monkeypatch.setenv("STEANE_SE_THREADS", "3")
        rc, out, _ = run_cli(capsys, SIM_ARGS)
        assert rc == 0
        assert out == ref

    def test_out_file_matches_stdout(self, capsys, tmp_path):
        _, ref, _ = run_cli(capsys, SIM_ARGS + ["--threads", "1"])
        path = tmp_path / "point.csv"
        rc, out, _ = run_cli(capsys, SIM_ARGS + ["--threads", "1", "--out", str(path)])
        assert rc == 0
        assert out == ""
        assert path.read_text(encoding="utf-8") == ref

    def test_missing_seed_drawn_and_announced(self, capsys):
        args = ["simulate", "--cycles", "1", "--shots", "100",
                "--p-phys", "1e-3", "--threads", "1"]
        rc, out, err = run_cli(capsys, args)
        assert rc == 0
        match = re.search(r"seed=(\d+) \(drawn randomly; pass --seed \1", err)
        assert match is not None
        # Replaying with the announced seed reproduces the run exactly.
        rc2, out2, err2 = run_cli(capsys, args + ["--seed", match.group(1)])
        assert rc2 == 0 and err2 == ""
        assert out2 == out

    def test_basis_order_recorded(self, capsys):
        rc, out, _ = run_cli(
            capsys, SIM_ARGS + ["--threads", "1", "--basis-order", "XZ"]
        )
        assert rc == 0
        config, _, rows = csv_lines(out)
        assert config["basis_order"] == "XZ"
        assert rows[0].endswith("per-extraction-cycle;basis_order=XZ")


class TestSweeps:
    def test_sweep_p_explicit_grid(self, capsys):
        rc, out, _ = run_cli(capsys, [
            "sweep-p", "--p", "0.001,0.002", "--cycles", "1",
            "--shots", "200", "--seed", "5", "--threads", "1",
        ])
        assert rc == 0
        config, header, rows = csv_lines(out)
        assert header == mc.CSV_HEADER
        assert config["p_grid"] == [0.001, 0.002]
        assert [r.split(",")[0] for r in rows] == ["0.001", "0.002"]

    def test_sweep_p_zero_noise_row(self, capsys):
        rc, out, _ = run_cli(capsys, [
            "sweep-p", "--p", "0", "--cycles", "1",
            "--shots", "50", "--seed", "2", "--threads", "1",
        ])
        assert rc == 0
        _, _, rows = csv_lines(out)
        fields = rows[0].split(",")
        assert fields[3] == "0"      # failures
        assert fields[6] == "0.0"    # p_l

    def test_sweep_p_rejects_rate_above_half(self, capsys):
        rc, _, err = run_cli(capsys, [
            "sweep-p", "--p", "0.6", "--shots", "10", "--seed", "1",
        ])
        assert rc == 1
        assert "steane-se: error:" in err

    def test_sweep_cycles_rows_and_config(self, capsys):
        rc, out, _ = run_cli(capsys, [
            "sweep-cycles", "--n", "1,2", "--shots", "200",
            "--seed", "3", "--threads", "1",
        ])
        assert rc == 0
        config, _, rows = csv_lines(out)
        assert config["n_grid"] == [1, 2]
        assert config["noise"] == {"p2": 1e-3, "p_spam": 1e-3, "p_mem": 1e-4}
        assert [r.split(",")[1] for r in rows] == ["1", "2"]

    def test_sweep_cycles_rejects_unsorted_grid(self, capsys):
        rc, _, err = run_cli(capsys, [
            "sweep-cycles", "--n", "2,1", "--shots", "10", "--seed", "1",
        ])
        assert rc == 1
        assert "steane-se: error:" in err


class TestDeriveDecoder:
    def test_reference_tables_x(self, capsys):
        rc, out, _ = run_cli(capsys, ["derive-decoder", "--basis", "X"])
        assert rc == 0
        assert out.splitlines()[0] == "standard (X-type corrections)"
        assert "(0,1,0) -> Z1.Z2" in out
        assert "(1,0,0) -> Z2.Z5" in out
        assert sum(line.startswith("  *") for line in out.splitlines()) == 2

    def test_reference_tables_z_are_duals(self, capsys):
        rc, out, _ = run_cli(capsys, ["derive-decoder", "--basis", "Z"])
        assert rc == 0
        assert "standard (Z-type corrections)" in out
        assert "X1.X2" in out
        assert "X2.X5" in out

    def test_from_circuit_files_matches_reference(self, capsys, tmp_path):
        pair = load_reference()
        primary = tmp_path / "primary.circ"
        recovery = tmp_path / "recovery.circ"
        primary.write_text(serialize(pair.primary(Basis.X)), encoding="utf-8")
        recovery.write_text(serialize(pair.recovery_after(Basis.X)), encoding="utf-8")
        _, ref_out, _ = run_cli(capsys, ["derive-decoder", "--basis", "X"])
        rc, out, _ = run_cli(capsys, [
            "derive-decoder", "--primary", str(primary), "--recovery", str(recovery),
        ])
        assert rc == 0
        assert out == ref_out

    def test_primary_without_recovery_exit_1(self, capsys, tmp_path):
        rc, _, err = run_cli(capsys, ["derive-decoder", "--primary", "x.circ"])
        assert rc == 1
        assert "together" in err

    def test_unreadable_file_exit_1(self, capsys, tmp_path):
        rc, _, err = run_cli(capsys, [
            "derive-decoder",
            "--primary", str(tmp_path / "missing.circ"),
            "--recovery", str(tmp_path / "missing2.circ"),
        ])
        assert rc == 1
        assert "steane-se: error:" in err


class TestSearchMinCnot:
    def test_distance_reachability_geodesic(self, capsys):
        rc, out, _ = run_cli(capsys, ["search-min-cnot"])
        assert rc == 0
        assert "minimum CNOTs to accumulate the full check matrix: 11" in out
        assert "all 2097152 states reachable: yes" in out
        cx_lines = [l for l in out.splitlines() if l.startswith("  CX ")]
        assert len(cx_lines) == 11
        for line in cx_lines:
            assert re.fullmatch(r"  CX (d[0-6]|a[0-2]) a[0-2]", line)

    def test_circuit_flag_prints_schedule(self, capsys):
        rc, out, _ = run_cli(capsys, ["search-min-cnot", "--circuit"])
        assert rc == 0
        assert "register data=7 ancilla=3 flag=0 basis=X" in out


class TestSearchFlags:
    def test_standard_bases_exceed_two_couplings(self, capsys):
        rc, out, _ = run_cli(capsys, ["search-flags", "--limit", "2",
                                      "--max-extra", "2"])
        assert rc == 0
        lines = out.splitlines()
        assert lines[0].startswith("base       m(C)")
        assert re.fullmatch(r"0\s+> 2", lines[1])
        assert re.fullmatch(r"1\s+> 2", lines[2])
        assert "global minimum over 2 bases: > 2" in out

    def test_canonical_base_reaches_three_and_emits_witness(
        self, capsys, monkeypatch, tmp_path
    ):
        # Point the enumeration at the shipped minimal base so the
        # witness-writing path runs without scanning the whole space.
        pair = load_reference()
        moves = moves_from_circuit(pair.bare_x)
        monkeypatch.setattr(cli, "enumerate_geodesic_moves",
                            lambda result, limit: iter([moves]))
        out_dir = tmp_path / "witnesses"
        rc, out, _ = run_cli(capsys, [
            "search-flags", "--limit", "1", "--max-extra", "3",
            "--require-full-ft", "--compact-readout",
            "--emit-circuits", str(out_dir),
        ])
        assert rc == 0
        assert "global minimum over 1 bases: 3" in out
        path = out_dir / "base00000_m3.circ"
        assert path.exists()
        witness = parse(path.read_text(encoding="utf-8"))
        flagged = pair.flagged_x
        assert witness.register == flagged.register
        assert witness.basis == flagged.basis
        assert witness.syndrome_map == flagged.syndrome_map
        assert len(witness.layers) == len(flagged.layers)
        for got, want in zip(witness.layers, flagged.layers):
            assert set(got) == set(want)
