"""Command-line entry point (`steane-se`): every workflow behind one tool.

Exit codes: 0 on success, 1 for invalid configuration or runtime errors,
2 when a fault-tolerance verification fails.  All randomness flows from
one `--seed`; when the flag is absent a random seed is drawn and printed
so any run can be reproduced.  `--threads` (or the STEANE_SE_THREADS
environment variable) only controls the worker pool — outputs are
byte-identical for any thread count, so thread count is deliberately
left out of the metadata line embedded in CSV outputs.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys
import time
from pathlib import Path

from . import montecarlo as mc
from .circuit import Basis, Circuit, dualize, parse, serialize
from .decoder import (
    DecoderBuildError,
    build_remap,
    decode_standard,
    raw_to_syndrome,
    tables_to_text,
)
from .faults import audit_unflagged_decode, verify_ft_conditions
from .noise import NoiseParams
from .reference import (
    DEFAULT_DANGEROUS_PAIRS,
    derive_reference,
    load_reference,
    reference_tables,
    save_reference,
)
from .search import (
    bfs_min_cnots,
    enumerate_geodesic_moves,
    extract_circuit,
    extract_geodesic,
    min_flag_cnots,
)
from .tables import STEANE_H, LinearAlgebraError, effective_syndrome_map

SCHEMA_VERSION = 1


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad arguments; the contract here is exit 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _threads_default() -> int:
    env = os.environ.get("STEANE_SE_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError as exc:
            raise ValueError(f"STEANE_SE_THREADS={env!r} is not an integer") from exc
        if n < 1:
            raise ValueError("STEANE_SE_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    seed = secrets.randbelow(2**32)
    print(f"seed={seed} (drawn randomly; pass --seed {seed} to reproduce)",
          file=sys.stderr)
    return seed


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _csv_with_metadata(result: mc.SweepResult, config: dict) -> str:
    meta = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return f"# steane-se schema={SCHEMA_VERSION} config={meta}\n" + result.to_csv()


def _parse_bits(text: str) -> int:
    if len(text) != 3 or any(ch not in "01" for ch in text):
        raise ValueError(f"--bits wants three 0/1 characters, got {text!r}")
    return sum(int(ch) << i for i, ch in enumerate(text))


def _bits_tuple(v: int) -> str:
    return f"({v & 1},{v >> 1 & 1},{v >> 2 & 1})"


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _noise_from(args: argparse.Namespace) -> NoiseParams:
    explicit = any(v is not None for v in (args.p2, args.p_spam, args.p_mem))
    if args.p_phys is not None:
        if explicit:
            raise ValueError("--p-phys replaces --p2/--p-spam/--p-mem; pick one style")
        return NoiseParams.from_p_phys(args.p_phys)
    return NoiseParams(
        p2=args.p2 if args.p2 is not None else 0.0,
        p_spam=args.p_spam if args.p_spam is not None else 0.0,
        p_mem=args.p_mem if args.p_mem is not None else 0.0,
    )


def _add_noise_flags(p: argparse.ArgumentParser, *, fixed_defaults: bool) -> None:
    if fixed_defaults:
        p.add_argument("--p2", type=float, default=1e-3,
                       help="two-qubit depolarizing rate (default 1e-3)")
        p.add_argument("--p-spam", type=float, default=1e-3,
                       help="measurement flip rate (default 1e-3)")
        p.add_argument("--p-mem", type=float, default=1e-4,
                       help="idle dephasing rate per layer (default 1e-4)")
    else:
        p.add_argument("--p-phys", type=float, default=None,
                       help="tie p2 = p_spam = p and p_mem = p/10")
        p.add_argument("--p2", type=float, default=None)
        p.add_argument("--p-spam", type=float, default=None)
        p.add_argument("--p-mem", type=float, default=None)


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: drawn randomly and printed)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: STEANE_SE_THREADS or all cores)")
    p.add_argument("--basis-order", default="ZX", choices=("ZX", "XZ"),
                   help="which syndrome type each cycle extracts, repeating")
    p.add_argument("--no-remap", action="store_true",
                   help="decode recovery runs with the standard table (negative control)")
    p.add_argument("--out", default=None, metavar="PATH",
                   help="output file (default: stdout)")


def _basis(text: str) -> Basis:
    return Basis.X if text.upper() == "X" else Basis.Z


# ---------------------------------------------------------------- subcommands


def _cmd_decode(args: argparse.Namespace) -> int:
    basis = _basis(args.basis)
    bits = _parse_bits(args.bits)
    pair = load_reference()
    if args.remap:
        # Bits from a recovery run that followed a flagged primary of the
        # dual basis; the remap table is keyed by standard syndrome.
        tables = reference_tables(basis.dual)
        syndrome = raw_to_syndrome(pair.recovery_after(basis.dual).syndrome_map, bits)
        correction = tables.remap[syndrome]
    else:
        tables = reference_tables(basis)
        syndrome = raw_to_syndrome(pair.primary(basis).syndrome_map, bits)
        correction = decode_standard(tables, syndrome)
    if correction.is_identity:
        verdict = "no correction (I)"
    else:
        qubits = [str(q + 1) for q in range(7) if correction.support >> q & 1]
        noun = "qubit" if len(qubits) == 1 else "qubits"
        verdict = f"correct {noun} {','.join(qubits)} ({correction.to_text()})"
    print(f"raw bits {_bits_tuple(bits)} -> syndrome {_bits_tuple(syndrome)} -> {verdict}")
    return 0


def _cmd_verify_ft(args: argparse.Namespace) -> int:
    pair = load_reference()
    bases = (Basis.X, Basis.Z) if args.basis == "both" else (_basis(args.basis),)
    all_ok = True
    for basis in bases:
        primary = pair.primary(basis)
        recovery = pair.recovery_after(basis)
        tables = reference_tables(basis)
        report = verify_ft_conditions(primary, recovery, tables)
        bad = audit_unflagged_decode(primary, tables)
        print(f"primary basis {basis.value} (+ {basis.dual.value}-basis recovery)")
        print(report.to_text(primary.register))
        label = "operational audit: unflagged standard decode"
        print(f"{label:<52} {'PASS' if not bad else 'FAIL'} ({len(bad)} residuals above weight 1)")
        all_ok = all_ok and report.ok and not bad
    return 0 if all_ok else 2


def _cmd_simulate(args: argparse.Namespace) -> int:
    noise = _noise_from(args)
    seed = _resolve_seed(args)
    point = mc.simulate_point(
        noise,
        args.cycles,
        args.shots,
        seed,
        basis_order=args.basis_order,
        use_remap=not args.no_remap,
        threads=args.threads if args.threads is not None else _threads_default(),
    )
    config = {
        "command": "simulate",
        "noise": {"p2": noise.p2, "p_spam": noise.p_spam, "p_mem": noise.p_mem},
        "cycles": args.cycles,
        "shots": args.shots,
        "seed": seed,
        "basis_order": args.basis_order,
        "use_remap": not args.no_remap,
    }
    _emit(_csv_with_metadata(mc.SweepResult((point,)), config), args.out)
    return 0


def _cmd_sweep_p(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    grid = args.p if args.p is not None else list(mc.DEFAULT_P_GRID)
    result = mc.sweep_physical_rate(
        grid,
        cycles=args.cycles,
        shot_rule=args.shots,
        seed=seed,
        basis_order=args.basis_order,
        use_remap=not args.no_remap,
        threads=args.threads if args.threads is not None else _threads_default(),
        shot_cap=args.shot_cap,
    )
    config = {
        "command": "sweep-p",
        "p_grid": grid,
        "cycles": args.cycles,
        "shots": args.shots,
        "shot_cap": args.shot_cap,
        "seed": seed,
        "basis_order": args.basis_order,
        "use_remap": not args.no_remap,
    }
    _emit(_csv_with_metadata(result, config), args.out)
    return 0


def _cmd_sweep_cycles(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    noise = NoiseParams(p2=args.p2, p_spam=args.p_spam, p_mem=args.p_mem)
    grid = args.n if args.n is not None else list(mc.DEFAULT_CYCLE_GRID)
    result = mc.sweep_cycles(
        grid,
        fixed_noise=noise,
        shots=args.shots,
        seed=seed,
        basis_order=args.basis_order,
        use_remap=not args.no_remap,
        threads=args.threads if args.threads is not None else _threads_default(),
    )
    config = {
        "command": "sweep-cycles",
        "n_grid": grid,
        "noise": {"p2": noise.p2, "p_spam": noise.p_spam, "p_mem": noise.p_mem},
        "shots": args.shots,
        "seed": seed,
        "basis_order": args.basis_order,
        "use_remap": not args.no_remap,
    }
    _emit(_csv_with_metadata(result, config), args.out)
    return 0


def _cmd_derive(args: argparse.Namespace) -> int:
    readout = STEANE_H if args.standard_readout else None
    t0 = time.time()

    def progress(scanned: int, matching: int) -> None:
        if scanned % 2000 == 0:
            print(f"scanned {scanned} minimal bases ({matching} signature matches, "
                  f"{time.time() - t0:.0f}s)", file=sys.stderr)

    pair, info = derive_reference(
        max_extra=args.max_extra,
        progress=progress if args.progress else None,
        readout=readout,
    )
    out_dir = Path(args.out)
    save_reference(pair, out_dir)
    tables_txt = "\n".join(
        tables_to_text(build_remap(pair.primary(b), pair.recovery_after(b)))
        for b in (Basis.X, Basis.Z)
    )
    (out_dir / "decoder-tables.txt").write_text(tables_txt + "\n", encoding="utf-8")
    print(f"scanned {info.bases_scanned} minimal bases; {info.bases_matching} matched "
          f"the dangerous-pair signature {sorted(DEFAULT_DANGEROUS_PAIRS)}")
    print(f"first fully audited witness uses {info.min_extra} flag couplings "
          f"({info.placement.orientation.value} at gap slots {info.placement.slots})")
    print(f"wrote {out_dir}/flagged_x.circ, bare_x.circ, decoder-tables.txt "
          f"in {time.time() - t0:.0f}s")
    return 0


def _cmd_derive_decoder(args: argparse.Namespace) -> int:
    if (args.primary is None) != (args.recovery is None):
        raise ValueError("--primary and --recovery must be given together")
    if args.primary is not None:
        primary = parse(Path(args.primary).read_text(encoding="utf-8"))
        recovery = parse(Path(args.recovery).read_text(encoding="utf-8"))
        tables = build_remap(primary, recovery)
    else:
        tables = reference_tables(_basis(args.basis))
    print(tables_to_text(tables))
    return 0


def _cmd_search_min_cnot(args: argparse.Namespace) -> int:
    result = bfs_min_cnots()
    print(f"minimum CNOTs to accumulate the full check matrix: {result.distance}")
    reachable = (result.dist >= 0).all()
    print(f"all {result.dist.size} states reachable: {'yes' if reachable else 'no'}")
    moves = extract_geodesic(result)
    print("canonical geodesic:")
    circuit = extract_circuit(moves)
    for move in moves:
        ins = move.to_cnot(circuit.register)
        print(f"  CX {circuit.register.name(ins.control)} "
              f"{circuit.register.name(ins.target)}")
    if args.circuit:
        print()
        print(serialize(circuit))
    return 0


def _cmd_search_flags(args: argparse.Namespace) -> int:
    readout = effective_syndrome_map().measured if args.compact_readout else STEANE_H
    result = bfs_min_cnots(target=readout)
    emit_dir = Path(args.emit_circuits) if args.emit_circuits else None
    if emit_dir is not None:
        emit_dir.mkdir(parents=True, exist_ok=True)
    print(f"base       m(C)   (enumeration capped at {args.limit} bases, "
          f"couplings capped at {args.max_extra})")
    best: int | None = None
    n = 0
    for i, moves in enumerate(enumerate_geodesic_moves(result, limit=args.limit)):
        n += 1
        out = min_flag_cnots(moves, max_extra=args.max_extra,
                             require_full_ft=args.require_full_ft)
        if out.min_extra is None:
            print(f"{i:<10d} > {args.max_extra}")
            continue
        print(f"{i:<10d} {out.min_extra}")
        best = out.min_extra if best is None else min(best, out.min_extra)
        if emit_dir is not None and out.witness is not None:
            path = emit_dir / f"base{i:05d}_m{out.min_extra}.circ"
            path.write_text(serialize(out.witness), encoding="utf-8")
    if best is None:
        print(f"global minimum over {n} bases: > {args.max_extra}")
    else:
        print(f"global minimum over {n} bases: {best}")
    return 0


# ----------------------------------------------------------------- main


def _build_parser() -> _Parser:
    parser = _Parser(prog="steane-se", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decode", help="offline decode: raw ancilla bits -> correction")
    p.add_argument("--basis", required=True, choices=("X", "Z", "x", "z"))
    p.add_argument("--bits", required=True,
                   help="three raw readout bits, e.g. 011 (ancilla 0 first)")
    p.add_argument("--remap", action="store_true",
                   help="use the post-flag table (bits from a recovery run)")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("verify-ft", help="exhaustive single-fault audit of the shipped circuits")
    p.add_argument("--basis", default="both", choices=("X", "Z", "both"))
    p.set_defaults(func=_cmd_verify_ft)

    p = sub.add_parser("simulate", help="run one noisy configuration, emit a one-row CSV")
    p.add_argument("--cycles", type=int, default=2)
    p.add_argument("--shots", type=int, default=100_000)
    _add_noise_flags(p, fixed_defaults=False)
    _add_run_flags(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep-p", help="logical error rate vs physical rate (CSV)")
    p.add_argument("--p", type=_float_list, default=None,
                   help="comma-separated physical rates (default: log grid 1e-4..1e-2)")
    p.add_argument("--cycles", type=int, default=2)
    p.add_argument("--shots", type=int, default=None,
                   help="fixed shots per point (default: 20000/p, capped)")
    p.add_argument("--shot-cap", type=int, default=mc.DEFAULT_SHOT_CAP,
                   help="cap on the default shot rule; raise for full-scale runs")
    _add_run_flags(p)
    p.set_defaults(func=_cmd_sweep_p)

    p = sub.add_parser("sweep-cycles", help="logical error rate vs cycle count (CSV)")
    p.add_argument("--n", type=_int_list, default=None,
                   help="comma-separated ascending cycle counts")
    p.add_argument("--shots", type=int, default=200_000)
    _add_noise_flags(p, fixed_defaults=True)
    _add_run_flags(p)
    p.set_defaults(func=_cmd_sweep_cycles)

    p = sub.add_parser("derive", help="re-run the full search and write circuit fixtures")
    p.add_argument("--out", default="derived-circuits", metavar="DIR")
    p.add_argument("--max-extra", type=int, default=3)
    p.add_argument("--standard-readout", action="store_true",
                   help="target ancillae that accumulate the check rows themselves "
                        "(default: the compact readout the shipped circuits use)")
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=_cmd_derive)

    p = sub.add_parser("derive-decoder", help="print the decoder tables as text")
    p.add_argument("--basis", default="X", choices=("X", "Z", "x", "z"))
    p.add_argument("--primary", default=None, metavar="FILE",
                   help="flagged primary circuit file (default: shipped reference)")
    p.add_argument("--recovery", default=None, metavar="FILE",
                   help="bare recovery circuit file, dual basis")
    p.set_defaults(func=_cmd_derive_decoder)

    p = sub.add_parser("search-min-cnot", help="BFS minimality: distance and a canonical geodesic")
    p.add_argument("--circuit", action="store_true",
                   help="also print the scheduled circuit")
    p.set_defaults(func=_cmd_search_min_cnot)

    p = sub.add_parser("search-flags", help="table of minimal flag-coupling counts over minimal bases")
    p.add_argument("--limit", type=int, default=50, metavar="K",
                   help="number of base circuits to scan")
    p.add_argument("--max-extra", type=int, default=3, metavar="M")
    p.add_argument("--require-full-ft", action="store_true",
                   help="count only couplings passing the complete fault-tolerance audit")
    p.add_argument("--compact-readout", action="store_true",
                   help="enumerate bases with the shipped circuits' readout rows "
                        "(default: bases accumulating the check rows themselves)")
    p.add_argument("--emit-circuits", default=None, metavar="DIR",
                   help="write each witness circuit into DIR")
    p.set_defaults(func=_cmd_search_flags)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, LinearAlgebraError, DecoderBuildError, OSError) as exc:
        print(f"steane-se: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
