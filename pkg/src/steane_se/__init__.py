"""Flag-and-fallback syndrome extraction toolkit for the [[7,1,3]] Steane code.

The package derives, verifies and simulates a compact three-ancilla
syndrome-extraction protocol: an 11-CNOT extraction circuit augmented with
a single flag qubit (14 CNOTs total) whose flag outcome decides between
standard decoding and a bare dual-basis recovery run decoded with a
dynamically remapped table.

Layers, bottom to top:

- `tables`:     GF(2) linear algebra, the check matrix, syndrome transforms
- `pauli`:      Pauli operators, stabilizer reduction, logical classes
- `circuit`:    circuit IR, scheduling, duality, text serialization
- `search`:     BFS CNOT minimality, geodesic enumeration, flag search
- `faults`:     exhaustive single-fault enumeration and the FT audit
- `decoder`:    standard and post-flag (remapped) lookup tables
- `reference`:  the frozen canonical circuit pair and its derivation
- `noise`:      counter-based-RNG Pauli-frame sampler (scalar + batched)
- `protocol`:   the flag-and-fallback cycle and multi-cycle experiments
- `montecarlo`: sweeps, Wilson intervals, the CSV schema
- `cli`:        the `steane-se` command-line tool
"""

from .circuit import Basis, Circuit, dualize, parse, schedule, serialize
from .decoder import (
    DecoderBuildError,
    DecoderTables,
    build_remap,
    decode_standard,
    raw_to_syndrome,
    standard_table,
    tables_to_text,
)
from .faults import (
    FaultEffect,
    FaultLocation,
    FtReport,
    dangerous_faults,
    enumerate_fault_locations,
    flags_all_dangerous,
    iter_fault_effects,
    propagate,
    verify_ft_conditions,
)
from .montecarlo import (
    CSV_HEADER,
    SweepPoint,
    SweepResult,
    fit_loglog_slope,
    simulate_point,
    sweep_cycles,
    sweep_physical_rate,
    wilson_interval,
)
from .noise import CHUNK, ZERO_NOISE, FrameState, NoiseParams, run_deterministic_fault, run_noisy
from .pauli import PauliOperator, QubitRegister, Reduction, reduce_mod_stabilizers, steane_group
from .protocol import ChunkCounts, CycleOutcome, ShotRecord, run_cycle, run_experiment, simulate_chunk
from .reference import (
    DerivationInfo,
    ReferencePair,
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
    moves_from_circuit,
)
from .tables import STEANE_H, CheckMatrix, SyndromeMapSpec, effective_syndrome_map

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "CHUNK",
    "CSV_HEADER",
    "CheckMatrix",
    "ChunkCounts",
    "Circuit",
    "CycleOutcome",
    "DecoderBuildError",
    "DecoderTables",
    "DerivationInfo",
    "FaultEffect",
    "FaultLocation",
    "FrameState",
    "FtReport",
    "NoiseParams",
    "PauliOperator",
    "QubitRegister",
    "Reduction",
    "ReferencePair",
    "STEANE_H",
    "ShotRecord",
    "SweepPoint",
    "SweepResult",
    "SyndromeMapSpec",
    "ZERO_NOISE",
    "bfs_min_cnots",
    "build_remap",
    "dangerous_faults",
    "decode_standard",
    "derive_reference",
    "dualize",
    "effective_syndrome_map",
    "enumerate_fault_locations",
    "enumerate_geodesic_moves",
    "extract_circuit",
    "extract_geodesic",
    "fit_loglog_slope",
    "flags_all_dangerous",
    "iter_fault_effects",
    "load_reference",
    "min_flag_cnots",
    "moves_from_circuit",
    "parse",
    "propagate",
    "raw_to_syndrome",
    "reduce_mod_stabilizers",
    "reference_tables",
    "run_cycle",
    "run_deterministic_fault",
    "run_experiment",
    "run_noisy",
    "save_reference",
    "schedule",
    "serialize",
    "simulate_chunk",
    "simulate_point",
    "standard_table",
    "steane_group",
    "sweep_cycles",
    "sweep_physical_rate",
    "tables_to_text",
    "verify_ft_conditions",
    "wilson_interval",
]
