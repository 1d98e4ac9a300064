"""Pauli-frame simulation and the flag-and-fallback protocol, shot by shot.

The simulator never touches state vectors: for Clifford circuits with
Pauli noise it is exact to track only the accumulated Pauli error (the
frame) and the measurement-bit flips it causes.  Randomness comes from a
counter-based generator keyed by (seed, stream, fault site, chunk), so
any shot can be replayed in isolation and results never depend on thread
count or execution order.
"""

from steane_se.circuit import Basis
from steane_se.faults import dangerous_faults
from steane_se.noise import NoiseParams, ZERO_NOISE, run_noisy
from steane_se.pauli import PauliOperator
from steane_se.protocol import run_cycle, run_experiment
from steane_se.reference import load_reference

pair = load_reference()
circuit = pair.flagged_z
ident = PauliOperator.identity(circuit.register)

# --- single noisy shots are individually addressable -------------------------
noise = NoiseParams(p2=0.05, p_spam=0.0, p_mem=0.0)
print("five independent shots of the flagged circuit at p2 = 0.05:")
for shot in range(5):
    bits, flags, frame = run_noisy(circuit, ident, noise, seed=2024, shot=shot)
    print(f"  shot {shot}: syndrome bits {bits:03b}  flag {flags}  "
          f"residual {frame.restricted_to_data().to_text()}")
print("rerunning any shot with the same seed reproduces it exactly")
print("(weight-4 residuals such as X1.X2.X3.X4 are stabilizer elements:")
print(" logically they are the identity)")

# --- one extraction cycle, both branches -------------------------------------
print("\nnoiseless cycle with a pre-existing Z error on qubit 4:")
outcome, frame_out = run_cycle(
    Basis.Z, PauliOperator.from_text("Z4"), ZERO_NOISE, seed=0, pair=pair
)
print(f"  flag raised: {outcome.flag_raised}  branch: {outcome.branch.name}"
      f"  correction: {outcome.applied_correction.to_text()}"
      f"  frame after: {frame_out.to_text()}")

dangerous = next(iter(dangerous_faults(circuit)))
print("\nsame cycle with a dangerous internal fault forced in:")
outcome, frame_out = run_cycle(
    Basis.Z, PauliOperator.identity(), ZERO_NOISE,
    seed=0, pair=pair, fault=dangerous.location,
)
print(f"  flag raised: {outcome.flag_raised}  branch: {outcome.branch.name}"
      f"  correction: {outcome.applied_correction.to_text()}"
      f"  frame after: {frame_out.to_text()}")
print("  the flag fired, the cycle fell back to the bare recovery circuit,")
print("  and the remapped table repaired the correlated error")

# --- a full experiment --------------------------------------------------------
rec = run_experiment(4, NoiseParams.from_p_phys(2e-3), seed=7, pair=pair)
print(f"\n4-cycle experiment at p_phys = 2e-3 (seed 7): "
      f"failed={bool(rec.failed)}  flags_raised={rec.flags_raised}  "
      f"final_class={rec.final_class.name}")
