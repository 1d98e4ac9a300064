"""How few CNOTs can extract a full syndrome?  Breadth-first proof: 11.

The search state is the 3x7 binary matrix of parities accumulated on the
three ancillae.  Moves are the 21 data->ancilla CNOTs plus the 6
ancilla->ancilla CNOTs (which XOR one accumulated row into another).
BFS over all 2^21 states answers the question exactly, and a geodesic
path converts directly into a scheduled, depth-optimized circuit.
"""

from steane_se.circuit import serialize
from steane_se.search import (
    bfs_min_cnots,
    enumerate_geodesic_moves,
    extract_circuit,
    extract_geodesic,
)
from steane_se.tables import STEANE_H, effective_syndrome_map

# --- the exhaustive answer --------------------------------------------------
result = bfs_min_cnots()  # defaults to targeting the check rows themselves
print(f"states explored: {result.dist.size} (all reachable: "
      f"{bool((result.dist >= 0).all())})")
print(f"minimum CNOTs to accumulate H on three ancillae: {result.distance}")

compact = bfs_min_cnots(target=effective_syndrome_map().measured)
print(f"minimum CNOTs for the shipped compact readout:   {compact.distance}")

# --- one geodesic, as a circuit ---------------------------------------------
moves = extract_geodesic(result)
circuit = extract_circuit(moves)
print("\none minimal CNOT sequence:")
for move in moves:
    ins = move.to_cnot(circuit.register)
    print(f"  CX {circuit.register.name(ins.control)} "
          f"{circuit.register.name(ins.target)}")

print(f"\nscheduled into {len(circuit.layers)} layers "
      f"(disjoint gates run in parallel):\n")
print(serialize(circuit))

# --- minimal bases are plentiful --------------------------------------------
n = sum(1 for _ in enumerate_geodesic_moves(result, limit=500))
print(f"the BFS tree yields a stream of distinct minimal bases "
      f"(first {n} enumerated here); the flag search scans these")
print(f"\nrank check: the target rows span the full check space "
      f"(rank {STEANE_H.rank()})")
