"""Check matrix, compact readout, and the worked decode example.

The [[7,1,3]] code measures three X-type and three Z-type parity checks.
A syndrome-extraction circuit does not have to accumulate the check rows
themselves: any invertible combination works, because an invertible
3x3 transform over GF(2) recovers the standard syndrome from the raw
ancilla bits.  The shipped circuits use such a compact readout; this
script shows the linear algebra and decodes one raw readout by hand.
"""

from steane_se.decoder import decode_standard, raw_to_syndrome
from steane_se.reference import load_reference, reference_tables
from steane_se.tables import STEANE_H, effective_syndrome_map
from steane_se.circuit import Basis

# --- the standard check matrix -------------------------------------------
print("standard check matrix H (rows as 7-bit masks, qubit 1 = bit 0):")
for i, row in enumerate(STEANE_H.rows):
    print(f"  row {i}: {row:07b}  qubits {[q + 1 for q in range(7) if row >> q & 1]}")
print(f"rank(H) = {STEANE_H.rank()}")

# Each of the 7 columns is a distinct nonzero 3-bit syndrome, so a single
# data error is located by reading its column index back from the syndrome.
print("\ncolumns (qubit -> syndrome):")
for q in range(7):
    print(f"  qubit {q + 1} -> ({STEANE_H.column(q):03b})")

# --- what the shipped circuits actually measure ---------------------------
spec = effective_syndrome_map()
print("\nshipped circuits accumulate these rows instead (rank "
      f"{spec.measured.rank()}):")
for i, row in enumerate(spec.measured.rows):
    print(f"  ancilla {i}: {row:07b}")
print("raw bits are mapped back by the inverse transform:")
for i, row in enumerate(spec.to_standard.rows):
    print(f"  syndrome bit {i} = parity of raw bits {row:03b}")

# --- decode one readout ----------------------------------------------------
pair = load_reference()
tables = reference_tables(Basis.Z)
raw = 0b110  # ancilla 0 read 0, ancillae 1 and 2 read 1
syndrome = raw_to_syndrome(pair.bare_z.syndrome_map, raw)
correction = decode_standard(tables, syndrome)
print(f"\nraw bits (0,1,1) -> standard syndrome "
      f"({syndrome & 1},{syndrome >> 1 & 1},{syndrome >> 2 & 1}) "
      f"-> apply {correction.to_text()}")
print("the syndrome equals column 4 of H, so the correction lands on qubit 4")
