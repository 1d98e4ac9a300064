"""Re-derive the shipped circuit pair from nothing but the check matrix.

The pipeline: BFS the 2^21-state space for the minimum CNOT count (11),
enumerate minimal bases for the compact readout, and for each base scan
flag placements until three couplings cover every dangerous fault and the
full single-fault audit passes.  The first fully audited witness is the
shipped 14-CNOT flagged circuit; its flag-free base is the recovery.

The complete scan visits about ten thousand bases and takes several
minutes.  By default this script runs a bounded preview; set
STEANE_SE_FULL_DERIVE=1 for the real thing (same entry point as
`steane-se derive`).
"""

import os
import sys
import time
from pathlib import Path

from steane_se.reference import derive_reference, load_reference, save_reference
from steane_se.search import bfs_min_cnots, enumerate_geodesic_moves, min_flag_cnots
from steane_se.tables import effective_syndrome_map

full = os.environ.get("STEANE_SE_FULL_DERIVE", "0") == "1"

if not full:
    print("preview mode (STEANE_SE_FULL_DERIVE=1 for the full scan)\n")
    result = bfs_min_cnots(target=effective_syndrome_map().measured)
    print(f"minimal CNOT count for the compact readout: {result.distance}")
    print("scanning the first 25 minimal bases for <= 3 flag couplings "
          "(signature check only):")
    hits = 0
    for i, moves in enumerate(enumerate_geodesic_moves(result, limit=25)):
        out = min_flag_cnots(moves, max_extra=3)
        mark = "-" if out.min_extra is None else str(out.min_extra)
        hits += out.min_extra is not None
        print(f"  base {i:2d}: {mark}")
    print(f"\n{hits} of 25 early bases admit a 3-coupling flag pattern; the "
          "full scan\nkeeps going (and audits every candidate exhaustively) "
          "until one passes.")
    print("the shipped pair is the first fully audited witness "
          "(~10000 bases, ~7 min).")
    sys.exit(0)

t0 = time.time()


def progress(scanned: int, matching: int) -> None:
    if scanned % 500 == 0:
        print(f"  scanned {scanned} bases ({matching} signature matches, "
              f"{time.time() - t0:.0f}s)")


pair, info = derive_reference(max_extra=3, progress=progress)
print(f"\nscanned {info.bases_scanned} minimal bases in "
      f"{time.time() - t0:.0f}s; {info.bases_matching} matched the "
      "dangerous-pair signature")
print(f"first fully audited witness: {info.min_extra} flag couplings, "
      f"{info.placement.orientation.value} at {info.placement.slots}")

shipped = load_reference()
same = all(
    set(got) == set(want)
    for got, want in zip(pair.flagged_x.layers, shipped.flagged_x.layers)
)
print(f"witness matches the shipped flagged circuit layer for layer: {same}")

save_reference(pair, Path("derived-circuits"))
print("wrote derived-circuits/flagged_x.circ and bare_x.circ")
