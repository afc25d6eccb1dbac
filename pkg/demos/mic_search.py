"""MIC fiducials from permutation eigenstates: trefoil d=3, 4, 5 and fig8 d=7.

Run: python demos/mic_search.py
"""

import numpy as np

from cosetlab import catalog_lookup, low_index_subgroups
from cosetlab.mic import PauliSystem, characteristic_values, mic_scan
from cosetlab.permgroup import image_group, structure_describe

for group, d in [("trefoil", 3), ("trefoil", 4), ("trefoil", 5), ("fig8", 7)]:
    for rec in low_index_subgroups(catalog_lookup(group).presentation, d):
        P = image_group(rec)
        if P.is_cyclic():
            continue
        rep = mic_scan(rec, exhaustive=True)
        head = f"{group} d={d} class {rec.ordinal} ({structure_describe(P)})"
        if not rep.is_mic:
            print(f"{head}: no MIC, best rank {rep.gram_rank}")
            continue
        vals = ", ".join(f"{v:.5f}" for v in rep.pp_values)
        print(f"{head}: MIC, pp={rep.pp} [{vals}], {rep.stabilizer_verdict}")
        # off-diagonal Gram values are the squared moduli of the Pauli expectations
        chi2 = np.abs(characteristic_values(PauliSystem(d), rep.fiducial)) ** 2
        print(f"    min |<psi|D|psi>|^2 over D != 1: {chi2[1:].min():.3e}")
