"""
Sample budgets: band-limited reconstruction against compressed sensing
======================================================================

The data reduction factor (pixels per sample) achievable at a given
sparsity is bounded by 1/sparsity. Compressed sensing bounds demand more
samples by a logarithmic factor. The published measurements are kept as
fixtures and compared with both.
"""

import numpy as np

from bandsamp import bounds

##############################################################################
# Curves on a log grid
# --------------------

print("sparsity  1/s      fit      CS c=1   CS c=1.75")
for s in (0.005, 0.01, 0.02, 0.05, 0.1, 0.2):
    cs1 = bounds.invert_cs_bound(s, bounds.C_THEORETICAL)
    cs2 = bounds.invert_cs_bound(s, bounds.C_EXPERIMENTAL)
    print(f"{s:8.3f}  {bounds.theoretical_drf(s):7.1f}  {bounds.fit_drf(s):7.2f}  {cs1:7.2f}  {cs2:7.2f}")

##############################################################################
# Redundancy: samples spent per significant coefficient.

for s in np.geomspace(0.003, 0.3, 5):
    r_cs = bounds.redundancy_ratio(s, "cs_theoretical")
    r_fit = bounds.redundancy_ratio(s, "rsblr_fit")
    print(f"s = {s:.4f}: CS needs {r_cs:5.2f} samples per coefficient, fitted RSBLR {r_fit:4.2f}")

##############################################################################
# Measured points
# ---------------
# One published row sits above the 1/s bound; it is kept and flagged.

for p in bounds.fixtures():
    mark = "  <- anomalous" if p.anomalous else ""
    print(f"{p.source:6s} {p.label:12s} s={p.sparsity:.4f} drf={p.drf:6.2f} 1/s={1 / p.sparsity:7.2f}{mark}")

for base in ("e", "2", "10"):
    n = len(bounds.fixture_violations(bounds.C_EXPERIMENTAL, base))
    print(f"points above the c=1.75 CS curve with log base {base}: {n}")
