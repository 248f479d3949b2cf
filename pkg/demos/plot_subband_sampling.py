"""
Sub-band sampling
=================

A signal whose spectrum fills two narrow bands is fully described by as
many complex samples as it has occupied bins, far fewer than sampling at
twice its highest frequency would use.
"""

import numpy as np

from bandsamp.subband import BandSet, make_multiband, subband_demo, subband_reconstruct, subband_sample

rep = subband_demo()
print(rep.to_text())

##############################################################################
# The same steps by hand, on three bands.

bands = BandSet([(40, 48), (300, 304), (900, 920)])
x = make_multiband(2048, bands, seed=5)
z = subband_sample(x, bands)
y = subband_reconstruct(z, bands, 2048)
print(f"{z.size} complex samples for {bands.total_width} occupied bins, "
      f"max error {np.abs(x.values - y.values).max():.1e}")
