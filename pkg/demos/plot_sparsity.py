"""
How sparse is an image?
=======================

Sparsity is the fraction of DCT coefficients that must be kept so that the
top-k approximation is as accurate as a JPEG encoding of the same image.
"""

from bandsamp import dct2, sparsity_at_target
from bandsamp.sparsity import jpeg_target_rmse, topk_rmse_curve
from bandsamp.testimages import natural_image, sparse_dct_image

img = natural_image(64, 64, seed=11, beta=2.4)

##############################################################################
# The error of keeping the k largest coefficients falls monotonically to 0.

curve = topk_rmse_curve(dct2(img))
for k in (1, 16, 64, 256, 1024, 4096):
    print(f"k = {k:4d}  RMSE = {curve[k]:8.3f}")

##############################################################################
# Matching the JPEG error
# -----------------------
# ``sparsity_at_target`` finds the smallest k reaching the JPEG RMSE.

for q in (50, 75, 90):
    rep = sparsity_at_target(img, quality=q)
    print(f"quality {q}: target {rep.target_rmse:.3f} -> K = {rep.k_required} "
          f"(sparsity {rep.sparsity:.4f})")

##############################################################################
# An image built from exactly 12 coefficients plus a mean level needs 13.

exact = sparse_dct_image(64, 64, 12, seed=2)
print("\nexact 12+DC image:", sparsity_at_target(exact, 1e-9).k_required, "coefficients")
print("JPEG target for it:", round(jpeg_target_rmse(exact), 3))
print("report as JSON:", sparsity_at_target(img).to_json())
