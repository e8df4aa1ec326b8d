# # Log Fano pairs on H_3
#
# H_3 itself is not even weak Fano, but adding a small boundary divisor can
# make -(K + D) ample.

# %%
from fractions import Fraction

from bottkit import BottMatrix, Divisor, RayId, PLUS, MINUS
from bottkit.classify import log_fano_certificate
from bottkit.fan import enumerate_walls, kleiman_test

H3 = BottMatrix.hirzebruch(3)
walls = enumerate_walls(H3)

# %%
for coeffs in [{}, {RayId(2, PLUS): Fraction(1, 2)}, {RayId(2, PLUS): Fraction(1, 3)},
               {RayId(2, PLUS): Fraction(9, 10), RayId(1, MINUS): Fraction(1, 2)},
               {RayId(2, PLUS): 1}]:
    D = Divisor.from_map(2, coeffs)
    rep = log_fano_certificate(H3, D)
    _, ample, _ = kleiman_test(walls, Divisor.anticanonical(2) - D)
    print(f"D = {D}:  k = {[str(x) for x in rep.k]}  log Fano = {rep.is_log_fano}"
          f"  (oracle ample: {ample})  {rep.reason}")

# %% [markdown]
# The boundary D = t D_2+ works for every 1/3 < t < 1: k_1 = 1 - 2t
# must be negative and the coefficient must stay below 1.
