"""
How dense can an invariantly chosen homogeneous set be?
=======================================================

Colour the pairs of Z at random. A shift-consistent random choice of a set
T, homogeneous for the colouring, is a feasible point of a window LP. Its
best possible marginal density delta*(n) falls with the window size n,
and exact dual certificates prove every upper bound.
"""

from fractions import Fraction

from cberlab.ire_lp import (RamseyFamily, build_lp, density_farkas, lift_farkas, max_marked_density,
                            verify)

curve = {}
for n in range(1, 6):
    res = max_marked_density(n)
    curve[n] = res
    print(f"n={n}: delta* = {res.delta} ~ {float(res.delta):.4f}   ({res.lp.shape[0]} rows x "
          f"{res.lp.shape[1]} columns, certificate verified: {verify(res.lp, res.certificate)})")

# A density of 9/10 is impossible already at n = 3. The optimal dual turns
# into a Farkas vector, and the same vector lifts to the next window.
lp3, far3 = density_farkas(curve[3], Fraction(9, 10))
lp4 = build_lp(RamseyFamily(nonempty=True), 4, min_density=Fraction(9, 10))
lifted = lift_farkas(RamseyFamily(), lp3, far3, lp4)
print("Farkas vector at n=3 verifies:", verify(lp3, far3))
print("lifted to n=4 verifies:", verify(lp4, lifted))
