"""Walk through the symmetry regimes of z^m + lambda/z^d.

For each parameter we print the closed-form group next to what the general
classifier finds from the map alone, then look at the half-turns on |lambda| = 1.

    python demos/mcmullen_symmetry_tour.py
"""

import cmath
import math

from juliasym import McMullenParams, classify_mcmullen_symmetries, make_mcmullen, sample_julia
from juliasym.isometry import inversion
from juliasym.symmetry import classify_symmetry_group, verify_symmetry_numeric

CASES = [
    (2, 2, 0),
    (2, 1, 0.5),
    (3, 2, 2),
    (2, 2, 10),
    (2, 2, cmath.exp(0.7j)),
    (3, 3, -1),
]


def compare():
    print(f"{'map':28s} {'closed form':22s} classifier")
    for m, d, lam in CASES:
        p = McMullenParams(m, d, lam)
        R = make_mcmullen(p)
        closed = classify_mcmullen_symmetries(p)
        rep = classify_symmetry_group(R)
        alg = sum(not v.numeric_only for v in rep.verified)
        print(f"{R.to_text():28s} {str(closed):22s} {rep.group}  ({alg}/{len(rep.verified)} algebraic)")


def half_turns():
    # On |lambda| = 1 with m = d, the half-turns are z -> c/z with c^(2m) = lambda^2.
    # z -> 1/z is one of them only when lambda = +-1.
    print("\nm = d = 2, lambda = e^(i theta): Hausdorff distance of the cloud to its image")
    print(f"{'theta':>8s} {'1/z':>8s} {'sqrt(lam)/z':>12s}")
    for theta in (0, math.pi / 4, math.pi / 2, math.pi):
        lam = cmath.exp(1j * theta)
        cloud = sample_julia(make_mcmullen(McMullenParams(2, 2, lam)), 50_000, seed=0)
        _, plain = verify_symmetry_numeric(cloud, inversion(1))
        _, fixed = verify_symmetry_numeric(cloud, inversion(cmath.sqrt(lam)))
        print(f"{theta:8.4f} {plain:8.4f} {fixed:12.4f}")


if __name__ == "__main__":
    compare()
    half_turns()
