"""The measure of maximal entropy, its potential, and the escape rate.

Samples the Julia set of mcmullen(2,2,1) by random backward orbits, then checks
numerically that

* the logarithmic potential u of the sampled measure is unchanged by the
  rotation z -> iz (a symmetry), and changes under e^(i pi/4) z (not one);
* u(p) + G(p) is constant over the sphere, G the escape rate of the lift.
"""

import cmath
import math

import numpy as np

from juliasym import parse_map, sample_julia
from juliasym.dynamics import ergodic_potential, escape_rate, potential_difference
from juliasym.isometry import apply, rotation
from juliasym.sphere import SpherePoint, r3_to_pairs

R = parse_map("mcmullen(2,2,1)")
cloud = sample_julia(R, 100_000, seed=0)

rng = np.random.default_rng(1)
v = rng.normal(size=(12, 3))
points = [SpherePoint(*p) for p in r3_to_pairs(v / np.linalg.norm(v, axis=1)[:, None])]

for label, sigma in (("iz", rotation(1j)), ("e^(i pi/4) z", rotation(cmath.exp(1j * math.pi / 4)))):
    z = [potential_difference(apply(sigma, p), p, cloud) for p in points]
    scores = [abs(e.value) / e.stderr for e in z]
    print(f"{label:14s} max |u(sz) - u(z)| / stderr = {max(scores):7.2f}")

u = np.array([ergodic_potential(R, p, cloud).value for p in points])
G = escape_rate(R.lift(), np.array([p.pair() for p in points]))
print(f"u + G: mean {np.mean(u + G):.5f}, spread {np.std(u + G):.5f}")
