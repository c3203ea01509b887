"""Distances and the shape of the unit ball in the first Heisenberg group.

Run: python demos/01_distance_and_balls.py
"""

import numpy as np

from heisodiam import core, metric, sets

o = core.origin(1)
print("vertical distance to [0, 1]:      ", metric.distance(o, [0, 0, 1]), "(sqrt(pi) =", np.sqrt(np.pi), ")")
print("horizontal distance to [3+4i, 0]: ", metric.distance(o, [3, 4, 0]))
print("generic distance to [0.5, 0.2]:   ", metric.distance(o, [0.5, 0, 0.2]))

# The ball is not a Euclidean ball: its profile peaks away from the axis.
r = np.linspace(0, 1, 6)
for ri, hi in zip(r, metric.h_fn(r)):
    print(f"  h({ri:.1f}) = {hi:.6f}")
print("maximum of h is 2/pi at r = 2/pi:", metric.h_fn(2 / np.pi))

B = sets.ProfileSet.ball(1.0)
print("volume of the unit ball:", sets.volume(B))
print("diameter of the unit ball:", sets.diameter(B).value)

# Left translations are isometries, rotations too; dilations scale.
rng = np.random.default_rng(0)
p, q, g = rng.uniform(-1, 1, (3, 3))
print("d(p,q) =", metric.distance(p, q), " d(gp,gq) =", metric.distance(core.mul(g, p), core.mul(g, q)))
print("d(2p,2q) / d(p,q) =", metric.distance(core.dilate(2, p), core.dilate(2, q)) / metric.distance(p, q))
