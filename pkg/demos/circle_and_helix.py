"""Spin precession on a circular orbit and on a helix.

On the circle the precession axis is fixed (along z), so the spin rotates
rigidly; on the helix it tilts with the trajectory, and after one pitch the
net rotation is a small turn about z whose angle shrinks as 1/c^2.
"""
import numpy as np

from spintransport.pauli import fidelity
from spintransport.potential import ScalarPotential
from spintransport.ray import AnalyticTrajectory
from spintransport.transport import (axis_tilt, circle_exact, net_rotation, pitch_rotation_matter,
                                     transport_spin)

m, c = 1.0, 1.0
u0 = np.array([1, 1]) / np.sqrt(2)

# circle: grad V = -k (x, y, 0), V = V0 on the orbit
k, r0, E, V0 = 0.05, 1.0, 1.2, 0.1
pot = ScalarPotential.harmonic2d(-k, offset=V0 + k * r0**2 / 2)
circle = AnalyticTrajectory.circle(r0)
res = transport_spin(circle, u0, pot, m, c, E, circle.length / 1000)
ref = circle_exact(u0, k, r0, circle.length, E, m, c, V0)
print(f"circle: 1 - fidelity vs closed form = {max(0.0, 1 - fidelity(res.u[-1], ref)):.2e}")
print(f"circle: <sigma_z> drift = {np.ptp(res.bloch[:, 2]):.2e}")

# helix: rotation per pitch against the small-angle formula, for two light speeds
for c in (1.0, 2.0):
    k, Omega, E = 0.001, 1.0, m * c**2 + 0.01
    pot = ScalarPotential.harmonic2d(-k, offset=k * r0**2 / 2)
    helix = AnalyticTrajectory.helix(r0, Omega)
    res = transport_spin(helix, u0, pot, m, c, E, helix.length / 4000)
    axis, angle = net_rotation(res.propagator)
    formula = pitch_rotation_matter(k, r0, Omega, m, c)
    print(f"helix c={c}: angle {angle:.6g} rad, formula {formula:.6g}, axis tilt {axis_tilt(axis):.1e}")
