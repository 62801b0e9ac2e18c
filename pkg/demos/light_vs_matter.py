"""Per-pitch rotation of light polarization versus electron spin on a helix.

Light is guided along the helix by a graded-index fibre; its polarization is
parallel transported, so relative to the Frenet frame it turns by the torsion
integral 2 pi / sqrt(1 + Omega^2 r0^2). The matter rotation is suppressed by
(v_z / c)^2.
"""
import numpy as np

from spintransport.em import compare_pitch_rotations, rytov_rotation_per_pitch, trace_guided_helix

r0 = 1.0
for Omega in (0.5, 1.0, 2.0):
    ray = trace_guided_helix(r0, Omega)
    dynamic = ray.frenet_rotation()[-1]
    print(f"Omega r0 = {Omega * r0:.1f}: light {rytov_rotation_per_pitch(Omega, r0):.9f} rad, "
          f"traced {dynamic:.9f} rad")

for v_z in (0.01, 0.05, 0.1):
    rep = compare_pitch_rotations(None, r0, 1.0, 1.0, 1.0, v_z)
    print(f"v_z/c = {v_z}: matter {rep['matter_angle']:.3e} rad, ratio {rep['ratio']:.3e}")
print(f"pi sqrt(2) = {np.pi * np.sqrt(2):.9f}")
