"""Discontinuities of the Dirac oscillator.

Along every elliptical orbit the jump in the wave function is forced into
an eigenstate of (x x grad W).sigma, i.e. spin normal to the orbit plane.
Only one branch admits a circular orbit.
"""
import numpy as np
from scipy.spatial.transform import Rotation

from spintransport.oscillator import OscillatorConfig, circular_L, ellipse_axes, ellipse_states
from spintransport.pauli import bloch

for branch in (1, -1):
    cfg = OscillatorConfig(m=1.0, omega=0.5, c=1.0, E=2.0, branch=branch)
    R = Rotation.from_rotvec([0.3, -0.8, 0.5]).as_matrix()
    sols = ellipse_states(cfg, 0.6, 256, rotation=R)
    a, b, K = ellipse_axes(cfg, 0.6)
    res = max(abs(d.residual) for d in sols) / cfg.shell
    dev = max(np.linalg.norm(bloch(d.spin) - branch * R[:, 2]) for d in sols)
    print(f"branch {branch:+d}: axes ({a:.4f}, {b:.4f}), max residual {res:.1e}, "
          f"spin deviation from normal {dev:.1e}")

cfg = OscillatorConfig(m=1.0, omega=0.5, c=1.0, E=2.0, branch=-1)
L = circular_L(cfg)
print(f"circular orbit on branch -1: L = {L:.4f}, axes {ellipse_axes(cfg, L)[:2]}")
