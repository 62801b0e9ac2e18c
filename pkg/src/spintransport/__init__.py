"""Spin transport of relativistic spin-1/2 particles along classical trajectories."""
from .pauli import (Spinor2, SpinRotor, bloch, eigenspinor, fidelity, rotor_axis_angle,
                    sigma_product, su2_exp)
from .potential import ScalarPotential, evaluate, fd_gradient, gradient
from .ray import (AnalyticTrajectory, RaySolution, RayState, analytic_tangent, eikonal_residual,
                  integrate_ray, ray_start, relativistic_energy)
from .transport import (amplitude_rate, bloch_rate, circle_exact, helix_exact,
                        pitch_rotation_matter, precession_generator, transport_spin)
from .oscillator import (OscillatorConfig, ellipse_states, hj_residual_spacetime,
                         hj_residual_spatial)
from .em import (Medium, compare_pitch_rotations, em_amplitude_rate, em_eikonal_residual,
                 em_polarization_rate, frenet, rytov_rotation_per_pitch)

__version__ = "0.1.0"

__all__ = [
    "ScalarPotential",
    "evaluate",
    "fd_gradient",
    "gradient",
    "Spinor2",
    "SpinRotor",
    "bloch",
    "eigenspinor",
    "fidelity",
    "rotor_axis_angle",
    "sigma_product",
    "su2_exp",
    "AnalyticTrajectory",
    "RaySolution",
    "RayState",
    "analytic_tangent",
    "eikonal_residual",
    "integrate_ray",
    "ray_start",
    "relativistic_energy",
    "amplitude_rate",
    "bloch_rate",
    "circle_exact",
    "helix_exact",
    "pitch_rotation_matter",
    "precession_generator",
    "transport_spin",
    "OscillatorConfig",
    "ellipse_states",
    "hj_residual_spacetime",
    "hj_residual_spatial",
    "Medium",
    "compare_pitch_rotations",
    "em_amplitude_rate",
    "em_eikonal_residual",
    "em_polarization_rate",
    "frenet",
    "rytov_rotation_per_pitch",
]
