import numpy as np
import pytest

from spintransport.potential import (ScalarPotential, evaluate, fd_gradient, gradient,
                                     orbit_constant)


def test_evaluate_examples():
    assert evaluate(ScalarPotential.free(), [3.0, -1.0, 2.0]) == 0.0
    assert evaluate(ScalarPotential.harmonic2d(2.0), [1.0, 1.0, 5.0]) == pytest.approx(2.0)
    assert evaluate(ScalarPotential.harmonic3d(1.0), [3.0, 4.0, 0.0]) == pytest.approx(12.5)


def test_offset_and_callable():
    pot = ScalarPotential.harmonic3d(1.0, offset=0.25)
    assert pot([0.0, 0.0, 0.0]) == 0.25


def test_gradient_examples():
    assert np.array_equal(gradient(ScalarPotential.free(), [1.0, 2.0, 3.0]), np.zeros(3))
    assert np.allclose(gradient(ScalarPotential.harmonic2d(2.0), [1.0, 0.0, 0.0]), [2, 0, 0])
    cubic = ScalarPotential("central_radial", k=1.0, power=3.0)
    g = gradient(cubic, [0.0, 0.0, 2.0])
    assert np.allclose(g, [0, 0, 12])
    assert np.allclose(fd_gradient(cubic, [0.0, 0.0, 2.0], 1e-5), g, rtol=1e-8)


def test_fd_gradient_harmonic_exact():
    pot = ScalarPotential.harmonic3d(0.7)
    x = np.array([1.5, -2.0, 0.3])
    assert np.allclose(fd_gradient(pot, x, 1e-3), gradient(pot, x), rtol=1e-10)
    assert np.array_equal(fd_gradient(ScalarPotential.free(), x, 1e-3), np.zeros(3))


def test_fd_gradient_second_order():
    cubic = ScalarPotential("central_radial", k=1.0, power=3.0)
    x = np.array([0.8, -1.1, 0.6])
    errs = [np.linalg.norm(fd_gradient(cubic, x, h) - gradient(cubic, x)) for h in (1e-2, 1e-3, 1e-4)]
    for e1, e2 in zip(errs, errs[1:]):
        assert e1 / e2 == pytest.approx(100, rel=0.05)


def test_fd_gradient_rejects_bad_step():
    for h in (0.0, -1e-3):
        with pytest.raises(ValueError):
            fd_gradient(ScalarPotential.free(), [0, 0, 0], h)


def test_builtin_gradients_at_random_points():
    rng = np.random.default_rng(4)
    pots = [ScalarPotential.harmonic3d(-0.3), ScalarPotential.harmonic2d(1.7),
            ScalarPotential("central_radial", k=0.5, power=3.0),
            ScalarPotential("linear", slope=(0.1, -0.2, 0.3))]
    for pot in pots:
        for x in rng.uniform(-10, 10, size=(100, 3)):
            g = gradient(pot, x)
            h = 1e-4 * max(1.0, np.linalg.norm(x))
            assert np.linalg.norm(fd_gradient(pot, x, h) - g) <= 1e-5 * np.linalg.norm(g)


def test_central_gradients_parallel():
    rng = np.random.default_rng(5)
    for x in rng.uniform(-10, 10, size=(50, 3)):
        g3 = gradient(ScalarPotential.harmonic3d(2.0), x)
        assert np.linalg.norm(np.cross(g3, x)) < 1e-10 * np.linalg.norm(g3) * np.linalg.norm(x)
        g2 = gradient(ScalarPotential.harmonic2d(2.0), x)
        xy = np.array([x[0], x[1], 0.0])
        assert g2[2] == 0.0
        assert np.linalg.norm(np.cross(g2, xy)) < 1e-10 * np.linalg.norm(g2) * np.linalg.norm(xy)


def test_orbit_constant_sign():
    # grad V = -k_orbit (x, y, 0)
    assert orbit_constant(ScalarPotential.harmonic2d(0.05), 1.3) == pytest.approx(-0.05)


def test_dict_round_trip():
    for pot in (ScalarPotential.harmonic2d(-0.05, offset=0.1),
                ScalarPotential("central_radial", k=2.0, power=3.0),
                ScalarPotential("linear", slope=(1, 2, 3))):
        assert ScalarPotential.from_dict(pot.to_dict()) == pot


def test_unknown_kind_and_custom_validation():
    with pytest.raises(ValueError):
        ScalarPotential("quartic")
    with pytest.raises(ValueError):
        ScalarPotential("custom", func=lambda x: 0.0)


def test_custom_potential():
    pot = ScalarPotential("custom", func=lambda x: x[0] ** 2, grad=lambda x: [2 * x[0], 0, 0])
    assert evaluate(pot, [3.0, 0, 0]) == 9.0
    assert np.allclose(gradient(pot, [3.0, 0, 0]), [6, 0, 0])
