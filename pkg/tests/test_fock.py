import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from catbell.errors import TruncationTooSmall
from catbell.fock import (
    EvolutionParams,
    FockState,
    coherent,
    coherent_x_overlap,
    default_n_max,
    evolve_nonlinear,
    fidelity,
    hermite_functions,
    inner,
    p_overlap,
    quadrature_moments,
    vacuum,
    x_overlap,
)

amps = st.floats(0.0, 4.0)
phases = st.floats(0.0, 2 * math.pi)
complex_alpha = st.builds(lambda r, th: r * complex(math.cos(th), math.sin(th)), amps, phases)


@given(complex_alpha)
def test_coherent_is_normalised(alpha):
    assert coherent(alpha).norm() == pytest.approx(1.0, abs=1e-12)


@given(complex_alpha, complex_alpha)
def test_coherent_overlap_identity(a, b):
    n = max(default_n_max(a), default_n_max(b))
    got = abs(inner(coherent(a, n), coherent(b, n))) ** 2
    assert got == pytest.approx(math.exp(-abs(a - b) ** 2), abs=1e-12)


def test_too_small_cutoff_raises_instead_of_renormalising():
    with pytest.raises(TruncationTooSmall):
        coherent(3.0, n_max=10)


def test_large_amplitude_does_not_underflow():
    state = coherent(30.0)
    assert np.all(np.isfinite(state.amplitudes))
    assert state.norm() == pytest.approx(1.0, abs=1e-10)


@given(complex_alpha, st.floats(0.1, 3.0), st.sampled_from([2, 4, 6]), st.floats(0, 10))
def test_evolution_is_unitary(alpha, omega, k, t):
    out = evolve_nonlinear(coherent(alpha), EvolutionParams(omega, k, t))
    assert out.norm() == pytest.approx(1.0, abs=1e-12)


@given(complex_alpha, st.floats(0.2, 3.0), st.sampled_from([2, 4]))
def test_revival_at_two_pi_over_omega(alpha, omega, k):
    psi = coherent(alpha)
    out = evolve_nonlinear(psi, EvolutionParams(omega, k, 2 * math.pi / omega))
    assert fidelity(psi, out) >= 1 - 1e-9


@given(st.floats(0.0, 4.0))
def test_parity_flip_at_pi(alpha):
    out = evolve_nonlinear(coherent(alpha), EvolutionParams(1.0, 4, math.pi))
    assert fidelity(out, coherent(-alpha)) >= 1 - 1e-12


@given(st.floats(0, 3), st.floats(0, 3))
def test_evolution_composes(t1, t2):
    psi = coherent(1.5)
    twice = evolve_nonlinear(evolve_nonlinear(psi, EvolutionParams(1, 4, t1)), EvolutionParams(1, 4, t2))
    once = evolve_nonlinear(psi, EvolutionParams(1, 4, t1 + t2))
    assert np.allclose(twice.amplitudes, once.amplitudes, atol=1e-9)


@pytest.mark.parametrize("kwargs", [dict(omega=0), dict(omega=-1), dict(k=3), dict(k=0), dict(t=-0.1)])
def test_evolution_params_validation(kwargs):
    with pytest.raises(ValueError):
        EvolutionParams(**kwargs)


def test_large_k_phases_are_exact_integers():
    # n^4 mod 16 is 0 or 1, so at t = pi/4 the phase set is {1, e^{-i pi/4}}
    psi = FockState(np.ones(101))
    ph = evolve_nonlinear(psi, EvolutionParams(1.0, 4, math.pi / 4)).amplitudes
    expected = np.where(np.arange(101) % 2, np.exp(-1j * math.pi / 4), 1.0)
    assert np.allclose(ph, expected, atol=1e-9)


@given(complex_alpha)
def test_x_overlap_matches_closed_form(alpha):
    x = np.linspace(-9, 9, 91)
    assert np.max(np.abs(x_overlap(x, coherent(alpha)) - coherent_x_overlap(x, alpha))) <= 1e-10


def test_scalar_in_scalar_out():
    assert isinstance(x_overlap(0.3, coherent(1.0)), complex)
    assert isinstance(p_overlap(0.3, coherent(1.0)), complex)


def test_hermite_functions_orthonormal():
    nodes, w = np.polynomial.hermite.hermgauss(80)
    psi = hermite_functions(nodes, 30) * np.exp(0.5 * nodes**2)
    gram = (psi * w) @ psi.T
    assert np.allclose(gram, np.eye(31), atol=1e-10)


@given(complex_alpha)
def test_coherent_moments(alpha):
    m = quadrature_moments(coherent(alpha))
    assert m["x"] == pytest.approx(math.sqrt(2) * alpha.real, abs=1e-9)
    assert m["p"] == pytest.approx(math.sqrt(2) * alpha.imag, abs=1e-9)
    assert m["x2"] - m["x"] ** 2 == pytest.approx(0.5, abs=1e-8)
    assert m["p2"] - m["p"] ** 2 == pytest.approx(0.5, abs=1e-8)


@given(st.lists(st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False), min_size=2, max_size=12))
def test_p_overlap_phase_rule_matches_operator_moments(coeffs):
    state = FockState(np.array(coeffs))
    if state.norm() < 1e-3:
        return
    state = state.normalized()
    p = np.linspace(-10, 10, 801)
    dens = np.abs(p_overlap(p, state)) ** 2
    dp = p[1] - p[0]
    m = quadrature_moments(state)
    assert np.sum(dens) * dp == pytest.approx(1.0, abs=1e-9)
    assert np.sum(p * dens) * dp == pytest.approx(m["p"], abs=1e-8)
    assert np.sum(p * p * dens) * dp == pytest.approx(m["p2"], abs=1e-8)
    xd = np.abs(x_overlap(p, state)) ** 2
    assert np.sum(p * xd) * dp == pytest.approx(m["x"], abs=1e-8)


def test_state_arithmetic_pads():
    s = vacuum(2) + coherent(0.5, 20)
    assert s.n_max == 20
    assert (2 * vacuum(1)).norm() == pytest.approx(2.0)
    with pytest.raises(ValueError):
        coherent(1.0).padded(2)


def test_amplitudes_are_read_only():
    with pytest.raises(ValueError):
        coherent(1.0).amplitudes[0] = 0
