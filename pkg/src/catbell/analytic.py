"""Closed-form results for cat states, used as independent checks on the numerics.

Everything here assumes real, positive coherent amplitudes and the k = 4
rotation times, where U(t)|+-a> = phase * (cos(theta)|+-a> + i sin(theta)|-+a>)
holds exactly with theta = omega t / 2.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import erf as _erf_array

SQRT2 = math.sqrt(2.0)


def erf(x):
    """Error function; math.erf for scalars, scipy for arrays (both ~1 ulp)."""
    if np.ndim(x) == 0:
        return math.erf(float(x))
    return _erf_array(np.asarray(x, dtype=float))


def rotation_angle(omega: float, t: float) -> float:
    """Analyzer angle realised by the n^4 interaction at the special times."""
    return omega * t / 2.0


def rotation_global_phase(omega: float, t: float) -> complex:
    """Global phase of U(t)|a> relative to cos|a> + i sin|-a> (k even, parity form).

    With e = exp(-i omega t): (1 + e)/2 = phase*cos(theta) and (1 - e)/2 = phase*i*sin(theta).
    """
    return complex(np.exp(-1j * omega * t / 2.0))


def E_qubit(theta: float, phi: float) -> float:
    """Spin correlation of the two-qubit singlet after rotations theta, phi."""
    return -math.cos(2.0 * (theta - phi))


def chsh_qubit(theta, theta_p, phi, phi_p) -> float:
    return (
        E_qubit(theta, phi)
        - E_qubit(theta, phi_p)
        + E_qubit(theta_p, phi)
        + E_qubit(theta_p, phi_p)
    )


def bell_joint_density(xa, xb, alpha: float, beta: float):
    """P(X_A, X_B) of the Bell cat (unrotated, or both sites rotated by pi/8)."""
    u = 2 * alpha * alpha + 2 * beta * beta
    xa, xb = np.meshgrid(np.asarray(xa, float), np.asarray(xb, float), indexing="ij")
    s = np.sinh(SQRT2 * xa * alpha - SQRT2 * xb * beta)
    return 2 * np.exp(-xa * xa - xb * xb - u) * s * s / (np.pi * -math.expm1(-u))


def bell_marginal_b(xb, alpha: float, beta: float):
    """P(X_B) for the Bell cat, written to avoid overflowing exp(2 alpha^2)."""
    xb = np.asarray(xb, float)
    u = 2 * alpha * alpha + 2 * beta * beta
    c = 2 * SQRT2 * beta * np.abs(xb)
    # e^{-u} (e^{2a^2} cosh(c) - 1) = (e^{c - 2b^2} + e^{-c - 2b^2})/2 - e^{-u}
    val = 0.5 * (np.exp(c - 2 * beta * beta) + np.exp(-c - 2 * beta * beta)) - np.exp(-u)
    return np.exp(-xb * xb) * val / (math.sqrt(math.pi) * -math.expm1(-u))


def conditional_inference(alpha: float, beta: float) -> float:
    """P(X_A > 0 | X_B <= 0) for the anticorrelated Bell cat."""
    u = 2 * alpha * alpha + 2 * beta * beta
    return 0.5 + erf(SQRT2 * alpha) * erf(SQRT2 * beta) / (2 * -math.expm1(-u))


def lg_moment_12(alpha: float, beta: float) -> float:
    """<S1^(B) S2^(A)>; equals <S2^(B) S3^(A)>. <S1^(B) S3^(A)> is exactly 0."""
    u = 2 * alpha * alpha + 2 * beta * beta
    return -SQRT2 * erf(SQRT2 * alpha) * erf(SQRT2 * beta) / (2 * -math.expm1(-u))


def b_lg(alpha: float, beta: float) -> float:
    """sqrt(2) erf(sqrt2 a) erf(sqrt2 b) / (1 - exp(-2a^2 - 2b^2)).

    expm1 keeps the denominator accurate for small amplitudes. At a = b = 0
    exactly the value is the a = b limit 2 sqrt(2)/pi, since the limit along
    other directions differs.
    """
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be >= 0")
    if alpha == 0 and beta == 0:
        return 2 * SQRT2 / math.pi
    u = 2 * alpha * alpha + 2 * beta * beta
    return SQRT2 * erf(SQRT2 * alpha) * erf(SQRT2 * beta) / -math.expm1(-u)


def b_lg_small(alpha: float, beta: float) -> float:
    """Leading-order series of b_lg: 4 sqrt(2) a b / (pi (a^2 + b^2))."""
    return 4 * SQRT2 * alpha * beta / (math.pi * (alpha * alpha + beta * beta))


def rotated_bell_amplitude(xa, xb, alpha: float, beta: float, phi: float):
    """<X_A|<X_B|psi_f> with no rotation at A and rotation phi at B.

    Built from coherent wavefunctions with U|+-b> = cos(phi)|+-b> + i sin(phi)|-+b>
    and the exact normalisation; the overall phase of U is dropped.
    """
    from catbell.fock import coherent_x_overlap

    xa = np.asarray(xa, float)[:, None]
    xb = np.asarray(xb, float)[None, :]
    c, s = math.cos(phi), math.sin(phi)
    ga_p, ga_m = coherent_x_overlap(xa, alpha), coherent_x_overlap(xa, -alpha)
    gb_p, gb_m = coherent_x_overlap(xb, beta), coherent_x_overlap(xb, -beta)
    n = 1 / math.sqrt(2 * -math.expm1(-2 * alpha * alpha - 2 * beta * beta))
    return n * (ga_p * (c * gb_m + 1j * s * gb_p) - ga_m * (c * gb_p + 1j * s * gb_m))


def q_coherent(x, p, a0: float):
    """Husimi Q of |a0>, coordinates alpha_0 = x + i p."""
    return np.exp(-p * p - (x - a0) ** 2) / np.pi


def q_cat_t2(x, p, a0: float):
    """Q of e^{-i pi/8}(cos(pi/8)|a0> + i sin(pi/8)|-a0>)."""
    cp, cm = SQRT2 + 1, SQRT2 - 1
    body = cp * np.exp(-(x - a0) ** 2) + cm * np.exp(-(x + a0) ** 2) + interference_term(x, p, a0)
    return np.exp(-p * p) * body / (2 * SQRT2 * np.pi)


def q_cat_t3(x, p, a0: float):
    """Q of (|a0> + i|-a0>)/sqrt(2) up to phase."""
    body = np.exp(-(x - a0) ** 2) + np.exp(-(x + a0) ** 2) + interference_term(x, p, a0)
    return np.exp(-p * p) * body / (2 * np.pi)


def q_mixture_t2(x, p, a0: float):
    """Q of cos^2(pi/8)|a0><a0| + sin^2(pi/8)|-a0><-a0|."""
    cp, cm = SQRT2 + 1, SQRT2 - 1
    body = cp * np.exp(-(x - a0) ** 2) + cm * np.exp(-(x + a0) ** 2)
    return np.exp(-p * p) * body / (2 * SQRT2 * np.pi)


def q_mixture_t3(x, p, a0: float):
    """Q of the t2 mixture after a further pi/4 of evolution.

    Weights are (3/4, 1/4) on the +a0 and -a0 Gaussians; the bracket is
    6 G+ + 2 G- - 4 (interference) over 8 pi, which integrates to one.
    """
    body = 6 * np.exp(-(x - a0) ** 2) + 2 * np.exp(-(x + a0) ** 2) + 2 * interference_term(x, p, a0)
    return np.exp(-p * p) * body / (8 * np.pi)


def interference_term(x, p, a0: float):
    """-2 exp(-x^2 - a0^2) sin(2 p a0), the coherence fringe in Q."""
    return -2 * np.exp(-x * x - a0 * a0) * np.sin(2 * p * a0)


def measurement_disturbance(x, p, a0: float):
    """Difference between the t2 superposition and t2 mixture Q functions."""
    return -np.exp(-p * p - x * x) / (SQRT2 * np.pi) * math.exp(-a0 * a0) * np.sin(2 * p * a0)


def p_fringe_density(p, alpha: float, c1: float, c2: float):
    """P(P) for c1|alpha> + i c2|-alpha>, real c1, c2 with c1^2 + c2^2 = 1.

    The fringe sign follows P = (a - a^dag)/(i sqrt2). For c1 = cos(pi/8),
    c2 = sin(pi/8) the fringe amplitude is 1/sqrt(2).
    """
    p = np.asarray(p, float)
    return np.exp(-p * p) / math.sqrt(math.pi) * (1 - 2 * c1 * c2 * np.sin(2 * SQRT2 * p * alpha))


def p_variance_closed(alpha: float, c1: float, c2: float) -> float:
    """Var(P) of c1|alpha> + i c2|-alpha>: 1/2 - 8 c1^2 c2^2 alpha^2 exp(-4 alpha^2)."""
    return 0.5 - 8 * (c1 * c2) ** 2 * alpha * alpha * math.exp(-4 * alpha * alpha)


def p_variance_t2(alpha: float) -> float:
    """1/2 - alpha^2 exp(-4 alpha^2): the cos(pi/8), sin(pi/8) cat."""
    return 0.5 - alpha * alpha * math.exp(-4 * alpha * alpha)


def sign_expectation_coherent(alpha: float) -> float:
    """<sgn X> in |alpha> for real alpha."""
    return erf(SQRT2 * alpha)
