"""Fast analytic consistency checks (well under 5 s, no large grids)."""

from __future__ import annotations

import math
from typing import Callable, List, NamedTuple

import numpy as np

from catbell import analytic
from catbell.fock import EvolutionParams, coherent, coherent_x_overlap, evolve_nonlinear, fidelity, inner, x_overlap
from catbell.modes import bell_cat
from catbell.quadrature import GridSpec, husimi_single, joint_x_density


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def _coherent_overlap():
    a, b = 1.3 + 0.4j, -0.7 + 1.1j
    got = abs(inner(coherent(a, 80), coherent(b, 80))) ** 2
    want = math.exp(-abs(a - b) ** 2)
    err = abs(got - want)
    return err < 1e-12, f"| |<a|b>|^2 - exp(-|a-b|^2) | = {err:.1e}"


def _revival():
    psi = coherent(3.0)
    f = fidelity(psi, evolve_nonlinear(psi, EvolutionParams(1.0, 4, 2 * math.pi)))
    return f >= 1 - 1e-12, f"fidelity at t = 2pi: 1 - {max(1 - f, 0.0):.1e}"


def _parity_flip():
    f = fidelity(coherent(-3.0), evolve_nonlinear(coherent(3.0), EvolutionParams(1.0, 4, math.pi)))
    return f >= 1 - 1e-12, f"fidelity with |-alpha> at t = pi: 1 - {max(1 - f, 0.0):.1e}"


def _x_overlap():
    x = np.linspace(-8, 8, 161)
    err = max(np.max(np.abs(x_overlap(x, coherent(a)) - coherent_x_overlap(x, a))) for a in (0.5, 2.0, 3.0))
    return err <= 1e-10, f"max |<x|alpha> - closed form| = {err:.1e}"


def _joint_density():
    g = GridSpec.symmetric(7.0, 0.25)
    worst = 0.0
    for a, b in ((1.0, 1.0), (2.0, 1.5)):
        num = joint_x_density(bell_cat(a, b), g).density
        worst = max(worst, float(np.max(np.abs(num - analytic.bell_joint_density(g.points, g.points, a, b)))))
    return worst <= 1e-8, f"max |P(X_A, X_B) - closed form| = {worst:.1e}"


def _q_norm():
    g = GridSpec.symmetric(9.0, 0.1)
    q = husimi_single(coherent(3.0), g, g)
    mass = float(g.weights() @ q @ g.weights())
    return abs(mass - 1) <= 1e-6, f"Q mass - 1 = {mass - 1:.1e}"


def _chsh_qubit():
    b = analytic.chsh_qubit(0, math.pi / 4, math.pi / 8, 3 * math.pi / 8)
    return abs(b + 2 * math.sqrt(2)) < 1e-12, f"qubit B = {b:.12f}"


def _b_lg_limits():
    big = analytic.b_lg(6.0, 6.0)
    small = analytic.b_lg(1e-4, 1e-4) / analytic.b_lg_small(1e-4, 1e-4)
    ok = abs(big - math.sqrt(2)) < 1e-12 and abs(small - 1) < 1e-6
    return ok, f"B_lg(6,6) - sqrt2 = {big - math.sqrt(2):.1e}, small-amplitude ratio {small:.8f}"


CHECKS: List[tuple] = [
    ("coherent overlap identity", _coherent_overlap),
    ("revival at t = 2pi/omega", _revival),
    ("parity flip at t = pi/omega", _parity_flip),
    ("closed-form x overlap", _x_overlap),
    ("Bell-cat joint density", _joint_density),
    ("Q normalisation", _q_norm),
    ("qubit CHSH at standard angles", _chsh_qubit),
    ("B_lg closed-form limits", _b_lg_limits),
]


def run_checks() -> List[CheckResult]:
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a check that crashes is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail))
    return out
