"""Regenerate tests/goldens.json from oracles independent of the quadrature pipeline.

Correlations use the Fock-basis sign operator sgn(X) = 2M - 1 with
M_mn = int_0^inf psi_m psi_n (Gauss-Legendre), so no position grid or
trapezoid rule is involved. Closed forms are evaluated in mpmath at 30 digits.

    python3 scripts/derive_goldens.py > tests/goldens.json
"""

import json
import math

import mpmath as mp
import numpy as np
from scipy.optimize import brentq

from catbell.fock import EvolutionParams, nonlinear_phases
from catbell.modes import bell_cat, sign_operator

mp.mp.dps = 30
PI = math.pi
SETTINGS = [(0.0, PI / 4, 1), (0.0, 3 * PI / 4, -1), (PI / 2, PI / 4, 1), (PI / 2, 3 * PI / 4, 1)]


def chsh_oracle(a: float) -> float:
    psi = bell_cat(a, a).amplitudes
    s = sign_operator(psi.shape[0] - 1)
    total = 0.0
    for ta, tb, c in SETTINGS:
        pa = nonlinear_phases(psi.shape[0] - 1, EvolutionParams(1.0, 4, ta))
        pb = nonlinear_phases(psi.shape[1] - 1, EvolutionParams(1.0, 4, tb))
        phi = psi * pa[:, None] * pb[None, :]
        total += c * float(np.real(np.vdot(phi, s @ phi @ s.T)))
    return total


def b_lg_mp(a, b):
    a, b = mp.mpf(a), mp.mpf(b)
    return float(mp.sqrt(2) * mp.erf(mp.sqrt(2) * a) * mp.erf(mp.sqrt(2) * b) / (1 - mp.exp(-2 * a * a - 2 * b * b)))


def main():
    sweep = [0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0]
    crossing = brentq(lambda a: abs(chsh_oracle(a)) - 2.0, 0.3, 0.6, xtol=1e-10)
    out = {
        "chsh_sweep_alpha": sweep,
        "chsh_sweep_B": [chsh_oracle(a) for a in sweep],
        "chsh_crossing_alpha": crossing,
        "b_lg": {str(a): b_lg_mp(a, a) for a in (0.5, 1.0, 1.5, 2.0, 3.0)},
        "erf": {str(x): float(mp.erf(x)) for x in np.linspace(-4, 4, 20).round(12)},
    }
    print(json.dumps(out, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
