"""Single-mode truncated Fock-space states.

Units have hbar = 1 and quadratures follow X = (a + a^dag)/sqrt(2),
P = (a - a^dag)/(i sqrt(2)), so a coherent state |alpha> has
<X> = sqrt(2) Re(alpha) and <P> = sqrt(2) Im(alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import gammaln

from catbell.errors import TruncationTooSmall

EPS_TRUNC = 1e-10


def default_n_max(alpha: complex) -> int:
    """Cutoff leaving a Poisson-tail deficit well below 1e-12 for |alpha| <= 4."""
    r = abs(alpha)
    return int(math.ceil(r * r + 8 * r + 20))


@dataclass(frozen=True, eq=False)
class FockState:
    """Pure single-mode state, amplitudes indexed by photon number 0..n_max."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("amplitudes must be a non-empty 1-D array")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_max(self) -> int:
        return self.amplitudes.size - 1

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def padded(self, n_max: int) -> "FockState":
        if n_max < self.n_max:
            raise ValueError("cannot pad to a smaller cutoff")
        out = np.zeros(n_max + 1, dtype=complex)
        out[: self.n_max + 1] = self.amplitudes
        return FockState(out)

    def __add__(self, other: "FockState") -> "FockState":
        a, b = _common(self, other)
        return FockState(a + b)

    def __mul__(self, c: complex) -> "FockState":
        return FockState(self.amplitudes * c)

    __rmul__ = __mul__

    def normalized(self) -> "FockState":
        return FockState(self.amplitudes / self.norm())


@dataclass(frozen=True)
class EvolutionParams:
    """Local nonlinear evolution H = omega * n^k applied for time t."""

    omega: float = 1.0
    k: int = 4
    t: float = 0.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be > 0")
        if int(self.k) != self.k or self.k < 2 or self.k % 2:
            raise ValueError("k must be an even integer >= 2")
        if self.t < 0:
            raise ValueError("t must be >= 0")


def _common(a: FockState, b: FockState):
    n = max(a.n_max, b.n_max)
    return a.padded(n).amplitudes, b.padded(n).amplitudes


def vacuum(n_max: int = 0) -> FockState:
    amps = np.zeros(n_max + 1, dtype=complex)
    amps[0] = 1.0
    return FockState(amps)


def coherent(alpha: complex, n_max: Optional[int] = None, eps_trunc: float = EPS_TRUNC) -> FockState:
    """Coherent state e^{-|alpha|^2/2} sum alpha^n / sqrt(n!) |n>.

    Amplitudes are built in log space so large |alpha| does not underflow.
    Raises TruncationTooSmall instead of renormalising when the cutoff
    loses more than ``eps_trunc`` of the norm.
    """
    if n_max is None:
        n_max = default_n_max(alpha)
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    n = np.arange(n_max + 1)
    r = abs(alpha)
    if r == 0:
        return vacuum(n_max)
    log_mag = -0.5 * r * r + n * math.log(r) - 0.5 * gammaln(n + 1)
    amps = np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))
    captured = float(np.sum(np.exp(2 * log_mag)))
    if captured < 1 - eps_trunc:
        raise TruncationTooSmall(
            f"n_max={n_max} keeps only {captured:.3e} of |{alpha}>; "
            f"try n_max >= {default_n_max(alpha)}"
        )
    return FockState(amps)


def nonlinear_phases(n_max: int, params: EvolutionParams) -> np.ndarray:
    """Diagonal of exp(-i omega t n^k); n^k is formed exactly in integers."""
    nk = np.arange(n_max + 1, dtype=np.int64) ** int(params.k)
    return np.exp(-1j * (params.omega * params.t) * nk.astype(float))


def evolve_nonlinear(state: FockState, params: EvolutionParams) -> FockState:
    return FockState(state.amplitudes * nonlinear_phases(state.n_max, params))


def inner(a: FockState, b: FockState) -> complex:
    """<a|b>, zero-padding the shorter state."""
    x, y = _common(a, b)
    return complex(np.vdot(x, y))


def fidelity(a: FockState, b: FockState) -> float:
    return abs(inner(a, b)) ** 2 / (a.norm() ** 2 * b.norm() ** 2)


def hermite_functions(x, n_max: int) -> np.ndarray:
    """Normalised oscillator eigenfunctions psi_n(x), shape (n_max+1, len(x)).

    Uses psi_{n+1} = x sqrt(2/(n+1)) psi_n - sqrt(n/(n+1)) psi_{n-1}, which
    never forms a factorial.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    psi = np.empty((n_max + 1, x.size))
    psi[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        psi[1] = math.sqrt(2.0) * x * psi[0]
    for n in range(1, n_max):
        psi[n + 1] = x * math.sqrt(2.0 / (n + 1)) * psi[n] - math.sqrt(n / (n + 1)) * psi[n - 1]
    return psi


def x_overlap(x, state: FockState):
    """Position-space amplitude <x|state>; scalar in, scalar out."""
    scalar = np.ndim(x) == 0
    out = state.amplitudes @ hermite_functions(x, state.n_max)
    return complex(out[0]) if scalar else out


def p_overlap(p, state: FockState):
    """Momentum-space amplitude <p|state> = sum_n c_n (-i)^n psi_n(p)."""
    scalar = np.ndim(p) == 0
    rot = (-1j) ** np.arange(state.n_max + 1)
    out = (state.amplitudes * rot) @ hermite_functions(p, state.n_max)
    return complex(out[0]) if scalar else out


def coherent_x_overlap(x, alpha: complex):
    """Closed-form <x|alpha> for the X = (a + a^dag)/sqrt(2) convention."""
    x = np.asarray(x, dtype=float)
    z = complex(alpha) / math.sqrt(2.0)
    return np.pi ** -0.25 * np.exp(-0.5 * x * x + 2 * x * z - z * z - 0.5 * abs(alpha) ** 2)


def annihilation(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1)


def quadrature_moments(state: FockState) -> dict:
    """<X>, <P>, <X^2>, <P^2> from ladder-operator matrix elements.

    The state is padded by two levels so a^dag^2 acting on the top level is
    not cut off.
    """
    s = state.padded(state.n_max + 2).amplitudes
    a = annihilation(s.size - 1)
    ad = a.T
    X = (a + ad) / math.sqrt(2.0)
    P = (a - ad) / (1j * math.sqrt(2.0))
    ev = lambda op: complex(np.vdot(s, op @ s)).real
    return {"x": ev(X), "p": ev(P), "x2": ev(X @ X), "p2": ev(P @ P)}
