"""Two-mode pure states, rank-limited mixtures and local operations."""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from catbell.errors import DegenerateState
from catbell.fock import (
    EvolutionParams,
    FockState,
    coherent,
    default_n_max,
    hermite_functions,
    nonlinear_phases,
)

MIN_AMPLITUDE = 1e-6


class BellSign(enum.Enum):
    ANTICORRELATED = "anticorrelated"
    CORRELATED = "correlated"


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Pure state sum_{nm} c_{nm} |n>_a |m>_b; rows index mode a."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 2:
            raise ValueError("amplitudes must be a 2-D array")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_max_a(self) -> int:
        return self.amplitudes.shape[0] - 1

    @property
    def n_max_b(self) -> int:
        return self.amplitudes.shape[1] - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def transposed(self) -> "TwoModeState":
        """Swap the roles of modes a and b."""
        return TwoModeState(self.amplitudes.T)

    @classmethod
    def product(cls, a: FockState, b: FockState) -> "TwoModeState":
        return cls(np.outer(a.amplitudes, b.amplitudes))


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weighted list of pure two-mode states standing in for a density operator."""

    members: Tuple[Tuple[float, TwoModeState], ...]

    def __post_init__(self):
        members = tuple((float(w), s) for w, s in self.members)
        if not members:
            raise ValueError("ensemble needs at least one member")
        if any(not 0 < w <= 1 for w, _ in members):
            raise ValueError("weights must lie in (0, 1]")
        if abs(sum(w for w, _ in members) - 1) > 1e-12:
            raise ValueError("weights must sum to 1")
        object.__setattr__(self, "members", members)

    @property
    def weights(self) -> List[float]:
        return [w for w, _ in self.members]

    @property
    def states(self) -> List[TwoModeState]:
        return [s for _, s in self.members]

    def transposed(self) -> "Ensemble":
        return Ensemble(tuple((w, s.transposed()) for w, s in self.members))


AnyState = Union[TwoModeState, Ensemble]


def as_ensemble(state: AnyState) -> Ensemble:
    if isinstance(state, Ensemble):
        return state
    return Ensemble(((1.0, state),))


def bell_normalisation(alpha: float, beta: float) -> float:
    return 1 / math.sqrt(2 * -math.expm1(-2 * alpha * alpha - 2 * beta * beta))


def bell_cat(
    alpha: float,
    beta: float,
    sign: BellSign = BellSign.ANTICORRELATED,
    n_max_a: Optional[int] = None,
    n_max_b: Optional[int] = None,
) -> TwoModeState:
    """N(|alpha>|-beta> - |-alpha>|beta>), or beta -> -beta when correlated.

    N uses the closed form 1/sqrt(2(1 - exp(-2 alpha^2 - 2 beta^2))) rather
    than a numerical renormalisation, so truncation loss stays visible.
    """
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be >= 0")
    if math.hypot(alpha, beta) < MIN_AMPLITUDE:
        raise DegenerateState("alpha = beta = 0 makes the Bell cat the zero vector")
    n_max_a = default_n_max(alpha) if n_max_a is None else n_max_a
    n_max_b = default_n_max(beta) if n_max_b is None else n_max_b
    b = beta if sign is BellSign.ANTICORRELATED else -beta
    pa, ma = coherent(alpha, n_max_a), coherent(-alpha, n_max_a)
    pb, mb = coherent(b, n_max_b), coherent(-b, n_max_b)
    amps = np.outer(pa.amplitudes, mb.amplitudes) - np.outer(ma.amplitudes, pb.amplitudes)
    return TwoModeState(bell_normalisation(alpha, beta) * amps)


def pointer_mixture(
    alpha: float,
    beta: float,
    n_max_a: Optional[int] = None,
    n_max_b: Optional[int] = None,
    sign: BellSign = BellSign.ANTICORRELATED,
) -> Ensemble:
    """1/2 (|alpha,-beta><.| + |-alpha,beta><.|): the Bell cat with coherences removed."""
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be > 0")
    n_max_a = default_n_max(alpha) if n_max_a is None else n_max_a
    n_max_b = default_n_max(beta) if n_max_b is None else n_max_b
    b = beta if sign is BellSign.ANTICORRELATED else -beta
    first = TwoModeState.product(coherent(alpha, n_max_a), coherent(-b, n_max_b))
    second = TwoModeState.product(coherent(-alpha, n_max_a), coherent(b, n_max_b))
    return Ensemble(((0.5, first), (0.5, second)))


def _site(site: str) -> str:
    s = str(site).upper()
    if s not in ("A", "B"):
        raise ValueError(f"site must be 'A' or 'B', got {site!r}")
    return s


def apply_local(state: TwoModeState, site: str, params: EvolutionParams) -> TwoModeState:
    """exp(-i omega t n^k) on one mode: row phases for A, column phases for B."""
    if _site(site) == "A":
        ph = nonlinear_phases(state.n_max_a, params)
        return TwoModeState(state.amplitudes * ph[:, None])
    ph = nonlinear_phases(state.n_max_b, params)
    return TwoModeState(state.amplitudes * ph[None, :])


def evolve_both(state: AnyState, t_a: float, t_b: float, omega: float = 1.0, k: int = 4) -> AnyState:
    """Convenience wrapper: evolve A for t_a and B for t_b."""
    pa = EvolutionParams(omega, k, t_a)
    pb = EvolutionParams(omega, k, t_b)
    if isinstance(state, Ensemble):
        return apply_local_ensemble(apply_local_ensemble(state, "A", pa), "B", pb)
    return apply_local(apply_local(state, "A", pa), "B", pb)


def apply_local_ensemble(ens: Ensemble, site: str, params: EvolutionParams) -> Ensemble:
    return Ensemble(tuple((w, apply_local(s, site, params)) for w, s in ens.members))


def reduced_density(state: AnyState, site: str) -> np.ndarray:
    """Partial trace over the other mode."""
    ens = as_ensemble(state)
    keep_a = _site(site) == "A"
    rho = 0
    for w, s in ens.members:
        c = s.amplitudes
        rho = rho + w * (c @ c.conj().T if keep_a else c.T @ c.conj())
    return rho


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


@functools.lru_cache(maxsize=32)
def positive_sector_matrix(n_max: int) -> np.ndarray:
    """M_{mn} = int_0^inf psi_m(x) psi_n(x) dx, the X > 0 projector in the Fock basis.

    Gauss-Legendre on [0, L] is exact to rounding here because the integrand
    is a polynomial times a Gaussian that is negligible beyond L.
    """
    half = math.sqrt(2 * n_max + 1) + 12.0
    nodes, weights = np.polynomial.legendre.leggauss(2 * n_max + 160)
    x = 0.5 * half * (nodes + 1)
    w = 0.5 * half * weights
    psi = hermite_functions(x, n_max)
    m = (psi * w) @ psi.T
    m.flags.writeable = False
    return m


def sign_operator(n_max: int) -> np.ndarray:
    """Matrix of sgn(X) between Fock states 0..n_max."""
    return 2 * positive_sector_matrix(n_max) - np.eye(n_max + 1)


def collapse_by_B_sign(state: TwoModeState, min_weight: float = 1e-12) -> Ensemble:
    """Read out sgn(X_B) and keep both outcomes as a weighted ensemble.

    Branch weights are the exact sector probabilities <psi|1 x M|psi>. The
    branch states are the truncated projections renormalised; they are exact
    up to the Fock tail of the X_B = 0 discontinuity, which is negligible
    once |beta| is a few units. Branches lighter than ``min_weight`` are
    dropped and the survivors renormalised.
    """
    norm2 = state.norm() ** 2
    if norm2 < 1e-24:
        raise DegenerateState("cannot collapse the zero vector")
    m_pos = positive_sector_matrix(state.n_max_b)
    m_neg = np.eye(state.n_max_b + 1) - m_pos
    c = state.amplitudes
    branches = []
    for m in (m_pos, m_neg):
        p = float(np.real(np.vdot(c, c @ m))) / norm2
        if p < min_weight:
            continue
        projected = c @ m
        branches.append((p, TwoModeState(projected / np.linalg.norm(projected))))
    total = sum(p for p, _ in branches)
    return Ensemble(tuple((p / total, s) for p, s in branches))
