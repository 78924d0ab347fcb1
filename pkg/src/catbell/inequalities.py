"""CHSH and Leggett-Garg values from the quadrature pipeline, plus the EPR-type test."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from catbell import analytic
from catbell.fock import EvolutionParams, FockState, coherent, default_n_max, evolve_nonlinear
from catbell.modes import AnyState, BellSign, as_ensemble, bell_cat, evolve_both, pointer_mixture
from catbell.quadrature import (
    GridSpec,
    correlation_E,
    joint_x_density,
    p_density,
    quadrant_probs,
    sector_probability,
    x_density,
)

CONVERGENCE_GATE = 1e-3
PI = math.pi


def analytic_E(theta: float, phi: float) -> float:
    return analytic.E_qubit(theta, phi)


@dataclass(frozen=True)
class BellSettings:
    """Interaction times (t_a, t_a') at A and (t_b, t_b') at B."""

    t_a: float = 0.0
    t_a_prime: float = PI / 2
    t_b: float = PI / 4
    t_b_prime: float = 3 * PI / 4
    omega: float = 1.0
    k: int = 4

    def __post_init__(self):
        if min(self.t_a, self.t_a_prime, self.t_b, self.t_b_prime) < 0:
            raise ValueError("interaction times must be >= 0")
        EvolutionParams(self.omega, self.k, 0.0)

    @classmethod
    def standard(cls, omega: float = 1.0, k: int = 4) -> "BellSettings":
        """Analyzer angles 0, pi/4 at A and pi/8, 3pi/8 at B."""
        return cls(0.0, PI / (2 * omega), PI / (4 * omega), 3 * PI / (4 * omega), omega, k)

    def pairs(self) -> Dict[str, Tuple[float, float]]:
        return {
            "E(ta,tb)": (self.t_a, self.t_b),
            "E(ta,tb')": (self.t_a, self.t_b_prime),
            "E(ta',tb)": (self.t_a_prime, self.t_b),
            "E(ta',tb')": (self.t_a_prime, self.t_b_prime),
        }

    def swapped(self) -> "BellSettings":
        return BellSettings(self.t_b, self.t_b_prime, self.t_a, self.t_a_prime, self.omega, self.k)


CHSH_COEFFS = {"E(ta,tb)": 1.0, "E(ta,tb')": -1.0, "E(ta',tb)": 1.0, "E(ta',tb')": 1.0}


@dataclass(frozen=True)
class LGSettings:
    """Shared-clock times t1 < t2 < t3 for the bipartite Leggett-Garg test."""

    t1: float = 0.0
    t2: float = PI / 4
    t3: float = PI / 2
    omega: float = 1.0
    k: int = 4
    sign: BellSign = BellSign.ANTICORRELATED

    def __post_init__(self):
        if not (0 <= self.t1 < self.t2 < self.t3):
            raise ValueError("need 0 <= t1 < t2 < t3")
        EvolutionParams(self.omega, self.k, 0.0)

    @classmethod
    def standard(cls, omega: float = 1.0, k: int = 4, sign: BellSign = BellSign.ANTICORRELATED) -> "LGSettings":
        return cls(0.0, PI / (4 * omega), PI / (2 * omega), omega, k, sign)

    def pairs(self) -> Dict[str, Tuple[float, float]]:
        """(t_a, t_b) per moment; B is frozen at the inference time while A runs on."""
        return {
            "<S1B S2A>": (self.t2, self.t1),
            "<S1B S3A>": (self.t3, self.t1),
            "<S2B S3A>": (self.t3, self.t2),
        }

    def coefficients(self) -> Dict[str, float]:
        s = -1.0 if self.sign is BellSign.ANTICORRELATED else 1.0
        return {"<S1B S2A>": s, "<S1B S3A>": -s, "<S2B S3A>": s}


@dataclass
class InequalityReport:
    """Correlations, their signed combination and the classical bound.

    ``kind`` selects the violation rule: "chsh" is |aggregate| > bound,
    "lg" is aggregate > bound and "epr" is aggregate < bound.
    """

    kind: str
    components: Dict[str, float]
    coefficients: Dict[str, float]
    bound: float
    settings: dict = field(default_factory=dict)
    grid: Optional[dict] = None
    diagnostics: dict = field(default_factory=dict)
    converged: Optional[bool] = None
    aggregate: float = field(init=False)
    violated: bool = field(init=False)

    def __post_init__(self):
        self.aggregate = signed_sum(self.components, self.coefficients)
        if self.kind == "chsh":
            self.violated = abs(self.aggregate) > self.bound
        elif self.kind == "lg":
            self.violated = self.aggregate > self.bound
        elif self.kind == "epr":
            self.violated = self.aggregate < self.bound
        else:
            raise ValueError(f"unknown report kind {self.kind!r}")

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def signed_sum(components: Dict[str, float], coefficients: Dict[str, float]) -> float:
    total = 0.0
    for key, c in coefficients.items():
        total += c * components[key]
    return total


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, BellSign):
        return obj.value
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def correlation_at(state: AnyState, t_a: float, t_b: float, grid: GridSpec, omega: float = 1.0, k: int = 4) -> float:
    """E(t_a, t_b) = P++ + P-- - P+- - P-+ after local evolution."""
    evolved = evolve_both(state, t_a, t_b, omega, k)
    return correlation_E(quadrant_probs(joint_x_density(evolved, grid)))


def chsh_from_state(state: AnyState, settings: BellSettings, grid: GridSpec) -> InequalityReport:
    comps = {
        label: correlation_at(state, ta, tb, grid, settings.omega, settings.k)
        for label, (ta, tb) in settings.pairs().items()
    }
    return InequalityReport("chsh", comps, dict(CHSH_COEFFS), 2.0, settings=asdict(settings), grid=grid.as_dict())


def _initial_state(alpha, beta, n_max, initial, sign=BellSign.ANTICORRELATED) -> AnyState:
    na = default_n_max(alpha) if n_max is None else n_max
    nb = default_n_max(beta) if n_max is None else n_max
    if initial == "bell":
        return bell_cat(alpha, beta, sign, na, nb)
    if initial == "mixture":
        return pointer_mixture(alpha, beta, na, nb, sign)
    raise ValueError(f"initial must be 'bell' or 'mixture', got {initial!r}")


def truncation_deficit(state: AnyState) -> float:
    """1 - norm^2 of the initial state; nonzero only through the Fock cutoff."""
    return max(abs(1.0 - s.norm() ** 2) for s in as_ensemble(state).states)


def with_convergence(
    compute: Callable[[GridSpec, Optional[int]], InequalityReport],
    grid: GridSpec,
    n_max: int,
) -> InequalityReport:
    """Attach step-halving and cutoff-doubling deltas of the aggregate."""
    report = compute(grid, n_max)
    fine = compute(grid.refined(), n_max)
    wide = compute(grid, 2 * n_max)
    d_step = abs(fine.aggregate - report.aggregate)
    d_trunc = abs(wide.aggregate - report.aggregate)
    report.diagnostics.update(
        step_halving_delta=d_step,
        truncation_doubling_delta=d_trunc,
        gate=CONVERGENCE_GATE,
    )
    report.converged = bool(d_step < CONVERGENCE_GATE and d_trunc < CONVERGENCE_GATE)
    return report


def chsh_value(
    alpha: float,
    beta: float,
    settings: Optional[BellSettings] = None,
    grid: Optional[GridSpec] = None,
    n_max: Optional[int] = None,
    initial: str = "bell",
    check_convergence: bool = False,
) -> InequalityReport:
    """CHSH value B for the Bell cat (or its pointer mixture) at four time settings."""
    settings = BellSettings.standard() if settings is None else settings
    grid = GridSpec.for_amplitudes(alpha, beta) if grid is None else grid

    def compute(g, n):
        state = _initial_state(alpha, beta, n, initial)
        rep = chsh_from_state(state, settings, g)
        rep.settings.update(alpha=alpha, beta=beta, initial=initial)
        rep.diagnostics["truncation_deficit"] = truncation_deficit(state)
        rep.diagnostics["n_max"] = n if n is not None else max(default_n_max(alpha), default_n_max(beta))
        return rep

    if not check_convergence:
        return compute(grid, n_max)
    return with_convergence(compute, grid, n_max or max(default_n_max(alpha), default_n_max(beta)))


def lg_bipartite_from_state(state: AnyState, settings: LGSettings, grid: GridSpec) -> InequalityReport:
    comps = {
        label: correlation_at(state, ta, tb, grid, settings.omega, settings.k)
        for label, (ta, tb) in settings.pairs().items()
    }
    return InequalityReport("lg", comps, settings.coefficients(), 1.0, settings=asdict(settings), grid=grid.as_dict())


def lg_bipartite_value(
    alpha: float,
    beta: float,
    settings: Optional[LGSettings] = None,
    grid: Optional[GridSpec] = None,
    n_max: Optional[int] = None,
    initial: str = "bell",
    check_convergence: bool = False,
) -> InequalityReport:
    """Three-time Leggett-Garg combination B_lg inferred through site B."""
    settings = LGSettings.standard() if settings is None else settings
    grid = GridSpec.for_amplitudes(alpha, beta) if grid is None else grid

    def compute(g, n):
        state = _initial_state(alpha, beta, n, initial, settings.sign)
        rep = lg_bipartite_from_state(state, settings, g)
        rep.settings.update(alpha=alpha, beta=beta, initial=initial)
        rep.diagnostics["truncation_deficit"] = truncation_deficit(state)
        rep.diagnostics["closed_form"] = analytic.b_lg(alpha, beta) if initial == "bell" else None
        return rep

    if not check_convergence:
        return compute(grid, n_max)
    return with_convergence(compute, grid, n_max or max(default_n_max(alpha), default_n_max(beta)))


def b_lg_closed_form(alpha: float, beta: float) -> float:
    return analytic.b_lg(alpha, beta)


def conditional_inference_prob(
    alpha: float,
    beta: float,
    grid: Optional[GridSpec] = None,
    time: float = 0.0,
    omega: float = 1.0,
    k: int = 4,
    sign: BellSign = BellSign.ANTICORRELATED,
    state: Optional[AnyState] = None,
) -> float:
    """P(S_A = +1 | S_B = -1) (anticorrelated) or P(S_A = +1 | S_B = +1) (correlated).

    Both sites evolve on a shared clock to ``time`` before readout. Pass
    ``state`` to use something other than the Bell cat.
    """
    grid = GridSpec.for_amplitudes(alpha, beta) if grid is None else grid
    if state is None:
        state = bell_cat(alpha, beta, sign)
    q = quadrant_probs(joint_x_density(evolve_both(state, time, time, omega, k), grid))
    if sign is BellSign.ANTICORRELATED:
        return q.pm / (q.pm + q.mm)
    return q.pp / (q.pp + q.mp)


def lg_single_system_value(
    alpha: float,
    omega: float = 1.0,
    k: int = 4,
    grid: Optional[GridSpec] = None,
    n_max: Optional[int] = None,
) -> InequalityReport:
    """Single-mode Leggett-Garg value with an ideal sign measurement at t2.

    |alpha> is prepared at t1 = 0, so S1 = +1. The measurement at t2 = pi/4
    omega finds S2 = +-1 with the sign-sector probabilities of the evolved
    state and leaves |+-alpha>, which then evolves to t3 = pi/2 omega.
    """
    grid = GridSpec.for_amplitudes(alpha) if grid is None else grid
    t2, t3 = PI / (4 * omega), PI / (2 * omega)
    psi1 = coherent(alpha, n_max)

    def sgn(state: FockState) -> float:
        d = x_density(state, grid)
        return sector_probability(d, grid, True) - sector_probability(d, grid, False)

    psi2 = evolve_nonlinear(psi1, EvolutionParams(omega, k, t2))
    psi3 = evolve_nonlinear(psi1, EvolutionParams(omega, k, t3))
    d2 = x_density(psi2, grid)
    p_plus = sector_probability(d2, grid, True)
    p_minus = sector_probability(d2, grid, False)
    hop = EvolutionParams(omega, k, t3 - t2)
    after_plus = sgn(evolve_nonlinear(coherent(alpha, psi1.n_max), hop))
    after_minus = sgn(evolve_nonlinear(coherent(-alpha, psi1.n_max), hop))
    comps = {
        "<S1 S2>": sgn(psi2),
        "<S2 S3>": p_plus * after_plus - p_minus * after_minus,
        "<S1 S3>": sgn(psi3),
    }
    coeffs = {"<S1 S2>": 1.0, "<S2 S3>": 1.0, "<S1 S3>": -1.0}
    return InequalityReport(
        "lg",
        comps,
        coeffs,
        1.0,
        settings={"alpha": alpha, "omega": omega, "k": k, "t1": 0.0, "t2": t2, "t3": t3},
        grid=grid.as_dict(),
        diagnostics={"p_plus_t2": p_plus, "p_minus_t2": p_minus},
    )


def cat_superposition(alpha: float, c1: complex, c2: complex, n_max: Optional[int] = None) -> FockState:
    """c1|alpha> + i c2|-alpha>, normalised including the |alpha>, |-alpha> overlap."""
    if abs(abs(c1) ** 2 + abs(c2) ** 2 - 1) > 1e-10:
        raise ValueError("need |c1|^2 + |c2|^2 = 1")
    state = c1 * coherent(alpha, n_max) + (1j * c2) * coherent(-alpha, n_max)
    return state.normalized()


def p_variance(
    alpha: float,
    c1: complex = 1 / math.sqrt(2),
    c2: complex = 1 / math.sqrt(2),
    grid: Optional[GridSpec] = None,
    n_max: Optional[int] = None,
) -> float:
    """Var(P) of c1|alpha> + i c2|-alpha> by trapezoid quadrature of P(P)."""
    grid = GridSpec.for_amplitudes(1.0) if grid is None else grid
    dens = p_density(cat_superposition(alpha, c1, c2, n_max), grid)
    w = grid.weights()
    p = grid.points
    mass = w @ dens
    mean = (w @ (p * dens)) / mass
    return float((w @ (p * p * dens)) / mass - mean * mean)


def epr_epsilon(alpha: float, c1: complex, c2: complex, grid: Optional[GridSpec] = None, var_x_ave: float = 0.5) -> float:
    """(Delta X)_ave (Delta P) with each pointer state assigned Var(X) = 1/2."""
    return math.sqrt(var_x_ave * p_variance(alpha, c1, c2, grid))


def epr_report(
    alpha: float,
    c1: complex,
    c2: complex,
    grid: Optional[GridSpec] = None,
    n_max: Optional[int] = None,
) -> InequalityReport:
    var_p = p_variance(alpha, c1, c2, grid, n_max)
    eps = math.sqrt(0.5 * var_p)
    return InequalityReport(
        "epr",
        {"epsilon_M": eps},
        {"epsilon_M": 1.0},
        0.5,
        settings={"alpha": alpha, "c1": complex(c1).real, "c2": complex(c2).real},
        diagnostics={"var_p": var_p, "var_x_ave": 0.5},
    )
