"""Quadrature densities, sign-binned spin statistics and Husimi Q functions."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from catbell.errors import GridTooSmall
from catbell.fock import FockState, hermite_functions
from catbell.modes import AnyState, Ensemble, TwoModeState, as_ensemble, reduced_density

BOUNDARY_TOL = 1e-8


@dataclass(frozen=True)
class GridSpec:
    """Uniform 1-D grid from x_min to x_max inclusive."""

    x_min: float
    x_max: float
    step: float

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be > 0")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        ratio = (self.x_max - self.x_min) / self.step
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ValueError("(x_max - x_min)/step must be an integer")

    @classmethod
    def symmetric(cls, half_width: float, step: float) -> "GridSpec":
        n = int(round(half_width / step))
        return cls(-n * step, n * step, step)

    @classmethod
    def for_amplitudes(cls, alpha: float, beta: float = 0.0, step: float = 0.04) -> "GridSpec":
        """Quadrature grid covering the peaks at +-sqrt(2) max(alpha, beta) plus 5 units."""
        half = math.ceil(math.sqrt(2.0) * max(abs(alpha), abs(beta)) + 5.0)
        return cls.symmetric(half, step)

    @classmethod
    def for_husimi(cls, alpha: float, beta: float = 0.0, step: float = 0.1) -> "GridSpec":
        """Phase-space grid (alpha units) covering peaks at +-max(alpha, beta) plus 5."""
        half = math.ceil(max(abs(alpha), abs(beta)) + 5.0)
        return cls.symmetric(half, step)

    @property
    def n_points(self) -> int:
        return int(round((self.x_max - self.x_min) / self.step)) + 1

    @property
    def points(self) -> np.ndarray:
        return self.x_min + self.step * np.arange(self.n_points)

    def weights(self) -> np.ndarray:
        w = np.full(self.n_points, self.step)
        w[0] = w[-1] = 0.5 * self.step
        return w

    def refined(self) -> "GridSpec":
        return GridSpec(self.x_min, self.x_max, self.step / 2)

    def zero_index(self) -> Optional[int]:
        pts = self.points
        i = int(np.argmin(np.abs(pts)))
        return i if abs(pts[i]) < 1e-9 * self.step else None

    def sign_weights(self) -> Tuple[np.ndarray, np.ndarray]:
        """Trapezoid weights for X > 0 and X < 0; the X = 0 node is split evenly."""
        i0 = self.zero_index()
        if i0 is None:
            raise ValueError("grid must contain X = 0 for sign binning")
        w = self.weights()
        pts = self.points
        pos = np.where(pts > 0, w, 0.0)
        neg = np.where(pts < 0, w, 0.0)
        pos[i0] = neg[i0] = 0.5 * w[i0]
        return pos, neg

    def as_dict(self) -> dict:
        return {"x_min": self.x_min, "x_max": self.x_max, "step": self.step}


@dataclass(frozen=True, eq=False)
class JointDistribution:
    grid_a: GridSpec
    grid_b: GridSpec
    density: np.ndarray

    def total_mass(self) -> float:
        return float(self.grid_a.weights() @ self.density @ self.grid_b.weights())

    def to_csv(self, value_name: str = "density") -> str:
        return long_csv(self.grid_a.points, self.grid_b.points, self.density, ("x_a", "x_b", value_name))


@dataclass(frozen=True)
class QuadrantProbs:
    pp: float
    pm: float
    mp: float
    mm: float

    def total(self) -> float:
        return self.pp + self.pm + self.mp + self.mm


def long_csv(xs, ys, values, header: Sequence[str]) -> str:
    """Long-format CSV (x, y, value) in row-major order, full float precision."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            w.writerow((repr(float(x)), repr(float(y)), repr(float(values[i, j]))))
    return buf.getvalue()


def _check_boundary(density: np.ndarray, what: str) -> None:
    if density.ndim == 1:
        edge = max(density[0], density[-1])
    else:
        edge = max(density[0].max(), density[-1].max(), density[:, 0].max(), density[:, -1].max())
    if edge > BOUNDARY_TOL:
        raise GridTooSmall(f"{what} is {edge:.2e} at the grid boundary; widen the grid")


def _pure_joint(c: np.ndarray, ha: np.ndarray, hb: np.ndarray) -> np.ndarray:
    amp = ha.T @ c @ hb
    return amp.real**2 + amp.imag**2


def joint_x_density(
    state: AnyState,
    grid: GridSpec,
    grid_b: Optional[GridSpec] = None,
    check: bool = True,
) -> JointDistribution:
    """P(X_A, X_B) = |<X_A|<X_B|psi>|^2, weight-summed over ensemble members."""
    grid_b = grid if grid_b is None else grid_b
    ens = as_ensemble(state)
    s0 = ens.states[0]
    ha = hermite_functions(grid.points, s0.n_max_a)
    hb = hermite_functions(grid_b.points, s0.n_max_b)
    dens = np.zeros((grid.n_points, grid_b.n_points))
    for w, s in ens.members:
        if s.amplitudes.shape != s0.amplitudes.shape:
            ha_s = hermite_functions(grid.points, s.n_max_a)
            hb_s = hermite_functions(grid_b.points, s.n_max_b)
            dens += w * _pure_joint(s.amplitudes, ha_s, hb_s)
        else:
            dens += w * _pure_joint(s.amplitudes, ha, hb)
    if check:
        _check_boundary(dens, "joint density")
    return JointDistribution(grid, grid_b, dens)


def _esum(wa: np.ndarray, dens: np.ndarray, wb: np.ndarray) -> float:
    # row-major accumulation in extended precision keeps results order-independent
    d = dens.astype(np.longdouble)
    return float(np.sum((wa.astype(np.longdouble)[:, None] * d) @ wb.astype(np.longdouble)))


def quadrant_probs(dist: JointDistribution) -> QuadrantProbs:
    """Trapezoid masses of the four sign quadrants (S = +1 iff X > 0)."""
    ap, am = dist.grid_a.sign_weights()
    bp, bm = dist.grid_b.sign_weights()
    d = dist.density
    return QuadrantProbs(_esum(ap, d, bp), _esum(ap, d, bm), _esum(am, d, bp), _esum(am, d, bm))


def correlation_E(q: QuadrantProbs) -> float:
    return q.pp + q.mm - q.pm - q.mp


def marginal_x(dist: JointDistribution, site: str = "B") -> np.ndarray:
    """Integrate the joint density over the other site's quadrature."""
    if site.upper() == "A":
        return dist.density @ dist.grid_b.weights()
    return dist.grid_a.weights() @ dist.density


def integrate(values: np.ndarray, grid: GridSpec) -> float:
    return float(grid.weights() @ values)


def sector_probability(values: np.ndarray, grid: GridSpec, positive: bool = True) -> float:
    pos, neg = grid.sign_weights()
    return float((pos if positive else neg) @ values)


def x_density(state: FockState, grid: GridSpec, check: bool = True) -> np.ndarray:
    amp = state.amplitudes @ hermite_functions(grid.points, state.n_max)
    dens = amp.real**2 + amp.imag**2
    if check:
        _check_boundary(dens, "X density")
    return dens


def p_density(state: FockState, grid: GridSpec, check: bool = True) -> np.ndarray:
    rot = (-1j) ** np.arange(state.n_max + 1)
    amp = (state.amplitudes * rot) @ hermite_functions(grid.points, state.n_max)
    dens = amp.real**2 + amp.imag**2
    if check:
        _check_boundary(dens, "P density")
    return dens


def sign_expectation(state: FockState, grid: GridSpec) -> float:
    """<sgn X> from the trapezoid X density."""
    pos, neg = grid.sign_weights()
    d = x_density(state, grid)
    return float((pos - neg) @ d)


# --- Husimi Q -------------------------------------------------------------


def coherent_rows(z: np.ndarray, n_max: int) -> np.ndarray:
    """C[j, n] = <n|z_j> for coherent states |z_j>, built by a stable recursion."""
    z = np.asarray(z, dtype=complex).ravel()
    c = np.empty((z.size, n_max + 1), dtype=complex)
    c[:, 0] = np.exp(-0.5 * np.abs(z) ** 2)
    for n in range(1, n_max + 1):
        c[:, n] = c[:, n - 1] * z / math.sqrt(n)
    return c


def _phase_space(gx: GridSpec, gp: GridSpec) -> np.ndarray:
    x, p = np.meshgrid(gx.points, gp.points, indexing="ij")
    return (x + 1j * p).ravel()


def husimi_single(state: Union[FockState, np.ndarray], gx: GridSpec, gp: GridSpec) -> np.ndarray:
    """Q(x, p) = <z|rho|z>/pi with z = x + i p; accepts a ket or a density matrix."""
    if isinstance(state, FockState):
        c = coherent_rows(_phase_space(gx, gp), state.n_max)
        amp = c.conj() @ state.amplitudes
        q = (amp.real**2 + amp.imag**2) / np.pi
    else:
        rho = np.asarray(state)
        c = coherent_rows(_phase_space(gx, gp), rho.shape[0] - 1)
        q = np.einsum("jn,nk,jk->j", c.conj(), rho, c).real / np.pi
    return q.reshape(gx.n_points, gp.n_points)


def husimi_q(state: AnyState, grid4: Tuple[GridSpec, GridSpec, GridSpec, GridSpec]) -> np.ndarray:
    """Full Q(x_A, p_A, x_B, p_B) = <z_A, z_B|rho|z_A, z_B>/pi^2 on a 4-D grid.

    Memory grows as the product of all four grid sizes; meant for coarse grids.
    """
    gxa, gpa, gxb, gpb = grid4
    ens = as_ensemble(state)
    s0 = ens.states[0]
    ca = coherent_rows(_phase_space(gxa, gpa), s0.n_max_a).conj()
    cb = coherent_rows(_phase_space(gxb, gpb), s0.n_max_b).conj()
    q = 0
    for w, s in ens.members:
        amp = ca @ s.amplitudes @ cb.T
        q = q + w * (amp.real**2 + amp.imag**2)
    shape = (gxa.n_points, gpa.n_points, gxb.n_points, gpb.n_points)
    return np.asarray(q).reshape(shape) / np.pi**2


def p_integrated_kernel(x: np.ndarray, n_max: int) -> np.ndarray:
    """K[i, n, n'] = int dp <n|z>^* <n'|z> at z = x_i + i p.

    The integrand is exp(-p^2) times a polynomial of degree <= 2 n_max in p,
    so Gauss-Hermite with n_max + 2 nodes integrates it exactly.
    """
    nodes, weights = np.polynomial.hermite.hermgauss(n_max + 2)
    x = np.asarray(x, float)
    z = x[:, None] + 1j * nodes[None, :]
    g = np.empty(z.shape + (n_max + 1,), dtype=complex)
    g[..., 0] = 1.0
    for n in range(1, n_max + 1):
        g[..., n] = g[..., n - 1] * z / math.sqrt(n)
    scale = np.exp(-x * x)[:, None] * weights[None, :]
    return np.matmul((g.conj() * scale[..., None]).transpose(0, 2, 1), g)


def q_marginal_xx(state: AnyState, grid_a: GridSpec, grid_b: Optional[GridSpec] = None) -> np.ndarray:
    """Q(x_A, x_B) with both momenta integrated out exactly."""
    grid_b = grid_a if grid_b is None else grid_b
    ens = as_ensemble(state)
    s0 = ens.states[0]
    ka = p_integrated_kernel(grid_a.points, s0.n_max_a)
    kb = p_integrated_kernel(grid_b.points, s0.n_max_b)
    mb = (s0.n_max_b + 1) ** 2
    kb_flat = kb.reshape(grid_b.n_points, mb)
    q = np.zeros((grid_a.n_points, grid_b.n_points))
    for w, s in ens.members:
        c = s.amplitudes
        t = np.matmul(c.T, np.matmul(ka, c.conj())).reshape(grid_a.n_points, mb)
        q += w * (t @ kb_flat.T).real
    return q / np.pi**2


def q_marginal_xp(state: AnyState, site: str, gx: GridSpec, gp: GridSpec) -> np.ndarray:
    """Single-site Q(x, p) from the reduced density matrix."""
    return husimi_single(reduced_density(state, site), gx, gp)


class QGap(NamedTuple):
    sup: float
    l1: float


def q_pure_vs_mixed_gap(first: AnyState, second: AnyState, grid: GridSpec) -> QGap:
    """Sup-norm and L1 distance between two Q(x_A, x_B) marginals."""
    qa = q_marginal_xx(first, grid)
    qb = q_marginal_xx(second, grid)
    return density_gap(qa, qb, grid, grid)


def density_gap(da: np.ndarray, db: np.ndarray, grid_a: GridSpec, grid_b: GridSpec) -> QGap:
    diff = np.abs(da - db)
    return QGap(float(diff.max()), float(grid_a.weights() @ diff @ grid_b.weights()))


def local_maxima(values: np.ndarray, rel_threshold: float = 0.05) -> int:
    """Count strict-ish 2-D local maxima (8-neighbourhood) above a fraction of the peak."""
    v = np.asarray(values)
    padded = np.pad(v, 1, mode="constant", constant_values=-np.inf)
    core = padded[1:-1, 1:-1]
    is_max = np.ones_like(v, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == dj == 0:
                continue
            nb = padded[1 + di : padded.shape[0] - 1 + di, 1 + dj : padded.shape[1] - 1 + dj]
            is_max &= core >= nb
    return int(np.sum(is_max & (v > rel_threshold * v.max())))
