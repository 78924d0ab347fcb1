"""Config-driven experiment runs that emit labeled CSV datasets and reports.

Config files are INI-style with a single ``[scenario]`` section::

    [scenario]
    schema_version = 1
    scenario_id = bell_chsh
    alpha = 3
    beta = 3
    omega = 1
    k = 4
    times = 0, pi/4, pi/2       ; optional, in units of 1/omega
    grid_step = 0.04            ; optional
    grid_half_width = 10        ; optional, default ceil(sqrt2 max(alpha, beta) + 5)

Time values accept plain numbers or arithmetic in ``pi``.
"""

from __future__ import annotations

import ast
import configparser
import csv
import io
import json
import math
import operator
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from catbell.errors import CatBellError, ConfigInvalid
from catbell.fock import EvolutionParams, coherent, default_n_max, evolve_nonlinear
from catbell.inequalities import (
    BellSettings,
    InequalityReport,
    LGSettings,
    cat_superposition,
    chsh_value,
    conditional_inference_prob,
    epr_report,
    lg_bipartite_value,
    lg_single_system_value,
    with_convergence,
)
from catbell.modes import BellSign, bell_cat, evolve_both, pointer_mixture
from catbell.quadrature import (
    GridSpec,
    density_gap,
    husimi_single,
    joint_x_density,
    local_maxima,
    long_csv,
    p_density,
    q_marginal_xx,
)

SCHEMA_VERSION = 1
SCENARIOS = (
    "single_mode_evolution",
    "bell_chsh",
    "bell_q_dynamics",
    "lg_single",
    "lg_bipartite",
    "delayed_collapse",
    "epr_paradox",
)
DESCRIPTIONS = {
    "single_mode_evolution": "Q(x, p) of |alpha> under exp(-i omega t n^k) at chosen times",
    "bell_chsh": "CHSH value B for the Bell cat and its pointer mixture",
    "bell_q_dynamics": "Q(x_A, x_B) for the four CHSH settings, cat vs mixture",
    "lg_single": "three-time Leggett-Garg value of one mode with a sign measurement at t2",
    "lg_bipartite": "Leggett-Garg value B_lg with spins inferred through site B",
    "delayed_collapse": "P(X_A, X_B) with and without an early readout at B",
    "epr_paradox": "momentum variance of c1|alpha> + i c2|-alpha> and the EPR product",
}
PI = math.pi

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def parse_number(text: str) -> float:
    """Evaluate a number or +-*/ arithmetic over numbers and ``pi``."""

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return PI
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        raise ValueError
    try:
        return ev(ast.parse(text.strip(), mode="eval").body)
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise ConfigInvalid(f"cannot read {text!r} as a number") from None


@dataclass(frozen=True)
class ScenarioConfig:
    scenario_id: str
    alpha: float = 3.0
    beta: float = 3.0
    omega: float = 1.0
    k: int = 4
    times: Optional[Tuple[float, ...]] = None
    grid_step: float = 0.04
    grid_half_width: Optional[float] = None
    husimi_step: float = 0.1
    c1: float = 1 / math.sqrt(2)
    c2: float = 1 / math.sqrt(2)
    sign: str = "anticorrelated"
    check_convergence: bool = True
    output_dir: Optional[str] = None
    schema_version: int = SCHEMA_VERSION

    @property
    def grid(self) -> GridSpec:
        if self.grid_half_width is None:
            return GridSpec.for_amplitudes(self.alpha, self.beta, self.grid_step)
        return GridSpec.symmetric(self.grid_half_width, self.grid_step)

    @property
    def husimi_grid(self) -> GridSpec:
        return GridSpec.for_husimi(self.alpha, self.beta, self.husimi_step)

    @property
    def bell_sign(self) -> BellSign:
        return BellSign(self.sign)

    def with_values(self, **changes) -> "ScenarioConfig":
        return validate(replace(self, **changes))


KEYS = {f.name for f in fields(ScenarioConfig)}


def _convert(key: str, raw: str):
    raw = raw.strip()
    if key in ("scenario_id", "sign", "output_dir"):
        return raw
    if key in ("k", "schema_version"):
        try:
            return int(raw)
        except ValueError:
            raise ConfigInvalid(f"{key} must be an integer, got {raw!r}") from None
    if key == "check_convergence":
        low = raw.lower()
        if low not in ("true", "false", "yes", "no", "1", "0", "on", "off"):
            raise ConfigInvalid(f"check_convergence must be true or false, got {raw!r}")
        return low in ("true", "yes", "1", "on")
    if key == "times":
        return tuple(parse_number(t) for t in raw.split(",") if t.strip()) or None
    if key == "grid_half_width" and raw.lower() in ("", "auto"):
        return None
    return parse_number(raw)


def config_from_mapping(values: Dict[str, str]) -> ScenarioConfig:
    unknown = sorted(set(values) - KEYS)
    if unknown:
        raise ConfigInvalid(f"unknown key(s): {', '.join(unknown)}")
    if "scenario_id" not in values:
        raise ConfigInvalid("scenario_id is required")
    return validate(ScenarioConfig(**{k: _convert(k, v) for k, v in values.items()}))


def parse_overrides(pairs: Sequence[str]) -> Dict[str, str]:
    out = {}
    for item in pairs:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigInvalid(f"override {item!r} is not of the form key=value")
        if key not in KEYS:
            raise ConfigInvalid(f"override key {key!r} is not in the schema")
        out[key] = value
    return out


def load_config(path: os.PathLike, overrides: Sequence[str] = ()) -> ScenarioConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config {path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise ConfigInvalid(f"malformed config {path}: {exc.message}") from None
    if not parser.has_section("scenario"):
        raise ConfigInvalid(f"{path} has no [scenario] section")
    values = dict(parser.items("scenario"))
    values.update(parse_overrides(overrides))
    return config_from_mapping(values)


def validate(cfg: ScenarioConfig) -> ScenarioConfig:
    """Raise ConfigInvalid with a readable reason, else return cfg unchanged."""
    if cfg.schema_version != SCHEMA_VERSION:
        raise ConfigInvalid(f"schema_version {cfg.schema_version} is not supported (expected {SCHEMA_VERSION})")
    if cfg.scenario_id not in SCENARIOS:
        raise ConfigInvalid(f"unknown scenario_id {cfg.scenario_id!r}; choose from {', '.join(SCENARIOS)}")
    for name in ("alpha", "beta"):
        v = getattr(cfg, name)
        if not math.isfinite(v) or v < 0:
            raise ConfigInvalid(f"{name} must be ≥ 0")
    if not cfg.omega > 0:
        raise ConfigInvalid("omega must be > 0")
    if cfg.k < 2 or cfg.k % 2:
        raise ConfigInvalid("k must be an even integer ≥ 2")
    if not cfg.grid_step > 0 or not cfg.husimi_step > 0:
        raise ConfigInvalid("grid steps must be > 0")
    if cfg.sign not in ("anticorrelated", "correlated"):
        raise ConfigInvalid("sign must be 'anticorrelated' or 'correlated'")
    if cfg.times is not None and any(t < 0 for t in cfg.times):
        raise ConfigInvalid("times must be ≥ 0")
    sid = cfg.scenario_id
    if sid in ("bell_chsh", "bell_q_dynamics", "lg_bipartite", "delayed_collapse") and min(cfg.alpha, cfg.beta) <= 0:
        raise ConfigInvalid(f"{sid} needs alpha > 0 and beta > 0")
    if sid == "bell_chsh" and cfg.times is not None and len(cfg.times) != 4:
        raise ConfigInvalid("bell_chsh takes four times: t_a, t_a', t_b, t_b'")
    if sid == "bell_q_dynamics" and cfg.times is not None and len(cfg.times) % 2:
        raise ConfigInvalid("bell_q_dynamics takes (t_a, t_b) pairs")
    if sid == "lg_bipartite" and cfg.times is not None:
        t = cfg.times
        if len(t) != 3 or not t[0] < t[1] < t[2]:
            raise ConfigInvalid("lg_bipartite takes three increasing times t1 < t2 < t3")
    if sid == "lg_single" and cfg.times is not None:
        raise ConfigInvalid("lg_single uses the fixed times 0, pi/4, pi/2 (in units of 1/omega)")
    if sid == "epr_paradox" and abs(cfg.c1**2 + cfg.c2**2 - 1) > 1e-10:
        raise ConfigInvalid("c1^2 + c2^2 must equal 1")
    if cfg.grid_half_width is not None:
        need = math.sqrt(2) * max(cfg.alpha, cfg.beta) + 5
        if cfg.grid_half_width < need:
            raise ConfigInvalid(f"grid_half_width must be ≥ {need:.3f} (sqrt2 max(alpha, beta) + 5)")
        ratio = cfg.grid_half_width / cfg.grid_step
        if abs(ratio - round(ratio)) > 1e-9 * max(ratio, 1.0):
            raise ConfigInvalid("grid_half_width must be a multiple of grid_step")
    return cfg


@dataclass(frozen=True)
class Dataset:
    name: str
    figure: str
    csv: str


@dataclass
class ScenarioResult:
    scenario_id: str
    datasets: List[Dataset] = field(default_factory=list)
    reports: List[InequalityReport] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return all(r.converged is not False for r in self.reports) and self.diagnostics.get("converged", True)


def curve_csv(xs: Sequence[float], ys: Sequence[float], header=("parameter", "value")) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for x, y in zip(xs, ys):
        w.writerow((repr(float(x)), repr(float(y))))
    return buf.getvalue()


def _tag(t: float) -> str:
    return f"{t:.6f}".rstrip("0").rstrip(".")


# --- individual scenarios ---------------------------------------------------


def _single_mode(cfg: ScenarioConfig) -> ScenarioResult:
    times = cfg.times or tuple(t / cfg.omega for t in (0.0, PI / 16, PI / 8, PI / 4, PI / 2))
    g = GridSpec.for_husimi(cfg.alpha, 0.0, cfg.husimi_step)
    psi0 = coherent(cfg.alpha)
    res = ScenarioResult(cfg.scenario_id)
    maxima = {}
    for t in times:
        q = husimi_single(evolve_nonlinear(psi0, EvolutionParams(cfg.omega, cfg.k, t)), g, g)
        maxima[_tag(t)] = local_maxima(q)
        res.datasets.append(Dataset(f"q_single_t{_tag(t)}", "Fig. 3-4", long_csv(g.points, g.points, q, ("x", "p", "q"))))
    res.diagnostics["local_maxima"] = maxima
    return res


def _bell_chsh(cfg: ScenarioConfig) -> ScenarioResult:
    settings = BellSettings(*cfg.times, cfg.omega, cfg.k) if cfg.times else BellSettings.standard(cfg.omega, cfg.k)
    grid = cfg.grid
    res = ScenarioResult(cfg.scenario_id)
    for initial in ("bell", "mixture"):
        rep = chsh_value(cfg.alpha, cfg.beta, settings, grid, initial=initial, check_convergence=cfg.check_convergence)
        res.reports.append(rep)
    state = bell_cat(cfg.alpha, cfg.beta)
    for label, (ta, tb) in settings.pairs().items():
        dist = joint_x_density(evolve_both(state, ta, tb, cfg.omega, cfg.k), grid)
        name = "p_joint_ta{}_tb{}".format(_tag(ta), _tag(tb))
        res.datasets.append(Dataset(name, f"Fig. 5 {label}", dist.to_csv()))
    return res


def _bell_q(cfg: ScenarioConfig) -> ScenarioResult:
    if cfg.times:
        pairs = list(zip(cfg.times[0::2], cfg.times[1::2]))
    else:
        pairs = list(BellSettings.standard(cfg.omega, cfg.k).pairs().values())
    g = cfg.husimi_grid
    cat = bell_cat(cfg.alpha, cfg.beta)
    mix = pointer_mixture(cfg.alpha, cfg.beta)
    res = ScenarioResult(cfg.scenario_id)
    gaps = {}
    for ta, tb in pairs:
        qc = q_marginal_xx(evolve_both(cat, ta, tb, cfg.omega, cfg.k), g)
        qm = q_marginal_xx(evolve_both(mix, ta, tb, cfg.omega, cfg.k), g)
        tag = "ta{}_tb{}".format(_tag(ta), _tag(tb))
        res.datasets.append(Dataset(f"q_cat_{tag}", "Fig. 9", long_csv(g.points, g.points, qc, ("x_a", "x_b", "q"))))
        res.datasets.append(Dataset(f"q_mix_{tag}", "Fig. 10", long_csv(g.points, g.points, qm, ("x_a", "x_b", "q"))))
        gap = density_gap(qc, qm, g, g)
        gaps[tag] = {"sup": gap.sup, "l1": gap.l1}
    res.diagnostics["cat_vs_mixture_gap"] = gaps
    return res


def _lg_single(cfg: ScenarioConfig) -> ScenarioResult:
    grid = GridSpec.for_amplitudes(cfg.alpha, 0.0, cfg.grid_step) if cfg.grid_half_width is None else cfg.grid
    res = ScenarioResult(cfg.scenario_id)

    def compute(g, n):
        return lg_single_system_value(cfg.alpha, cfg.omega, cfg.k, g, n)

    if cfg.check_convergence:
        res.reports.append(with_convergence(compute, grid, default_n_max(cfg.alpha)))
    else:
        res.reports.append(compute(grid, None))
    return res


def _lg_bipartite(cfg: ScenarioConfig) -> ScenarioResult:
    sign = cfg.bell_sign
    if cfg.times:
        settings = LGSettings(*cfg.times, cfg.omega, cfg.k, sign)
    else:
        settings = LGSettings.standard(cfg.omega, cfg.k, sign)
    grid = cfg.grid
    res = ScenarioResult(cfg.scenario_id)
    for initial in ("bell", "mixture"):
        res.reports.append(
            lg_bipartite_value(cfg.alpha, cfg.beta, settings, grid, initial=initial, check_convergence=cfg.check_convergence)
        )
    res.diagnostics["conditional_inference"] = conditional_inference_prob(cfg.alpha, cfg.beta, grid, sign=sign)
    state = bell_cat(cfg.alpha, cfg.beta, sign)
    for label, (ta, tb) in settings.pairs().items():
        dist = joint_x_density(evolve_both(state, ta, tb, cfg.omega, cfg.k), grid)
        name = "p_joint_ta{}_tb{}".format(_tag(ta), _tag(tb))
        res.datasets.append(Dataset(name, f"Fig. 12 {label}", dist.to_csv()))
    return res


def delayed_collapse_l1(alpha: float, beta: float, t_a: float, grid: GridSpec, omega: float = 1.0, k: int = 4):
    """(P_sup, P_mix, L1) with B read at t = 0 and A evolved for t_a."""
    sup = joint_x_density(evolve_both(bell_cat(alpha, beta), t_a, 0.0, omega, k), grid)
    mix = joint_x_density(evolve_both(pointer_mixture(alpha, beta), t_a, 0.0, omega, k), grid)
    return sup, mix, density_gap(sup.density, mix.density, grid, grid).l1


def _delayed_collapse(cfg: ScenarioConfig) -> ScenarioResult:
    times = cfg.times or (PI / (4 * cfg.omega), PI / (2 * cfg.omega))
    grid = cfg.grid
    res = ScenarioResult(cfg.scenario_id)
    l1s, deltas = {}, {}
    for t in times:
        sup, mix, l1 = delayed_collapse_l1(cfg.alpha, cfg.beta, t, grid, cfg.omega, cfg.k)
        l1s[_tag(t)] = l1
        if cfg.check_convergence:
            deltas[_tag(t)] = abs(delayed_collapse_l1(cfg.alpha, cfg.beta, t, grid.refined(), cfg.omega, cfg.k)[2] - l1)
        res.datasets.append(Dataset(f"p_sup_ta{_tag(t)}", "Fig. 15 P_sup", sup.to_csv()))
        res.datasets.append(Dataset(f"p_mix_ta{_tag(t)}", "Fig. 15 P_mix", mix.to_csv()))
    res.diagnostics["l1_sup_vs_mix"] = l1s
    if deltas:
        res.diagnostics["l1_step_halving_delta"] = deltas
        res.diagnostics["converged"] = max(deltas.values()) < 1e-3
    return res


def _epr(cfg: ScenarioConfig) -> ScenarioResult:
    grid = GridSpec.for_amplitudes(1.0, 0.0, cfg.grid_step)
    res = ScenarioResult(cfg.scenario_id)
    n0 = default_n_max(cfg.alpha)

    def compute(g, n):
        return epr_report(cfg.alpha, cfg.c1, cfg.c2, g, n)

    res.reports.append(with_convergence(compute, grid, n0) if cfg.check_convergence else compute(grid, None))
    dens = p_density(cat_superposition(cfg.alpha, cfg.c1, cfg.c2), grid)
    res.datasets.append(Dataset("p_density", "Sec. V.C P(p)", curve_csv(grid.points, dens, ("p", "density"))))
    return res


_RUNNERS = {
    "single_mode_evolution": _single_mode,
    "bell_chsh": _bell_chsh,
    "bell_q_dynamics": _bell_q,
    "lg_single": _lg_single,
    "lg_bipartite": _lg_bipartite,
    "delayed_collapse": _delayed_collapse,
    "epr_paradox": _epr,
}


def run_scenario(config: ScenarioConfig) -> ScenarioResult:
    cfg = validate(config)
    try:
        return _RUNNERS[cfg.scenario_id](cfg)
    except ValueError as exc:
        raise ConfigInvalid(str(exc)) from None


SWEEPABLE = ("alpha", "beta", "amplitude", "omega", "c1", "grid_step")


def sweep(config: ScenarioConfig, parameter: str, values: Sequence[float]) -> List[ScenarioResult]:
    """Rerun the scenario per value. ``amplitude`` sets alpha and beta together;
    ``c1`` also sets c2 = sqrt(1 - c1^2)."""
    if parameter not in SWEEPABLE:
        raise ConfigInvalid(f"cannot sweep {parameter!r}; choose from {', '.join(SWEEPABLE)}")
    out = []
    for v in values:
        if parameter == "amplitude":
            cfg = config.with_values(alpha=v, beta=v)
        elif parameter == "c1":
            cfg = config.with_values(c1=v, c2=math.sqrt(max(0.0, 1 - v * v)))
        else:
            cfg = config.with_values(**{parameter: v})
        out.append(run_scenario(cfg))
    return out


def sweep_curves(results: Sequence[ScenarioResult], parameter: str, values: Sequence[float]) -> List[Dataset]:
    """One (parameter, value) curve per report slot, plus conditional inference if present."""
    curves = []
    if results and results[0].reports:
        for i, rep in enumerate(results[0].reports):
            initial = rep.settings.get("initial", rep.kind)
            ys = [r.reports[i].aggregate for r in results]
            curves.append(Dataset(f"curve_{rep.kind}_{initial}", _curve_figure(rep.kind), curve_csv(values, ys)))
    if results and "conditional_inference" in results[0].diagnostics:
        ys = [r.diagnostics["conditional_inference"] for r in results]
        curves.append(Dataset("curve_conditional_inference", "Fig. 13 P(S_A=1|S_B=-1)", curve_csv(values, ys)))
    if results and "l1_sup_vs_mix" in results[0].diagnostics:
        for tag in results[0].diagnostics["l1_sup_vs_mix"]:
            ys = [r.diagnostics["l1_sup_vs_mix"][tag] for r in results]
            curves.append(Dataset(f"curve_l1_ta{tag}", "Fig. 15 L1", curve_csv(values, ys)))
    return curves


def _curve_figure(kind: str) -> str:
    return {"chsh": "Fig. 6", "lg": "Fig. 13", "epr": "Sec. V.C"}[kind]


# --- output ------------------------------------------------------------------


def write_result(result: ScenarioResult, out_dir: os.PathLike, extra: Sequence[Dataset] = ()) -> List[Path]:
    """Write datasets, reports.json, diagnostics.json and a MANIFEST into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    manifest = []
    for ds in list(result.datasets) + list(extra):
        path = out / f"{ds.name}.csv"
        path.write_text(ds.csv, encoding="utf-8")
        written.append(path)
        manifest.append((path.name, ds.figure))
    reports = out / "reports.json"
    reports.write_text(json.dumps([r.to_dict() for r in result.reports], indent=2, sort_keys=True), encoding="utf-8")
    diag = out / "diagnostics.json"
    diag.write_text(json.dumps(_plain(result.diagnostics), indent=2, sort_keys=True), encoding="utf-8")
    written += [reports, diag]
    manifest += [(reports.name, "inequality reports"), (diag.name, "convergence and gap diagnostics")]
    man = out / "MANIFEST"
    man.write_text("".join(f"{name}\t{label}\n" for name, label in manifest), encoding="utf-8")
    written.append(man)
    return written


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


__all__ = [
    "CatBellError",
    "Dataset",
    "ScenarioConfig",
    "ScenarioResult",
    "SCENARIOS",
    "load_config",
    "parse_overrides",
    "run_scenario",
    "sweep",
    "sweep_curves",
    "validate",
    "write_result",
]
