import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from catbell import analytic as an
from catbell.inequalities import (
    BellSettings,
    InequalityReport,
    LGSettings,
    analytic_E,
    b_lg_closed_form,
    chsh_value,
    conditional_inference_prob,
    epr_epsilon,
    epr_report,
    lg_bipartite_value,
    lg_single_system_value,
    p_variance,
    signed_sum,
)
from catbell.modes import BellSign
from catbell.quadrature import GridSpec

PI = math.pi
coarse = lambda a, b=0.0: GridSpec.for_amplitudes(a, b, 0.08)


def test_standard_settings_map_to_analyzer_angles():
    s = BellSettings.standard()
    angles = [an.rotation_angle(1.0, t) for t in (s.t_a, s.t_a_prime, s.t_b, s.t_b_prime)]
    assert angles == pytest.approx([0, PI / 4, PI / 8, 3 * PI / 8])
    assert BellSettings.standard(omega=2.0).t_b == pytest.approx(PI / 8)


def test_settings_validation():
    with pytest.raises(ValueError):
        BellSettings(t_a=-1)
    with pytest.raises(ValueError):
        LGSettings(0.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        BellSettings(omega=0)


def test_report_aggregate_is_signed_sum_bit_for_bit():
    rep = chsh_value(1.0, 1.0, grid=coarse(1, 1))
    assert rep.aggregate == signed_sum(rep.components, rep.coefficients)
    again = json.loads(rep.to_json())
    assert again["aggregate"] == rep.aggregate
    assert sum(c * again["components"][k] for k, c in again["coefficients"].items()) == rep.aggregate


@pytest.mark.parametrize(
    "kind,value,violated",
    [("chsh", -2.5, True), ("chsh", 2.0, False), ("lg", 1.2, True), ("lg", 1.0, False), ("epr", 0.4, True), ("epr", 0.5, False)],
)
def test_violation_rules_are_strict(kind, value, violated):
    bound = {"chsh": 2.0, "lg": 1.0, "epr": 0.5}[kind]
    rep = InequalityReport(kind, {"x": value}, {"x": 1.0}, bound)
    assert rep.violated is violated


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        InequalityReport("nope", {}, {}, 1.0)


def test_analytic_E_reproduces_singlet():
    assert analytic_E(0, 0) == -1
    assert analytic_E(0, PI / 4) == pytest.approx(0, abs=1e-15)


def test_large_cat_matches_qubit_chsh():
    rep = chsh_value(3, 3)
    s = BellSettings.standard()
    qubit = an.chsh_qubit(*(an.rotation_angle(1, t) for t in (s.t_a, s.t_a_prime, s.t_b, s.t_b_prime)))
    assert rep.aggregate == pytest.approx(qubit, abs=1e-6)
    for label, (ta, tb) in s.pairs().items():
        assert rep.components[label] == pytest.approx(analytic_E(ta / 2, tb / 2), abs=1e-6)


def test_chsh_sweep_agrees_with_oracle(goldens):
    for a, want in zip(goldens["chsh_sweep_alpha"], goldens["chsh_sweep_B"]):
        assert chsh_value(a, a).aggregate == pytest.approx(want, abs=1e-3)


@given(st.floats(0.2, 3.0), st.floats(0.2, 3.0))
def test_mixture_never_violates_chsh(a, b):
    assert abs(chsh_value(a, b, grid=coarse(a, b), initial="mixture").aggregate) <= 2 + 1e-3


@given(st.floats(0.3, 3.0), st.floats(0.3, 3.0))
def test_bipartite_lg_matches_closed_form(a, b):
    got = lg_bipartite_value(a, b).aggregate
    assert got == pytest.approx(b_lg_closed_form(a, b), abs=1e-3)


@given(st.floats(0.2, 3.0), st.floats(0.2, 3.0))
def test_mixture_never_violates_lg(a, b):
    assert lg_bipartite_value(a, b, grid=coarse(a, b), initial="mixture").aggregate <= 1 + 1e-3


def test_correlated_sign_gives_same_value():
    anti = lg_bipartite_value(2.0, 2.0).aggregate
    corr = lg_bipartite_value(2.0, 2.0, LGSettings.standard(sign=BellSign.CORRELATED)).aggregate
    assert corr == pytest.approx(anti, abs=1e-9)


def test_unknown_initial_rejected():
    with pytest.raises(ValueError):
        chsh_value(1, 1, initial="nonsense")


@given(st.floats(0.3, 3.0))
def test_conditional_inference(a):
    assert conditional_inference_prob(a, a) == pytest.approx(an.conditional_inference(a, a), abs=1e-3)


def test_conditional_inference_correlated_branch():
    p = conditional_inference_prob(1.0, 1.0, sign=BellSign.CORRELATED)
    assert p == pytest.approx(an.conditional_inference(1.0, 1.0), abs=1e-3)


def test_single_system_lg_value():
    rep = lg_single_system_value(3.0)
    assert rep.components["<S1 S3>"] == pytest.approx(0, abs=1e-9)
    assert rep.aggregate == pytest.approx(math.sqrt(2), abs=1e-6)
    assert rep.diagnostics["p_plus_t2"] + rep.diagnostics["p_minus_t2"] == pytest.approx(1, abs=1e-9)


@given(st.floats(0.3, 3.0))
def test_single_system_lg_two_moment_form(a):
    rep = lg_single_system_value(a)
    want = 2 * math.cos(PI / 4) * math.erf(math.sqrt(2) * a)
    assert rep.aggregate == pytest.approx(want, abs=1e-3)


def test_convergence_diagnostics_present():
    rep = chsh_value(2, 2, check_convergence=True)
    assert rep.converged is True
    assert rep.diagnostics["step_halving_delta"] < 1e-3
    assert rep.diagnostics["truncation_doubling_delta"] < 1e-3


def test_equal_cat_variance_closed_form():
    for a in (0.5, 1.0, 2.0, 3.0):
        want = 0.5 - 2 * a * a * math.exp(-4 * a * a)
        assert p_variance(a) == pytest.approx(want, abs=1e-10)


@given(st.floats(0.3, 3.0), st.floats(0.05, PI / 2 - 0.05))
def test_epsilon_never_above_half(a, th):
    assert epr_epsilon(a, math.cos(th), math.sin(th)) <= 0.5 + 1e-12


def test_epr_report_flags_paradox():
    rep = epr_report(1.0, math.cos(PI / 8), math.sin(PI / 8))
    assert rep.kind == "epr" and rep.violated
    assert rep.aggregate == pytest.approx(math.sqrt(0.5 * an.p_variance_t2(1.0)), abs=1e-10)
