import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from catbell.errors import DegenerateState
from catbell.fock import EvolutionParams, coherent
from catbell.modes import (
    BellSign,
    Ensemble,
    TwoModeState,
    apply_local,
    bell_cat,
    collapse_by_B_sign,
    evolve_both,
    pointer_mixture,
    positive_sector_matrix,
    purity,
    reduced_density,
    sign_operator,
)

amp = st.floats(0.2, 3.5)


@given(amp, amp, st.sampled_from(list(BellSign)))
def test_bell_cat_normalised_by_closed_form(a, b, sign):
    assert bell_cat(a, b, sign).norm() == pytest.approx(1.0, abs=1e-9)


def test_tiny_amplitudes_still_normalised():
    assert bell_cat(1e-3, 1e-3).norm() == pytest.approx(1.0, abs=1e-6)


def test_zero_amplitudes_are_degenerate():
    with pytest.raises(DegenerateState):
        bell_cat(0.0, 0.0)


def test_negative_amplitudes_rejected():
    with pytest.raises(ValueError):
        bell_cat(-1.0, 1.0)


@given(amp, amp)
def test_local_evolution_is_unitary_and_commutes(a, b):
    s = bell_cat(a, b)
    pa, pb = EvolutionParams(1, 4, 0.3), EvolutionParams(1, 4, 1.1)
    ab = apply_local(apply_local(s, "A", pa), "B", pb)
    ba = apply_local(apply_local(s, "B", pb), "A", pa)
    assert ab.norm() == pytest.approx(s.norm(), abs=1e-12)
    assert np.allclose(ab.amplitudes, ba.amplitudes)


def test_bad_site_rejected():
    with pytest.raises(ValueError):
        apply_local(bell_cat(1, 1), "C", EvolutionParams())


def test_reduced_state_of_large_cat_is_half_mixed():
    rho = reduced_density(bell_cat(3, 3), "A")
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-9)
    assert purity(rho) == pytest.approx(0.5, abs=1e-6)


def test_local_evolution_leaves_other_reduced_state_alone():
    s = bell_cat(2, 2)
    before = reduced_density(s, "B")
    after = reduced_density(apply_local(s, "A", EvolutionParams(1, 4, 0.7)), "B")
    assert np.allclose(before, after, atol=1e-12)


def test_mixture_and_cat_share_diagonal_blocks():
    cat, mix = bell_cat(3, 3), pointer_mixture(3, 3)
    assert np.allclose(reduced_density(cat, "A"), reduced_density(mix, "A"), atol=1e-7)


def test_ensemble_validation():
    s = TwoModeState.product(coherent(1.0), coherent(1.0))
    with pytest.raises(ValueError):
        Ensemble(((0.5, s), (0.6, s)))
    with pytest.raises(ValueError):
        Ensemble(())
    with pytest.raises(ValueError):
        TwoModeState(np.zeros(3))


def test_transposed_swaps_sites():
    s = bell_cat(1.0, 2.0)
    assert s.transposed().n_max_a == s.n_max_b
    assert np.allclose(evolve_both(s, 0.2, 0.5).transposed().amplitudes, evolve_both(s.transposed(), 0.5, 0.2).amplitudes)


@pytest.mark.parametrize("n", [5, 20, 40])
def test_positive_sector_matrix_is_a_half_projector(n):
    m = positive_sector_matrix(n)
    assert np.allclose(m, m.T)
    # parity: M_mn = delta_mn / 2 when m + n is even
    i, j = np.indices(m.shape)
    even = (i + j) % 2 == 0
    assert np.allclose(m[even], (np.eye(n + 1) / 2)[even], atol=1e-12)


@given(st.floats(-3, 3))
def test_sign_operator_on_coherent_states(a):
    psi = coherent(a, 60).amplitudes
    assert np.real(np.vdot(psi, sign_operator(60) @ psi)) == pytest.approx(math.erf(math.sqrt(2) * a), abs=1e-9)


def test_collapse_of_bell_cat_gives_equal_branches():
    ens = collapse_by_B_sign(bell_cat(3, 3))
    assert ens.weights == pytest.approx([0.5, 0.5], abs=1e-9)


def test_collapse_keeps_exact_minority_weight():
    s = TwoModeState.product(coherent(1.0), coherent(3.0))
    ens = collapse_by_B_sign(s)
    assert ens.weights[1] == pytest.approx(0.5 * math.erfc(3 * math.sqrt(2)), rel=1e-3)


def test_collapse_drops_negligible_branch_and_is_nearly_idempotent():
    s = TwoModeState.product(coherent(1.0), coherent(5.0))
    ens = collapse_by_B_sign(s)
    assert len(ens.members) == 1
    again = collapse_by_B_sign(ens.states[0])
    assert again.weights == [1.0]


def test_collapse_of_zero_vector_is_degenerate():
    with pytest.raises(DegenerateState):
        collapse_by_B_sign(TwoModeState(np.zeros((3, 3))))
