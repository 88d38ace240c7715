import math

import numpy as np
import pytest
from hypothesis import given, settings

from errors import DimensionMismatch, InvalidParameter, NonPhysicalState
from evolution import mix
from gaussian_core import (TWO_PI, GaussianParams, SingleModeState, TwoModeState, coherent, purity, squeezed,
                           state_from_params, thermal, uncertainty_excess, vacuum, validate_physical)
from oracles import gaussian_params


def test_vacuum_state():
    s = state_from_params(vacuum())
    assert np.array_equal(s.mean, [0.0, 0.0])
    assert np.allclose(s.cm, 0.5 * np.eye(2), rtol=0, atol=1e-15)


def test_thermal_state_covariance():
    s = state_from_params(thermal(1.0))
    assert np.allclose(s.cm, 1.5 * np.eye(2), rtol=0, atol=1e-15)


def test_squeezed_thermal_matches_hand_evaluation():
    s = state_from_params(GaussianParams(r=0.5, psi=0.0, n_th=0.2))
    assert s.cm[0, 0] == pytest.approx(0.7 * math.e, rel=1e-14)
    assert s.cm[1, 1] == pytest.approx(0.7 / math.e, rel=1e-14)
    assert s.cm[0, 1] == 0.0
    assert s.cm[1, 0] == 0.0


def test_coherent_mean():
    s = state_from_params(coherent(1.0, -0.5))
    assert s.mean == pytest.approx([math.sqrt(2.0), -0.5 * math.sqrt(2.0)])
    assert np.allclose(s.cm, 0.5 * np.eye(2))


@pytest.mark.parametrize("n_th, expected", [(0.0, 1.0), (0.2, 1.0 / 1.4), (0.3, 0.625)])
def test_purity(n_th, expected):
    p = thermal(n_th)
    assert purity(state_from_params(p)) == pytest.approx(expected, abs=1e-12)
    assert p.mu == pytest.approx(expected, abs=1e-15)


def test_purity_rejects_nonphysical():
    with pytest.raises(NonPhysicalState):
        uncertainty_excess([[0.5, 0.0], [0.0, 0.4]])
    assert uncertainty_excess(0.5 * np.eye(2)) == 0.0
    assert uncertainty_excess([[1.0, 0.0], [0.0, 0.5]]) == pytest.approx(0.25)


def test_constructors_enforce_uncertainty_relation():
    with pytest.raises(NonPhysicalState):
        SingleModeState(mean=[0, 0], cm=0.25 * np.eye(2))
    with pytest.raises(NonPhysicalState):
        SingleModeState(mean=[0, 0], cm=-np.eye(2))
    with pytest.raises(NonPhysicalState):
        TwoModeState(mean=np.zeros(4), cm=0.1 * np.eye(4))
    with pytest.raises(NonPhysicalState):
        TwoModeState(mean=np.zeros(4), cm=-0.5 * np.eye(4))
    assert TwoModeState(mean=np.zeros(4), cm=0.5 * np.eye(4)).sigma12.tolist() == [[0.0, 0.0], [0.0, 0.0]]


def test_nonphysical_inputs_cannot_be_mixed():
    with pytest.raises(NonPhysicalState):
        mix(SingleModeState(mean=[0, 0], cm=0.25 * np.eye(2)), state_from_params(vacuum()), 0.5)


@pytest.mark.parametrize("r", [2.0, 3.0])
def test_strong_squeezing_passes_the_gate(r):
    s1 = state_from_params(squeezed(r, 0.3, 0.0))
    s2 = state_from_params(squeezed(r, 2.0, 0.0))
    assert purity(s1) == pytest.approx(1.0, abs=1e-9)
    assert validate_physical(mix(s1, s2, 0.5).cm, 2)


def test_validate_physical_examples():
    assert validate_physical(0.5 * np.eye(2), 1)
    assert not validate_physical(0.25 * np.eye(2), 1)
    assert validate_physical(0.5 * np.eye(4), 2)
    assert not validate_physical(0.4 * np.eye(4), 2)


def test_validate_physical_errors():
    with pytest.raises(DimensionMismatch):
        validate_physical(np.eye(3), 1)
    with pytest.raises(DimensionMismatch):
        validate_physical(np.eye(2), 2)
    with pytest.raises(InvalidParameter):
        validate_physical(np.array([[1.0, 0.2], [0.0, 1.0]]), 1)


@pytest.mark.parametrize("kwargs", [
    {'r': -0.1}, {'n_th': -1e-3}, {'psi': math.nan}, {'alpha_re': math.inf}, {'r': True}, {'n_th': '0.2'},
])
def test_invalid_params(kwargs):
    with pytest.raises(InvalidParameter):
        GaussianParams(**kwargs)


def test_phase_normalization():
    assert GaussianParams(psi=-0.5).psi == pytest.approx(TWO_PI - 0.5)
    assert GaussianParams(psi=TWO_PI).psi == 0.0
    assert GaussianParams(psi=3 * math.pi).psi == pytest.approx(math.pi)
    assert 0.0 <= GaussianParams(psi=-1e-17).psi < TWO_PI


def test_from_dict_is_strict():
    p = GaussianParams.from_dict({'r': 0.5, 'psi': 1.0, 'n_th': 0.2})
    assert p == squeezed(0.5, 1.0, 0.2)
    assert GaussianParams.from_dict(p.to_dict()) == p
    with pytest.raises(InvalidParameter):
        GaussianParams.from_dict({'r': 0.5, 'xi': 1.0})
    with pytest.raises(InvalidParameter):
        GaussianParams.from_dict([0.5])


def test_states_are_read_only():
    s = state_from_params(squeezed(0.3))
    with pytest.raises(ValueError):
        s.cm[0, 0] = 1.0
    with pytest.raises(DimensionMismatch):
        SingleModeState(mean=[0, 0, 0], cm=np.eye(2))
    with pytest.raises(DimensionMismatch):
        TwoModeState(mean=np.zeros(4), cm=np.eye(2))


def test_zero_phase_is_diagonal():
    s = state_from_params(squeezed(1.3, 0.0, 0.7))
    assert s.cm[0, 1] == 0.0


@given(gaussian_params(with_mean=True))
@settings(deadline=None, max_examples=300)
def test_generated_states_are_physical(p):
    s = state_from_params(p)
    assert np.array_equal(s.cm, s.cm.T)
    assert validate_physical(s.cm, 1)
    assert np.all(np.linalg.eigvalsh(s.cm) > 0)


@given(gaussian_params())
@settings(deadline=None, max_examples=300)
def test_determinant_independent_of_squeezing(p):
    s = state_from_params(p)
    assert np.linalg.det(s.cm) == pytest.approx(1.0 / (4.0 * p.mu ** 2), rel=1e-10)
    assert purity(s) == pytest.approx(1.0 / (1.0 + 2.0 * p.n_th), abs=1e-12)


@given(gaussian_params())
@settings(deadline=None, max_examples=200)
def test_phase_periodicity(p):
    a = state_from_params(p)
    b = state_from_params(p.with_psi(p.psi + TWO_PI))
    assert a.isclose(b, atol=1e-12)
