"""Registry model families: entries, validity ranges, and mp lifts."""

import math

import mpmath
import numpy as np
import pytest

from ptlattice import (
    Model,
    ModelDomainError,
    Topology,
    get_family,
    is_pt_symmetric,
    iter_families,
    model_names,
)


def test_registry_is_complete():
    assert set(model_names()) == {
        "mdg6-open",
        "mdg6-w1",
        "mdg6-w2",
        "ec4",
        "ec4-strongbond",
        "ec4-recoupled",
    }


@pytest.mark.parametrize("model", list(Model))
def test_every_model_is_pt_symmetric_at_samples(model):
    family = get_family(model)
    lo = max(family.t_min, -1.0)
    hi = min(family.t_max, 1.0)
    for t in np.linspace(lo, hi, 7):
        assert is_pt_symmetric(family.matrix(float(t)))


def test_mdg6_open_shape_and_entries():
    family = get_family(Model.MDG6_OPEN)
    assert family.n == 6 and family.topology is Topology.OPEN
    h = family.matrix(0.0)
    assert np.array_equal(np.diag(h), [-5, -3, -1, 1, 3, 5])
    expected = [math.sqrt(5), math.sqrt(8), 3.0, math.sqrt(8), math.sqrt(5)]
    assert np.allclose(np.diag(h, 1), expected)
    assert np.allclose(np.diag(h, -1), [-c for c in expected])


def test_mdg6_open_diagonal_at_upper_edge():
    h = get_family(Model.MDG6_OPEN).matrix(1.0)
    assert np.allclose(h, np.diag([-5, -3, -1, 1, 3, 5]))


def test_mdg6_validity_range():
    family = get_family(Model.MDG6_OPEN)
    assert family.contains(1.0) and not family.contains(1.0 + 1e-12)
    with pytest.raises(ModelDomainError) as err:
        family.matrix(1.1)
    assert "sqrt" in str(err.value)


def test_w1_adds_weak_corner():
    base = get_family(Model.MDG6_OPEN).matrix(0.5)
    w1 = get_family(Model.MDG6_W1).matrix(0.5)
    corner = math.sqrt(0.5) / 100
    assert w1[0, 5] == pytest.approx(-corner)
    assert w1[5, 0] == pytest.approx(corner)
    inner = w1.copy()
    inner[0, 5] = inner[5, 0] = 0.0
    assert np.allclose(inner, base)


def test_w2_strengthens_central_bond_and_corner():
    w2 = get_family(Model.MDG6_W2).matrix(0.5)
    root = math.sqrt(0.5)
    assert w2[2, 3] == pytest.approx(301 * root / 100)
    assert w2[0, 5] == pytest.approx(-root / 10)


def test_ec4_is_equal_coupling_ring():
    h = get_family(Model.EC4).matrix(0.7)
    assert np.array_equal(np.diag(h), [-3, -1, 1, 3])
    assert np.allclose(np.diag(h, 1), [0.7, 0.7, 0.7])
    assert h[0, 3] == pytest.approx(-0.7)
    assert h[3, 0] == pytest.approx(0.7)


def test_ec4_strongbond_scales_closing_coupling():
    h = get_family(Model.EC4_STRONG_BOND).matrix(0.7)
    assert h[3, 0] == pytest.approx(1.5 * 0.7)


def test_ec4_recoupled_ratios():
    h = get_family(Model.EC4_RECOUPLED).matrix(0.6)
    assert np.allclose(np.diag(h, 1), [0.6, 0.8, 0.6])
    assert h[3, 0] == pytest.approx(0.15)


def test_matrix_mp_matches_float_matrix():
    for family in iter_families():
        t = 0.25
        if not family.contains(t):
            continue
        h = family.matrix(t)
        hm = family.matrix_mp(t)
        worst = max(
            abs(float(hm[i][j]) - h[i, j])
            for i in range(family.n)
            for j in range(family.n)
        )
        assert worst < 1e-15


def test_matrix_mp_precision_exceeds_doubles():
    family = get_family(Model.MDG6_OPEN)
    with mpmath.workdps(40):
        hm = family.matrix_mp(0.5)
        # sqrt(5 * 0.5) to 40 digits differs from the double rounding
        exact = mpmath.sqrt(mpmath.mpf(5) * (1 - mpmath.mpf(0.5)))
        assert abs(hm[0][1] - exact) < mpmath.mpf(10) ** -38
