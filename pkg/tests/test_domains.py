"""Reality domains, boundary refinement, and exceptional-point location."""

import math

import numpy as np
import pytest

from ptlattice import (
    BracketError,
    DegenerateSpectrumError,
    EPKind,
    EpNotFoundError,
    InvalidSpecError,
    Model,
    degeneracy_order,
    domain_report,
    get_family,
    locate_coalescence_ep,
    maximal_jordan_block,
    reality_islands,
    reality_profile,
    refine_reality_boundary,
)


def test_reality_profile_ec4():
    family = get_family(Model.EC4)
    profile = reality_profile(family, [0.0, 1.0, 1.55])
    assert list(profile.counts) == [4, 4, 2]


def test_reality_profile_mdg6_open():
    family = get_family(Model.MDG6_OPEN)
    profile = reality_profile(family, [-0.5, 0.5])
    assert list(profile.counts) == [0, 6]


def test_refine_boundary_ec4_three_halves():
    family = get_family(Model.EC4)
    b = refine_reality_boundary(family, 1.4, 1.6, 1e-10)
    assert b == pytest.approx(1.5, abs=1e-8)


def test_refine_boundary_needs_a_real_bracket():
    family = get_family(Model.EC4)
    with pytest.raises(BracketError):
        refine_reality_boundary(family, 0.2, 0.4, 1e-8)


def test_locate_coalescence_ep_ec4():
    family = get_family(Model.EC4)
    ep = locate_coalescence_ep(family, 1.3, 1.45, 1e-9)
    assert ep.t_star == pytest.approx(math.sqrt(2.0), abs=1e-6)
    assert ep.order == 2
    assert ep.kind is EPKind.REAL_COALESCENCE
    assert ep.residual <= 1e-4


def test_locate_coalescence_ep_mdg6_order6():
    family = get_family(Model.MDG6_OPEN)
    ep = locate_coalescence_ep(family, -0.1, 0.1, 1e-9)
    # An order-6 coalescence smears eigenvalues by u**(1/6) ~ 2e-3 around
    # the true point, so the minimum-gap locator can only pin t_star to
    # roughly that scale; the order itself is the sharp contract.
    assert ep.t_star == pytest.approx(0.0, abs=1e-3)
    assert ep.order == 6


def test_locate_rejects_avoided_crossing():
    # Hermitian comparison stub: eigenvalues repel, eigenvectors stay apart.
    class Repulsive:
        n = 2

        @staticmethod
        def matrix(t):
            return np.array([[t, 0.05], [0.05, -t]])

    with pytest.raises(EpNotFoundError):
        locate_coalescence_ep(Repulsive, -0.3, 0.3, 1e-9)


def test_locate_rejects_diabolical_crossing():
    # Eigenvalues do cross here, but the eigenvectors stay orthogonal,
    # so the point must not be classified as an exceptional point.
    class Diabolical:
        n = 2

        @staticmethod
        def matrix(t):
            return np.array([[t, 0.0], [0.0, -t]])

    with pytest.raises(EpNotFoundError):
        locate_coalescence_ep(Diabolical, -0.3, 0.3, 1e-9)


def test_locate_rejects_degenerate_endpoint():
    family = get_family(Model.EC4)
    with pytest.raises(DegenerateSpectrumError):
        locate_coalescence_ep(family, 1.5, 1.55, 1e-9)


def test_degeneracy_order_counts_clusters():
    assert degeneracy_order(np.diag([1.0, 1.0 + 1e-9, 5.0]), 1e-6) == 2
    assert degeneracy_order(np.diag([1.0, 2.0, 5.0]), 1e-9) == 1


def test_degeneracy_order_full_collapse():
    h = get_family(Model.MDG6_OPEN).matrix(0.0)
    assert degeneracy_order(h, 1e-2) == 6


def test_maximal_jordan_block_detection():
    h = get_family(Model.MDG6_OPEN).matrix(0.0)
    assert maximal_jordan_block(h)
    # diagonalizable degeneracy is NOT a maximal block
    assert not maximal_jordan_block(np.zeros((3, 3)))


def test_domain_report_ec4():
    family = get_family(Model.EC4)
    report = domain_report(family, 0.0, 1.6)
    counts = [c for _, _, c in report.intervals]
    assert counts == [4, 2]
    assert report.intervals[0][1] == pytest.approx(1.5, abs=1e-8)
    kinds = {ep.kind for ep in report.eps}
    assert kinds == {EPKind.REAL_COALESCENCE, EPKind.COMPLEXIFICATION}
    coalescence = [ep for ep in report.eps if ep.kind is EPKind.REAL_COALESCENCE]
    assert len(coalescence) == 1
    assert coalescence[0].t_star == pytest.approx(math.sqrt(2.0), abs=1e-6)


def test_domain_report_intervals_tile_the_range():
    family = get_family(Model.MDG6_W1)
    report = domain_report(family, -0.4, 0.4)
    assert report.intervals[0][0] == -0.4
    assert report.intervals[-1][1] == 0.4
    for (_, hi1, _), (lo2, _, _) in zip(report.intervals, report.intervals[1:]):
        assert hi1 == lo2


def test_reality_islands_w2_contains_zero():
    family = get_family(Model.MDG6_W2)
    islands = reality_islands(family, -0.1, 0.1, 4)
    assert any(lo < 0.0 < hi for lo, hi in islands)


def test_reality_islands_rejects_unreachable_count():
    family = get_family(Model.EC4)
    with pytest.raises(InvalidSpecError):
        reality_islands(family, 0.0, 1.0, 3)


def test_domain_report_validates_range():
    family = get_family(Model.EC4)
    with pytest.raises(InvalidSpecError):
        domain_report(family, 1.0, 0.0)
