"""Resolution-of-identity weights and their moment checks."""

import math

import numpy as np
import pytest

from pseudoharmonic.errors import DomainError
from pseudoharmonic.identity import (
    MomentReport,
    WeightFunction,
    closed_moment,
    verify_identity,
    weight_bg,
    weight_bg_reduced,
    weight_gp,
    weight_gp_reduced,
)
from pseudoharmonic.spectrum import ModelParams

W_BG_S1_X1 = 0.12592501236523493    # mpmath: 0F1 * G / (pi Gamma(5/2))
W_GP_S1_HALF = 1.909859317102744    # (3/2) / pi * (1/2)^-2
WT_GP_S1_HALF = 1.0606601717798212  # (3/2) (1/2)^(1/2)

P05 = ModelParams.from_s(0.5)
P1 = ModelParams.from_s(1.0)


def test_bg_weight_frozen_value():
    assert weight_bg(P1, 1.0) == pytest.approx(W_BG_S1_X1, rel=1e-9)


def test_gp_weight_frozen_values():
    assert weight_gp(P1, 0.5) == pytest.approx(W_GP_S1_HALF, rel=1e-14)
    assert weight_gp_reduced(P1, 0.5) == pytest.approx(WT_GP_S1_HALF, rel=1e-14)


def test_weights_positive():
    xs = np.geomspace(0.05, 20.0, 15)
    assert np.all(weight_bg_reduced(P1, xs) > 0.0)
    assert np.all(weight_gp_reduced(P1, np.linspace(0.01, 0.99, 15)) > 0.0)


def test_gp_reduced_absorbs_the_normalization():
    """pi w(x) (1-x)^(s+3/2) is the reduced Beta density exactly."""
    xs = np.linspace(0.05, 0.95, 10)
    full = np.array([weight_gp(P1, float(x)) for x in xs])
    lhs = math.pi * full * (1.0 - xs) ** (P1.s + 1.5)
    assert np.allclose(lhs, weight_gp_reduced(P1, xs), rtol=1e-14)


def test_weight_domains():
    with pytest.raises(DomainError):
        weight_bg(P1, 0.0)
    with pytest.raises(DomainError):
        weight_gp(P1, 1.0)
    with pytest.raises(DomainError):
        weight_gp(P1, -0.1)


def test_weight_function_wrapper():
    wf = WeightFunction(family="gp", params=P1)
    assert wf(0.5) == weight_gp(P1, 0.5)
    assert wf.domain == (0.0, 1.0)
    assert WeightFunction(family="bg", params=P1).domain[1] == math.inf
    with pytest.raises(DomainError):
        WeightFunction(family="xx", params=P1)


def test_closed_moments_exact_rationals():
    # s = 1/2 makes nu = 2: BG moments are n!(n+1)!, GP moments n!/( (n+1)! / 1 )
    assert closed_moment("bg", P05, 0) == pytest.approx(1.0, rel=1e-14)
    assert closed_moment("bg", P05, 2) == pytest.approx(12.0, rel=1e-14)
    assert closed_moment("bg", P05, 3) == pytest.approx(144.0, rel=1e-14)
    assert closed_moment("gp", P05, 2) == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert closed_moment("bg", P1, 2) == pytest.approx(17.5, rel=1e-14)


def test_gp_moments_all_pass():
    report = verify_identity("gp", P1, 10)
    assert isinstance(report, MomentReport)
    assert report.passed
    assert report.max_rel_err < 1e-8
    assert len(report.rows) == 11
    assert report.scheme.kind == "jacobi"
    for row in report.rows:
        assert row.quadrature == pytest.approx(row.closed_form, rel=1e-8)


def test_bg_moments_all_pass():
    report = verify_identity("bg", P05, 8)
    assert report.passed
    assert report.max_rel_err < 1e-4
    assert report.scheme.kind == "legendre"
    assert report.rows[0].n == 0


def test_moment_report_is_honest_about_tolerance():
    # the quadrature itself converges; an absurd tolerance must read as failed,
    # not raise or silently pass
    report = verify_identity("gp", P1, 4, tolerance=1e-16)
    assert not report.passed
    assert report.max_rel_err > 1e-16


def test_verify_identity_validation():
    with pytest.raises(DomainError):
        verify_identity("bg", P1, 13)
    with pytest.raises(DomainError):
        verify_identity("??", P1, 4)
    with pytest.raises(DomainError):
        verify_identity("gp", P1, -1)


def test_moment_batches_agree_across_n_max():
    small = verify_identity("gp", P1, 3)
    large = verify_identity("gp", P1, 9)
    for a, b in zip(small.rows, large.rows):
        assert a.quadrature == pytest.approx(b.quadrature, rel=1e-10)
