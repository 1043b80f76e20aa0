"""Eigenproblem layer: closed forms, the factorization chain, grid residuals."""

import numpy as np
import pytest

from pseudoharmonic.errors import DomainError
from pseudoharmonic.spectrum import (
    FactorizationChain,
    GridSpec,
    ModelParams,
    default_grid,
    derivative_matrix,
    eigenfunction,
    energy,
    factorization_build,
    factorization_chain_residual,
    ground_energy_branches,
    normalization_constant,
    null_state_residual,
    operator_product_check,
    orthonormality_matrix,
    potential,
    schrodinger_residual,
)

N0_S1 = 1.2265828778062044   # sqrt(2 / Gamma(5/2)), mpmath dps=40
PSI2_S1_X1 = 0.4890613321547813


def test_params_from_g_roundtrip():
    p = ModelParams.from_g(2.0)
    assert p.s == pytest.approx(1.0, abs=1e-15)
    assert ModelParams.from_s(1.0).g == 2.0
    assert ModelParams.from_g(0.0).s == 0.0


def test_params_reject_bad_input():
    with pytest.raises(DomainError):
        ModelParams.from_g(-0.5)
    with pytest.raises(DomainError):
        ModelParams.from_s(-1.0)
    with pytest.raises(DomainError):
        ModelParams(g=2.0, s=2.0)


def test_potential_shape():
    p = ModelParams.from_s(1.0)
    x = np.array([0.5, 1.0, 2.0])
    assert np.allclose(potential(p, x), 0.5 * x**2 + 1.0 / x**2)
    with pytest.raises(DomainError):
        potential(p, np.array([0.0, 1.0]))


def test_energy_closed_form():
    p = ModelParams.from_s(1.0)
    assert energy(p, 0) == 2.5
    assert energy(p, 3) == 8.5
    assert energy(ModelParams.from_s(0.5), 2) == 6.0
    with pytest.raises(DomainError):
        energy(p, -1)


def test_ground_branches():
    # keyed by the sign of b0; the b0 = -1 branch carries the physical ground energy
    br = ground_energy_branches(ModelParams.from_s(0.5))
    assert br[-1] == pytest.approx(2.0)
    assert br[+1] == pytest.approx(-2.0)
    assert br[-1] > br[+1]


def test_chain_reproduces_energies():
    for s in (0.5, 1.0, 2.0):
        p = ModelParams.from_s(s)
        chain = FactorizationChain.build(p, 20)
        want = np.array([energy(p, n) for n in range(21)])
        assert np.max(np.abs(chain.E - want)) < 1e-14 * np.max(want)
        assert np.all(chain.b == -1.0)
        assert np.allclose(chain.c, s + 1.0 + np.arange(21))


def test_normalization_frozen_value():
    assert normalization_constant(ModelParams.from_s(1.0), 0) == pytest.approx(N0_S1, rel=1e-14)


def test_eigenfunction_frozen_value():
    p = ModelParams.from_s(1.0)
    f = eigenfunction(p, 2)
    # the geometric/uniform seam puts a node exactly at x = 1
    i = int(np.argmin(np.abs(f.x - 1.0)))
    assert f.x[i] == 1.0
    assert f.values[i] == pytest.approx(PSI2_S1_X1, rel=1e-12)
    assert abs(f.norm() - 1.0) < 1e-5


def test_eigenfunction_positive_at_origin_side():
    f = eigenfunction(ModelParams.from_s(0.5), 0)
    assert np.all(f.values[:10] > 0.0)


def test_orthonormality_small_block():
    p = ModelParams.from_s(2.0)
    gram = orthonormality_matrix(p, 6)
    assert np.max(np.abs(gram - np.eye(7))) < 1e-10


def test_schrodinger_residual_sample():
    assert schrodinger_residual(ModelParams.from_s(0.5), 7) < 1e-4
    assert schrodinger_residual(ModelParams.from_s(2.0), 3) < 1e-4


def test_null_state_annihilated():
    assert null_state_residual(ModelParams.from_s(1.0), 0) < 1e-4
    assert null_state_residual(ModelParams.from_s(1.0), 4) < 1e-4


def test_chain_build_matches_closed_form():
    p = ModelParams.from_s(1.0)
    for n in (1, 3):
        assert factorization_chain_residual(p, n) < 1e-4
    built = factorization_build(p, 2)
    closed = eigenfunction(p, 2, GridSpec(built.x[0], built.x[-1], built.x.size))
    num = np.trapezoid((built.values - closed.values) ** 2, built.x)
    den = np.trapezoid(closed.values**2, built.x)
    assert np.sqrt(num / den) < 1e-4


def test_operator_products_close_second_order_forms():
    p = ModelParams.from_s(1.0)
    report = operator_product_check(p, 2)
    assert report["lower_then_raise"] < 1e-4
    assert report["raise_then_lower"] < 1e-4
    assert report["difference"] < 1e-4


def test_default_grid_scales_with_level():
    p = ModelParams.from_s(1.0)
    g0 = default_grid(p, 0)
    g8 = default_grid(p, 8)
    assert g8.count == g0.count + 8 * 200
    assert g0.x_min > 0.0


def test_grid_spec_validation():
    with pytest.raises(DomainError):
        GridSpec(x_min=0.0, x_max=10.0, count=100)
    with pytest.raises(DomainError):
        GridSpec(x_min=2.0, x_max=1.0, count=100)


def test_derivative_matrix_exact_on_cubics():
    # five-point stencils differentiate cubics exactly, seams included
    x = default_grid(ModelParams.from_s(1.0), 0).nodes()
    d1 = derivative_matrix(x, 1)
    d2 = derivative_matrix(x, 2)
    u = x**3 - 2.0 * x
    assert np.max(np.abs(d1 @ u - (3.0 * x**2 - 2.0))) < 1e-8
    assert np.max(np.abs(d2 @ u - 6.0 * x)) < 1e-7
