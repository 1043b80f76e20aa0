"""Truncated su(1,1) ladder operators of the oscillator and their grid realizations.

Matrix elements in the eigenbasis:

    M+ |n> = sqrt((n+1)(n+s+3/2)) |n+1>
    M- |n> = sqrt(n(n+s+1/2))     |n-1>
    M0 |n> = (n + s/2 + 3/4)      |n>

so [M-, M+] = 2 M0, [M0, M+-] = +- M+- hold exactly away from the truncation
edge, and the Hamiltonian diag(2n + s + 3/2) equals [M-, M+].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .spectrum import (
    GridSpec,
    ModelParams,
    default_grid,
    derivative_matrix,
    eigenfunction,
)

__all__ = [
    "TruncationSpec",
    "BandedOperator",
    "m_plus",
    "m_minus",
    "m_zero",
    "ladder_matrices",
    "number_matrix",
    "hamiltonian_matrix",
    "CommutatorReport",
    "commutator_check",
    "grid_ladder_residuals",
    "grid_shift_residuals",
]


def m_plus(params: ModelParams, n) -> np.ndarray | float:
    """Raising matrix element <n+1| M+ |n>."""
    n = np.asarray(n, dtype=float)
    return np.sqrt((n + 1.0) * (n + params.s + 1.5))


def m_minus(params: ModelParams, n) -> np.ndarray | float:
    """Lowering matrix element <n-1| M- |n>."""
    n = np.asarray(n, dtype=float)
    return np.sqrt(n * (n + params.s + 0.5))


def m_zero(params: ModelParams, n) -> np.ndarray | float:
    """Diagonal element <n| M0 |n> = n + s/2 + 3/4."""
    n = np.asarray(n, dtype=float)
    return n + 0.5 * params.s + 0.75


@dataclass(frozen=True)
class TruncationSpec:
    """Fock-space cut: keep dim levels, trust rows away from the edge."""

    dim: int
    interior_margin: int = 2

    def __post_init__(self):
        if self.dim < 4:
            raise DomainError(f"truncation needs dim >= 4, got {self.dim}")
        if not (1 <= self.interior_margin < self.dim // 2):
            raise DomainError(f"interior margin {self.interior_margin} does not fit dim {self.dim}")


@dataclass(frozen=True)
class BandedOperator:
    """Tridiagonal operator stored by bands; sub[i] multiplies A[i+1, i]."""

    dim: int
    label: str
    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray

    def __post_init__(self):
        if self.sub.shape != (self.dim - 1,) or self.sup.shape != (self.dim - 1,):
            raise DomainError("off-diagonal bands must have length dim - 1")
        if self.diag.shape != (self.dim,):
            raise DomainError("diagonal band must have length dim")
        for arr in (self.sub, self.diag, self.sup):
            arr.flags.writeable = False

    def matvec(self, v: np.ndarray) -> np.ndarray:
        if v.shape != (self.dim,):
            raise DomainError(f"vector length {v.shape} does not match dim {self.dim}")
        out = self.diag * v
        out[1:] = out[1:] + self.sub * v[:-1]
        out[:-1] = out[:-1] + self.sup * v[1:]
        return out

    def to_dense(self) -> np.ndarray:
        out = np.diag(self.diag)
        out[np.arange(1, self.dim), np.arange(self.dim - 1)] = self.sub
        out[np.arange(self.dim - 1), np.arange(1, self.dim)] = self.sup
        return out

    def adjoint(self) -> "BandedOperator":
        # real entries, so the adjoint is the transpose
        return BandedOperator(
            dim=self.dim, label=self.label + "^T", sub=self.sup.copy(), diag=self.diag.copy(), sup=self.sub.copy()
        )


def ladder_matrices(params: ModelParams, trunc: TruncationSpec):
    """(M-, M+, M0) truncated to trunc.dim levels.

    The raising element from level n equals the lowering element from level
    n+1, m+(n) = m-(n+1), so one shared band makes M+ the transpose of M-
    bitwise, not merely up to rounding.
    """
    d = trunc.dim
    lower = np.arange(d - 1, dtype=float)
    zero_band = np.zeros(d - 1)
    band = np.asarray(m_plus(params, lower))
    minus = BandedOperator(
        dim=d, label="M-", sub=zero_band.copy(), diag=np.zeros(d), sup=band
    )
    plus = BandedOperator(
        dim=d, label="M+", sub=band, diag=np.zeros(d), sup=zero_band.copy()
    )
    zero = BandedOperator(
        dim=d,
        label="M0",
        sub=zero_band.copy(),
        diag=np.asarray(m_zero(params, np.arange(d, dtype=float))),
        sup=zero_band.copy(),
    )
    return minus, plus, zero


def number_matrix(trunc: TruncationSpec) -> BandedOperator:
    d = trunc.dim
    return BandedOperator(
        dim=d, label="N", sub=np.zeros(d - 1), diag=np.arange(d, dtype=float), sup=np.zeros(d - 1)
    )


def hamiltonian_matrix(params: ModelParams, trunc: TruncationSpec) -> BandedOperator:
    d = trunc.dim
    diag = 2.0 * np.arange(d, dtype=float) + params.s + 1.5
    return BandedOperator(dim=d, label="H", sub=np.zeros(d - 1), diag=diag, sup=np.zeros(d - 1))


@dataclass(frozen=True)
class CommutatorReport:
    dim: int
    interior_margin: int
    lowering_raising: float
    weight_raising: float
    weight_lowering: float
    hamiltonian_match: float
    edge_residual: float

    def max_interior(self) -> float:
        return max(
            self.lowering_raising,
            self.weight_raising,
            self.weight_lowering,
            self.hamiltonian_match,
        )


def commutator_check(params: ModelParams, trunc: TruncationSpec) -> CommutatorReport:
    """Relative sup-norm residuals of the su(1,1) relations on the truncation.

    Each residual is scaled by the sup of the relation's right-hand side on
    the same block, since the matrix elements themselves grow like D and the
    rounding of their products grows like D^2.  Interior residuals exclude
    interior_margin rows and columns at the edge, where the cut necessarily
    breaks [M-, M+] = 2 M0; the full-block absolute residual of that relation
    is reported separately and is expected to be large.
    """
    minus, plus, zero = ladder_matrices(params, trunc)
    ham = hamiltonian_matrix(params, trunc)
    a, b, c, h = minus.to_dense(), plus.to_dense(), zero.to_dense(), ham.to_dense()
    comm_mp = a @ b - b @ a
    res_mp = comm_mp - 2.0 * c
    res_zp = c @ b - b @ c - b
    res_zm = c @ a - a @ c + a
    res_h = comm_mp - h
    keep = slice(0, trunc.dim - trunc.interior_margin)

    def rel(res, target):
        scale = max(1.0, float(np.max(np.abs(target[keep, keep]))))
        return float(np.max(np.abs(res[keep, keep]))) / scale

    return CommutatorReport(
        dim=trunc.dim,
        interior_margin=trunc.interior_margin,
        lowering_raising=rel(res_mp, 2.0 * c),
        weight_raising=rel(res_zp, b),
        weight_lowering=rel(res_zm, a),
        hamiltonian_match=rel(res_h, h),
        edge_residual=float(np.max(np.abs(res_mp))),
    )


def _rel_l2(x: np.ndarray, num: np.ndarray, den: np.ndarray, keep: slice) -> float:
    nn = math.sqrt(float(np.trapezoid(num[keep] ** 2, x[keep])))
    dd = math.sqrt(float(np.trapezoid(den[keep] ** 2, x[keep])))
    return nn / dd


def grid_ladder_residuals(
    params: ModelParams, n: int, grid: GridSpec | None = None, margin: int = 4
) -> tuple[float, float]:
    """Differential realization of M+- applied to psi_n versus the matrix elements.

    M+- = +-(x/2) d/dx + n + s/2 + const - x^2/2 with const = 1 for the raising
    and 1/2 for the lowering member; returns relative interior L2 residuals.
    """
    spec = grid if grid is not None else default_grid(params, n + 1)
    psi = eigenfunction(params, n, spec)
    x, u = psi.x, psi.values
    d1 = derivative_matrix(x, 1)
    du = d1 @ u
    keep = slice(margin, x.size - margin)

    up = 0.5 * x * du + (n + 0.5 * params.s + 1.0 - 0.5 * x * x) * u
    target_up = m_plus(params, n) * eigenfunction(params, n + 1, spec).values
    r_plus = _rel_l2(x, up - target_up, target_up, keep)

    down = -0.5 * x * du + (n + 0.5 * params.s + 0.5 - 0.5 * x * x) * u
    if n == 0:
        # M- annihilates the bottom level; compare against the state itself
        r_minus = _rel_l2(x, down, u, keep)
    else:
        target_dn = m_minus(params, n) * eigenfunction(params, n - 1, spec).values
        r_minus = _rel_l2(x, down - target_dn, target_dn, keep)
    return r_plus, r_minus


def grid_shift_residuals(
    params: ModelParams, n: int, grid: GridSpec | None = None, margin: int = 4
) -> tuple[float, float]:
    """First-order shift operators A_n = -d/dx - x + (s+n+1)/x and its adjoint.

    A_n   psi_n = -(n/x) psi_n     + (2/x) sqrt(n(n+s+1/2))     psi_{n-1}
    A_n^+ psi_n = -((n+1)/x) psi_n + (2/x) sqrt((n+1)(n+s+3/2)) psi_{n+1}
    """
    spec = grid if grid is not None else default_grid(params, n + 1)
    psi = eigenfunction(params, n, spec)
    x, u = psi.x, psi.values
    d1 = derivative_matrix(x, 1)
    du = d1 @ u
    cn = params.s + n + 1.0
    keep = slice(margin, x.size - margin)

    act_a = -du - x * u + (cn / x) * u
    if n == 0:
        target_a = -(n / x) * u
        ref = u
    else:
        target_a = -(n / x) * u + (2.0 / x) * m_minus(params, n) * eigenfunction(params, n - 1, spec).values
        ref = target_a
    r_a = _rel_l2(x, act_a - target_a, ref, keep)

    act_ad = du - x * u + (cn / x) * u
    target_ad = -((n + 1.0) / x) * u + (2.0 / x) * m_plus(params, n) * eigenfunction(params, n + 1, spec).values
    r_ad = _rel_l2(x, act_ad - target_ad, target_ad, keep)
    return r_a, r_ad
