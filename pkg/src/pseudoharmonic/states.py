"""Coherent states of the su(1,1) ladder algebra in the truncated eigenbasis.

Two families:

  * Barut-Girardello (BG): eigenstates of the lowering operator, defined on
    the whole complex plane, with coefficients
    c_n = N sqrt(Gamma(s+3/2) / (n! Gamma(n+s+3/2))) z^n and
    N = 0F1(s+3/2; |z|^2)^{-1/2}.

  * Gilmore-Perelomov (GP): displaced ground states, defined on the open unit
    disk, with coefficients
    c_n = N sqrt(Gamma(n+s+3/2) / (n! Gamma(s+3/2))) z^n and
    N = (1 - |z|^2)^{s/2 + 3/4}.

Coefficient magnitudes are accumulated in log space; the truncation dimension
is sized from an analytic geometric tail bound unless the caller fixes it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import AccuracyError, DomainError, TruncationError
from .algebra import TruncationSpec, ladder_matrices, m_minus
from .spectrum import ModelParams
from .specfun import hyp0f1, ln_gamma

__all__ = [
    "FockVector",
    "GPParameter",
    "bg_state",
    "gp_state",
    "bg_recursion_solve",
    "gp_displacement_oracle",
    "fock_state",
]

_DIM_FLOOR = 8
_DIM_CAP = 4096
_BG_MAX_ABS_Z = 64.0


@dataclass(frozen=True)
class FockVector:
    """Truncated state in the oscillator eigenbasis."""

    params: ModelParams
    coeff: np.ndarray
    label: str
    z: complex | None
    tail_bound: float

    def __post_init__(self):
        if self.coeff.ndim != 1 or self.coeff.size < 1:
            raise DomainError("coefficient array must be a nonempty vector")
        self.coeff.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.coeff.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeff))


@dataclass(frozen=True)
class GPParameter:
    """Displacement argument xi with its disk image z = (xi/|xi|) tanh |xi|."""

    xi: complex

    @property
    def z(self) -> complex:
        r = abs(self.xi)
        if r == 0.0:
            return 0.0 + 0.0j
        return (self.xi / r) * math.tanh(r)


def fock_state(params: ModelParams, n: int, dim: int | None = None) -> FockVector:
    """The eigenket |n> as a FockVector."""
    if n < 0:
        raise DomainError("level index must be nonnegative")
    d = dim if dim is not None else max(_DIM_FLOOR, n + 4)
    if d <= n:
        raise TruncationError(f"dim {d} cannot hold level {n}", needed_dim=n + 1)
    coeff = np.zeros(d, dtype=complex)
    coeff[n] = 1.0
    return FockVector(params=params, coeff=coeff, label=f"fock[{n}]", z=None, tail_bound=0.0)


def _size_truncation(ratios, total: float, threshold: float, dim: int | None, family: str):
    """Smallest D with geometric tail mass q_D / (1 - r_D) <= threshold * total.

    ratios(n) gives q_{n+1}/q_n for the squared coefficient magnitudes q_n
    (q_0 = 1) and must be eventually decreasing below one.
    """
    cap = _DIM_CAP if dim is None else max(dim, _DIM_CAP)
    q = 1.0
    needed = None
    tail = math.inf
    for d in range(1, cap + 1):
        r = ratios(d - 1)
        q *= r
        r_next = ratios(d)
        if r_next < 1.0:
            tail = q / (1.0 - r_next)
            if tail <= threshold * total:
                needed = d
                break
    if needed is None:
        raise TruncationError(
            f"{family} tail bound not reachable within {cap} levels",
            needed_dim=cap + 1,
        )
    if dim is not None:
        if dim < needed:
            raise TruncationError(
                f"dim {dim} leaves more than the allowed tail mass; need {needed}",
                needed_dim=needed,
            )
        return dim, _tail_at(ratios, total, dim)
    return max(needed, _DIM_FLOOR), tail / total


def _tail_at(ratios, total: float, d: int) -> float:
    q = 1.0
    for k in range(d):
        q *= ratios(k)
    r = ratios(d)
    if r >= 1.0:
        return math.inf
    return q / (1.0 - r) / total


def bg_state(
    params: ModelParams,
    z: complex,
    dim: int | None = None,
    tail_threshold: float = 1e-12,
    max_abs_z: float = _BG_MAX_ABS_Z,
) -> FockVector:
    """Lowering-operator eigenstate with eigenvalue z.

    tail_threshold bounds the relative coefficient mass dropped by the cut;
    residual-sensitive callers (eigenproperty checks) pass tighter values.
    """
    z = complex(z)
    r2 = abs(z) ** 2
    if abs(z) > max_abs_z:
        raise DomainError(f"|z| = {abs(z):.3g} exceeds the configured cap {max_abs_z}")
    s = params.s
    total = hyp0f1(s + 1.5, r2)

    def ratios(n: int) -> float:
        return r2 / ((n + 1.0) * (n + s + 1.5))

    d, tail = _size_truncation(ratios, total, tail_threshold, dim, "BG")
    n = np.arange(d, dtype=float)
    log_mag = 0.5 * (
        ln_gamma(s + 1.5) - np.array([ln_gamma(k + 1.0) for k in n]) - np.array([ln_gamma(k + s + 1.5) for k in n])
    )
    if abs(z) > 0.0:
        log_mag = log_mag + n * math.log(abs(z))
        phase = np.exp(1j * n * cmath.phase(z))
    else:
        log_mag = log_mag + np.where(n == 0.0, 0.0, -np.inf)
        phase = np.ones(d, dtype=complex)
    coeff = np.exp(log_mag) * phase / math.sqrt(total)
    return FockVector(params=params, coeff=coeff, label="bg", z=z, tail_bound=float(tail))


def gp_state(
    params: ModelParams,
    z: complex,
    dim: int | None = None,
    tail_threshold: float = 1e-12,
) -> FockVector:
    """Displacement-type state at disk parameter z, |z| < 1."""
    z = complex(z)
    r2 = abs(z) ** 2
    if r2 >= 1.0:
        raise DomainError(f"GP states need |z| < 1, got |z| = {abs(z):.6g}")
    s = params.s
    total = (1.0 - r2) ** (-(s + 1.5))

    def ratios(n: int) -> float:
        return r2 * (n + s + 1.5) / (n + 1.0)

    d, tail = _size_truncation(ratios, total, tail_threshold, dim, "GP")
    n = np.arange(d, dtype=float)
    log_mag = 0.5 * (
        np.array([ln_gamma(k + s + 1.5) for k in n]) - np.array([ln_gamma(k + 1.0) for k in n]) - ln_gamma(s + 1.5)
    )
    if abs(z) > 0.0:
        log_mag = log_mag + n * math.log(abs(z))
        phase = np.exp(1j * n * cmath.phase(z))
    else:
        log_mag = log_mag + np.where(n == 0.0, 0.0, -np.inf)
        phase = np.ones(d, dtype=complex)
    norm = (1.0 - r2) ** (0.5 * s + 0.75)
    coeff = norm * np.exp(log_mag) * phase
    return FockVector(params=params, coeff=coeff, label="gp", z=z, tail_bound=float(tail))


def bg_recursion_solve(params: ModelParams, z: complex, dim: int) -> FockVector:
    """Independent BG construction: solve m-(n+1) c_{n+1} = z c_n from c_0 = 1.

    Normalized over the kept block, so it doubles as a cross-check of the
    closed-form coefficients and the 0F1 normalization.
    """
    z = complex(z)
    if dim < 2:
        raise DomainError("recursion needs at least two levels")
    coeff = np.zeros(dim, dtype=complex)
    coeff[0] = 1.0
    for n in range(dim - 1):
        coeff[n + 1] = z * coeff[n] / float(m_minus(params, n + 1))
    coeff /= np.linalg.norm(coeff)
    return FockVector(params=params, coeff=coeff, label="bg-recursion", z=z, tail_bound=math.nan)


def gp_displacement_oracle(
    params: ModelParams,
    xi: complex,
    dim: int = 256,
    leak_tol: float = 1e-8,
) -> FockVector:
    """GP state by direct exponentiation exp(xi M+ - conj(xi) M-) |0>.

    Dense-matrix route, independent of the series coefficients; raises
    TruncationError if amplitude reaches the truncation edge.
    """
    xi = complex(xi)
    trunc = TruncationSpec(dim=dim, interior_margin=2)
    minus, plus, _ = ladder_matrices(params, trunc)
    gen = xi * plus.to_dense().astype(complex) - np.conj(xi) * minus.to_dense().astype(complex)
    vec = expm(gen)[:, 0]
    leak = float(np.max(np.abs(vec[-3:])))
    if leak > leak_tol:
        raise TruncationError(
            f"displacement leaked {leak:.3e} amplitude to the truncation edge at dim {dim}",
            needed_dim=2 * dim,
        )
    drift = abs(float(np.linalg.norm(vec)) - 1.0)
    if drift > 1e-10:
        raise AccuracyError(f"exponential lost unitarity by {drift:.3e}", residual=drift)
    return FockVector(
        params=params, coeff=vec, label="gp-displaced", z=GPParameter(xi).z, tail_bound=leak**2
    )
