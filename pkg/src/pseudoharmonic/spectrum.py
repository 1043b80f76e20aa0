"""Pseudoharmonic oscillator on the positive half line.

Natural units (hbar = m = omega = 1) throughout.  The potential is
V(x) = x^2/2 + g/(2 x^2) with g = s(s+1); every closed form below is
written in terms of the shape parameter s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.sparse as sp

from .errors import AccuracyError, DomainError
from .specfun import laguerre_assoc, ln_gamma

__all__ = [
    "ModelParams",
    "GridSpec",
    "GridFunction",
    "FactorizationChain",
    "potential",
    "energy",
    "ground_energy_branches",
    "normalization_constant",
    "eigenfunction",
    "null_state",
    "default_grid",
    "derivative_matrix",
    "lowering_factor",
    "raising_factor",
    "schrodinger_residual",
    "null_state_residual",
    "factorization_build",
    "factorization_chain_residual",
    "operator_product_check",
    "orthonormality_matrix",
]


@dataclass(frozen=True)
class ModelParams:
    """Coupling g >= 0 and shape s >= 0 with g = s(s+1)."""

    g: float
    s: float

    def __post_init__(self):
        if self.g < 0.0:
            raise DomainError(f"coupling must be nonnegative, got g={self.g}")
        if self.s < 0.0:
            raise DomainError(f"shape parameter must be nonnegative, got s={self.s}")
        if abs(self.g - self.s * (self.s + 1.0)) > 1e-12 * (1.0 + abs(self.g)):
            raise DomainError(f"inconsistent pair g={self.g}, s={self.s}")

    @classmethod
    def from_g(cls, g: float) -> "ModelParams":
        if g < 0.0:
            raise DomainError(f"coupling must be nonnegative, got g={g}")
        s = -0.5 + math.sqrt(g + 0.25)
        return cls(g=float(g), s=s)

    @classmethod
    def from_s(cls, s: float) -> "ModelParams":
        if s < 0.0:
            raise DomainError(f"shape parameter must be nonnegative, got s={s}")
        return cls(g=float(s) * (float(s) + 1.0), s=float(s))


def potential(params: ModelParams, x):
    xs = np.asarray(x, dtype=float)
    if np.any(xs <= 0.0):
        raise DomainError("potential is defined on x > 0")
    return 0.5 * xs * xs + 0.5 * params.g / (xs * xs)


def energy(params: ModelParams, n: int) -> float:
    """E_n = 2n + s + 3/2."""
    if n < 0:
        raise DomainError(f"level index must be nonnegative, got {n}")
    return 2.0 * n + params.s + 1.5


def ground_energy_branches(params: ModelParams) -> dict:
    """Ground energy of both factorization branches, keyed by the sign of b0.

    The admissible ground energy is the maximum over branches; the b0 = -1
    branch wins for every s >= 0.
    """
    top = 0.5 * (2.0 * (params.s + 1.0) + 1.0)
    return {-1: top, +1: -top}


@dataclass(frozen=True)
class FactorizationChain:
    """Ladder coefficients b_n, c_n and energies E_n of the operator hierarchy."""

    params: ModelParams
    depth: int
    b: np.ndarray
    c: np.ndarray
    E: np.ndarray

    @classmethod
    def build(cls, params: ModelParams, depth: int) -> "FactorizationChain":
        if depth < 0:
            raise DomainError("chain depth must be nonnegative")
        n = np.arange(depth + 1, dtype=float)
        b = -np.ones(depth + 1)
        c = params.s + n + 1.0
        e = np.empty(depth + 1)
        e[0] = -b[0] * (2.0 * c[0] + 1.0) / 2.0
        for k in range(depth):
            e[k + 1] = e[k] + (b[k] * (2.0 * c[k] - 1.0) - b[k + 1] * (2.0 * c[k + 1] + 1.0)) / 2.0
        chain = cls(params=params, depth=depth, b=b, c=c, E=e)
        for arr in (chain.b, chain.c, chain.E):
            arr.flags.writeable = False
        return chain

    def recurrence_residual(self) -> float:
        """Sup residual of b_{n+1}(2c_{n+1}+1) + 2E_{n+1} = b_n(2c_n-1) + 2E_n."""
        lhs = self.b[1:] * (2.0 * self.c[1:] + 1.0) + 2.0 * self.E[1:]
        rhs = self.b[:-1] * (2.0 * self.c[:-1] - 1.0) + 2.0 * self.E[:-1]
        return float(np.max(np.abs(lhs - rhs))) if self.depth else 0.0


@dataclass(frozen=True)
class GridSpec:
    """Half-line grid: geometric spacing near the origin, then uniform."""

    x_min: float = 1e-2
    x_max: float = 8.0
    count: int = 2000
    law: str = "hybrid"

    def __post_init__(self):
        if not (0.0 < self.x_min < self.x_max):
            raise DomainError(f"need 0 < x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if self.count < 16:
            raise DomainError(f"grid needs at least 16 nodes, got {self.count}")
        if self.law not in ("hybrid", "uniform", "geometric"):
            raise DomainError(f"unknown spacing law {self.law!r}")

    def nodes(self) -> np.ndarray:
        if self.law == "uniform":
            return np.linspace(self.x_min, self.x_max, self.count)
        if self.law == "geometric":
            return np.geomspace(self.x_min, self.x_max, self.count)
        x_break = min(1.0, 0.25 * self.x_max)
        if x_break <= self.x_min:
            return np.linspace(self.x_min, self.x_max, self.count)
        n_geo = self.count // 5
        left = np.geomspace(self.x_min, x_break, n_geo, endpoint=False)
        right = np.linspace(x_break, self.x_max, self.count - n_geo)
        return np.concatenate([left, right])


def default_grid(params: ModelParams, n: int, count: int | None = None) -> GridSpec:
    """Grid reaching past the classical turning point of level n.

    The node budget grows with n: higher levels oscillate faster, and the
    fixed-order stencils need a constant number of points per wavelength to
    hold their residual.
    """
    if count is None:
        count = 2000 + 200 * n
    return GridSpec(x_min=1e-2, x_max=6.0 + math.sqrt(2.0 * energy(params, n)), count=count)


@dataclass(frozen=True)
class GridFunction:
    x: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.x.shape != self.values.shape:
            raise DomainError("node and value arrays must share a shape")
        if np.any(np.diff(self.x) <= 0.0):
            raise DomainError("grid nodes must increase strictly")

    def norm(self) -> float:
        return math.sqrt(float(np.trapezoid(self.values**2, self.x)))


def normalization_constant(params: ModelParams, n: int) -> float:
    """N_n = sqrt(2 n! / Gamma(n + s + 3/2)), evaluated in log space."""
    if n < 0:
        raise DomainError(f"level index must be nonnegative, got {n}")
    return math.exp(0.5 * (math.log(2.0) + ln_gamma(n + 1.0) - ln_gamma(n + params.s + 1.5)))


def eigenfunction(params: ModelParams, n: int, grid: GridSpec | None = None) -> GridFunction:
    """psi_n(x) = N_n x^{s+1} exp(-x^2/2) L_n^{s+1/2}(x^2)."""
    spec = grid if grid is not None else default_grid(params, n)
    x = spec.nodes()
    vals = (
        normalization_constant(params, n)
        * x ** (params.s + 1.0)
        * np.exp(-0.5 * x * x)
        * laguerre_assoc(n, params.s + 0.5, x * x)
    )
    return GridFunction(x=x, values=vals)


def null_state(params: ModelParams, n: int, grid: GridSpec | None = None) -> GridFunction:
    """Annihilated seed of the n-th hierarchy level: x^{s+n+1} exp(-x^2/2)."""
    if n < 0:
        raise DomainError(f"level index must be nonnegative, got {n}")
    spec = grid if grid is not None else default_grid(params, n)
    x = spec.nodes()
    return GridFunction(x=x, values=x ** (params.s + n + 1.0) * np.exp(-0.5 * x * x))


def _fd_weights(xs: np.ndarray, x0: float, order: int) -> np.ndarray:
    """Finite-difference weights on arbitrary nodes (Fornberg recursion)."""
    n = xs.size
    w = np.zeros((order + 1, n))
    c1 = 1.0
    c4 = xs[0] - x0
    w[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    w[k, i] = c1 * (k * w[k - 1, i - 1] - c5 * w[k, i - 1]) / c2
                w[0, i] = -c1 * c5 * w[0, i - 1] / c2
            for k in range(mn, 0, -1):
                w[k, j] = (c4 * w[k, j] - k * w[k - 1, j]) / c3
            w[0, j] = c4 * w[0, j] / c3
        c1 = c2
    return w


def derivative_matrix(x: np.ndarray, order: int, stencil: int = 5) -> sp.csr_matrix:
    """Sparse d^order/dx^order on the given nodes with moving 5-point stencils.

    On the uniform section this reproduces the classical centered 4th-order
    stencils; boundary rows fall back to one-sided windows.
    """
    n = x.size
    if n < stencil:
        raise DomainError("grid shorter than the stencil")
    half = stencil // 2
    rows = np.repeat(np.arange(n), stencil)
    cols = np.empty(n * stencil, dtype=int)
    data = np.empty(n * stencil)
    for i in range(n):
        lo = min(max(i - half, 0), n - stencil)
        cols[i * stencil : (i + 1) * stencil] = np.arange(lo, lo + stencil)
        data[i * stencil : (i + 1) * stencil] = _fd_weights(x[lo : lo + stencil], x[i], order)[order]
    return sp.csr_matrix((data, (rows, cols)), shape=(n, n))


def lowering_factor(params: ModelParams, n: int, x: np.ndarray, d1: sp.csr_matrix) -> sp.csr_matrix:
    """First-order factor annihilating the level-n seed, up to a constant phase.

    The physical operator is (-i) times this real matrix; compositions below
    account for the phases, which drop out of every residual we form.
    """
    c = params.s + n + 1.0
    return (d1 + sp.diags(x - c / x)) / math.sqrt(2.0)


def raising_factor(params: ModelParams, n: int, x: np.ndarray, d1: sp.csr_matrix) -> sp.csr_matrix:
    """Adjoint first-order factor, again up to the (-i) phase."""
    c = params.s + n + 1.0
    return (d1 - sp.diags(x - c / x)) / math.sqrt(2.0)


def _interior(size: int, margin: int) -> slice:
    if 2 * margin >= size:
        raise DomainError("margin swallows the whole grid")
    return slice(margin, size - margin)


def schrodinger_residual(params: ModelParams, n: int, grid: GridSpec | None = None, margin: int = 4) -> float:
    """sup |(-psi''/2 + V psi - E_n psi)| / sup |psi| over interior nodes."""
    psi = eigenfunction(params, n, grid)
    d2 = derivative_matrix(psi.x, 2)
    res = -0.5 * (d2 @ psi.values) + (potential(params, psi.x) - energy(params, n)) * psi.values
    keep = _interior(psi.x.size, margin)
    return float(np.max(np.abs(res[keep])) / np.max(np.abs(psi.values)))


def null_state_residual(params: ModelParams, n: int, grid: GridSpec | None = None, margin: int = 4) -> float:
    """sup |a_n xi_n| / sup |xi_n|: the seed must sit in the factor's kernel."""
    xi = null_state(params, n, grid)
    d1 = derivative_matrix(xi.x, 1)
    res = lowering_factor(params, n, xi.x, d1) @ xi.values
    keep = _interior(xi.x.size, margin)
    return float(np.max(np.abs(res[keep])) / np.max(np.abs(xi.values)))


def _chain_values(params: ModelParams, n: int, spec: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    xi = null_state(params, n, spec)
    x = xi.x
    v = xi.values / xi.norm()
    d1 = derivative_matrix(x, 1)
    for k in range(n - 1, -1, -1):
        v = raising_factor(params, k, x, d1) @ v
    e_n = energy(params, n)
    scale = reduce(lambda acc, k: acc * (e_n - energy(params, k)), range(n), 1.0)
    return x, v / math.sqrt(scale)


def factorization_build(
    params: ModelParams,
    n: int,
    grid: GridSpec | None = None,
    max_rel_err: float = 1e-3,
) -> GridFunction:
    """Level-n wavefunction grown from the null seed by the adjoint factor chain.

    Raises AccuracyError when the grid cannot reproduce the closed form to
    max_rel_err in relative interior L2.
    """
    spec = grid if grid is not None else default_grid(params, n)
    x, v = _chain_values(params, n, spec)
    err = _chain_error(params, n, spec, x, v)
    if err > max_rel_err:
        raise AccuracyError(
            f"factorization chain for n={n} missed the closed form (rel L2 {err:.3e})",
            residual=err,
        )
    return GridFunction(x=x, values=v)


def _chain_error(params, n, spec, x, v) -> float:
    ref = eigenfunction(params, n, spec).values
    keep = _interior(x.size, 2 * n + 6)
    num = math.sqrt(float(np.trapezoid((v[keep] - ref[keep]) ** 2, x[keep])))
    den = math.sqrt(float(np.trapezoid(ref[keep] ** 2, x[keep])))
    return num / den


def factorization_chain_residual(params: ModelParams, n: int, grid: GridSpec | None = None) -> float:
    """Relative interior L2 distance between the chain build and the closed form."""
    spec = grid if grid is not None else default_grid(params, n)
    x, v = _chain_values(params, n, spec)
    return _chain_error(params, n, spec, x, v)


def operator_product_check(
    params: ModelParams,
    n: int,
    grid: GridSpec | None = None,
    probe: GridFunction | None = None,
    margin: int = 6,
) -> dict:
    """Compare composed first-order factors against their closed second-order forms.

    Returns sup-norm residuals (relative to the probe's sup) for the two
    orderings of the factor pair and for their difference, whose closed form
    is (1 + c_n / x^2) times the probe.
    """
    spec = grid if grid is not None else default_grid(params, max(n, 2))
    if probe is None:
        probe = eigenfunction(params, 0, spec)
    x, u = probe.x, probe.values
    d1 = derivative_matrix(x, 1)
    d2 = derivative_matrix(x, 2)
    low = lowering_factor(params, n, x, d1)
    high = raising_factor(params, n, x, d1)
    c = params.s + n + 1.0
    # the (-i)^2 phase of the composed physical operators flips the sign
    prod_rl = -(high @ (low @ u))
    prod_lr = -(low @ (high @ u))
    closed_rl = 0.5 * (-(d2 @ u) + (x * x - (2.0 * c + 1.0) + c * (c - 1.0) / (x * x)) * u)
    closed_lr = 0.5 * (-(d2 @ u) + (x * x - (2.0 * c - 1.0) + c * (c + 1.0) / (x * x)) * u)
    keep = _interior(x.size, margin)
    scale = float(np.max(np.abs(u)))
    return {
        "lower_then_raise": float(np.max(np.abs((prod_rl - closed_rl)[keep])) / scale),
        "raise_then_lower": float(np.max(np.abs((prod_lr - closed_lr)[keep])) / scale),
        "difference": float(
            np.max(np.abs((prod_lr - prod_rl - (1.0 + c / (x * x)) * u)[keep])) / scale
        ),
    }


def orthonormality_matrix(params: ModelParams, n_max: int) -> np.ndarray:
    """Gram matrix <psi_m | psi_n> for m, n <= n_max.

    The integrand reduces to u^{s+1/2} e^{-u} times a polynomial under
    u = x^2, so a generalized Gauss-Laguerre rule integrates it exactly.
    """
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    from scipy.special import roots_genlaguerre

    alpha = params.s + 0.5
    nodes, weights = roots_genlaguerre(n_max + 2, alpha)
    table = np.array([laguerre_assoc(k, alpha, nodes) for k in range(n_max + 1)])
    norms = np.array([normalization_constant(params, k) for k in range(n_max + 1)])
    gram = 0.5 * np.einsum("i,mi,ni->mn", weights, table, table)
    return gram * np.outer(norms, norms)
