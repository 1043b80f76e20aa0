"""Special functions backing the oscillator and coherent-state modules.

Plain float64 numerics: log-gamma ratios, hypergeometric series with term
recurrences, and one numerical Mellin-Barnes contour for the Meijer G
kernel that appears in the Barut-Girardello resolution of the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma as _loggamma_c
from scipy.special import roots_legendre

from .errors import ConvergenceError, DomainError, UnsupportedCaseError

__all__ = [
    "ln_gamma",
    "ln_gamma_ratio",
    "laguerre_assoc",
    "laguerre_derivative_identities",
    "hyp0f1",
    "hyp2f1",
    "HypergeomSpec",
    "MeijerGSpec",
    "meijer_g",
    "meijer_g_many",
    "mellin_moment",
]


def ln_gamma(x: float) -> float:
    """log Gamma(x) for x > 0."""
    if x <= 0.0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def ln_gamma_ratio(num, den) -> float:
    """exp-safe log of prod Gamma(num_i) / prod Gamma(den_j), all arguments > 0."""
    return sum(ln_gamma(v) for v in num) - sum(ln_gamma(v) for v in den)


def laguerre_assoc(n: int, alpha: float, x):
    """Generalized Laguerre polynomial L_n^alpha(x) by the three-term recurrence.

    Stable forward recurrence in the degree; vectorized over x.
    """
    if n < 0 or n != int(n):
        raise DomainError(f"degree must be a nonnegative integer, got {n}")
    if alpha <= -1.0:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 0
    xs = np.atleast_1d(xs)
    prev = np.ones_like(xs)
    if n == 0:
        return float(prev[0]) if scalar else prev
    cur = 1.0 + alpha - xs
    for k in range(1, n):
        prev, cur = cur, ((2.0 * k + alpha + 1.0 - xs) * cur - (k + alpha) * prev) / (k + 1.0)
    return float(cur[0]) if scalar else cur


def laguerre_derivative_identities(n: int, alpha: float, x):
    """Both closed forms of x * d/dx L_n^alpha(x), returned as a pair.

    Lowering branch:  n L_n - (n+alpha) L_{n-1}
    Raising branch:   (n+1) L_{n+1} - (n+alpha+1-x) L_n
    The two must agree; callers use the pair as a consistency probe.
    """
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 0
    xs = np.atleast_1d(xs)
    ln = laguerre_assoc(n, alpha, xs)
    if n == 0:
        low = np.zeros_like(xs)
    else:
        low = n * ln - (n + alpha) * laguerre_assoc(n - 1, alpha, xs)
    high = (n + 1.0) * laguerre_assoc(n + 1, alpha, xs) - (n + alpha + 1.0 - xs) * ln
    if scalar:
        return float(low[0]), float(high[0])
    return low, high


def _is_nonpositive_int(v: float) -> bool:
    return float(v).is_integer() and v <= 0.0


def hyp0f1(c: float, x: float, max_terms: int = 100000) -> float:
    """Confluent limit series 0F1(; c; x) = sum_k x^k / ((c)_k k!)."""
    if _is_nonpositive_int(c):
        raise DomainError(f"lower parameter must not be a nonpositive integer, got {c}")
    total = 1.0
    term = 1.0
    small = 0
    for k in range(max_terms):
        term *= x / ((c + k) * (k + 1.0))
        total += term
        # two consecutive tiny terms so alternating series cannot stop early
        small = small + 1 if abs(term) <= 1e-17 * abs(total) + 5e-324 else 0
        if small >= 2:
            return total
    raise ConvergenceError(f"0F1 series did not converge for c={c}, x={x}", residual=abs(term))


def hyp2f1(a: float, b: float, c: float, w: float, max_terms: int = 500000) -> float:
    """Gauss series 2F1(a, b; c; w).

    Exactly 1.0 when a == 0 or b == 0 (every term beyond the first vanishes).
    Terminating when a or b is a nonpositive integer; otherwise requires |w| < 1.
    """
    if _is_nonpositive_int(c):
        raise DomainError(f"lower parameter must not be a nonpositive integer, got {c}")
    if a == 0.0 or b == 0.0:
        return 1.0
    n_stop = None
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        stops = [int(-v) for v in (a, b) if _is_nonpositive_int(v)]
        n_stop = min(stops)
    elif abs(w) >= 1.0:
        raise DomainError(f"2F1 series requires |w| < 1 for non-terminating parameters, got w={w}")
    total = 1.0
    term = 1.0
    small = 0
    for k in range(max_terms):
        if n_stop is not None and k >= n_stop:
            return total
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * w
        total += term
        small = small + 1 if abs(term) <= 1e-17 * abs(total) + 5e-324 else 0
        if small >= 2:
            return total
    raise ConvergenceError(f"2F1 series did not converge for w={w}", residual=abs(term))


@dataclass(frozen=True)
class HypergeomSpec:
    """Parameter block for a pFq evaluation; only (p,q) in {(0,1), (2,1)} evaluate."""

    upper: tuple
    lower: tuple
    argument: float

    def __post_init__(self):
        for v in self.lower:
            if _is_nonpositive_int(v):
                raise DomainError(f"lower parameter must not be a nonpositive integer, got {v}")

    def evaluate(self) -> float:
        shape = (len(self.upper), len(self.lower))
        if shape == (0, 1):
            return hyp0f1(self.lower[0], self.argument)
        if shape == (2, 1):
            return hyp2f1(self.upper[0], self.upper[1], self.lower[0], self.argument)
        raise UnsupportedCaseError(f"no evaluator for a {shape[0]}F{shape[1]} series")


@dataclass(frozen=True)
class MeijerGSpec:
    """Order and parameter block of a Meijer G function G^{m,n}_{p,q}(x | a; b)."""

    m: int
    n: int
    p: int
    q: int
    a: tuple
    b: tuple

    def __post_init__(self):
        if not (0 <= self.n <= self.p and 1 <= self.m <= self.q):
            raise DomainError("need 0 <= n <= p and 1 <= m <= q")
        if len(self.a) != self.p or len(self.b) != self.q:
            raise DomainError("parameter tuples must have lengths p and q")

    @classmethod
    def resolution_kernel(cls, nu: float) -> "MeijerGSpec":
        """The G^{4,0}_{2,4}(x | (0, nu); (0, 0, nu, nu)) kernel, nu > 0."""
        if nu <= 0.0:
            raise DomainError(f"kernel exponent must be positive, got {nu}")
        nu = float(nu)
        return cls(m=4, n=0, p=2, q=4, a=(0.0, nu), b=(0.0, 0.0, nu, nu))

    def is_resolution_kernel(self) -> bool:
        return (
            (self.m, self.n, self.p, self.q) == (4, 0, 2, 4)
            and self.a[0] == 0.0
            and self.b[0] == 0.0
            and self.b[1] == 0.0
            and self.a[1] == self.b[2] == self.b[3]
            and self.a[1] > 0.0
        )


def _mellin_log(spec: MeijerGSpec, t):
    """log of the Mellin kernel prod Gamma(b_j + t) ... at complex t, principal branch.

    All gamma arguments keep positive real part on the contours used here, so
    the log-space ratio is smooth and the repeated parameters cancel cleanly.
    """
    total = np.zeros_like(t)
    for bj in spec.b[: spec.m]:
        total = total + _loggamma_c(bj + t)
    for aj in spec.a[: spec.n]:
        total = total + _loggamma_c(1.0 - aj - t)
    for bj in spec.b[spec.m :]:
        total = total - _loggamma_c(1.0 - bj - t)
    for aj in spec.a[spec.n :]:
        total = total - _loggamma_c(aj + t)
    return total


def mellin_moment(spec: MeijerGSpec, k: float, beta: float = 1.0) -> float:
    """Closed-form half-line moment int_0^inf x^{k-1} G(beta x) dx.

    Valid when every gamma argument in the kernel is positive at t = k.
    """
    if k <= 0.0 or beta <= 0.0:
        raise DomainError("moment order and scale must be positive")
    try:
        val = 0.0
        for bj in spec.b[: spec.m]:
            val += math.lgamma(bj + k)
        for aj in spec.a[: spec.n]:
            val += math.lgamma(1.0 - aj - k)
        for bj in spec.b[spec.m :]:
            val -= math.lgamma(1.0 - bj - k)
        for aj in spec.a[spec.n :]:
            val -= math.lgamma(aj + k)
    except ValueError as exc:
        raise DomainError(f"gamma pole in the moment kernel at k={k}") from exc
    return math.exp(val - k * math.log(beta))


def _contour_abscissa(x: float) -> float:
    # saddle of Gamma(t)Gamma(t+nu) x^{-t} sits near sqrt(x); for x < 1 shrink
    # toward the origin so x^{-c0} stays O(1) instead of amplifying cancellation
    if x >= 1.0:
        return math.sqrt(x)
    return 1.0 / max(1.0, -math.log(x))


_GL_CACHE: dict = {}


def _gauss_legendre(n: int):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = roots_legendre(n)
    return _GL_CACHE[n]


def meijer_g_many(
    spec: MeijerGSpec,
    x,
    rtol: float = 1e-10,
    max_nodes: int = 4096,
) -> np.ndarray:
    """Meijer G on an array of positive arguments by Mellin-Barnes contour quadrature.

    Only the resolution kernel case is accepted; it has all contour gamma
    arguments in the right half plane, superexponential decay along the
    vertical line Re t = c0, and its double poles never touch the contour.
    """
    if not spec.is_resolution_kernel():
        raise UnsupportedCaseError(
            "only the G^{4,0}_{2,4} resolution kernel is supported for contour evaluation"
        )
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if xs.size == 0:
        return np.zeros(0)
    if np.any(~np.isfinite(xs)) or np.any(xs <= 0.0):
        raise DomainError("meijer_g requires finite x > 0")

    out = np.zeros(xs.shape)
    order = np.argsort(xs)
    # chunk sorted arguments so a shared contour window fits every column
    chunks = []
    start = 0
    for i in range(1, xs.size + 1):
        if i == xs.size:
            chunks.append(order[start:i])
        else:
            c_lo = _contour_abscissa(xs[order[start]])
            c_hi = _contour_abscissa(xs[order[i]])
            if c_hi > 4.0 * max(c_lo, 1.0) or (i - start) >= 256:
                chunks.append(order[start:i])
                start = i
    for idx in chunks:
        out[idx] = _meijer_chunk(spec, xs[idx], rtol, max_nodes)
    return out


def _meijer_chunk(spec: MeijerGSpec, xs: np.ndarray, rtol: float, max_nodes: int) -> np.ndarray:
    logx = np.log(xs)
    c0 = np.array([_contour_abscissa(v) for v in xs])
    log_peak = np.real(_mellin_log(spec, c0.astype(complex))) - c0 * logx

    vals = np.zeros(xs.size)
    live = log_peak > -720.0  # anything deeper underflows to 0 exactly
    if not np.any(live):
        return vals

    # window height: gamma decay is ~exp(-pi u) once u exceeds c0
    upper = 24.0 + 2.2 * float(np.max(c0[live]))
    for _ in range(30):
        t_edge = c0[live] + 1j * upper
        edge = np.real(_mellin_log(spec, t_edge)) - c0[live] * logx[live] - log_peak[live]
        if np.max(edge) < -37.0 or upper > 4000.0:
            break
        upper *= 1.4

    noise = np.exp(log_peak[live]) * upper * 1e-16
    prev = None
    last_diff = math.inf
    n = 128
    while True:
        u_base, w_base = _gauss_legendre(n)
        u = 0.5 * upper * (u_base + 1.0)
        w = 0.5 * upper * w_base
        t = c0[live][None, :] + 1j * u[:, None]
        ln_f = _mellin_log(spec, t) - t * logx[live][None, :]
        integ = np.real(np.exp(ln_f))
        cur = (w @ integ) / math.pi
        if prev is not None:
            diff = np.abs(cur - prev)
            tol = np.maximum(rtol * np.abs(cur), 8.0 * noise)
            if np.all(diff <= tol + 1e-280):
                vals[live] = cur
                return vals
            last_diff = float(np.max(diff))
        prev = cur
        if n >= max_nodes:
            raise ConvergenceError(
                f"Mellin-Barnes quadrature did not stabilize at {max_nodes} nodes",
                residual=last_diff,
            )
        n *= 2


def meijer_g(spec: MeijerGSpec, x: float, rtol: float = 1e-10) -> float:
    """Meijer G at a single positive argument; see meijer_g_many."""
    return float(meijer_g_many(spec, [x], rtol=rtol)[0])
