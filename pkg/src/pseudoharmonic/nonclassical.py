"""Squeezing and counting statistics built from ladder-operator moments.

Quadratures X = (A + B)/2 and P = (A - B)/(2i) with (A, B) = (M-, M+) for the
first-order pair and (M-^2, M+^2) for the amplitude-squared pair.  The
squeezing index is the defining form

    S = (Delta Q)^2 / sqrt(|<[X, P]>|^2 / 4) - 1

with the commutator expectation taken from the same truncated matrices as the
variances, so both orders share one code path.  The counting statistic is

    Q = (<M+^2 M-^2> - <M+ M->^2) / <M+ M-> - 1,

undefined on states annihilated by M-.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError, TruncationError, UndefinedStatisticError
from .algebra import BandedOperator, TruncationSpec, ladder_matrices
from .spectrum import ModelParams
from .states import FockVector, bg_state, gp_state

__all__ = [
    "WORD_TOKENS",
    "expectation",
    "squeezing_first",
    "squeezing_amplitude_squared",
    "mandel_q",
    "MetricsRecord",
    "scan",
]

WORD_TOKENS = ("M-", "M+", "M0")
_MAX_WORD = 4
_GP_EDGE = 1e-9


def _operators(params: ModelParams, dim: int) -> dict:
    # margin 1 so two-level states still embed; nothing here reads the margin
    minus, plus, zero = ladder_matrices(params, TruncationSpec(dim=max(dim, 4), interior_margin=1))
    return {"M-": minus, "M+": plus, "M0": zero}


def expectation(state: FockVector, word) -> complex:
    """<state| W |state> for a product word over {M-, M+, M0}, leftmost first.

    The state is embedded in dim + len(word) levels before applying the word,
    so raising never pushes amplitude across the truncation edge; the result
    is exact for the stored coefficients.
    """
    word = tuple(word)
    if not 1 <= len(word) <= _MAX_WORD:
        raise DomainError(f"word length must be 1..{_MAX_WORD}, got {len(word)}")
    for tok in word:
        if tok not in WORD_TOKENS:
            raise DomainError(f"unknown operator token {tok!r}")
    if not (state.tail_bound <= 1e-6 or math.isnan(state.tail_bound)):
        raise AccuracyError(
            f"state tail bound {state.tail_bound:.3e} too loose for moment evaluation",
            residual=state.tail_bound,
        )
    embed = state.dim + len(word)
    ops = _operators(state.params, embed)
    v = np.zeros(embed, dtype=complex)
    v[: state.dim] = state.coeff
    w = v
    for tok in reversed(word):
        w = ops[tok].matvec(w)
    return complex(np.vdot(v, w))


def _real_expect(state, word, ops, v) -> complex:
    w = v
    for tok in reversed(word):
        w = ops[tok].matvec(w)
    return complex(np.vdot(v, w))


def _pair_stats(state: FockVector, power: int) -> tuple[float, float, float]:
    """(Var X, Var P, |<[X, P]>|/2) for the order-power quadrature pair."""
    base = ("M-",) * power
    conj = ("M+",) * power
    embed = state.dim + 2 * power
    ops = _operators(state.params, embed)
    v = np.zeros(embed, dtype=complex)
    v[: state.dim] = state.coeff

    aa = _real_expect(state, base + base, ops, v)
    ab = _real_expect(state, base + conj, ops, v)
    ba = _real_expect(state, conj + base, ops, v)
    bb = _real_expect(state, conj + conj, ops, v)
    a1 = _real_expect(state, base, ops, v)
    b1 = _real_expect(state, conj, ops, v)

    xx = 0.25 * (aa + ab + ba + bb)
    pp = -0.25 * (aa - ab - ba + bb)
    x1 = 0.5 * (a1 + b1)
    p1 = (a1 - b1) / 2j
    comm = (ba - ab) / 2j

    var_x = xx - x1 * x1
    var_p = pp - p1 * p1
    scale = max(abs(xx), abs(pp), 1e-30)
    if max(abs(var_x.imag), abs(var_p.imag)) > 1e-8 * scale:
        raise AccuracyError("quadrature variance picked up an imaginary part")
    denom = 0.5 * abs(comm)
    return float(var_x.real), float(var_p.real), denom


def _squeezing(state: FockVector, power: int) -> tuple[float, float]:
    var_x, var_p, denom = _pair_stats(state, power)
    if denom == 0.0:
        raise UndefinedStatisticError("commutator expectation vanishes; squeezing undefined")
    return var_x / denom - 1.0, var_p / denom - 1.0


def squeezing_first(state: FockVector) -> tuple[float, float]:
    """(S_X1, S_P1) for the first-order quadrature pair."""
    return _squeezing(state, 1)


def squeezing_amplitude_squared(state: FockVector) -> tuple[float, float]:
    """(S_X2, S_P2) for the amplitude-squared pair."""
    return _squeezing(state, 2)


def mandel_q(state: FockVector) -> float:
    """Counting statistic built on M+ M-; undefined when <M+ M-> vanishes."""
    mm = expectation(state, ("M+", "M-")).real
    if mm <= 1e-140:
        raise UndefinedStatisticError("state is annihilated by M-; Q undefined")
    m22 = expectation(state, ("M+", "M+", "M-", "M-")).real
    return (m22 - mm * mm) / mm - 1.0


@dataclass(frozen=True)
class MetricsRecord:
    z: float
    s_x1: float | None
    s_p1: float | None
    s_x2: float | None
    s_p2: float | None
    q: float | None
    trunc_dim: int
    tail_bound: float
    error: str | None = None


def _metrics_at(params, family, z, dim, tail_threshold) -> MetricsRecord:
    try:
        if family == "bg":
            state = bg_state(params, z, dim=dim, tail_threshold=tail_threshold)
        else:
            state = gp_state(params, z, dim=dim, tail_threshold=tail_threshold)
    except (TruncationError, DomainError) as exc:
        return MetricsRecord(
            z=float(z), s_x1=None, s_p1=None, s_x2=None, s_p2=None, q=None,
            trunc_dim=dim if dim is not None else 0, tail_bound=math.nan, error=str(exc),
        )
    s_x1, s_p1 = squeezing_first(state)
    s_x2, s_p2 = squeezing_amplitude_squared(state)
    try:
        q = mandel_q(state)
    except UndefinedStatisticError:
        q = None
    return MetricsRecord(
        z=float(z), s_x1=s_x1, s_p1=s_p1, s_x2=s_x2, s_p2=s_p2, q=q,
        trunc_dim=state.dim, tail_bound=state.tail_bound,
    )


def scan(
    params: ModelParams,
    family: str,
    z_min: float,
    z_max: float,
    steps: int,
    dim: int | None = None,
    tail_threshold: float = 1e-12,
) -> tuple[list[MetricsRecord], list[str]]:
    """Metrics along an evenly spaced real-z segment; deterministic row order.

    GP segments are clipped to the open unit disk; clipping is reported in the
    warning list rather than silently changing the request.
    """
    if family not in ("bg", "gp"):
        raise DomainError(f"unknown family {family!r}")
    if steps < 0:
        raise DomainError("steps must be nonnegative")
    if z_max < z_min:
        raise DomainError("need z_max >= z_min")
    warnings: list[str] = []
    lo, hi = float(z_min), float(z_max)
    if family == "gp":
        edge = 1.0 - _GP_EDGE
        if lo < -edge:
            warnings.append(f"zmin clipped from {lo} to {-edge} (GP states live on |z| < 1)")
            lo = -edge
        if hi > edge:
            warnings.append(f"zmax clipped from {hi} to {edge} (GP states live on |z| < 1)")
            hi = edge
    if steps == 0:
        return [], warnings
    zs = np.linspace(lo, hi, steps)
    records = [_metrics_at(params, family, z, dim, tail_threshold) for z in zs]
    return records, warnings
