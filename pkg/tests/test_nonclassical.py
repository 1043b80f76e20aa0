"""Expectation words and metrics against a from-scratch double-sum evaluator."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudoharmonic.errors import AccuracyError, DomainError, UndefinedStatisticError
from pseudoharmonic.nonclassical import (
    MetricsRecord,
    expectation,
    mandel_q,
    scan,
    squeezing_amplitude_squared,
    squeezing_first,
)
from pseudoharmonic.spectrum import ModelParams
from pseudoharmonic.states import FockVector, bg_state, fock_state, gp_state

P1 = ModelParams.from_s(1.0)


def brute_word(state, word):
    """Apply the word letter by letter to an explicit {level: amplitude} map.

    Independent of the matrix path: no arrays, no embedding, just the
    m+(n) = sqrt((n+1)(n+s+3/2)), m-(n) = sqrt(n(n+s+1/2)), m0(n) = n+s/2+3/4
    actions summed against the bra coefficients.
    """
    s = state.params.s
    amps = {n: c for n, c in enumerate(state.coeff) if c != 0}
    for letter in reversed(word):
        new = {}
        for n, c in amps.items():
            if letter == "M-":
                if n > 0:
                    new[n - 1] = new.get(n - 1, 0.0) + c * math.sqrt(n * (n + s + 0.5))
            elif letter == "M+":
                new[n + 1] = new.get(n + 1, 0.0) + c * math.sqrt((n + 1.0) * (n + s + 1.5))
            elif letter == "M0":
                new[n] = new.get(n, 0.0) + c * (n + 0.5 * s + 0.75)
            else:
                raise AssertionError(letter)
        amps = new
    return sum(np.conj(state.coeff[n]) * c for n, c in amps.items() if n < state.dim)


def random_state(rng, dim=10):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    return FockVector(params=P1, coeff=v, label="test", z=None, tail_bound=0.0)


WORDS = [
    ("M-",), ("M+",), ("M0",),
    ("M-", "M+"), ("M+", "M-"), ("M0", "M0"), ("M-", "M-"), ("M+", "M+"),
    ("M-", "M0", "M+"),
    ("M+", "M+", "M-", "M-"), ("M-", "M+", "M-", "M+"),
]


def test_words_match_brute_force():
    rng = np.random.default_rng(42)
    states = [random_state(rng) for _ in range(4)]
    states += [bg_state(P1, 0.8 + 0.5j, dim=12, tail_threshold=1e-6),
               gp_state(P1, 0.3, dim=12, tail_threshold=1e-6),
               fock_state(P1, 4, dim=12)]
    for state in states:
        for word in WORDS:
            lib = expectation(state, word)
            ref = brute_word(state, word)
            assert abs(lib - ref) < 1e-12, (word, state.label)


def test_word_validation():
    st = fock_state(P1, 0)
    with pytest.raises(DomainError):
        expectation(st, ())
    with pytest.raises(DomainError):
        expectation(st, ("M-",) * 5)
    with pytest.raises(DomainError):
        expectation(st, ("A",))


def test_expectation_refuses_sloppy_tails():
    v = np.zeros(8, dtype=complex)
    v[0] = 1.0
    leaky = FockVector(params=P1, coeff=v, label="leaky", z=None, tail_bound=1e-3)
    with pytest.raises(AccuracyError):
        expectation(leaky, ("M0",))


def test_vacuum_metrics():
    vac = fock_state(P1, 0)
    assert squeezing_first(vac) == (0.0, 0.0)
    assert squeezing_amplitude_squared(vac) == (0.0, 0.0)
    with pytest.raises(UndefinedStatisticError):
        mandel_q(vac)


def test_fock_one_mandel_frozen():
    # <M+M-> = 2.5, <M+^2 M-^2> = 0 at s=1, so Q = -2.5 - 1
    assert mandel_q(fock_state(P1, 1)) == pytest.approx(-3.5, abs=1e-14)


def test_fock_states_are_sub_poissonian():
    for n in (1, 2, 5):
        assert mandel_q(fock_state(P1, n)) < 0.0


def test_bg_fixed_point_sample():
    st = bg_state(P1, 1.5, tail_threshold=1e-16)
    sx, sp = squeezing_first(st)
    assert abs(sx) < 1e-8 and abs(sp) < 1e-8
    assert mandel_q(st) == pytest.approx(-1.0, abs=1e-8)


def test_scan_records_shape():
    recs, warnings = scan(P1, "gp", -0.5, 0.5, 5)
    assert warnings == []
    assert len(recs) == 5
    assert isinstance(recs[0], MetricsRecord)
    assert [r.z for r in recs] == [-0.5, -0.25, 0.0, 0.25, 0.5]
    mid = recs[2]
    assert mid.q is None            # vacuum row: Q undefined
    assert mid.s_x1 == 0.0
    assert recs[0].trunc_dim > 4
    assert recs[0].tail_bound < 1e-12


def test_scan_is_even_in_z():
    recs, _ = scan(P1, "bg", -2.0, 2.0, 9)
    for left, right in zip(recs, reversed(recs)):
        assert left.s_x1 == pytest.approx(right.s_x1, abs=1e-10)
        assert left.q == pytest.approx(right.q, abs=1e-10)


def test_scan_clips_gp_range():
    recs, warnings = scan(P1, "gp", -2.0, 2.0, 3)
    assert len(warnings) == 2
    assert "clipped" in warnings[0]
    assert recs[0].z == pytest.approx(-1.0 + 1e-9)
    # the clipped edge is inside the domain but beyond the truncation cap;
    # the row must carry the error rather than raise
    assert recs[0].error is not None
    assert recs[0].q is None and math.isnan(recs[0].tail_bound)


def test_scan_zero_steps():
    recs, warnings = scan(P1, "bg", -1.0, 1.0, 0)
    assert recs == [] and warnings == []


def test_scan_rejects_backwards_range():
    with pytest.raises(DomainError):
        scan(P1, "bg", 1.0, -1.0, 5)
    with pytest.raises(DomainError):
        scan(P1, "nope", -1.0, 1.0, 5)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=5.0, allow_nan=False, allow_infinity=False),
                min_size=2, max_size=12))
def test_variances_never_negative(raw):
    """S = var/denom - 1 can touch -1 (var = 0) but never cross it."""
    v = np.asarray(raw, dtype=complex)
    norm = np.linalg.norm(v)
    if norm < 1e-6:
        return
    state = FockVector(params=P1, coeff=v / norm, label="hyp", z=None, tail_bound=0.0)
    for pair in (squeezing_first, squeezing_amplitude_squared):
        try:
            sx, sp = pair(state)
        except UndefinedStatisticError:
            continue
        assert sx >= -1.0 - 1e-10
        assert sp >= -1.0 - 1e-10
