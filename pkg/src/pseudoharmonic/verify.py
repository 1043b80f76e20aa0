"""Whole-library invariant battery behind the verify-all command.

Every closed-form claim the library rests on is re-checked here against an
independent route: high-precision explicit sums for the Laguerre recurrences,
gamma-ratio identities for the quadrature moments, brute-force double sums
for operator expectations, and a dense matrix exponential for the displaced
states.  Checks are cheap enough to run as a block and deterministic, so a
failure is a real regression, not noise.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .errors import DomainError, TruncationError, UndefinedStatisticError
from . import specfun
from .specfun import MeijerGSpec, hyp0f1, laguerre_assoc, laguerre_derivative_identities, meijer_g_many
from .spectrum import (
    FactorizationChain,
    ModelParams,
    energy,
    factorization_chain_residual,
    ground_energy_branches,
)
from . import spectrum
from . import algebra
from .algebra import TruncationSpec, commutator_check, ladder_matrices
from . import states
from .states import bg_state, fock_state, gp_displacement_oracle, gp_state, GPParameter
from . import nonclassical
from .nonclassical import expectation, mandel_q, scan, squeezing_first
from . import identity
from .identity import verify_identity, weight_gp, weight_gp_reduced

__all__ = ["CheckResult", "VerifyReport", "run_all", "CHECKS"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    bound: float
    comparator: str
    detail: str

    def line(self) -> str:
        flag = "pass" if self.passed else "FAIL"
        return f"[{flag}] {self.name}: measured {self.measured:.3e} (needs {self.comparator} {self.bound:.1e}) {self.detail}"


@dataclass(frozen=True)
class VerifyReport:
    results: tuple
    elapsed: float

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> tuple:
        return tuple(r for r in self.results if not r.passed)


def _upper(name, measured, bound, detail="") -> CheckResult:
    return CheckResult(name, measured <= bound, float(measured), float(bound), "<=", detail)


def _lower(name, measured, bound, detail="") -> CheckResult:
    return CheckResult(name, measured >= bound, float(measured), float(bound), ">=", detail)


_S_SET = (0.5, 1.0, 2.0)


# ---------------------------------------------------------------- specfun


def _laguerre_sum_oracle(n: int, alpha: float, xs) -> np.ndarray:
    """Explicit finite sum at 40 digits; immune to the recurrence's rounding."""
    with mp.workdps(40):
        out = []
        for x in xs:
            acc = mp.mpf(0)
            for k in range(n + 1):
                term = (-1) ** k * mp.binomial(n + alpha, n - k) * mp.mpf(x) ** k / mp.factorial(k)
                acc += term
            out.append(float(acc))
    return np.array(out)


def check_laguerre_recurrence() -> CheckResult:
    xs = np.geomspace(0.2, 20.0, 12)
    worst = 0.0
    for alpha in (0.5, 1.5, 2.7):
        for n in range(0, 31, 3):
            ours = laguerre_assoc(n, alpha, xs)
            ref = _laguerre_sum_oracle(n, alpha, xs)
            scale = np.maximum(np.abs(ref), 1.0)
            worst = max(worst, float(np.max(np.abs(ours - ref) / scale)))
    return _upper("specfun.laguerre_recurrence_matches_sum", worst, 1e-10,
                  "n <= 30, alpha in {0.5, 1.5, 2.7}, x in (0, 20]")


def check_laguerre_derivative_branches() -> CheckResult:
    xs = np.geomspace(0.2, 20.0, 12)
    worst = 0.0
    for alpha in (0.5, 1.5, 2.7):
        for n in range(0, 21):
            low, high = laguerre_derivative_identities(n, alpha, xs)
            scale = np.maximum(np.abs(low), 1.0)
            worst = max(worst, float(np.max(np.abs(low - high) / scale)))
    return _upper("specfun.laguerre_derivative_branches_agree", worst, 1e-10, "n <= 20")


def check_hyp0f1_monotone() -> CheckResult:
    margin = math.inf
    for c in (0.7, 1.5, 2.5, 4.0):
        vals = np.array([hyp0f1(c, x) for x in np.linspace(0.0, 40.0, 33)])
        margin = min(margin, float(vals.min()), float(np.diff(vals).min()))
    return _lower("specfun.hyp0f1_positive_increasing", margin, 1e-12,
                  "values and forward differences on x in [0, 40]")


def check_meijer_moments() -> CheckResult:
    report = verify_identity("bg", ModelParams.from_s(1.0), n_max=7)
    return _upper("specfun.meijer_moments_match_gamma", report.max_rel_err, 1e-4,
                  "k = 1..8 against Gamma(k) Gamma(k+nu), s = 1")


def check_meijer_nonnegative() -> CheckResult:
    low = math.inf
    for s in _S_SET:
        spec = MeijerGSpec.resolution_kernel(s + 0.5)
        vals = meijer_g_many(spec, np.geomspace(0.01, 50.0, 40))
        low = min(low, float(vals.min()))
    return _lower("specfun.meijer_kernel_nonnegative", low, 0.0, "x in (0, 50], s in {0.5, 1, 2}")


# ---------------------------------------------------------------- spectrum


def check_energies_match_recurrence() -> CheckResult:
    worst = 0.0
    for s in _S_SET + (2.7,):
        params = ModelParams.from_s(s)
        chain = FactorizationChain.build(params, 30)
        closed = np.array([energy(params, n) for n in range(31)])
        worst = max(worst, float(np.max(np.abs(chain.E - closed))))
        worst = max(worst, chain.recurrence_residual())
    return _upper("spectrum.energies_match_recurrence", worst, 1e-14, "n <= 30")


def check_energy_gaps() -> CheckResult:
    worst = 0.0
    for s in _S_SET:
        chain = FactorizationChain.build(ModelParams.from_s(s), 40)
        worst = max(worst, float(np.max(np.abs(np.diff(chain.E) - 2.0))))
    return _upper("spectrum.energy_gaps_equal_two", worst, 1e-14, "n <= 40")


def check_ground_branch() -> CheckResult:
    margin = math.inf
    detail = []
    for s in _S_SET:
        params = ModelParams.from_s(s)
        branches = ground_energy_branches(params)
        picked = FactorizationChain.build(params, 1).E[0]
        if abs(picked - branches[-1]) > 1e-14:
            margin = -math.inf
        margin = min(margin, branches[-1] - branches[+1])
        detail.append(f"s={s}: {branches[-1]:+.2f} vs {branches[+1]:+.2f}")
    return _lower("spectrum.ground_branch_is_maximal", margin, 1e-12, "; ".join(detail))


def check_orthonormality() -> CheckResult:
    worst = 0.0
    for s in _S_SET:
        gram = spectrum.orthonormality_matrix(ModelParams.from_s(s), 10)
        worst = max(worst, float(np.max(np.abs(gram - np.eye(11)))))
    return _upper("spectrum.orthonormality", worst, 1e-8, "n <= 10, s in {0.5, 1, 2}")


def check_schrodinger_residual() -> CheckResult:
    worst = 0.0
    for s in _S_SET:
        params = ModelParams.from_s(s)
        for n in range(11):
            worst = max(worst, spectrum.schrodinger_residual(params, n))
    return _upper("spectrum.schrodinger_residual", worst, 1e-4, "n <= 10, s in {0.5, 1, 2}")


def check_chain_build() -> CheckResult:
    worst = 0.0
    for s in _S_SET:
        params = ModelParams.from_s(s)
        for n in range(5):
            worst = max(worst, factorization_chain_residual(params, n))
    return _upper("spectrum.chain_build_matches_closed", worst, 1e-4, "n <= 4")


def check_null_states() -> CheckResult:
    worst = 0.0
    for s in _S_SET:
        params = ModelParams.from_s(s)
        for n in range(7):
            worst = max(worst, spectrum.null_state_residual(params, n))
    return _upper("spectrum.null_state_annihilated", worst, 1e-4, "n <= 6")


# ---------------------------------------------------------------- algebra


def check_commutators() -> CheckResult:
    worst = 0.0
    for s in _S_SET:
        params = ModelParams.from_s(s)
        for dim in (16, 64, 256):
            report = commutator_check(params, TruncationSpec(dim=dim, interior_margin=2))
            worst = max(worst, report.max_interior())
    return _upper("algebra.commutators_interior", worst, 1e-12, "D in {16, 64, 256}, s in {0.5, 1, 2}")


def check_adjoint_pairing() -> CheckResult:
    mismatches = 0
    for s in _S_SET:
        minus, plus, _ = ladder_matrices(ModelParams.from_s(s), TruncationSpec(dim=64, interior_margin=2))
        if not (np.array_equal(plus.sub, minus.sup) and np.all(plus.sup == 0.0) and np.all(minus.sub == 0.0)):
            mismatches += 1
    return _upper("algebra.raising_is_lowering_transpose", float(mismatches), 0.0, "bitwise band equality")


def check_hamiltonian_spectrum() -> CheckResult:
    worst = 0.0
    for s in _S_SET:
        ham = algebra.hamiltonian_matrix(ModelParams.from_s(s), TruncationSpec(dim=128, interior_margin=2))
        gaps = np.diff(ham.diag)
        worst = max(worst, float(np.max(np.abs(gaps - 2.0))))
    return _upper("algebra.hamiltonian_gap_two", worst, 1e-14, "diagonal strictly increasing by 2")


def check_grid_ladders() -> CheckResult:
    worst = 0.0
    for s in _S_SET:
        params = ModelParams.from_s(s)
        for n in range(7):
            worst = max(worst, *algebra.grid_ladder_residuals(params, n))
    return _upper("algebra.grid_ladder_realization", worst, 1e-4, "n <= 6, default grid")


def check_grid_shifts() -> CheckResult:
    worst = 0.0
    for s in _S_SET:
        params = ModelParams.from_s(s)
        for n in range(7):
            worst = max(worst, *algebra.grid_shift_residuals(params, n))
    return _upper("algebra.grid_shift_realization", worst, 1e-4, "n <= 6, default grid")


def check_number_vs_plusminus() -> CheckResult:
    params = ModelParams.from_s(1.0)
    trunc = TruncationSpec(dim=32, interior_margin=2)
    minus, plus, _ = ladder_matrices(params, trunc)
    prod_diag = np.diag(plus.to_dense() @ minus.to_dense())
    n_idx = np.arange(32, dtype=float)
    expect_diag = np.asarray(algebra.m_minus(params, n_idx)) ** 2
    if float(np.max(np.abs(prod_diag - expect_diag))) > 1e-10:
        return _lower("algebra.number_differs_from_plus_minus", -1.0, 1e-12,
                      "M+M- diagonal does not match m-(n)^2")
    gap = float(np.min(np.abs(prod_diag[1:] - n_idx[1:])))
    return _lower("algebra.number_differs_from_plus_minus", gap, 1e-12,
                  "min |m-(n)^2 - n| over n >= 1 at s = 1")


# ---------------------------------------------------------------- states


def _bg_sample_z():
    radii = (0.5, 1.5, 3.0)
    angles = (0.0, 0.25 * math.pi, 0.5 * math.pi, math.pi, 1.5 * math.pi)
    zs = [0.0 + 0.0j]
    zs += [r * complex(math.cos(a), math.sin(a)) for r in radii for a in angles]
    return zs


def check_bg_eigenproperty() -> CheckResult:
    worst = 0.0
    for s in _S_SET:
        params = ModelParams.from_s(s)
        trunc_cache = {}
        for z in _bg_sample_z():
            # The residual is dominated by the highest retained level,
            # |z| |c_{D-1}|, so the tail has to sit well below the target.
            state = bg_state(params, z, tail_threshold=1e-20)
            if state.dim not in trunc_cache:
                trunc_cache[state.dim] = ladder_matrices(params, TruncationSpec(dim=state.dim, interior_margin=2))[0]
            lowered = trunc_cache[state.dim].matvec(state.coeff)
            worst = max(worst, float(np.linalg.norm(lowered - z * state.coeff)))
    return _upper("states.bg_eigenproperty", worst, 1e-8, "|z| <= 3, s in {0.5, 1, 2}")


def check_gp_displacement() -> CheckResult:
    worst = 0.0
    for s in (0.5, 1.0):
        params = ModelParams.from_s(s)
        for xi in (0.3, 0.7 + 0.2j, 1.2j, -1.2):
            oracle = gp_displacement_oracle(params, xi, dim=256)
            series = gp_state(params, GPParameter(xi).z, dim=256, tail_threshold=1e-30)
            worst = max(worst, float(np.max(np.abs(series.coeff - oracle.coeff))))
    return _upper("states.gp_displacement_match", worst, 1e-6, "|xi| <= 1.2, D = 256")


def check_state_norms() -> CheckResult:
    worst = 0.0
    for s in _S_SET:
        params = ModelParams.from_s(s)
        cases = [bg_state(params, z) for z in (0.0, 1.0, 3.0, 3.0j, -2.0)]
        cases += [gp_state(params, z) for z in (0.0, 0.5, 0.95, 0.6j, -0.9)]
        for state in cases:
            slack = abs(state.norm() - 1.0) - state.tail_bound
            worst = max(worst, slack)
    return _upper("states.unit_norm_within_tail", worst, 1e-12, "both families")


def check_continuity_at_origin() -> CheckResult:
    eps = 1e-6
    worst = 0.0
    for s in _S_SET:
        params = ModelParams.from_s(s)
        for family in (bg_state, gp_state):
            state = family(params, eps)
            vac = np.zeros(state.dim, dtype=complex)
            vac[0] = 1.0
            worst = max(worst, float(np.linalg.norm(state.coeff - vac)) / eps)
    return _upper("states.continuity_at_origin", worst, 2.0, "||state(1e-6) - |0>|| / 1e-6")


def check_domain_enforcement() -> CheckResult:
    params = ModelParams.from_s(1.0)
    violations = 0
    for bad in (1.0, -1.0, 1.2, 0.6 + 0.9j):
        try:
            gp_state(params, bad)
            violations += 1
        except DomainError:
            pass
    try:
        bg_state(params, 65.0)
        violations += 1
    except DomainError:
        pass
    try:
        bg_state(params, 3.0)
        gp_state(params, 0.99)
    except DomainError:
        violations += 1
    try:
        # Inside the disc but too close to the edge for the level cap:
        # must surface as a truncation problem, never a domain rejection.
        gp_state(params, 0.999)
    except TruncationError:
        pass
    except DomainError:
        violations += 1
    return _upper("states.domain_enforcement", float(violations), 0.0,
                  "GP rejects |z| >= 1, BG honors its cap")


# ---------------------------------------------------------------- nonclassical


def _expansion_squeezing(state) -> tuple[float, float]:
    """First-order squeezing from the expanded moment formula.

    The subtracted single-operator terms enter as squared expectations
    <M->^2 and <M+>^2; writing them as <M-^2>, <M+^2> (as typeset) breaks the
    variance identity, which is exactly what this cross-check guards.
    """
    mm = expectation(state, ("M-",))
    mp_ = expectation(state, ("M+",))
    m2m = expectation(state, ("M-", "M-"))
    m2p = expectation(state, ("M+", "M+"))
    pm = expectation(state, ("M+", "M-"))
    mp2 = expectation(state, ("M-", "M+"))
    zero = expectation(state, ("M0",)).real
    var_x = 0.25 * (m2m + m2p + pm + mp2 - (mm + mp_) ** 2).real
    var_p = -0.25 * (m2m + m2p - pm - mp2 - (mm - mp_) ** 2).real
    denom = 0.5 * zero
    return var_x / denom - 1.0, var_p / denom - 1.0


def check_expansion_consistency() -> CheckResult:
    rng = np.random.default_rng(20240811)
    worst = 0.0
    for s in (0.5, 1.0):
        params = ModelParams.from_s(s)
        for _ in range(6):
            raw = rng.normal(size=10) + 1j * rng.normal(size=10)
            coeff = raw / np.linalg.norm(raw)
            state = states.FockVector(params=params, coeff=coeff, label="random", z=None, tail_bound=0.0)
            s_def = squeezing_first(state)
            s_exp = _expansion_squeezing(state)
            worst = max(worst, abs(s_def[0] - s_exp[0]), abs(s_def[1] - s_exp[1]))
    return _upper("nonclassical.expansion_matches_definition", worst, 1e-12, "random 10-level states")


def _row_gap(a, b) -> float:
    gap = 0.0
    for u, v in ((a.s_x1, b.s_x1), (a.s_p1, b.s_p1), (a.s_x2, b.s_x2), (a.s_p2, b.s_p2), (a.q, b.q)):
        if u is None and v is None:
            continue
        if u is None or v is None:
            return math.inf
        gap = max(gap, abs(u - v) / max(1.0, abs(u)))
    return gap


def check_metric_symmetry() -> CheckResult:
    worst = 0.0
    for family, span in (("bg", 2.0), ("gp", 0.8)):
        records, _ = scan(ModelParams.from_s(1.0), family, -span, span, 25)
        for i in range(len(records) // 2):
            worst = max(worst, _row_gap(records[i], records[len(records) - 1 - i]))
    return _upper("nonclassical.metrics_even_in_z", worst, 1e-10, "real-z scans, both families")


def check_bg_fixed_points() -> CheckResult:
    worst = 0.0
    for s in _S_SET:
        params = ModelParams.from_s(s)
        for z in (0.3, 1.0, 3.0, 2.0j, 1.5 + 1.5j):
            state = bg_state(params, z, tail_threshold=1e-16)
            sx1, sp1 = nonclassical.squeezing_first(state)
            sx2, sp2 = nonclassical.squeezing_amplitude_squared(state)
            q = mandel_q(state)
            worst = max(worst, abs(sx1), abs(sp1), abs(sx2), abs(sp2), abs(q + 1.0))
    return _upper("nonclassical.bg_fixed_points", worst, 1e-8,
                  "all four S = 0 and Q = -1 over |z| <= 3")


def check_gp_sign_structure() -> CheckResult:
    records, _ = scan(ModelParams.from_s(1.0), "gp", -0.95, 0.95, 191)
    violation = 0.0
    negative_q = positive_q = 0
    for rec in records:
        if rec.error is not None:
            return _upper("nonclassical.gp_sign_structure", math.inf, 0.0, f"scan error: {rec.error}")
        if abs(rec.z) > 1e-12:
            violation = max(violation, rec.s_p1, rec.s_p2)
        violation = max(violation, -1e-10 - rec.s_x1, -1e-10 - rec.s_x2)
        if rec.q is not None:
            negative_q += rec.q < -1e-6
            positive_q += rec.q > 1e-6
    detail = f"S_P < 0 off origin, S_X >= -1e-10, Q sign change ({negative_q} neg / {positive_q} pos rows)"
    if negative_q == 0 or positive_q == 0:
        violation = math.inf
    return _upper("nonclassical.gp_sign_structure", violation, 0.0, detail)


_BRUTE_WORDS = (
    ("M-",), ("M+",), ("M0",),
    ("M-", "M-"), ("M-", "M+"), ("M-", "M0"),
    ("M+", "M-"), ("M+", "M+"), ("M+", "M0"),
    ("M0", "M-"), ("M0", "M+"), ("M0", "M0"),
    ("M+", "M+", "M-", "M-"), ("M-", "M-", "M+", "M+"),
    ("M+", "M-", "M+", "M-"), ("M0", "M+", "M0", "M-"),
    ("M-", "M-", "M-", "M-"), ("M+", "M+", "M+", "M+"),
)


def _brute_force_word(state, word) -> complex:
    params = state.params
    total = 0.0 + 0.0j
    for k in range(state.dim):
        level = k
        amp = 1.0 + 0.0j
        for tok in reversed(word):
            if tok == "M-":
                amp *= float(algebra.m_minus(params, float(level)))
                level -= 1
            elif tok == "M+":
                amp *= float(algebra.m_plus(params, float(level)))
                level += 1
            else:
                amp *= float(algebra.m_zero(params, float(level)))
            if level < 0:
                amp = 0.0
                break
        if amp != 0.0 and 0 <= level < state.dim:
            total += np.conj(state.coeff[level]) * amp * state.coeff[k]
    return complex(total)


def check_brute_force_words() -> CheckResult:
    params = ModelParams.from_s(1.0)
    cases = [
        bg_state(params, 0.7 + 0.3j, dim=12),
        gp_state(params, 0.4, dim=12, tail_threshold=1e-6),
        fock_state(params, 3, dim=12),
    ]
    worst = 0.0
    for state in cases:
        for word in _BRUTE_WORDS:
            direct = expectation(state, word)
            brute = _brute_force_word(state, word)
            worst = max(worst, abs(direct - brute))
    return _upper("nonclassical.words_match_brute_force", worst, 1e-12, "D = 12, 18 words, 3 states")


# ---------------------------------------------------------------- identity


def check_bg_identity() -> CheckResult:
    worst = 0.0
    for s in _S_SET:
        report = verify_identity("bg", ModelParams.from_s(s), n_max=8)
        worst = max(worst, report.max_rel_err)
    return _upper("identity.bg_moments", worst, 1e-4, "n <= 8, s in {0.5, 1, 2}")


def check_gp_identity() -> CheckResult:
    worst = 0.0
    for s in _S_SET:
        report = verify_identity("gp", ModelParams.from_s(s), n_max=10)
        worst = max(worst, report.max_rel_err)
    return _upper("identity.gp_moments", worst, 1e-8, "n <= 10, s in {0.5, 1, 2}")


def check_moment_independence() -> CheckResult:
    params = ModelParams.from_s(1.0)
    small = verify_identity("gp", params, n_max=4)
    large = verify_identity("gp", params, n_max=10)
    worst = 0.0
    for a, b in zip(small.rows, large.rows):
        worst = max(worst, abs(a.quadrature - b.quadrature) / abs(b.quadrature))
    return _upper("identity.moments_independent", worst, 1e-10,
                  "shared rows of n_max = 4 and n_max = 10 batches")


def check_gp_weight_reduction() -> CheckResult:
    worst = 0.0
    for s in _S_SET:
        params = ModelParams.from_s(s)
        xs = np.linspace(0.05, 0.95, 19)
        full = np.array([weight_gp(params, x) for x in xs])
        reduced_from_full = math.pi * full * (1.0 - xs) ** (params.s + 1.5)
        reduced = weight_gp_reduced(params, xs)
        worst = max(worst, float(np.max(np.abs(reduced_from_full - reduced) / reduced)))
    return _upper("identity.gp_reduced_is_beta_density", worst, 1e-14,
                  "pi w N^2 against the closed Beta form")


CHECKS = (
    check_laguerre_recurrence,
    check_laguerre_derivative_branches,
    check_hyp0f1_monotone,
    check_meijer_moments,
    check_meijer_nonnegative,
    check_energies_match_recurrence,
    check_energy_gaps,
    check_ground_branch,
    check_orthonormality,
    check_schrodinger_residual,
    check_chain_build,
    check_null_states,
    check_commutators,
    check_adjoint_pairing,
    check_hamiltonian_spectrum,
    check_grid_ladders,
    check_grid_shifts,
    check_number_vs_plusminus,
    check_bg_eigenproperty,
    check_gp_displacement,
    check_state_norms,
    check_continuity_at_origin,
    check_domain_enforcement,
    check_expansion_consistency,
    check_metric_symmetry,
    check_bg_fixed_points,
    check_gp_sign_structure,
    check_brute_force_words,
    check_bg_identity,
    check_gp_identity,
    check_moment_independence,
    check_gp_weight_reduction,
)


def run_all(progress=None) -> VerifyReport:
    """Run the full battery in a fixed order; report every result."""
    start = time.perf_counter()
    results = []
    for check in CHECKS:
        result = check()
        results.append(result)
        if progress is not None:
            progress(result)
    return VerifyReport(results=tuple(results), elapsed=time.perf_counter() - start)
