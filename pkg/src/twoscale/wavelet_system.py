"""Finite wavelet systems: Gram matrices, numeric verdicts, certificates.

A system is a generator plus finitely many points (dilation, translation);
its elements are the dilated translates ``phi(dilation * x - translation)``.
Linear dependence in L2 is detected numerically through the spectrum of the
Gram matrix, and linear independence can additionally be certified
symbolically by matching the generator's declared property tags and the
point geometry against a fixed rule table of independence theorems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DuplicatePointError
from .generators import GeneratorSpec
from .numerics import hermitian_eigen, integrate_adaptive

__all__ = [
    "DEPENDENCE_THRESHOLD",
    "WaveletPoint",
    "WaveletSystem",
    "GramReport",
    "Certificate",
    "Verdict",
    "inner_product",
    "gaussian_gram_closed_form",
    "hat_gram_closed_form",
    "gram",
    "gram_report_from_matrix",
    "numeric_verdict",
    "certify",
    "analyze",
]

DEPENDENCE_THRESHOLD = 1.0e-8


@dataclass(frozen=True)
class WaveletPoint:
    dilation: float
    translation: float

    def __post_init__(self):
        if not (self.dilation > 0.0):
            raise ValueError("dilation must be positive")


class WaveletSystem:
    """Generator plus pairwise-distinct points.

    Duplicate points are rejected here: a repeated row makes the Gram matrix
    singular for trivial reasons unrelated to the generator.
    """

    def __init__(self, generator: GeneratorSpec, points: Sequence[WaveletPoint]):
        pts = tuple(
            p if isinstance(p, WaveletPoint) else WaveletPoint(*p) for p in points
        )
        if not pts:
            raise ValueError("a wavelet system needs at least one point")
        seen = set()
        for p in pts:
            key = (p.dilation, p.translation)
            if key in seen:
                raise DuplicatePointError(f"duplicate point {key}")
            seen.add(key)
        self.generator = generator
        self.points = pts

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True, eq=False)
class GramReport:
    """Hermitian Gram matrix with its spectrum and quadrature error budget."""

    matrix: np.ndarray
    eigenvalues: np.ndarray
    sigma_min: float
    sigma_max: float
    relative_gap: float
    quad_error: float
    null_vector: np.ndarray | None


@dataclass(frozen=True)
class Certificate:
    """A matched independence rule with its hypothesis checklist."""

    rule_id: str
    hypothesis_checklist: tuple
    citation: str


@dataclass(frozen=True, eq=False)
class Verdict:
    """Outcome of an independence analysis.

    ``IndependentCertified`` carries a certificate; ``Dependent`` carries the
    numerically recovered null vector; numeric outcomes are evidence, not
    proof.
    """

    outcome: str
    certificate: Certificate | None = None
    null_vector: np.ndarray | None = None
    evidence: GramReport | None = None


def inner_product(
    gen: GeneratorSpec, p: WaveletPoint, q: WaveletPoint, tol: float = 1.0e-10
) -> tuple:
    """L2 pairing of the dilated translates of gen at points p and q.

    Returns (value, error bound).  Compactly supported generators integrate
    over the exact intersection of supports; unbounded ones use a truncation
    window with an analytic tail bound folded into the reported error.
    Catalog generators defined through their Fourier transform pair in the
    Fourier domain instead.
    """
    if gen.fourier_side:
        integrand = gen.ft_pair_integrand(p, q)
        lo, hi, tail = gen.ft_pair_window(p, q, tol)
    else:
        integrand = gen.pair_integrand(p, q)
        support = gen.time_support()
        if support is not None:
            s_lo, s_hi = support
            lo = max((s_lo + p.translation) / p.dilation, (s_lo + q.translation) / q.dilation)
            hi = min((s_hi + p.translation) / p.dilation, (s_hi + q.translation) / q.dilation)
            tail = 0.0
            if not (hi > lo):
                return 0.0 + 0.0j, 0.0
        else:
            lo, hi, tail = gen.pair_window(p, q, tol)
    result = integrate_adaptive(integrand, lo, hi, 0.5 * tol)
    return result.value, result.error_estimate + tail


def gaussian_gram_closed_form(points: Sequence[WaveletPoint]) -> np.ndarray:
    """Exact Gram matrix for the Gaussian generator exp(-x^2).

    Entry (p, q) is sqrt(pi / (lp^2 + lq^2)) * exp(-(lp bq - lq bp)^2 /
    (lp^2 + lq^2)); symmetric positive definite for distinct points.
    """
    pts = [p if isinstance(p, WaveletPoint) else WaveletPoint(*p) for p in points]
    n = len(pts)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            lp, bp = pts[i].dilation, pts[i].translation
            lq, bq = pts[j].dilation, pts[j].translation
            rate = lp * lp + lq * lq
            value = math.sqrt(math.pi / rate) * math.exp(-((lp * bq - lq * bp) ** 2) / rate)
            out[i, j] = value
            out[j, i] = value
    return out


def _hat(x: np.ndarray) -> np.ndarray:
    return np.maximum(0.0, 1.0 - np.abs(np.asarray(x, dtype=np.float64) - 1.0))


def _hat_pair_exact(p: WaveletPoint, q: WaveletPoint) -> float:
    lp, bp = p.dilation, p.translation
    lq, bq = q.dilation, q.translation
    lo = max(bp / lp, bq / lq)
    hi = min((bp + 2.0) / lp, (bq + 2.0) / lq)
    if not (hi > lo):
        return 0.0
    knots = {lo, hi}
    for t in (1.0,):
        for lam, beta in ((lp, bp), (lq, bq)):
            x = (beta + t) / lam
            if lo < x < hi:
                knots.add(x)
    xs = sorted(knots)
    pieces = []
    for a, b in zip(xs, xs[1:]):
        mid = 0.5 * (a + b)
        fa = float(_hat(lp * a - bp) * _hat(lq * a - bq))
        fm = float(_hat(lp * mid - bp) * _hat(lq * mid - bq))
        fb = float(_hat(lp * b - bp) * _hat(lq * b - bq))
        pieces.append((b - a) / 6.0 * (fa + 4.0 * fm + fb))
    return math.fsum(pieces)


def hat_gram_closed_form(points: Sequence[WaveletPoint]) -> np.ndarray:
    """Exact Gram matrix for the hat generator.

    Products of two piecewise-linear factors are piecewise quadratic, so
    Simpson's rule on each breakpoint interval integrates them exactly.
    """
    pts = [p if isinstance(p, WaveletPoint) else WaveletPoint(*p) for p in points]
    n = len(pts)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            value = _hat_pair_exact(pts[i], pts[j])
            out[i, j] = value
            out[j, i] = value
    return out


def gram_report_from_matrix(
    matrix: np.ndarray,
    quad_error: float = 0.0,
    threshold: float = DEPENDENCE_THRESHOLD,
) -> GramReport:
    """Spectral report for a Hermitian Gram matrix from any source."""
    mat = np.asarray(matrix, dtype=np.complex128)
    spectrum = hermitian_eigen(mat)
    eigenvalues = spectrum.eigenvalues
    sigma_min = max(0.0, float(eigenvalues[0]))
    sigma_max = float(eigenvalues[-1])
    if not (sigma_max > 0.0):
        raise ValueError("gram matrix has no positive spectrum; zero generator?")
    relative_gap = sigma_min / sigma_max
    null_vector = None
    if relative_gap <= 10.0 * threshold:
        null_vector = spectrum.eigenvectors[:, 0].copy()
    return GramReport(
        matrix=mat,
        eigenvalues=eigenvalues,
        sigma_min=sigma_min,
        sigma_max=sigma_max,
        relative_gap=relative_gap,
        quad_error=float(quad_error),
        null_vector=null_vector,
    )


def gram(system: WaveletSystem, tol: float = 1.0e-10, threads: int = 1) -> GramReport:
    """Quadrature Gram matrix of the system.

    The upper triangle is filled entry by entry and mirrored, so the matrix
    is Hermitian by construction; quad_error records the largest entrywise
    integration error bound.  Entries are independent, so they may be
    evaluated by a thread pool; each entry is deterministic and results land
    in pre-assigned slots, making the matrix identical for any thread count.
    """
    n = len(system)
    entries = [(i, j) for i in range(n) for j in range(i, n)]

    def compute(entry: tuple) -> tuple:
        i, j = entry
        return inner_product(system.generator, system.points[i], system.points[j], tol)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(compute, entries))
    else:
        results = [compute(entry) for entry in entries]

    matrix = np.zeros((n, n), dtype=np.complex128)
    worst = 0.0
    for (i, j), (value, err) in zip(entries, results):
        matrix[i, j] = value
        matrix[j, i] = np.conj(value)
        worst = max(worst, err)
    return gram_report_from_matrix(matrix, quad_error=worst)


def numeric_verdict(report: GramReport, threshold: float = DEPENDENCE_THRESHOLD) -> Verdict:
    """Classify a Gram report by its relative spectral gap.

    Dependent requires both a gap at or below the threshold and a quadrature
    budget small enough to trust it; a 100x hysteresis band separates
    IndependentNumeric from Inconclusive.  These outcomes are numerical
    evidence, not proof.
    """
    if not (threshold > 0.0):
        raise ValueError("threshold must be positive")
    gap = report.relative_gap
    budget_ok = report.quad_error <= 0.1 * report.sigma_max * threshold
    if gap <= threshold and budget_ok:
        return Verdict(outcome="Dependent", null_vector=report.null_vector, evidence=report)
    if gap >= 100.0 * threshold:
        return Verdict(outcome="IndependentNumeric", evidence=report)
    return Verdict(outcome="Inconclusive", evidence=report)


def _unique_strict_extremum(dilations: Sequence[float], largest: bool) -> bool:
    target = max(dilations) if largest else min(dilations)
    return sum(1 for d in dilations if d == target) == 1


_RULE_TABLE = (
    (
        "ExpDecay_L31a",
        "faster than exponential decay and the support of phi is not compact",
        ("faster_than_exponential_decay", "noncompact_support"),
        None,
    ),
    (
        "PolyDecayMaxDilation_L31b",
        "faster than polynomial decay, noncompact support, and a unique "
        "strictly maximal dilation",
        ("faster_than_polynomial_decay", "noncompact_support"),
        "max",
    ),
    (
        "SmoothMinDilation_L31c",
        "phi in C-infinity with every derivative integrable and nonzero, and "
        "a unique strictly minimal dilation",
        ("smooth_all_derivs_L1",),
        "min",
    ),
    (
        "ThreePointSchwartz_C32",
        "every three point system generated by a nonzero Schwartz function "
        "is linearly independent",
        ("schwartz",),
        "card3",
    ),
    (
        "FTVanishNearZero_L33i",
        "the Fourier transform vanishes on a neighborhood (-eps, eps) of zero",
        ("ft_vanishes_near_zero",),
        None,
    ),
    (
        "FTCompact_L33ii",
        "the Fourier transform is compactly supported",
        ("ft_compact_support",),
        None,
    ),
    (
        "UltimatelyDecreasingFT_T34",
        "nonzero Schwartz generator whose Fourier modulus is ultimately "
        "decreasing on both sides",
        ("schwartz", "ft_abs_ultimately_decreasing_both_sides"),
        None,
    ),
    (
        "LECombination_T42",
        "the Fourier transform is a complex linear combination of square "
        "integrable functions with logarithmico-exponential germs",
        ("ft_le_combination",),
        None,
    ),
)


def _structural_checks(condition: str | None, points: Sequence[WaveletPoint]) -> list:
    if condition is None:
        return []
    dilations = [p.dilation for p in points]
    if condition == "max":
        return [
            (
                "unique strictly maximal dilation (ties disqualify)",
                _unique_strict_extremum(dilations, largest=True),
            )
        ]
    if condition == "min":
        return [
            (
                "unique strictly minimal dilation (ties disqualify)",
                _unique_strict_extremum(dilations, largest=False),
            )
        ]
    if condition == "card3":
        return [("system has exactly three points (or trivially one)", len(points) in (1, 3))]
    raise AssertionError(condition)


def certify(system: WaveletSystem) -> Certificate | None:
    """Match declared generator tags and point geometry against the rule table.

    Rules are tried in a fixed priority order (cheapest and most general
    first) and the first rule whose whole checklist is satisfied wins; None
    means no rule applies and the caller should fall back to numerics.
    """
    tags = system.generator.tags
    for rule_id, citation, needed, condition in _RULE_TABLE:
        checklist = [(f"tag declared: {tag}", tag in tags) for tag in needed]
        checklist.extend(_structural_checks(condition, system.points))
        if all(ok for _, ok in checklist):
            return Certificate(
                rule_id=rule_id,
                hypothesis_checklist=tuple(checklist),
                citation=citation,
            )
    return None


def analyze(system: WaveletSystem, tol: float = 1.0e-10, threads: int = 1) -> Verdict:
    """Certificate first, numerics second.

    A matched rule yields IndependentCertified without any quadrature;
    otherwise the Gram spectrum decides.
    """
    certificate = certify(system)
    if certificate is not None:
        return Verdict(outcome="IndependentCertified", certificate=certificate)
    report = gram(system, tol, threads=threads)
    return numeric_verdict(report)
