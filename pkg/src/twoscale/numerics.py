"""Self-contained numerical kernels.

Adaptive quadrature on finite and truncated unbounded intervals, a cyclic
two-sided Jacobi eigensolver for dense Hermitian matrices, and least-squares
slope fitting in log-log coordinates.

All kernels are deterministic: node sets, sweep orders and summation orders
are fixed, so identical inputs produce bit-identical outputs.  They are also
pure and reentrant; nothing here holds shared mutable state.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BadHintError,
    DegenerateWindowError,
    NonConvergenceError,
    NotHermitianError,
)

__all__ = [
    "QuadratureResult",
    "HermitianSpectrum",
    "SlopeFit",
    "DecayHint",
    "integrate_adaptive",
    "integrate_real_line",
    "hermitian_eigen",
    "loglog_slope",
]

_EPS = float(np.finfo(np.float64).eps)

# 7/15-point Gauss-Kronrod pair on [-1, 1].  Positive abscissae listed
# outermost first; Gauss nodes are the even-indexed Kronrod ones.
_XGK_HALF = (
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993944,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
    0.0,
)
_WGK_HALF = (
    0.0229353220105292,
    0.0630920926299785,
    0.1047900103222502,
    0.1406532597155259,
    0.1690047266392679,
    0.1903505780647854,
    0.2044329400752989,
    0.2094821410847278,
)
_WG_HALF = (
    0.1294849661688697,
    0.2797053914892767,
    0.3818300505051189,
    0.4179591836734694,
)

_NODES = np.array([-x for x in _XGK_HALF[:7]] + [0.0] + [x for x in reversed(_XGK_HALF[:7])])
_WK = np.array(list(_WGK_HALF[:7]) + [_WGK_HALF[7]] + list(reversed(_WGK_HALF[:7])))
_WG = np.zeros(15)
for _i, _w in zip((1, 3, 5, 7), _WG_HALF):
    _WG[_i] = _w
    _WG[14 - _i] = _w


@dataclass(frozen=True)
class QuadratureResult:
    """Value, rigorous-ish error estimate, and cost of one integration."""

    value: complex
    error_estimate: float
    evaluations: int


@dataclass(frozen=True, eq=False)
class HermitianSpectrum:
    """Full eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` is ascending; column ``k`` of ``eigenvectors`` belongs to
    ``eigenvalues[k]`` and the columns are orthonormal.
    """

    dimension: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares line through (ln x, ln y) samples."""

    slope: float
    intercept: float
    r_squared: float
    window: tuple


@dataclass(frozen=True)
class DecayHint:
    """Declared tail envelope of an integrand on the real line.

    kind ``gaussian``: |f(x)| <= C exp(-rate x^2);
    kind ``exponential``: |f(x)| <= C exp(-rate |x|);
    kind ``polynomial``: |f(x)| <= C min(1, |x|^-power) with power > 1.
    """

    kind: str
    rate: float = 1.0
    power: float = 2.0

    @staticmethod
    def gaussian(rate: float = 1.0) -> "DecayHint":
        if rate <= 0.0:
            raise ValueError("gaussian decay rate must be positive")
        return DecayHint("gaussian", rate=rate)

    @staticmethod
    def exponential(rate: float = 1.0) -> "DecayHint":
        if rate <= 0.0:
            raise ValueError("exponential decay rate must be positive")
        return DecayHint("exponential", rate=rate)

    @staticmethod
    def polynomial(power: float) -> "DecayHint":
        if power <= 1.0:
            raise ValueError("polynomial decay needs power > 1 for integrability")
        return DecayHint("polynomial", power=power)

    def log_envelope(self, x: float) -> float:
        """ln of the unit-scale envelope at x (computed without underflow)."""
        ax = abs(x)
        if self.kind == "gaussian":
            return -self.rate * ax * ax
        if self.kind == "exponential":
            return -self.rate * ax
        return -self.power * math.log(ax) if ax > 1.0 else 0.0

    def tail(self, t: float) -> float:
        """Upper bound for the one-sided tail integral of the unit envelope."""
        if self.kind == "gaussian":
            # int_T^inf exp(-r x^2) dx <= exp(-r T^2)/(2 r T) for rT^2 >= 1/2
            return math.exp(-self.rate * t * t) / (2.0 * self.rate * t)
        if self.kind == "exponential":
            return math.exp(-self.rate * t) / self.rate
        return t ** (1.0 - self.power) / (self.power - 1.0)

    def start_radius(self) -> float:
        if self.kind == "gaussian":
            return max(1.0, 1.0 / math.sqrt(self.rate))
        if self.kind == "exponential":
            return max(1.0, 1.0 / self.rate)
        return 2.0


def _vectorized(f: Callable) -> Callable[[np.ndarray], np.ndarray]:
    """Wrap f so it maps an ndarray of abscissae to a complex ndarray."""

    state = {"vector_ok": True}

    def evaluate(xs: np.ndarray) -> np.ndarray:
        if state["vector_ok"]:
            try:
                out = np.asarray(f(xs), dtype=np.complex128)
                if out.shape == xs.shape:
                    return out
            except (TypeError, ValueError):
                pass
            state["vector_ok"] = False
        return np.array([complex(f(float(x))) for x in xs], dtype=np.complex128)

    return evaluate


def _kronrod_panel(f_eval, a: float, b: float):
    """Evaluate one G7/K15 panel; returns (value, error, resabs)."""
    h = 0.5 * (b - a)
    c = 0.5 * (a + b)
    fx = f_eval(c + h * _NODES)
    if not np.all(np.isfinite(fx)):
        bad = c + h * _NODES[np.where(~np.isfinite(fx))[0][0]]
        raise ValueError(f"non-finite integrand value near x={bad!r}")
    k = h * np.dot(_WK, fx)
    g = h * np.dot(_WG, fx)
    absfx = np.abs(fx)
    resabs = abs(h) * float(np.dot(_WK, absfx))
    mean = k / (b - a)
    resasc = abs(h) * float(np.dot(_WK, np.abs(fx - mean)))
    err = abs(k - g)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    err = max(err, 4.0 * _EPS * resabs)
    return k, err, resabs


def integrate_adaptive(
    f: Callable,
    a: float,
    b: float,
    tol: float,
    *,
    max_evals: int = 10**6,
    breakpoints: Sequence[float] | None = None,
) -> QuadratureResult:
    """Integrate f over [a, b] to absolute tolerance tol.

    Adaptive bisection with a fixed 7/15-point Gauss-Kronrod rule per panel.
    The panel with the largest error estimate is bisected until the summed
    estimate drops below tol.  Panels are totally ordered (error, insertion
    index), and the final value is accumulated over panels sorted by left
    endpoint, so results are reproducible bit for bit.

    ``breakpoints`` seeds the initial panel set with interior edges (known
    kinks, or a geometric splitting of very wide intervals whose content
    would otherwise hide between the nodes of one coarse panel).

    Raises NonConvergenceError if the budget of max_evals integrand
    evaluations is exhausted first.
    """
    if not (a < b):
        raise ValueError("integration bounds must satisfy a < b")
    if not (tol > 0.0):
        raise ValueError("tolerance must be positive")

    edges = [a, b]
    if breakpoints is not None:
        edges = sorted({a, b, *(float(x) for x in breakpoints if a < x < b)})

    f_eval = _vectorized(f)
    evaluations = 0
    seq = -1

    panels = {}
    heap = []
    frozen: dict[int, tuple] = {}
    for lo, hi in zip(edges, edges[1:]):
        value, err, _ = _kronrod_panel(f_eval, lo, hi)
        evaluations += 15
        seq += 1
        panels[seq] = (lo, hi, value, err)
        heapq.heappush(heap, (-err, seq))

    def total_error() -> float:
        return math.fsum(p[3] for p in panels.values()) + math.fsum(
            p[3] for p in frozen.values()
        )

    while total_error() > tol:
        if not heap:
            raise NonConvergenceError(
                f"quadrature stalled at error {total_error():.3e} > tol {tol:.3e}"
            )
        if evaluations + 30 > max_evals:
            raise NonConvergenceError(
                f"evaluation budget {max_evals} exhausted at error "
                f"{total_error():.3e} > tol {tol:.3e}"
            )
        _, idx = heapq.heappop(heap)
        pa, pb, pval, perr = panels.pop(idx)
        width_floor = 8.0 * _EPS * max(abs(pa), abs(pb), 1.0)
        if pb - pa <= width_floor:
            # cannot subdivide further; park the panel at its error floor
            frozen[idx] = (pa, pb, pval, perr)
            continue
        mid = 0.5 * (pa + pb)
        for lo, hi in ((pa, mid), (mid, pb)):
            val, err, _ = _kronrod_panel(f_eval, lo, hi)
            evaluations += 15
            seq += 1
            panels[seq] = (lo, hi, val, err)
            heapq.heappush(heap, (-err, seq))

    everything = sorted(panels.values()) + sorted(frozen.values())
    everything.sort(key=lambda p: p[0])
    total = complex(
        math.fsum(p[2].real for p in everything),
        math.fsum(p[2].imag for p in everything),
    )
    estimate = math.fsum(p[3] for p in everything)
    return QuadratureResult(value=total, error_estimate=estimate, evaluations=evaluations)


_PROBE_ABSCISSAE = (0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0)
_HINT_CONTRADICTION_FACTOR = 1.0e3


def integrate_real_line(
    f: Callable,
    hint: DecayHint,
    tol: float,
    *,
    max_evals: int = 10**6,
) -> QuadratureResult:
    """Integrate f over the whole real line using a declared decay hint.

    The truncation radius T is chosen so the analytic tail bound of the
    hinted envelope stays below tol/4; the tail bound is folded into the
    reported error estimate.  Probes of |f| that exceed the hinted envelope
    by more than a factor of 1e3 raise BadHintError instead of silently
    producing a wrong tail bound.
    """
    if not (tol > 0.0):
        raise ValueError("tolerance must be positive")

    f_eval = _vectorized(f)
    probes = np.array(
        sorted({x for p in _PROBE_ABSCISSAE for x in (p, -p)}), dtype=np.float64
    )
    fp = np.abs(f_eval(probes))
    evaluations = probes.size

    near_scale = float(np.max(fp[np.abs(probes) <= 2.0]))
    log_near = math.log(near_scale) if near_scale > 0.0 else -math.inf

    def check_envelope(x: float, magnitude: float) -> None:
        if magnitude == 0.0:
            return
        allowed = math.log(_HINT_CONTRADICTION_FACTOR) + log_near + hint.log_envelope(x)
        if math.log(magnitude) > allowed:
            raise BadHintError(
                f"|f({x:g})| = {magnitude:.3e} exceeds the declared "
                f"{hint.kind} envelope by more than {_HINT_CONTRADICTION_FACTOR:g}x"
            )

    scale = 0.0
    for x, magnitude in zip(probes, fp):
        if abs(x) >= 4.0:
            check_envelope(float(x), float(magnitude))
        if magnitude > 0.0:
            log_ratio = math.log(magnitude) - hint.log_envelope(float(x))
            scale = max(scale, math.exp(min(log_ratio, 700.0)))

    radius = hint.start_radius()
    if scale > 0.0:
        while 2.0 * scale * hint.tail(radius) > 0.25 * tol:
            radius *= 2.0
            if radius > 1.0e300:
                raise NonConvergenceError(
                    "truncation radius diverged; tail bound cannot reach tolerance"
                )
    else:
        radius *= 16.0  # f vanished at every probe; integrate a generous window

    tail_checks = np.array([-radius, -0.5 * radius, 0.5 * radius, radius])
    ft = np.abs(f_eval(tail_checks))
    evaluations += tail_checks.size
    for x, magnitude in zip(tail_checks, ft):
        check_envelope(float(x), float(magnitude))

    tail_bound = 2.0 * scale * hint.tail(radius)
    # geometric pre-split: without it, a feature near the origin can vanish
    # between the nodes of one panel spanning a huge truncated interval
    splits: list[float] = []
    edge = 1.0
    while edge < radius:
        splits.extend((-edge, edge))
        edge *= 2.0
    inner = integrate_adaptive(
        f,
        -radius,
        radius,
        0.5 * tol,
        max_evals=max_evals - evaluations,
        breakpoints=splits,
    )
    return QuadratureResult(
        value=inner.value,
        error_estimate=inner.error_estimate + tail_bound,
        evaluations=evaluations + inner.evaluations,
    )


def hermitian_eigen(a: np.ndarray) -> HermitianSpectrum:
    """Eigendecompose a dense Hermitian matrix by cyclic two-sided Jacobi.

    The input is symmetrized before decomposition; a relative asymmetry above
    1e-8 raises NotHermitianError.  Eigenvalues come back ascending with
    matching orthonormal eigenvector columns.  Intended for the small dense
    matrices this toolkit produces (dimension <= 64).
    """
    mat = np.asarray(a, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("expected a square matrix")
    n = mat.shape[0]
    if n == 0:
        raise ValueError("expected a nonempty matrix")

    fro = float(np.linalg.norm(mat))
    asym = float(np.linalg.norm(mat - mat.conj().T))
    if fro > 0.0 and asym > 1.0e-8 * fro:
        raise NotHermitianError(
            f"relative asymmetry {asym / fro:.3e} exceeds 1e-8"
        )

    h = 0.5 * (mat + mat.conj().T)
    v = np.eye(n, dtype=np.complex128)

    def off_norm() -> float:
        off = h - np.diag(np.diag(h))
        return float(np.linalg.norm(off))

    stop = max(1.0e-15 * fro, 1.0e-300)
    for _sweep in range(64):
        if off_norm() <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = h[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                theta = (h[q, q].real - h[p, p].real) / (2.0 * r)
                sign = 1.0 if theta >= 0.0 else -1.0
                t = -sign / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = (t * c) * np.conj(phase)
                # two-sided rotation on the (p, q) plane
                col_p = h[:, p].copy()
                col_q = h[:, q].copy()
                h[:, p] = c * col_p + s * col_q
                h[:, q] = -np.conj(s) * col_p + c * col_q
                row_p = h[p, :].copy()
                row_q = h[q, :].copy()
                h[p, :] = c * row_p + np.conj(s) * row_q
                h[q, :] = -s * row_p + c * row_q
                h[p, q] = 0.0
                h[q, p] = 0.0
                h[p, p] = complex(h[p, p].real, 0.0)
                h[q, q] = complex(h[q, q].real, 0.0)
                vcol_p = v[:, p].copy()
                vcol_q = v[:, q].copy()
                v[:, p] = c * vcol_p + s * vcol_q
                v[:, q] = -np.conj(s) * vcol_p + c * vcol_q
    else:
        raise NonConvergenceError("Jacobi sweeps failed to converge")

    eigenvalues = np.real(np.diag(h)).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return HermitianSpectrum(
        dimension=n,
        eigenvalues=eigenvalues[order],
        eigenvectors=v[:, order],
    )


def loglog_slope(samples: Sequence[tuple]) -> SlopeFit:
    """Fit a least-squares line through (ln x, ln y).

    The slope is the fitted decay exponent of y ~ x^slope.  Requires at least
    four samples with strictly increasing positive abscissae; a nonpositive
    ordinate raises DegenerateWindowError (callers must pre-filter zeros).
    """
    pts = [(float(x), float(y)) for x, y in samples]
    if len(pts) < 4:
        raise ValueError("need at least 4 samples for a slope fit")
    for (x0, _), (x1, _) in zip(pts, pts[1:]):
        if not (x1 > x0):
            raise ValueError("abscissae must be strictly increasing")
    if pts[0][0] <= 0.0:
        raise ValueError("abscissae must be positive")
    if any(y <= 0.0 for _, y in pts):
        raise DegenerateWindowError("nonpositive ordinate in fit window")

    window = tuple((math.log(x), math.log(y)) for x, y in pts)
    n = len(window)
    mean_x = math.fsum(lx for lx, _ in window) / n
    mean_y = math.fsum(ly for _, ly in window) / n
    sxx = math.fsum((lx - mean_x) ** 2 for lx, _ in window)
    sxy = math.fsum((lx - mean_x) * (ly - mean_y) for lx, ly in window)
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    ss_tot = math.fsum((ly - mean_y) ** 2 for _, ly in window)
    ss_res = math.fsum(
        (ly - (intercept + slope * lx)) ** 2 for lx, ly in window
    )
    r_squared = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return SlopeFit(slope=slope, intercept=intercept, r_squared=r_squared, window=window)
