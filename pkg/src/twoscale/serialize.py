"""JSON and CSV wire formats.

JSON schemas:
  equation  {"lambda": number, "terms": [{"c": [re, im], "beta": number}, ...]}
  system    {"generator": {"kind": ..., ...params, "tags": [...]},
             "points": [{"lambda": number, "beta": number}, ...]}

CSV formats (one record per grid point, %.17g):
  Fourier profile  header ``gamma,re,im``
  sampled function header ``x,value``
  density histogram header ``bin_left,bin_right,mass``

Floats pass through ``repr`` in JSON, which round-trips exactly; CSV uses
17 significant digits for the same reason.
"""

from __future__ import annotations

import json
from typing import Sequence

import numpy as np

from .bernoulli import DensityHistogram
from .errors import TwoscaleError
from .generators import (
    CatalogGenerator,
    Gaussian,
    GeneratorSpec,
    Hat,
    RationalL2,
    RefinementGenerator,
    SampledGenerator,
    TwoSidedExp,
)
from .refinement import FourierProfile, SampledFunction, TwoScaleEquation
from .wavelet_system import Certificate, GramReport, Verdict, WaveletPoint, WaveletSystem

__all__ = [
    "ParseError",
    "equation_to_dict",
    "equation_from_dict",
    "system_to_dict",
    "system_from_dict",
    "gram_report_to_dict",
    "certificate_to_dict",
    "verdict_to_dict",
    "profile_to_csv",
    "sampled_to_csv",
    "histogram_to_csv",
    "dump_json",
]


class ParseError(TwoscaleError):
    """Malformed input document; carries line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _complex_pair(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _parse_complex(value, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ParseError(f"{where}: expected a number or [re, im] pair")


def _require(mapping, key, where: str):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ParseError(f"{where}: missing required key {key!r}")
    return mapping[key]


# ---------------------------------------------------------------- equations


def equation_to_dict(eq: TwoScaleEquation) -> dict:
    return {
        "lambda": eq.lam,
        "terms": [{"c": _complex_pair(c), "beta": beta} for c, beta in eq.terms],
    }


def equation_from_dict(doc: dict) -> TwoScaleEquation:
    lam = _require(doc, "lambda", "equation")
    terms_doc = _require(doc, "terms", "equation")
    if not isinstance(terms_doc, list) or not terms_doc:
        raise ParseError("equation: 'terms' must be a nonempty list")
    terms = []
    for k, term in enumerate(terms_doc):
        c = _parse_complex(_require(term, "c", f"equation term {k}"), f"equation term {k}")
        beta = float(_require(term, "beta", f"equation term {k}"))
        terms.append((c, beta))
    return TwoScaleEquation(float(lam), terms)


# ------------------------------------------------------------------ systems


def _sampled_to_dict(sampled: SampledFunction) -> dict:
    values = np.asarray(sampled.values)
    if np.iscomplexobj(values):
        raise ValueError("sampled generator serialization supports real values only")
    return {
        "start": sampled.start,
        "step": sampled.step,
        "values": [float(v) for v in values],
        "support": [sampled.support[0], sampled.support[1]],
    }


def _sampled_from_dict(doc: dict, where: str) -> SampledFunction:
    values = np.asarray(_require(doc, "values", where), dtype=np.float64)
    support = _require(doc, "support", where)
    return SampledFunction(
        start=float(_require(doc, "start", where)),
        step=float(_require(doc, "step", where)),
        values=values,
        support=(float(support[0]), float(support[1])),
    )


def generator_to_dict(gen: GeneratorSpec) -> dict:
    doc: dict = {"kind": gen.kind}
    doc.update(gen.params())
    if gen.kind == "refinement":
        doc["equation"] = equation_to_dict(gen.equation)
    if gen.kind == "sampled":
        doc.update(_sampled_to_dict(gen.sampled))
    doc["tags"] = sorted(gen.tags)
    return doc


def generator_from_dict(doc: dict) -> GeneratorSpec:
    kind = _require(doc, "kind", "generator")
    tags = doc.get("tags")
    if kind == "gaussian":
        return Gaussian(extra_tags=tags)
    if kind == "two_sided_exp":
        return TwoSidedExp(int(_require(doc, "n", "generator")), extra_tags=tags)
    if kind == "rational":
        return RationalL2(
            _require(doc, "numerator", "generator"),
            _require(doc, "denominator", "generator"),
            extra_tags=tags,
        )
    if kind == "hat":
        return Hat(extra_tags=tags)
    if kind == "refinement":
        eq = equation_from_dict(_require(doc, "equation", "generator"))
        return RefinementGenerator(
            eq,
            resolution=float(doc.get("resolution", 2.0**-10)),
            iterations=int(doc.get("iterations", 40)),
            extra_tags=tags,
        )
    if kind == "sampled":
        return SampledGenerator(_sampled_from_dict(doc, "generator"), extra_tags=tags)
    if kind == "le_catalog":
        return CatalogGenerator(str(_require(doc, "id", "generator")), extra_tags=tags)
    raise ParseError(f"generator: unknown kind {kind!r}")


def system_to_dict(system: WaveletSystem) -> dict:
    return {
        "generator": generator_to_dict(system.generator),
        "points": [
            {"lambda": p.dilation, "beta": p.translation} for p in system.points
        ],
    }


def system_from_dict(doc: dict) -> WaveletSystem:
    gen = generator_from_dict(_require(doc, "generator", "system"))
    points_doc = _require(doc, "points", "system")
    if not isinstance(points_doc, list) or not points_doc:
        raise ParseError("system: 'points' must be a nonempty list")
    points = [
        WaveletPoint(
            float(_require(p, "lambda", f"point {k}")),
            float(_require(p, "beta", f"point {k}")),
        )
        for k, p in enumerate(points_doc)
    ]
    return WaveletSystem(gen, points)


def load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno
        ) from exc


# ------------------------------------------------------------------ reports


def _vector_to_pairs(vec: np.ndarray) -> list:
    return [_complex_pair(z) for z in np.asarray(vec, dtype=np.complex128)]


def gram_report_to_dict(report: GramReport) -> dict:
    return {
        "matrix": [_vector_to_pairs(row) for row in report.matrix],
        "eigenvalues": [float(v) for v in report.eigenvalues],
        "sigma_min": report.sigma_min,
        "sigma_max": report.sigma_max,
        "relative_gap": report.relative_gap,
        "quad_error": report.quad_error,
        "null_vector": None
        if report.null_vector is None
        else _vector_to_pairs(report.null_vector),
    }


def certificate_to_dict(cert: Certificate) -> dict:
    return {
        "rule_id": cert.rule_id,
        "citation": cert.citation,
        "checklist": [[name, bool(ok)] for name, ok in cert.hypothesis_checklist],
    }


def verdict_to_dict(verdict: Verdict) -> dict:
    cert = verdict.certificate
    evidence = verdict.evidence
    return {
        "outcome": verdict.outcome,
        "rule_id": None if cert is None else cert.rule_id,
        "citation": None if cert is None else cert.citation,
        "checklist": None
        if cert is None
        else [[name, bool(ok)] for name, ok in cert.hypothesis_checklist],
        "relative_gap": None if evidence is None else evidence.relative_gap,
        "quad_error": None if evidence is None else evidence.quad_error,
        "null_vector": None
        if verdict.null_vector is None
        else _vector_to_pairs(verdict.null_vector),
    }


# ---------------------------------------------------------------------- CSV


def profile_to_csv(profile: FourierProfile) -> str:
    lines = ["gamma,re,im"]
    for gamma, value in zip(profile.grid, profile.values):
        z = complex(value)
        lines.append(f"{_fmt(gamma)},{_fmt(z.real)},{_fmt(z.imag)}")
    return "\n".join(lines) + "\n"


def profile_to_dict(profile: FourierProfile) -> dict:
    return {
        "grid": [float(g) for g in profile.grid],
        "values": [_complex_pair(v) for v in profile.values],
        "truncation_depth": profile.truncation_depth,
        "tail_bound": profile.tail_bound,
    }


def sampled_to_csv(sampled: SampledFunction) -> str:
    values = np.asarray(sampled.values)
    if np.iscomplexobj(values):
        raise ValueError("sampled-function CSV supports real values only")
    lines = ["x,value"]
    for x, v in zip(sampled.grid, values):
        lines.append(f"{_fmt(x)},{_fmt(v)}")
    return "\n".join(lines) + "\n"


def sampled_to_dict(sampled: SampledFunction, residuals: Sequence[float] | None = None) -> dict:
    values = np.asarray(sampled.values)
    doc = {
        "start": sampled.start,
        "step": sampled.step,
        "support": [sampled.support[0], sampled.support[1]],
        "values": [_complex_pair(v) for v in values]
        if np.iscomplexobj(values)
        else [float(v) for v in values],
    }
    if residuals is not None:
        doc["residuals"] = [float(r) for r in residuals]
    return doc


def histogram_to_csv(hist: DensityHistogram) -> str:
    lines = ["bin_left,bin_right,mass"]
    for left, right, mass in zip(hist.bin_edges, hist.bin_edges[1:], hist.masses):
        lines.append(f"{_fmt(left)},{_fmt(right)},{_fmt(mass)}")
    return "\n".join(lines) + "\n"


def histogram_to_dict(hist: DensityHistogram) -> dict:
    return {
        "bin_edges": [float(e) for e in hist.bin_edges],
        "masses": [float(m) for m in hist.masses],
        "depth": hist.depth,
        "positional_error": hist.positional_error,
    }
