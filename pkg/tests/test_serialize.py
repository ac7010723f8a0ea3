"""Wire-format round trips and parse errors."""

import json
import math

import numpy as np
import pytest

from twoscale import serialize as ser
from twoscale.bernoulli import BernoulliModel, density
from twoscale.generators import CatalogGenerator, Gaussian, Hat, RationalL2, TwoSidedExp
from twoscale.refinement import SampledFunction, TwoScaleEquation, preset, solve_fourier
from twoscale.wavelet_system import (
    WaveletPoint,
    WaveletSystem,
    analyze,
    certify,
    gram,
)


class TestEquationJson:
    def test_round_trip(self):
        eq = TwoScaleEquation(2.5, [(1.0 + 0.5j, -1.0), (1.5 - 0.5j, 2.0)])
        doc = ser.equation_to_dict(eq)
        back = ser.equation_from_dict(doc)
        assert back.lam == eq.lam
        assert back.terms == eq.terms
        assert ser.equation_to_dict(back) == doc

    def test_plain_number_coefficients_accepted(self):
        eq = ser.equation_from_dict({"lambda": 2.0, "terms": [{"c": 1.0, "beta": 0.0}]})
        assert eq.coefficients == (1.0 + 0j,)

    def test_missing_keys(self):
        with pytest.raises(ser.ParseError):
            ser.equation_from_dict({"terms": []})
        with pytest.raises(ser.ParseError):
            ser.equation_from_dict({"lambda": 2.0, "terms": [{"beta": 0.0}]})

    def test_bad_json_reports_position(self):
        with pytest.raises(ser.ParseError) as info:
            ser.load_json('{"lambda": 2.0,\n "terms": }')
        assert info.value.line == 2
        assert info.value.column is not None


class TestSystemJson:
    @pytest.mark.parametrize(
        "gen",
        [
            Gaussian(),
            TwoSidedExp(2),
            RationalL2([1.0], [1.0, 0.0, 1.0]),
            Hat(),
            CatalogGenerator("sech"),
        ],
    )
    def test_round_trip_kinds(self, gen):
        system = WaveletSystem(gen, [WaveletPoint(1, 0), WaveletPoint(2, 1)])
        doc = ser.system_to_dict(system)
        back = ser.system_from_dict(doc)
        assert ser.system_to_dict(back) == doc
        assert back.generator.tags == gen.tags

    def test_refinement_generator_round_trip(self):
        doc = {
            "generator": {
                "kind": "refinement",
                "equation": ser.equation_to_dict(preset("hat")),
                "resolution": 2.0**-8,
                "iterations": 20,
            },
            "points": [{"lambda": 1.0, "beta": 0.0}],
        }
        system = ser.system_from_dict(doc)
        assert ser.system_to_dict(system)["generator"]["iterations"] == 20

    def test_sampled_round_trip(self):
        values = [0.0, 1.0, 0.0]
        doc = {
            "generator": {
                "kind": "sampled",
                "start": -1.0,
                "step": 1.0,
                "values": values,
                "support": [-1.0, 1.0],
                "tags": ["schwartz"],
            },
            "points": [{"lambda": 1.0, "beta": 0.0}],
        }
        system = ser.system_from_dict(doc)
        assert "schwartz" in system.generator.tags
        assert ser.system_to_dict(system)["generator"]["values"] == values

    def test_unknown_kind(self):
        with pytest.raises(ser.ParseError):
            ser.system_from_dict(
                {"generator": {"kind": "mystery"}, "points": [{"lambda": 1, "beta": 0}]}
            )

    def test_empty_points(self):
        with pytest.raises(ser.ParseError):
            ser.system_from_dict({"generator": {"kind": "hat"}, "points": []})


class TestReportsJson:
    def test_gram_report_shape(self):
        system = WaveletSystem(Hat(), [WaveletPoint(1, 0), WaveletPoint(2, 0)])
        doc = ser.gram_report_to_dict(gram(system, 1e-9))
        text = ser.dump_json(doc)
        assert json.loads(text) == doc  # serialize . parse = identity
        assert len(doc["matrix"]) == 2
        assert doc["sigma_min"] >= 0.0

    def test_certificate_and_verdict(self):
        system = WaveletSystem(Gaussian(), [WaveletPoint(1, 0)])
        cert = certify(system)
        cdoc = ser.certificate_to_dict(cert)
        assert cdoc["rule_id"] == "ExpDecay_L31a"
        assert all(isinstance(ok, bool) for _, ok in cdoc["checklist"])
        verdict = analyze(system)
        vdoc = ser.verdict_to_dict(verdict)
        assert vdoc["outcome"] == "IndependentCertified"
        assert vdoc["rule_id"] == "ExpDecay_L31a"
        assert vdoc["null_vector"] is None


class TestCsv:
    def test_profile_csv(self):
        prof = solve_fourier(preset("hat"), [-0.5, 0.0, 0.5], 1e-10)
        text = ser.profile_to_csv(prof)
        lines = text.strip().splitlines()
        assert lines[0] == "gamma,re,im"
        assert len(lines) == 4
        gamma, re, im = (float(f) for f in lines[2].split(","))
        assert gamma == 0.0 and re == 1.0 and im == 0.0
        # 17 significant digits round-trip exactly
        g1, r1, i1 = (float(f) for f in lines[3].split(","))
        assert r1 == prof.values[2].real and i1 == prof.values[2].imag

    def test_sampled_csv(self):
        sf = SampledFunction(start=0.0, step=0.5, values=np.array([0.0, 1.0, 0.0]), support=(0.0, 1.0))
        text = ser.sampled_to_csv(sf)
        lines = text.strip().splitlines()
        assert lines[0] == "x,value"
        assert lines[2] == "0.5,1"

    def test_sampled_csv_rejects_complex(self):
        sf = SampledFunction(
            start=0.0, step=0.5, values=np.array([0.0, 1.0j, 0.0]), support=(0.0, 1.0)
        )
        with pytest.raises(ValueError):
            ser.sampled_to_csv(sf)

    def test_histogram_csv(self):
        hist = density(BernoulliModel(0.5), 4, 4)
        text = ser.histogram_to_csv(hist)
        lines = text.strip().splitlines()
        assert lines[0] == "bin_left,bin_right,mass"
        assert len(lines) == 5
        total = math.fsum(float(line.split(",")[2]) for line in lines[1:])
        assert total == 1.0
