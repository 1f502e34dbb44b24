import json
import math

import pytest

from steiner_soddy.chain import PorismConfig
from steiner_soddy.checks import (CLAIMS, DEFAULT_SUITE, FAIL, NOT_APPLICABLE, PASS, SUSPECTED_TYPO,
                                  Claim, Context, Outcome, SuiteMember, _status, load_suite,
                                  run_claim, verify_all)
from steiner_soddy.chain import Regime, classify_regime


def test_default_suite_covers_regimes_and_sizes():
    regimes = {classify_regime(m.cfg) for m in DEFAULT_SUITE}
    assert regimes == {Regime.ELLIPSE, Regime.PARABOLA, Regime.HYPERBOLA}
    assert {m.cfg.n for m in DEFAULT_SUITE} >= {3, 4, 5, 6, 7, 8}


def test_registry_ids_are_unique_and_sorted_in_report():
    report = verify_all(only=["descartes", "caustic_concyclic", "chain_tangency"])
    assert [r.id for r in report.records] == ["caustic_concyclic", "chain_tangency", "descartes"]
    assert report.registered == len(CLAIMS)


def test_unknown_claim():
    with pytest.raises(KeyError):
        verify_all(only=["no_such_claim"])


def test_json_schema():
    report = verify_all(only=["descartes", "tau_parabola_two"])
    data = json.loads(report.to_json())
    assert all(set(item) == {"id", "anchor", "residual", "tolerance", "status"} for item in data)
    assert all(item["status"] in (PASS, FAIL, SUSPECTED_TYPO, NOT_APPLICABLE) for item in data)
    assert "detail" in json.loads(report.to_json(details=True))[0]


def test_deterministic_json():
    ids = ["curvature_power_sums", "locus_x2_conic", "x105_tangency"]
    assert verify_all(only=ids).to_json() == verify_all(only=ids).to_json()


class TestStatus:
    def test_pass(self):
        assert _status(Claim("a", "", None), Outcome(1e-12, 1e-9)) == PASS

    def test_fail(self):
        assert _status(Claim("a", "", None), Outcome(1.0, 1e-9)) == FAIL

    def test_closed_form_mismatch_with_good_oracle_is_typo(self):
        assert _status(Claim("a", "", None, closed_form=True), Outcome(1.0, 1e-9)) == SUSPECTED_TYPO

    def test_closed_form_mismatch_with_bad_oracle_fails(self):
        out = Outcome(1.0, 1e-9, cross_check=False)
        assert _status(Claim("a", "", None, closed_form=True), out) == FAIL

    def test_nan_residual_fails(self):
        assert _status(Claim("a", "", None), Outcome(math.nan, 1e-9)) == FAIL

    def test_not_applicable(self):
        assert _status(Claim("a", "", None), Outcome(math.nan, 0.0, applicable=False)) == NOT_APPLICABLE


def test_errors_become_failures():
    def boom(ctx):
        raise ArithmeticError("broken")
    rec = run_claim(Claim("boom", "x", boom), Context(DEFAULT_SUITE))
    assert rec.status == FAIL and rec.residual is None and "broken" in rec.detail


def test_literal_sign_rule_and_x6_plus_reading_are_flagged():
    report = verify_all(only=["half_tangent_sign_rule_literal", "locus_x6_plus_reading", "locus_x6_conic"])
    status = {r.id: r.status for r in report.records}
    assert status == {"half_tangent_sign_rule_literal": SUSPECTED_TYPO,
                      "locus_x6_plus_reading": SUSPECTED_TYPO, "locus_x6_conic": PASS}


def test_symmetric_member_reductions():
    suite = [SuiteMember("sym", PorismConfig(3, 1.3, 0.0, 0.8))]
    rec = verify_all(suite, only=["symmetric_reductions"]).records[0]
    assert rec.status == PASS


def test_parabola_member_claims():
    suite = [SuiteMember("par", PorismConfig(3, 1.0, 1 - math.sqrt(3) / 2, 1.0))]
    report = verify_all(suite, only=["tau_parabola_two", "brocard_aspect_ratio", "parabola_soddy_line"])
    assert all(r.status == PASS for r in report.records)


def test_inapplicable_claims():
    suite = [SuiteMember("e", PorismConfig(4, 1.0, 0.2, 1.0))]
    report = verify_all(suite, only=["eversion", "descartes", "tau_parabola_two"])
    assert all(r.status == NOT_APPLICABLE for r in report.records)


def test_table_has_coverage_line():
    text = verify_all(only=["descartes"]).to_table()
    assert f"coverage: 1/{len(CLAIMS)} claims" in text


def test_load_suite(tmp_path):
    path = tmp_path / "suite.json"
    path.write_text(json.dumps({"configs": [{"n": 3, "r": 1, "x0": 0.1, "lambda": 1, "name": "ref"}]}))
    suite = load_suite(path)
    assert suite[0].name == "ref" and suite[0].cfg == PorismConfig(3, 1, 0.1, 1)
    path.write_text("[]")
    with pytest.raises(ValueError):
        load_suite(path)
