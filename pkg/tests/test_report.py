"""Tests for run configuration, document emitters and the torsion report."""

import json

import pytest
from pydantic import ValidationError

import services.report_service as report_service
from config import settings
from core.matrix import MatrixPoly
from services.cusp_service import FieldParams
from services.injectivity_service import (
    DeltaMatrix,
    MatrixVariant,
    VerificationMismatch,
    build_M_delta,
    step1_reduce,
    step2_reduce,
)
from services.report_service import (
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_USAGE,
    ReportServiceError,
    RunConfig,
    emit_matrix,
    parse_matrix,
    run,
    torsion_report,
)


def payload_of(config: RunConfig) -> dict:
    result = run(config)
    assert result.exit_code == EXIT_OK
    return json.loads(result.document)["payload"]


class TestRunConfig:
    def test_reduce_needs_r7(self):
        with pytest.raises(ValidationError):
            RunConfig(command="reduce", r=5, format="json")

    def test_csv_needs_numeric_mode_and_at(self):
        with pytest.raises(ValidationError):
            RunConfig(command="matrix", r=3, format="csv", mode="symbolic", at=3)
        with pytest.raises(ValidationError):
            RunConfig(command="matrix", r=3, format="csv", mode="numeric")
        RunConfig(command="matrix", r=3, format="csv", mode="numeric", at=3)

    def test_r_is_capped(self):
        with pytest.raises(ValidationError):
            RunConfig(command="det", r=settings.MAX_R + 1, format="json")

    def test_unknown_command(self):
        with pytest.raises(ValidationError):
            RunConfig(command="plot", format="json")

    def test_matrix_commands_need_r2(self):
        with pytest.raises(ValidationError):
            RunConfig(command="det", r=1, format="json")
        RunConfig(command="report", r=1, format="json")


class TestMatrixCodec:
    def test_r2_plain_json(self):
        M = build_M_delta(FieldParams(q=3, deg_p=1, r=2))
        doc = json.loads(emit_matrix(M, "json"))
        assert doc == {"variant": "plain", "r": 2, "entries": [[[1], [1]], [[-1, 1], [0, 1]]]}

    def test_zero_matrix(self):
        M = DeltaMatrix(MatrixVariant.PLAIN, 1, MatrixPoly.zeros(1))
        assert json.loads(emit_matrix(M))["entries"] == [[[]]]

    def test_csv_evaluates(self):
        M = build_M_delta(FieldParams(q=3, deg_p=1, r=2))
        assert emit_matrix(M, "csv", at=3) == "1,1\n2,3\n"
        with pytest.raises(ReportServiceError):
            emit_matrix(M, "csv")

    def test_text(self):
        M = build_M_delta(FieldParams(q=3, deg_p=1, r=2))
        assert emit_matrix(M, "text") == "plain M_delta, r=2\n[1, 1]\n[P - 1, P]\n"

    def test_parse_inverts_emit(self):
        params = FieldParams(q=3, deg_p=1, r=7)
        plain = build_M_delta(params)
        assert parse_matrix(emit_matrix(plain)) == plain
        H = step1_reduce(plain)
        assert parse_matrix(emit_matrix(H)) == H

    @pytest.mark.parametrize("r", range(2, 21))
    def test_round_trip_every_variant(self, r):
        params = FieldParams(q=3, deg_p=1, r=r)
        matrices = [build_M_delta(params), build_M_delta(params, MatrixVariant.BOLD)]
        if r >= 7:
            H = step1_reduce(matrices[0])
            matrices += [H, step2_reduce(H)]
        for M in matrices:
            assert parse_matrix(emit_matrix(M)) == M

    def test_bold_keeps_row_scales(self):
        bold = build_M_delta(FieldParams(q=3, deg_p=1, r=3), MatrixVariant.BOLD)
        doc = json.loads(emit_matrix(bold))
        assert doc["row_scales"] == [[0, 0, 0, 2], [0, 1], [0, 0, 0, 1]]

    def test_parse_rejects_garbage(self):
        with pytest.raises(ReportServiceError):
            parse_matrix('{"entries": []}')


class TestTorsionReport:
    def test_q3_r2(self):
        report = torsion_report(FieldParams(q=3, deg_p=1, r=2))
        assert report.torsion_factors == [2, 2]
        assert any("Conjecture C" in s and "Z/2Z x Z/2Z" in s for s in report.statements)
        assert report.certificate.det.to_list() == [1]

    def test_r1_is_cyclic(self):
        report = torsion_report(FieldParams(q=3, deg_p=3, r=1))
        assert report.certificate is None
        assert report.generators == [("P_0-P_1", 13)]

    @pytest.mark.parametrize("q", [2, 3, 4, 5])
    @pytest.mark.parametrize("deg_p", [1, 2])
    def test_orders_are_positive_integers(self, q, deg_p):
        report = torsion_report(FieldParams(q=q, deg_p=deg_p, r=5))
        assert all(isinstance(o, int) and o >= 1 for _, o in report.generators)

    def test_abs_p_two_statement(self):
        report = torsion_report(FieldParams(q=2, deg_p=1, r=3))
        assert any(s.startswith("|p| = 2") for s in report.statements)


class TestRun:
    def test_det_symbolic(self):
        payload = payload_of(RunConfig(command="det", r=3, format="json"))
        assert payload["det"] == [1]
        assert payload["sign"] == 1
        assert payload["method"] == "direct"

    def test_det_numeric(self):
        payload = payload_of(RunConfig(command="det", r=6, mode="numeric", format="json"))
        assert payload["det"] == payload["det_at_abs_p"]

    def test_cusps(self):
        payload = payload_of(RunConfig(command="cusps", q=3, deg_p=1, r=4, format="json"))
        assert [p["degree"] for p in payload["closed_points"]] == [1, 1, 3, 1, 1]
        assert payload["enumerated_classes"] == {"0": 1, "1": 1, "2": 3, "3": 1, "4": 1}

    def test_verify_r7(self):
        payload = payload_of(RunConfig(command="verify", q=3, deg_p=1, r=7, format="json"))
        assert payload["passed"] is True
        assert payload["oracle_mismatches"] == []
        assert all(not c["mismatches"] for c in payload["claims"])

    def test_reduce(self):
        payload = payload_of(RunConfig(command="reduce", r=7, format="json"))
        assert payload["h"]["variant"] == "h-reduced"
        assert payload["h"]["entries"][1][0] == [0, -1]

    @pytest.mark.parametrize("command", ["divisors", "gmap", "sigma", "report"])
    def test_other_commands(self, command):
        payload_of(RunConfig(command=command, q=3, deg_p=1, r=4, format="json"))

    def test_text_and_csv(self):
        text = run(RunConfig(command="matrix", r=2, format="text"))
        assert text.document.splitlines()[2] == "[1, 1]"
        csv_doc = run(RunConfig(command="matrix", r=2, format="csv", mode="numeric", at=3))
        assert "values[1]" in csv_doc.document

    def test_deterministic(self):
        config = RunConfig(command="report", q=3, deg_p=2, r=7, format="json")
        assert run(config).document == run(config).document

    def test_mismatch_exits_2(self, monkeypatch):
        def broken(params):
            raise VerificationMismatch("engines disagree", {"bareiss": [1]})

        monkeypatch.setattr(report_service, "det_certify", broken)
        result = run(RunConfig(command="det", r=7, format="json"))
        assert result.exit_code == EXIT_MISMATCH
        assert json.loads(result.document)["payload"]["details"] == {"bareiss": [1]}

    def test_writes_output(self, tmp_path):
        out = tmp_path / "nested" / "det.json"
        result = run(RunConfig(command="det", r=2, format="json", output_path=out))
        assert result.exit_code == EXIT_OK
        assert out.read_text() == result.document

    def test_unwritable_output(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        result = run(RunConfig(command="det", r=2, format="json", output_path=blocker / "det.json"))
        assert result.exit_code == EXIT_USAGE
