"""
Report service: run configuration, document emitters and the torsion report.

Every command produces a document with a ``meta`` header and a ``payload``;
identical configurations give byte-identical output.
"""

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import settings
from core.finite_field import prime_power
from core.matrix import MatrixPoly
from core.polynomial import PolyZ
from services.case_tables import audit_printed_table
from services.cusp_service import (
    CuspServiceError,
    FieldParams,
    enumerate_closed_points,
    enumerate_cusp_classes,
)
from services.delta_quotient_service import (
    DeltaQuotientError,
    g_map,
    generator_divisor,
    generator_orders,
    integer_exponents,
    sigma_oracle,
)
from services.divisor_service import (
    DivisorServiceError,
    build_C,
    build_D0,
    build_Dr1,
    weighted_degree,
)
from services.injectivity_service import (
    MIN_REDUCTION_R,
    DeltaMatrix,
    DetCertificate,
    InjectivityError,
    InjectivityService,
    MatrixVariant,
    VerificationMismatch,
    bold_determinant,
    build_M_delta,
    det_certify,
    row_sigmas,
    step1_reduce,
    step2_reduce,
)

logger = logging.getLogger(__name__)

TOOL_VERSION = "1.0.0"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2


class ReportServiceError(Exception):
    """Raised for unusable run configurations and unwritable outputs."""
    pass


class Command(str, Enum):
    CUSPS = "cusps"
    DIVISORS = "divisors"
    GMAP = "gmap"
    SIGMA = "sigma"
    MATRIX = "matrix"
    REDUCE = "reduce"
    DET = "det"
    VERIFY = "verify"
    REPORT = "report"


class RunConfig(BaseModel):
    """
    One CLI invocation.

    Example:
        >>> config = RunConfig(command="det", q=3, deg_p=1, r=6)
        >>> run(config).exit_code
        0
    """
    model_config = ConfigDict(frozen=True)

    command: Command
    q: int = Field(default=3, ge=2)
    deg_p: int = Field(default=1, ge=1)
    r: int = Field(default=2, ge=1)
    mode: Literal["symbolic", "numeric"] = "symbolic"
    format: Literal["json", "csv", "text"] = Field(default_factory=lambda: settings.DEFAULT_FORMAT)
    at: Optional[int] = None
    output_path: Optional[Path] = None
    variant: Literal["plain", "bold"] = "plain"

    @field_validator("q")
    @classmethod
    def _q_is_prime_power(cls, v: int) -> int:
        prime_power(v)
        return v

    @model_validator(mode="after")
    def _check_command(self) -> "RunConfig":
        if self.r > settings.MAX_R:
            raise ValueError(f"r={self.r} exceeds CUSPFORGE_MAX_R={settings.MAX_R}")
        if self.command == Command.REDUCE and self.r < MIN_REDUCTION_R:
            raise ValueError(f"reduce needs r >= {MIN_REDUCTION_R}, got r={self.r}")
        matrix_commands = (
            Command.SIGMA, Command.MATRIX, Command.DET, Command.DIVISORS, Command.GMAP, Command.VERIFY,
        )
        if self.command in matrix_commands and self.r < 2:
            raise ValueError(f"{self.command.value} needs r >= 2, got r={self.r}")
        if self.format == "csv":
            if self.mode == "symbolic":
                raise ValueError("csv output is numeric; use --mode numeric or json/text")
            if self.at is None:
                raise ValueError("csv output needs --at to evaluate polynomials")
        return self

    def params(self) -> FieldParams:
        return FieldParams(q=self.q, deg_p=self.deg_p, r=self.r)

    def meta(self) -> Dict[str, Any]:
        return {
            "tool": "cuspforge",
            "version": TOOL_VERSION,
            "command": self.command.value,
            "q": self.q,
            "deg_p": self.deg_p,
            "r": self.r,
            "mode": self.mode,
            "at": self.at,
        }


@dataclass
class RunResult:
    exit_code: int
    document: str
    error: Optional[str] = None


# -- matrix codec ----------------------------------------------------------------


def matrix_payload(M: DeltaMatrix, at: Optional[int] = None) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "variant": M.variant.value,
        "r": M.r,
        "entries": [[x.to_list() for x in row] for row in M.body.to_rows()],
    }
    if at is not None:
        payload["at"] = at
        payload["values"] = M.body.evaluate(at)
    if M.provenance:
        payload["provenance"] = list(M.provenance)
    if M.row_scales:
        payload["row_scales"] = [c.to_list() for c in M.row_scales]
    return payload


def emit_matrix(M: DeltaMatrix, format: str = "json", at: Optional[int] = None) -> str:
    """
    Serialize a delta-bar matrix.

    JSON carries polynomials as ascending coefficient arrays; csv evaluates
    every entry at P = at; text pretty-prints the polynomials.
    """
    if format == "json":
        return json.dumps(matrix_payload(M, at), sort_keys=True)
    if format == "csv":
        if at is None:
            raise ReportServiceError("csv output needs an evaluation point")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(M.body.evaluate(at))
        return buf.getvalue()
    if format == "text":
        header = f"{M.variant.value} M_delta, r={M.r}"
        return header + "\n" + str(M.body) + "\n"
    raise ReportServiceError(f"unknown format {format!r}")


def parse_matrix(document: Union[str, Dict[str, Any]]) -> DeltaMatrix:
    """Inverse of emit_matrix for JSON documents."""
    try:
        data = json.loads(document) if isinstance(document, str) else document
        rows = [[PolyZ(tuple(c)) for c in row] for row in data["entries"]]
        body = MatrixPoly.from_rows(rows) if rows else MatrixPoly(0, 0, ())
        return DeltaMatrix(
            MatrixVariant(data["variant"]),
            int(data["r"]),
            body,
            tuple(data.get("provenance", ())),
            tuple(PolyZ(tuple(c)) for c in data.get("row_scales", ())),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ReportServiceError(f"not a matrix document: {e}") from e


# -- torsion report --------------------------------------------------------------


@dataclass
class TorsionReport:
    """Cuspidal class group, determinant certificate and the torsion conclusion."""
    params: FieldParams
    generators: List[Tuple[str, int]]
    certificate: Optional[DetCertificate]
    torsion_factors: List[int] = field(default_factory=list)
    statements: List[str] = field(default_factory=list)

    def to_dict(self, mode: str = "symbolic") -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "cuspidal_group": [{"generator": tag, "order": order} for tag, order in self.generators],
            "torsion_factors": self.torsion_factors,
            "statements": self.statements,
            "abs_p": self.params.abs_p,
        }
        if self.certificate is not None:
            out["certificate"] = certificate_payload(self.certificate, self.params, mode)
        return out


def _group_text(orders: List[int]) -> str:
    return " x ".join(f"Z/{n}Z" for n in orders) if orders else "0"


def torsion_report(params: FieldParams) -> TorsionReport:
    """
    Cuspidal class group decomposition, determinant certificate and torsion statement.

    For r = 1 the group is cyclic of order N(p), generated by P_0 - P_1; no
    certificate is produced.
    """
    gens = [(g.tag, g.order) for g in generator_orders(params)]
    report = TorsionReport(params, gens, None)
    report.statements.append(f"cuspidal class group ~ {_group_text([o for _, o in gens])}")
    if params.r == 1:
        report.statements.append(f"r = 1: cyclic of order N(p) = {params.n_order}")
        return report
    report.certificate = det_certify(params)
    report.torsion_factors = [params.q - 1] * params.r
    q = params.q
    report.statements.append(
        f"for primes l not dividing q(q^2-1) = {q * (q * q - 1)}, the l-primary rational "
        f"torsion of the generalised Jacobian is trivial"
    )
    report.statements.append(
        f"conditional on Conjecture C: rational torsion ~ {_group_text(report.torsion_factors)}"
    )
    if params.abs_p_is_two:
        report.statements.append(
            f"|p| = 2: det(M_delta) evaluates to {report.certificate.value_at(2)}, still nonzero"
        )
    return report


# -- payload builders --------------------------------------------------------------


def _poly(p: PolyZ, mode: str, at: int) -> Any:
    return p.to_list() if mode == "symbolic" else p.evaluate(at)


def certificate_payload(cert: DetCertificate, params: FieldParams, mode: str) -> Dict[str, Any]:
    at = params.abs_p
    return {
        "det": _poly(cert.det, mode, at),
        "f": _poly(cert.f, mode, at),
        "sign": cert.sign,
        "method": cert.method,
        "engines": list(cert.engines),
        "det_at_abs_p": cert.value_at(at),
        "bold_det": _poly(bold_determinant(params, cert.det), mode, at),
        "abs_p_two": cert.abs_p_two,
    }


def _fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _cusps_payload(params: FieldParams) -> Dict[str, Any]:
    points = enumerate_closed_points(params)
    payload: Dict[str, Any] = {
        "closed_points": [
            {
                "index": p.index,
                "name": p.name,
                "d_exp": p.d_exp,
                "degree": p.degree,
                "residue_field": p.residue_field.tag,
            }
            for p in points
        ],
        "total_cusps": sum(p.degree for p in points),
    }
    try:
        classes = enumerate_cusp_classes(params)
        payload["enumerated_classes"] = {str(j): len(v) for j, v in classes.items()}
    except CuspServiceError as e:
        logger.info(f"Skipping exhaustive enumeration: {e}")
    return payload


def _divisors_payload(params: FieldParams) -> Dict[str, Any]:
    divisors = {f"C_{i}": build_C(i, params) for i in range(params.r)}
    divisors["D_0"] = build_D0(params)
    divisors[f"D_{params.r - 1}"] = build_Dr1(params)
    return {
        name: {"coeffs": list(D.coeffs), "weighted_degree": weighted_degree(D, params)}
        for name, D in divisors.items()
    }


def _gmap_payload(params: FieldParams) -> Dict[str, Any]:
    out = {}
    for gen in generator_orders(params):
        D = generator_divisor(gen, params)
        E = integer_exponents(D, gen.order, params)
        out[gen.tag] = {
            "order": gen.order,
            "r_exps": [_fraction(x) for x in g_map(D, params).r_exps],
            "cleared": list(E),
            "sigma": list(sigma_oracle(E, params)),
        }
    return out


def _sigma_payload(params: FieldParams, mode: str, at: int) -> Dict[str, Any]:
    return {
        "rows": [
            {
                "generator": s.generator_tag,
                "entries": [_poly(x, mode, at) for x in s.entries],
                "tensor_denom": _poly(s.tensor_denom, mode, at),
                "tensor_scale": s.tensor_scale,
                "case": s.case,
            }
            for s in row_sigmas(params)
        ]
    }


def _verify_payload(params: FieldParams, mode: str) -> Tuple[Dict[str, Any], bool]:
    report = InjectivityService(params).verify()
    payload: Dict[str, Any] = {
        "passed": report.passed,
        "oracle_mismatches": report.oracle_mismatches,
        "certificate": certificate_payload(report.certificate, params, mode),
        "claims": [
            {
                "claim": c.claim,
                "mismatches": [m.to_dict() for m in c.mismatches],
                "corner": c.corner.to_list() if c.corner is not None else None,
                "corner_residue": c.corner_residue,
            }
            for c in report.claims
        ],
        "table_audit": audit_printed_table(params.r).mismatches,
    }
    if report.structure is not None:
        payload["minor_structure_passed"] = report.structure.passed
    if report.reduction_preserves_det is not None:
        payload["reduction_preserves_det"] = report.reduction_preserves_det
    return payload, report.passed


def _render(config: RunConfig, payload: Any) -> str:
    if config.format == "json":
        return json.dumps({"meta": config.meta(), "payload": payload}, sort_keys=True, indent=2) + "\n"
    if config.format == "text":
        lines = [f"# cuspforge {config.command.value} ({config.params().label()})"]
        lines.extend(_text_lines(payload))
        return "\n".join(lines) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for key, value in sorted(_flatten(payload)):
        writer.writerow([key, value])
    return buf.getvalue()


def _flatten(payload: Any, prefix: str = "") -> List[Tuple[str, Any]]:
    if isinstance(payload, dict):
        items: List[Tuple[str, Any]] = []
        for k, v in payload.items():
            items.extend(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return items
    if isinstance(payload, list) and any(isinstance(v, (dict, list)) for v in payload):
        items = []
        for i, v in enumerate(payload):
            items.extend(_flatten(v, f"{prefix}[{i}]"))
        return items
    return [(prefix, json.dumps(payload) if isinstance(payload, list) else payload)]


def _text_lines(payload: Any) -> List[str]:
    if isinstance(payload, str):
        return payload.rstrip("\n").split("\n")
    return [f"{key}: {value}" for key, value in _flatten(payload)]


# -- entry point -------------------------------------------------------------------


def _payload(config: RunConfig) -> Tuple[Any, bool]:
    params = config.params()
    mode = config.mode
    at = config.at if config.at is not None else params.abs_p
    cmd = config.command
    if cmd == Command.CUSPS:
        return _cusps_payload(params), True
    if cmd == Command.DIVISORS:
        return _divisors_payload(params), True
    if cmd == Command.GMAP:
        return _gmap_payload(params), True
    if cmd == Command.SIGMA:
        return _sigma_payload(params, mode, at), True
    if cmd == Command.MATRIX:
        M = build_M_delta(params, MatrixVariant(config.variant))
        if config.format == "text":
            return emit_matrix(M, "text"), True
        if config.format == "csv":
            return {"values": M.body.evaluate(at)}, True
        return matrix_payload(M, at if mode == "numeric" else None), True
    if cmd == Command.REDUCE:
        H = step1_reduce(build_M_delta(params))
        h = step2_reduce(H)
        if config.format == "text":
            return emit_matrix(H, "text") + "\n" + emit_matrix(h, "text"), True
        numeric_at = at if mode == "numeric" else None
        return {"H": matrix_payload(H, numeric_at), "h": matrix_payload(h, numeric_at)}, True
    if cmd == Command.DET:
        return certificate_payload(det_certify(params), params, mode), True
    if cmd == Command.VERIFY:
        return _verify_payload(params, mode)
    return torsion_report(params).to_dict(mode), True


def run(config: RunConfig) -> RunResult:
    """
    Execute one command and emit its document.

    Returns:
        RunResult with exit code 0 on success, 2 when the mathematics
        disagrees with an expected identity and 1 on usage errors
    """
    logger.info(f"🚀 Running {config.command.value} for {config.params().label()}")
    try:
        payload, passed = _payload(config)
    except VerificationMismatch as e:
        logger.error(f"❌ Verification mismatch: {e}", exc_info=True)
        document = _render(config, {"error": str(e), "details": _jsonable(e.details)})
        return _write(config, RunResult(EXIT_MISMATCH, document, str(e)))
    except (CuspServiceError, DivisorServiceError, DeltaQuotientError, InjectivityError, ReportServiceError) as e:
        logger.error(f"❌ {config.command.value} failed: {e}", exc_info=True)
        return RunResult(EXIT_USAGE, "", str(e))
    document = _render(config, payload)
    return _write(config, RunResult(EXIT_OK if passed else EXIT_MISMATCH, document))


def _jsonable(details: Dict[str, Any]) -> Dict[str, Any]:
    return json.loads(json.dumps(details, default=str))


def _write(config: RunConfig, result: RunResult) -> RunResult:
    if config.output_path is None:
        return result
    try:
        config.output_path.parent.mkdir(parents=True, exist_ok=True)
        config.output_path.write_text(result.document)
        logger.info(f"💾 Saved to {config.output_path}")
    except OSError as e:
        logger.error(f"Cannot write {config.output_path}: {e}", exc_info=True)
        return RunResult(EXIT_USAGE, result.document, f"cannot write output: {e}")
    return result
