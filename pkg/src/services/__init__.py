"""Services for cuspforge."""

from services.cusp_service import CuspServiceError, FieldParams
from services.divisor_service import CuspidalDivisor, DivisorServiceError
from services.delta_quotient_service import DeltaQuotientError

from services.injectivity_service import (
    InjectivityError,
    InjectivityService,
    MatrixVariant,
    VerificationMismatch,
)

from services.report_service import (
    ReportServiceError,
    RunConfig,
    run,
)

__all__ = [
    "FieldParams",
    "CuspServiceError",
    "CuspidalDivisor",
    "DivisorServiceError",
    "DeltaQuotientError",
    "InjectivityError",
    "InjectivityService",
    "MatrixVariant",
    "VerificationMismatch",
    "ReportServiceError",
    "RunConfig",
    "run",
]
