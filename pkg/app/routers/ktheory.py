from fastapi import APIRouter, HTTPException, status
from fastapi.concurrency import run_in_threadpool
import logging
from ..models import BoundaryRequest, PipelineRequest, ReportResponse
from ..services import reports
from ..services.kpipeline import PipelineCase
from ..dependencies import resolve_coefficients, resolve_presentation
from ..utils import ValidationError, WorkbenchException

logger = logging.getLogger(__name__)
router = APIRouter()

def _pipeline(request: PipelineRequest):
    case = PipelineCase.build(request.case, request.m, request.p, request.q)
    act = resolve_coefficients(request.coeff)
    return reports.ktheory_pipeline(case, act, request.hints, request.budget)

def _boundary(request: BoundaryRequest):
    p = resolve_presentation(request.presentation) if request.presentation else None
    if p is None and request.generators is None and not request.infinite:
        raise ValidationError("give generators, infinite or a presentation")
    return reports.ktheory_boundary(request.generators, p, request.infinite)

@router.post("/ktheory/pipeline", response_model=ReportResponse)
async def crossed_product_k_theory(request: PipelineRequest):
    """
    K-theory of the boundary crossed product for a dihedral or torus case.

    The report carries every intermediate matrix; ``determined`` is False
    when an extension is left with several candidates.
    """
    try:
        logger.info(f"K-theory pipeline for {request.case} with {request.coeff if isinstance(request.coeff, str) else 'inline'} coefficients")
        return await run_in_threadpool(_pipeline, request)
    except HTTPException:
        raise
    except WorkbenchException as e:
        raise HTTPException(status_code=e.status_code, detail=e.message)
    except Exception as e:
        logger.error(f"K-theory pipeline error: {str(e)}")
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail=f"K-theory pipeline failed: {str(e)}"
        )

@router.post("/ktheory/boundary", response_model=ReportResponse)
async def boundary_quotient(request: BoundaryRequest):
    try:
        return _boundary(request)
    except WorkbenchException as e:
        raise HTTPException(status_code=e.status_code, detail=e.message)
