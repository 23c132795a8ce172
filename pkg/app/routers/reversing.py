from fastapi import APIRouter, HTTPException, status
from fastapi.concurrency import run_in_threadpool
from typing import Any, Callable
import logging
from ..models import (
    DividesRequest, GarsideWRequest, PresentationRequest, ReportResponse, ReverseRequest,
    ReversibleRequest, WordPairRequest,
)
from ..services import reports
from ..dependencies import resolve_presentation
from ..utils import WorkbenchException

logger = logging.getLogger(__name__)
router = APIRouter()

async def _run(label: str, func: Callable[..., Any], *args) -> Any:
    try:
        return await run_in_threadpool(func, *args)
    except HTTPException:
        raise
    except WorkbenchException as e:
        raise HTTPException(status_code=e.status_code, detail=e.message)
    except Exception as e:
        logger.error(f"{label} error: {str(e)}")
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail=f"{label} failed: {str(e)}"
        )

def _presentation(request: PresentationRequest):
    try:
        return resolve_presentation(request.presentation)
    except WorkbenchException as e:
        raise HTTPException(status_code=e.status_code, detail=e.message)

@router.post("/reverse", response_model=ReportResponse)
async def reverse_word(request: ReverseRequest):
    """Right reversing of a signed word, optionally with the full trace."""
    p = _presentation(request)
    return await _run("Reversing", reports.reverse_word, p, request.word, request.trace, request.budget)

@router.post("/lcm", response_model=ReportResponse)
async def right_lcm(request: WordPairRequest):
    """Right least common multiple of two words."""
    p = _presentation(request)
    return await _run("LCM", reports.lcm_report, p, request.x, request.y, request.budget)

@router.post("/divides", response_model=ReportResponse)
async def left_divides(request: DividesRequest):
    """Whether x left-divides z, with the quotient when it does."""
    p = _presentation(request)
    return await _run("Divisibility", reports.divides_report, p, request.x, request.z, request.budget)

@router.post("/cube", response_model=ReportResponse)
async def cube_condition(request: PresentationRequest):
    p = _presentation(request)
    return await _run("Cube condition", reports.cube_report, p, request.budget)

@router.post("/homogeneity", response_model=ReportResponse)
async def homogeneity(request: PresentationRequest):
    p = _presentation(request)
    return await _run("Homogeneity", reports.homogeneity_report, p)

@router.post("/reversible", response_model=ReportResponse)
async def left_reversible(request: ReversibleRequest):
    p = _presentation(request)
    return await _run("Reversibility", reports.reversible_report, p, request.bound, request.budget)

@router.post("/garside-w", response_model=ReportResponse)
async def garside_element(request: GarsideWRequest):
    """Shortest Garside-like element within the length bound."""
    p = _presentation(request)
    return await _run("Garside search", reports.garside_w_report, p, request.length_bound, request.budget)
