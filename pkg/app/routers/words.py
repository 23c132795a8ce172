from fastapi import APIRouter, HTTPException, status
from fastapi.concurrency import run_in_threadpool
import logging
from ..models import PresentationRequest, ReportResponse, WordPairRequest
from ..services import reports
from ..dependencies import resolve_presentation
from ..utils import WorkbenchException

logger = logging.getLogger(__name__)
router = APIRouter()

@router.post("/presentation/check", response_model=ReportResponse)
async def check_presentation(request: PresentationRequest):
    """Validate a presentation and list its complement rules."""
    try:
        p = resolve_presentation(request.presentation, degenerate_ok=True)
        return await run_in_threadpool(reports.presentation_check, p)
    except HTTPException:
        raise
    except WorkbenchException as e:
        raise HTTPException(status_code=e.status_code, detail=e.message)
    except Exception as e:
        logger.error(f"Presentation check error: {str(e)}")
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail=f"Presentation check failed: {str(e)}"
        )

@router.post("/word/equal", response_model=ReportResponse)
async def word_equal(request: WordPairRequest):
    """
    Decide whether two words are equal in the presented monoid.

    Confluent one-relator presentations are decided by rewriting; otherwise a
    bidirectional search runs until the budget and may answer "unknown".
    """
    try:
        p = resolve_presentation(request.presentation)
        logger.info(f"Word equality {request.x!r} = {request.y!r}")
        return await run_in_threadpool(reports.word_equal, p, request.x, request.y, request.budget)
    except HTTPException:
        raise
    except WorkbenchException as e:
        raise HTTPException(status_code=e.status_code, detail=e.message)
    except Exception as e:
        logger.error(f"Word equality error: {str(e)}")
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail=f"Word equality failed: {str(e)}"
        )
