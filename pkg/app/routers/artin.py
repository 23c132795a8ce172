from fastapi import APIRouter, HTTPException, status
from fastapi.concurrency import run_in_threadpool
import logging
from ..models import ArtinCountRequest, ArtinDeltaRequest, ArtinEquivRequest, ArtinWordRequest, CoxeterSpec, ReportResponse
from ..services import reports
from ..utils import WorkbenchException

logger = logging.getLogger(__name__)
router = APIRouter()

def _system(spec: CoxeterSpec):
    try:
        return reports.coxeter_system(spec.type, spec.matrix, spec.generators)
    except WorkbenchException as e:
        raise HTTPException(status_code=e.status_code, detail=e.message)

async def _run(label: str, func, *args):
    try:
        return await run_in_threadpool(func, *args)
    except WorkbenchException as e:
        raise HTTPException(status_code=e.status_code, detail=e.message)
    except Exception as e:
        logger.error(f"{label} error: {str(e)}")
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail=f"{label} failed: {str(e)}"
        )

@router.post("/artin/normal-form", response_model=ReportResponse)
async def normal_form(request: ArtinWordRequest):
    """Left-greedy normal form with descent sets."""
    return await _run("Normal form", reports.artin_nf, _system(request.system), request.word)

@router.post("/artin/equivalence", response_model=ReportResponse)
async def subset_equivalence(request: ArtinEquivRequest):
    """Search a normal form inside P_red(T) linking the source and target descent sets."""
    return await _run("Equivalence search", reports.artin_equiv, _system(request.system),
                      request.subset, request.source, request.target)

@router.post("/artin/count-nf", response_model=ReportResponse)
async def count_normal_forms(request: ArtinCountRequest):
    return await _run("Normal form count", reports.artin_count_nf, _system(request.system), request.n)

@router.post("/artin/delta", response_model=ReportResponse)
async def longest_element(request: ArtinDeltaRequest):
    return await _run("Delta", reports.artin_delta, _system(request.system), request.subset)
