from fastapi import APIRouter, HTTPException, status
from fastapi.concurrency import run_in_threadpool
import logging
from ..models import GraphRequest, ReportResponse
from ..services import reports
from ..dependencies import resolve_presentation
from ..utils import WorkbenchException

logger = logging.getLogger(__name__)
router = APIRouter()

def _build(request: GraphRequest):
    p = resolve_presentation(request.presentation) if request.presentation else None
    return reports.build_graph(
        request.mode, p, request.family, request.m, (request.p, request.q), request.w,
        pruned=request.pruned, all_layers=request.all_layers, extra_loops=request.extra_loops,
    )

@router.post("/graph/model", response_model=ReportResponse)
async def graph_model(request: GraphRequest):
    """
    Build a finite graph model.

    ``builtin`` uses the explicit dihedral/torus vertex lists; ``case1``,
    ``case2`` and ``nonreversible`` run the generic constructions on a
    presentation (or on the family's presentation).
    """
    try:
        graph = await run_in_threadpool(_build, request)
        return reports.graph_model_report(graph, dot=request.dot)
    except HTTPException:
        raise
    except WorkbenchException as e:
        raise HTTPException(status_code=e.status_code, detail=e.message)
    except Exception as e:
        logger.error(f"Graph model error: {str(e)}")
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail=f"Graph model failed: {str(e)}"
        )

@router.post("/graph/k-theory", response_model=ReportResponse)
async def graph_k_theory(request: GraphRequest):
    """K0 and K1 of the graph algebra: coker and ker of I - Aᵗ."""
    try:
        graph = await run_in_threadpool(_build, request)
        return await run_in_threadpool(reports.graph_k_report, graph)
    except HTTPException:
        raise
    except WorkbenchException as e:
        raise HTTPException(status_code=e.status_code, detail=e.message)
    except Exception as e:
        logger.error(f"Graph K-theory error: {str(e)}")
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail=f"Graph K-theory failed: {str(e)}"
        )
