from typing import Any, Dict

from fastapi import APIRouter, Depends

from app.dependencies import get_service, http_errors
from app.models import BrooksRequest, BrooksResponse, DefectRequest
from app.service import GroupService

router = APIRouter(prefix="/quasi", tags=["quasi"])


@router.post("/brooks", response_model=BrooksResponse)
def brooks(request: BrooksRequest, service: GroupService = Depends(get_service)):
    with http_errors():
        return service.brooks(request)


@router.post("/defect")
def defect(request: DefectRequest, service: GroupService = Depends(get_service)) -> Dict[str, Any]:
    with http_errors():
        return service.defect(request)
