from typing import Any, Dict

from fastapi import APIRouter, Depends

from app.dependencies import get_service, http_errors
from app.models import CaseRequest
from app.service import GroupService
from ggt.cases import CASE_IDS

router = APIRouter(prefix="/cases", tags=["cases"])


@router.get("")
def list_cases():
    return {"cases": list(CASE_IDS)}


@router.post("/run")
def run(request: CaseRequest, service: GroupService = Depends(get_service)) -> Dict[str, Any]:
    with http_errors():
        return service.run(request)
