from typing import Any, Dict

from fastapi import APIRouter, Depends

from app.dependencies import get_service, http_errors
from app.models import EqualityRequest, EqualityResponse, MalnormalRequest, StallingsRequest, StallingsResponse
from app.service import GroupService

router = APIRouter(prefix="/groups", tags=["groups"])


@router.post("/equal", response_model=EqualityResponse)
def equal(request: EqualityRequest, service: GroupService = Depends(get_service)):
    with http_errors():
        return service.equal(request)


@router.post("/stallings", response_model=StallingsResponse)
def stallings(request: StallingsRequest, service: GroupService = Depends(get_service)):
    with http_errors():
        return service.stallings(request)


@router.post("/malnormal")
def malnormal(request: MalnormalRequest, service: GroupService = Depends(get_service)) -> Dict[str, Any]:
    """
    Scan H ∩ xHx⁻¹ for reduced x outside H up to ``radius``.
    """
    with http_errors():
        return service.malnormal(request)
