from typing import Any, Dict

from fastapi import APIRouter, Depends

from app.dependencies import get_service, http_errors
from app.models import DhatBallRequest, DhatRequest
from app.service import GroupService

router = APIRouter(prefix="/coned", tags=["coned"])


@router.post("/dhat")
def dhat(request: DhatRequest, service: GroupService = Depends(get_service)) -> Dict[str, Any]:
    with http_errors():
        return service.dhat(request)


@router.post("/dhat-ball")
def dhat_ball(request: DhatBallRequest, service: GroupService = Depends(get_service)) -> Dict[str, Any]:
    with http_errors():
        return service.dhat_ball(request)


@router.get("/cache")
def cache(service: GroupService = Depends(get_service)) -> Dict[str, Any]:
    return {"cached": service.cached, "capacity": service.settings.cache_size}
