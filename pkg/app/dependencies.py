from contextlib import contextmanager
from functools import lru_cache
from typing import Iterator

from fastapi import HTTPException

from app.service import GroupService
from ggt.errors import GGTError, NotInBall


@lru_cache()
def get_service() -> GroupService:
    return GroupService()


@contextmanager
def http_errors() -> Iterator[None]:
    """Translate toolkit errors into HTTP responses."""
    try:
        yield
    except NotInBall as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc
    except GGTError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
