import logging
import threading
from collections import OrderedDict
from typing import Any, Dict, Optional, Tuple

from app.models import (
    BrooksRequest,
    BrooksResponse,
    CaseRequest,
    DefectRequest,
    DhatBallRequest,
    DhatRequest,
    EqualityRequest,
    EqualityResponse,
    GroupSelector,
    MalnormalRequest,
    StallingsRequest,
    StallingsResponse,
)
from ggt.cases import case_spec, relative_setting, run_case
from ggt.cayley import build_ball
from ggt.config import Settings, get_settings
from ggt.coned import ConedGraph, build_coned
from ggt.fpgroup import Presentation, equality_oracle, free_presentation, one_relator_presentation, surface_presentation
from ggt.freesub import automaton_for, malnormality_scan
from ggt.quasi import PairSpec, brooks, brooks_eval, defect_estimate, homogenize
from ggt.words import Word

logger = logging.getLogger(__name__)


def _presentation(group: GroupSelector) -> Presentation:
    if group.genus is not None:
        return surface_presentation(group.genus, group.orientable)
    if group.relator:
        return one_relator_presentation(group.rank, group.relator)
    return free_presentation(group.rank)


class GroupService:
    """Shared state for the HTTP layer: a bounded cache of coned graphs."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self._coned: "OrderedDict[Tuple[str, int], ConedGraph]" = OrderedDict()
        self._lock = threading.Lock()

    # ==================== Cache ====================

    def coned(self, setting: str, radius: int) -> ConedGraph:
        key = (setting, radius)
        with self._lock:
            if key in self._coned:
                self._coned.move_to_end(key)
                return self._coned[key]
        p, sub, side = relative_setting(setting)
        coned = build_coned(build_ball(p, radius, side_a=side), sub)
        with self._lock:
            self._coned[key] = coned
            while len(self._coned) > self.settings.cache_size:
                evicted, _ = self._coned.popitem(last=False)
                logger.debug("evicted coned graph %s", evicted)
        return coned

    @property
    def cached(self) -> int:
        return len(self._coned)

    # ==================== Groups ====================

    def equal(self, request: EqualityRequest) -> EqualityResponse:
        p = _presentation(request.group)
        verdict = equality_oracle(Word.parse(request.u), Word.parse(request.v), p, strategy=request.strategy)
        return EqualityResponse(**verdict.to_dict())

    def stallings(self, request: StallingsRequest) -> StallingsResponse:
        aut = automaton_for(request.generators, request.rank)
        contains = aut.contains(Word.parse(request.word)) if request.word is not None else None
        return StallingsResponse(automaton=aut.to_dict(), contains=contains)

    def malnormal(self, request: MalnormalRequest) -> Dict[str, Any]:
        aut = automaton_for(request.generators, request.rank)
        return malnormality_scan(aut, request.radius, request.cap).to_dict()

    # ==================== Relative Metric ====================

    def dhat(self, request: DhatRequest) -> Dict[str, Any]:
        return self.coned(request.setting, request.radius).dhat(Word.parse(request.h)).to_dict()

    def dhat_ball(self, request: DhatBallRequest) -> Dict[str, Any]:
        return self.coned(request.setting, request.radius).dhat_ball(request.r, request.horizon).to_dict()

    # ==================== Quasimorphisms ====================

    def brooks(self, request: BrooksRequest) -> BrooksResponse:
        value = brooks_eval(request.pattern, request.word)
        homogenized = None
        if request.homogenize:
            homogenized = str(homogenize(brooks(request.pattern), request.word, request.homogenize))
        return BrooksResponse(value=value, homogenized=homogenized)

    def defect(self, request: DefectRequest) -> Dict[str, Any]:
        mode = "exhaustive" if request.exhaustive else "sampled"
        pairs = PairSpec(mode, request.max_length, count=request.samples, seed=request.seed)
        return defect_estimate(brooks(request.pattern), pairs).to_dict()

    # ==================== Cases ====================

    def run(self, request: CaseRequest) -> Dict[str, Any]:
        report = run_case(case_spec(request.case, seed=request.seed, **request.overrides))
        data = report.model_dump(mode="json")
        data["passed"] = report.passed
        return data
