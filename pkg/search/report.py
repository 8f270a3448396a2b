"""Search reports, isomorphism classes of optimal pairs and verdicts against predicted optima."""

import logging
from typing import Iterable, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from core.canonical import PairCanonicalForm, canonicalize_pair
from core.universe import Family, Universe

logger = logging.getLogger(__name__)

VerdictStatus = Literal[
    "match",
    "extra_classes",
    "missing_classes",
    "extra_and_missing",
    "bound_mismatch",
    "exploratory",
    "engine_disagreement",
]


class ClassRecord(BaseModel):
    """One isomorphism class of pairs, shown through its canonical representative."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    first: List[List[int]] = Field(alias="F")
    second: List[List[int]] = Field(alias="G")

    @classmethod
    def from_canonical(cls, form: PairCanonicalForm, universe: Universe) -> "ClassRecord":
        return cls(
            first=[universe.unrank(r).elements() for r in form.first],
            second=[universe.unrank(r).elements() for r in form.second],
        )

    @property
    def size(self) -> int:
        return len(self.first) + len(self.second)


class Verdict(BaseModel):
    status: VerdictStatus
    agreed: int = 0
    extra: List[ClassRecord] = []
    missing: List[ClassRecord] = []
    note: str = ""

    @property
    def discrepancy(self) -> bool:
        return self.status not in ("match", "exploratory")


class SearchReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    m: int
    k: int
    t: int
    engine: str
    objective: str
    optimum: int
    num_optimal_pairs: int
    bound: Optional[int] = None
    bound_applicable: bool = False
    classes: List[ClassRecord] = []
    verdict: Optional[Verdict] = None
    elapsed_ms: float = 0.0
    seed: Optional[int] = None
    raw_witnesses: Optional[List[ClassRecord]] = None

    def to_json_dict(self) -> dict:
        return self.model_dump(mode="json", by_alias=True, exclude_none=True)


def classify_pairs(pairs: Iterable[Tuple[Family, Family]]) -> List[PairCanonicalForm]:
    """Distinct canonical forms, sorted"""
    forms = {canonicalize_pair(F, G) for F, G in pairs}
    return sorted(forms, key=PairCanonicalForm.as_key)


def classify_and_verify(
    report: SearchReport,
    forms: Sequence[PairCanonicalForm],
    universe: Universe,
    predicted: Optional[Sequence[Tuple[Family, Family]]] = None,
) -> Verdict:
    """Compare observed classes with predicted extremal pairs; None means no class claim"""
    if not report.bound_applicable:
        verdict = Verdict(status="exploratory", note=f"observed optimum {report.optimum}; no theorem applies")
        report.verdict = verdict
        return verdict

    if report.bound is not None and report.optimum != report.bound:
        verdict = Verdict(
            status="bound_mismatch",
            note=f"observed optimum {report.optimum} differs from bound {report.bound}",
        )
        logger.warning(f"Bound mismatch at (m={report.m}, k={report.k}, t={report.t}): {verdict.note}")
        report.verdict = verdict
        return verdict

    if predicted is None:
        verdict = Verdict(status="match", agreed=len(forms), note="value matches bound; no class claim")
        report.verdict = verdict
        return verdict

    observed = {form.as_key(): form for form in forms}
    expected = {}
    for F, G in predicted:
        form = canonicalize_pair(F, G)
        expected[form.as_key()] = form

    extra = [ClassRecord.from_canonical(observed[key], universe) for key in sorted(observed.keys() - expected.keys())]
    missing = [ClassRecord.from_canonical(expected[key], universe) for key in sorted(expected.keys() - observed.keys())]
    agreed = len(observed.keys() & expected.keys())

    if extra and missing:
        status = "extra_and_missing"
    elif extra:
        status = "extra_classes"
    elif missing:
        status = "missing_classes"
    else:
        status = "match"

    verdict = Verdict(status=status, agreed=agreed, extra=extra, missing=missing)
    if verdict.discrepancy:
        logger.warning(
            f"Verdict {status} at (m={report.m}, k={report.k}, t={report.t}): "
            f"{len(extra)} extra, {len(missing)} missing"
        )
    report.verdict = verdict
    return verdict
