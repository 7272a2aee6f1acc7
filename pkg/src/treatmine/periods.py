"""Treatment-period identification from prescription histories.

Each prescription date accumulates a weighted count of indication-change
events: newly delivered drugs, drugs redelivered with a changed dosage, and
recently stopped drugs, weighted by their class in the drug knowledge base.
Period boundaries are then the dates with the largest per-date score
increments.

Two scoring quirks are kept as designed rather than "fixed": a drug that is
redelivered after its end date while still tracked as recently-delivered
scores nothing unless its dosage changed, and a drug whose end date passes
after the final prescription date is never scored as stopped.  Both follow
from updating the recently-delivered set only on prescription dates.
"""

from __future__ import annotations

import csv
from bisect import bisect_right
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from .drugkb import DrugKnowledgeBase, normalize_name
from .errors import ParseError


@dataclass(frozen=True)
class DrugOrder:
    name: str
    startdate: date
    enddate: date
    dosage: str

    def __post_init__(self):
        if self.startdate > self.enddate:
            raise ValueError(
                f"order {self.name!r}: startdate {self.startdate} after "
                f"enddate {self.enddate}")


@dataclass
class PrescriptionHistory:
    patient_id: str
    orders: tuple[DrugOrder, ...]
    dates: tuple[date, ...] = field(init=False)

    def __post_init__(self):
        self.orders = tuple(self.orders)
        if not self.orders:
            raise ValueError(f"patient {self.patient_id!r} has no orders")
        self.dates = tuple(sorted({o.startdate for o in self.orders}))


@dataclass(frozen=True)
class ScoreWeights:
    main: float = 1.0
    symptom: float = 0.5
    unclassified: float = 0.1

    def __post_init__(self):
        if min(self.main, self.symptom, self.unclassified) < 0:
            raise ValueError("score weights must be nonnegative")


@dataclass(frozen=True)
class ScoreCurve:
    patient_id: str
    points: tuple[tuple[date, float], ...]


@dataclass(frozen=True)
class PeriodSplit:
    n_periods: int
    boundaries: tuple[date, ...]

    def __post_init__(self):
        if len(self.boundaries) != self.n_periods - 1:
            raise ValueError("a split into p periods needs p-1 boundaries")
        if any(a >= b for a, b in zip(self.boundaries, self.boundaries[1:])):
            raise ValueError("boundaries must be strictly increasing")


def score_prescriptions(history: PrescriptionHistory, kb: DrugKnowledgeBase,
                        weights: ScoreWeights = ScoreWeights()) -> ScoreCurve:
    """Accumulated indication-change score at every prescription date.

    Per date d: N are today's orders with names not recently delivered, DC are
    today's orders whose tracked dosage differs, S are tracked drugs absent
    today whose end date already passed; the union of their names is split by
    knowledge-base class and added to the running score with the class
    weights.  Tracked entries are refreshed by redelivery, S entries drop out,
    N entries enter.
    """
    by_date: dict[date, list[DrugOrder]] = {}
    for order in history.orders:
        by_date.setdefault(order.startdate, []).append(order)

    tracked: dict[str, DrugOrder] = {}
    ascore = 0.0
    points = []
    for d in history.dates:
        todays = by_date[d]
        names_today = {o.name for o in todays}
        new_names = {o.name for o in todays if o.name not in tracked}
        changed = {o.name for o in todays
                   if o.name in tracked and o.dosage != tracked[o.name].dosage}
        stopped = {name for name, o in tracked.items()
                   if name not in names_today and o.enddate < d}
        # refresh/insert with a per-name representative chosen independently
        # of input order, so same-date permutations cannot change the curve
        for order in sorted(todays, key=lambda o: (o.name, o.enddate, o.dosage)):
            tracked[order.name] = order
        for name in stopped:
            del tracked[name]
        considered = new_names | changed | stopped
        n_main = len(considered & kb.mdb)
        n_symp = len(considered & kb.sdb)
        n_unk = len(considered) - n_main - n_symp
        ascore += (n_main * weights.main + n_symp * weights.symptom
                   + n_unk * weights.unclassified)
        points.append((d, ascore))
    return ScoreCurve(history.patient_id, tuple(points))


def score_increments(curve: ScoreCurve) -> list[float]:
    """Per-date score increments; the first date's increment is its score."""
    scores = [s for _, s in curve.points]
    return [scores[0]] + [b - a for a, b in zip(scores, scores[1:])]


def split_periods(curve: ScoreCurve, n_periods: int) -> PeriodSplit:
    """Boundary dates = the n_periods-1 largest increments, earliest first on
    ties; the first prescription date opens period 1 and is never a boundary."""
    if n_periods < 1:
        raise ValueError("n_periods must be positive")
    if len(curve.points) < n_periods:
        raise ValueError(
            f"patient {curve.patient_id!r}: {len(curve.points)} prescription "
            f"dates cannot form {n_periods} periods")
    incs = score_increments(curve)
    candidates = [(-inc, d) for (d, _), inc in zip(curve.points, incs)][1:]
    candidates.sort()
    chosen = sorted(d for _, d in candidates[:n_periods - 1])
    return PeriodSplit(n_periods=n_periods, boundaries=tuple(chosen))


def assign_period(order: DrugOrder, split: PeriodSplit) -> int:
    """Period index in [1, n_periods]; a boundary date starts the next period."""
    return bisect_right(split.boundaries, order.startdate) + 1


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

PRESCRIPTION_HEADER = ("patient_id", "drug_name", "startdate", "enddate", "dosage")


def load_prescriptions_csv(path: str | Path) -> list[PrescriptionHistory]:
    grouped: dict[str, list[DrugOrder]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows or tuple(c.strip() for c in rows[0]) != PRESCRIPTION_HEADER:
        raise ParseError(f"{path}:1: expected header "
                         f"{','.join(PRESCRIPTION_HEADER)}")
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 5:
            raise ParseError(f"{path}:{lineno}: expected 5 fields, got {len(row)}")
        pid, name, start, end, dosage = (c.strip() for c in row)
        try:
            order = DrugOrder(normalize_name(name), date.fromisoformat(start),
                              date.fromisoformat(end), dosage)
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc
        grouped.setdefault(pid, []).append(order)
    return [PrescriptionHistory(pid, tuple(orders))
            for pid, orders in grouped.items()]


def write_prescriptions_csv(histories: list[PrescriptionHistory],
                            path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PRESCRIPTION_HEADER)
        for history in histories:
            for o in history.orders:
                writer.writerow([history.patient_id, o.name,
                                 o.startdate.isoformat(), o.enddate.isoformat(),
                                 o.dosage])


def write_scores_csv(curves: list[ScoreCurve], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["patient_id", "date", "ascore"])
        for curve in curves:
            for d, score in curve.points:
                writer.writerow([curve.patient_id, d.isoformat(), repr(score)])
