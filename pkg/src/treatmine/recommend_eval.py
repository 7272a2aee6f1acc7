"""Nearest-neighbor regimen recommendation and its evaluation metrics.

A test patient inherits the cluster of its nearest training neighbor (by
Hamming distance on latent codes).  For each treatment period, the
recommended drug set is the deepest cotreatment path of that cluster's
regimen tree whose drugs were all prescribed to the neighbor in the same
period; equally deep candidates resolve to the first one found in
most-frequent-first traversal.  Every recommended set is therefore a
prefix-closed chain of the tree.

Evaluation over all (patient, period) cells:

    correctness  = share of cells whose recommendation is a nonempty subset
                   of the drugs actually prescribed
    approximation = mean of |recommended & actual| / |recommended|, with an
                   empty recommendation contributing 0

A secondary statistic restricts the approximation mean to cells whose
recommendation intersects the actual set at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .cluster import ClusterAssignment, CodeMatrix, nearest_neighbor
from .regimen import RegimenNode

CORRECT = "correct"
APPROXIMATE = "approximately correct"
INCORRECT = "incorrect"
EMPTY = "empty"


@dataclass(frozen=True)
class Recommendation:
    patient_id: str
    per_period: tuple[frozenset, ...]
    neighbor_id: str
    cluster: int
    missing_periods: tuple[int, ...] = ()


def _covered_paths(node: RegimenNode | None, prefix: tuple[str, ...],
                   drugs: frozenset):
    """Yield tree paths fully covered by `drugs`, in traversal order."""
    while node is not None:
        if node.drug in drugs:
            path = prefix + (node.drug,)
            yield path
            yield from _covered_paths(node.cotreat_child, path, drugs)
        node = node.sibling


def deepest_covered_path(tree: RegimenNode | None,
                         drugs: frozenset) -> tuple[str, ...]:
    """Longest covered path; the first such path found wins ties."""
    best: tuple[str, ...] = ()
    for path in _covered_paths(tree, (), drugs):
        if len(path) > len(best):
            best = path
    return best


def recommend(patient_id: str, query_states, train_codes: CodeMatrix,
              assignment: ClusterAssignment,
              trees: Mapping[tuple[int, int], RegimenNode | None],
              neighbor_presc: Mapping[str, Sequence[frozenset]],
              n_periods: int) -> Recommendation:
    """Per-period drug sets for one test patient."""
    neighbor = nearest_neighbor(query_states, train_codes)
    cluster = int(assignment.labels[train_codes.patient_ids.index(neighbor)])
    neighbor_periods = neighbor_presc[neighbor]
    if len(neighbor_periods) != n_periods:
        raise ValueError(
            f"neighbor {neighbor!r} has {len(neighbor_periods)} period sets, "
            f"expected {n_periods}")
    per_period = []
    missing = []
    for period in range(1, n_periods + 1):
        tree = trees.get((cluster, period))
        if tree is None:
            if (cluster, period) not in trees:
                missing.append(period)
            per_period.append(frozenset())
            continue
        covered = deepest_covered_path(tree, frozenset(neighbor_periods[period - 1]))
        per_period.append(frozenset(covered))
    return Recommendation(patient_id=patient_id, per_period=tuple(per_period),
                          neighbor_id=neighbor, cluster=cluster,
                          missing_periods=tuple(missing))


@dataclass(frozen=True)
class EvalRow:
    patient_id: str
    period: int
    category: str
    recommended: tuple[str, ...]
    n_overlap: int
    n_actual: int


@dataclass(frozen=True)
class EvalReport:
    m_cor: float
    m_app: float
    m_app_matched: float
    n_matched: int
    rows: tuple[EvalRow, ...]

    def to_json(self) -> dict:
        return {
            "m_cor": self.m_cor,
            "m_app": self.m_app,
            "m_app_matched": self.m_app_matched,
            "n_matched": self.n_matched,
            "rows": [{
                "patient_id": r.patient_id, "period": r.period,
                "category": r.category, "recommended": list(r.recommended),
                "n_overlap": r.n_overlap, "n_actual": r.n_actual,
            } for r in self.rows],
        }

    def format_table(self) -> str:
        lines = [f"{'patient':<12} {'period':>6}  {'category':<22} "
                 f"{'overlap':>7}  recommended"]
        for r in self.rows:
            lines.append(f"{r.patient_id:<12} {r.period:>6}  {r.category:<22} "
                         f"{r.n_overlap:>3}/{len(r.recommended):<3}  "
                         f"{', '.join(r.recommended)}")
        lines.append(f"m_cor = {self.m_cor:.4f}   m_app = {self.m_app:.4f}   "
                     f"m_app(matched only) = {self.m_app_matched:.4f}")
        return "\n".join(lines)


def evaluate(recs: Sequence[Recommendation],
             actual: Mapping[str, Sequence[frozenset]]) -> EvalReport:
    """Correctness/approximation rates of recommendations against actual
    per-period prescriptions, averaged over every (patient, period) cell."""
    if not recs:
        raise ValueError("nothing to evaluate")
    rows = []
    cor_sum = 0.0
    app_sum = 0.0
    matched_sum = 0.0
    n_matched = 0
    n_cells = 0
    for rec in recs:
        if rec.patient_id not in actual:
            raise ValueError(f"no actual prescriptions for {rec.patient_id!r}")
        periods = actual[rec.patient_id]
        if len(periods) != len(rec.per_period):
            raise ValueError(
                f"{rec.patient_id!r}: {len(rec.per_period)} recommended periods "
                f"vs {len(periods)} actual")
        for j, (got, want) in enumerate(zip(rec.per_period, periods), start=1):
            n_cells += 1
            overlap = len(got & want)
            if not got:
                category = EMPTY
            elif overlap == len(got):
                category = CORRECT
                cor_sum += 1.0
            elif overlap > 0:
                category = APPROXIMATE
            else:
                category = INCORRECT
            ratio = overlap / len(got) if got else 0.0
            app_sum += ratio
            if overlap > 0:
                matched_sum += ratio
                n_matched += 1
            rows.append(EvalRow(rec.patient_id, j, category,
                                tuple(sorted(got)), overlap, len(want)))
    return EvalReport(
        m_cor=cor_sum / n_cells,
        m_app=app_sum / n_cells,
        m_app_matched=matched_sum / n_matched if n_matched else 0.0,
        n_matched=n_matched,
        rows=tuple(rows),
    )
