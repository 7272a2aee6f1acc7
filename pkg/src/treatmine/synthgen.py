"""Seeded synthetic cohort generator with planted structure.

Patients fall into groups whose feature distributions diverge with the
`separation` knob (0 = identical, 1 = numeric means four standard deviations
apart).  Prescriptions follow planted per-group per-period drug sets
delivered at period-start dates, so accumulated-score curves jump exactly at
the planted change dates; low-weight noise drugs fill the dates in between.
Planted drugs carry indications that classify them as main or symptom-healing
against the generated knowledge base; noise drugs stay unclassified.

Group labels, planted boundary dates, and planted regimens are returned as
ground truth for end-to-end checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .cohort import RawPatientRecord, write_cohort_json
from .drugkb import DiseaseSpec, DrugIndicationEntry, write_kb
from .periods import DrugOrder, PrescriptionHistory, write_prescriptions_csv

#: numeric group means sit this many unit standard deviations apart at
#: separation 1.0
MEAN_SPACING = 4.0

DISEASE = DiseaseSpec("ischemic heart disease",
                      ("chest pain", "shortness of breath", "fatigue"))


@dataclass
class SynthSpec:
    n_groups: int = 3
    patients_per_group: int = 100
    n_numeric: int = 12
    n_binary: int = 10
    n_categorical: int = 8
    categorical_levels: int = 3
    separation: float = 0.9
    n_periods: int = 3
    period_days: int = 9
    main_per_period: int = 2
    symptom_per_period: int = 1
    delivery_prob: float = 0.9
    noise_prob: float = 0.1
    noise_pool: int = 8
    start: date = date(2000, 1, 3)
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.separation <= 1.0:
            raise ValueError("separation must lie in [0, 1]")
        if min(self.n_groups, self.patients_per_group, self.n_periods) < 1:
            raise ValueError("group, patient, and period counts must be positive")
        if self.main_per_period + self.symptom_per_period < 1:
            raise ValueError("planted sets must be nonempty per period")
        if not (0.0 <= self.delivery_prob <= 1.0 and 0.0 <= self.noise_prob <= 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        if self.period_days < 7:
            raise ValueError("period_days must be >= 7 to fit noise dates")
        if self.categorical_levels < 2:
            raise ValueError("categorical_levels must be >= 2")


@dataclass
class SynthResult:
    records: list[RawPatientRecord]
    histories: list[PrescriptionHistory]
    kb_entries: list[DrugIndicationEntry]
    disease: DiseaseSpec
    labels: dict[str, int]
    boundaries: dict[str, tuple[date, ...]]
    planted: dict[tuple[int, int], tuple[str, ...]]  # (group, period) -> drugs
    numeric_means: np.ndarray = field(repr=False)  # (groups, n_numeric)


def _planted_drugs(spec: SynthSpec) -> tuple[dict, list[DrugIndicationEntry]]:
    planted: dict[tuple[int, int], tuple[str, ...]] = {}
    entries: list[DrugIndicationEntry] = []
    for g in range(spec.n_groups):
        for t in range(1, spec.n_periods + 1):
            drugs = []
            for i in range(spec.main_per_period):
                name = f"mdrug-g{g}t{t}-{i}"
                drugs.append(name)
                entries.append(DrugIndicationEntry(
                    name, f"indicated in the management of "
                          f"{DISEASE.disease_name}"))
            for i in range(spec.symptom_per_period):
                name = f"sdrug-g{g}t{t}-{i}"
                drugs.append(name)
                symptom = DISEASE.symptoms[i % len(DISEASE.symptoms)]
                entries.append(DrugIndicationEntry(
                    name, f"provides relief of {symptom}"))
            planted[(g, t)] = tuple(drugs)
    for i in range(spec.noise_pool):
        entries.append(DrugIndicationEntry(f"extra-{i}",
                                           "general supportive care"))
    return planted, entries


def generate(spec: SynthSpec) -> SynthResult:
    rng = np.random.default_rng(spec.seed)
    sep = spec.separation

    # group-level feature distributions
    numeric_means = np.empty((spec.n_groups, spec.n_numeric))
    for f in range(spec.n_numeric):
        numeric_means[:, f] = MEAN_SPACING * sep * rng.permutation(spec.n_groups)
    binary_p = 0.5 + 0.9 * sep * (rng.random((spec.n_groups, spec.n_binary)) - 0.5)
    cat_logits = 2.0 * sep * rng.standard_normal(
        (spec.n_groups, spec.n_categorical, spec.categorical_levels))
    cat_probs = np.exp(cat_logits - cat_logits.max(axis=2, keepdims=True))
    cat_probs /= cat_probs.sum(axis=2, keepdims=True)

    planted, kb_entries = _planted_drugs(spec)
    noise_names = [f"extra-{i}" for i in range(spec.noise_pool)]
    n_flags = (spec.n_binary + 1) // 2  # rest surface as symptom concepts

    records: list[RawPatientRecord] = []
    histories: list[PrescriptionHistory] = []
    labels: dict[str, int] = {}
    boundaries: dict[str, tuple[date, ...]] = {}

    for g in range(spec.n_groups):
        for idx in range(spec.patients_per_group):
            pid = f"g{g}-{idx:04d}"
            labels[pid] = g

            labs = {f"lab_{f:02d}": float(numeric_means[g, f] + rng.standard_normal())
                    for f in range(spec.n_numeric)}
            bits = rng.random(spec.n_binary) < binary_p[g]
            demo: dict = {f"flag_{f:02d}": bool(bits[f]) for f in range(n_flags)}
            for f in range(spec.n_categorical):
                level = int(rng.choice(spec.categorical_levels, p=cat_probs[g, f]))
                demo[f"cat_{f:02d}"] = f"level{level}"
            symptoms = {f"sym_{f:02d}" for f in range(n_flags, spec.n_binary)
                        if bits[f]}
            records.append(RawPatientRecord(pid, demographics=demo, labs=labs,
                                            symptoms=symptoms))

            offset = int(rng.integers(0, 5))
            first = spec.start + timedelta(days=offset)
            final = first + timedelta(days=spec.n_periods * spec.period_days + 1)
            orders: list[DrugOrder] = []
            period_starts = []
            for t in range(1, spec.n_periods + 1):
                day = first + timedelta(days=(t - 1) * spec.period_days)
                period_starts.append(day)
                drugs = planted[(g, t)]
                delivered = [d for d in drugs if rng.random() < spec.delivery_prob]
                if not delivered:
                    delivered = [drugs[0]]  # keep every planted date prescribed
                orders.extend(DrugOrder(d, day, final, "1") for d in delivered)
                for gap in (3, 6):
                    noise_day = day + timedelta(days=gap)
                    orders.extend(
                        DrugOrder(name, noise_day, noise_day + timedelta(days=2), "1")
                        for name in noise_names if rng.random() < spec.noise_prob)
            histories.append(PrescriptionHistory(pid, tuple(orders)))
            boundaries[pid] = tuple(period_starts[1:])

    return SynthResult(records=records, histories=histories,
                       kb_entries=kb_entries, disease=DISEASE, labels=labels,
                       boundaries=boundaries, planted=planted,
                       numeric_means=numeric_means)


def write_outputs(result: SynthResult, out_dir: str | Path) -> dict[str, Path]:
    """Emit the cohort/prescriptions/knowledge-base files plus ground truth."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "cohort": out / "cohort.json",
        "prescriptions": out / "prescriptions.csv",
        "drug_kb": out / "drug_kb.tsv",
        "truth": out / "truth.json",
    }
    write_cohort_json(result.records, paths["cohort"])
    write_prescriptions_csv(result.histories, paths["prescriptions"])
    write_kb(result.kb_entries, paths["drug_kb"])
    truth = {
        "labels": result.labels,
        "boundaries": {pid: [d.isoformat() for d in dates]
                       for pid, dates in result.boundaries.items()},
        "planted": {f"{g},{t}": list(drugs)
                    for (g, t), drugs in result.planted.items()},
        "disease": {"name": result.disease.disease_name,
                    "symptoms": list(result.disease.symptoms)},
    }
    paths["truth"].write_text(json.dumps(truth, indent=2) + "\n")
    return paths
