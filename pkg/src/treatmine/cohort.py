"""Patient-record ingestion and encoding.

Raw records mix numeric, flag, and categorical demographics with numeric lab
values and a set of symptom concepts.  A schema is derived from the training
records only: numerics become gaussian units (z-scored with training stats),
flags and symptom concepts become binary units, and categorical features
become categorical units whose vocabulary is the training categories plus an
explicit "unknown" bucket.  Encoding is total: anything missing or unseen is
imputed (post-standardization mean 0, or the unknown category) and flagged in
a per-unit mask.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import IngestionError, ParseError
from .mvrbm import UnitType, VisibleSchema

UNKNOWN_CATEGORY = "unknown"

_KIND_NUMERIC = "numeric"
_KIND_FLAG = "flag"
_KIND_CATEGORY = "category"


@dataclass
class RawPatientRecord:
    patient_id: str
    demographics: dict = field(default_factory=dict)
    labs: dict = field(default_factory=dict)
    symptoms: set = field(default_factory=set)
    note_text: str | None = None


@dataclass
class FeatureStats:
    """Training-set statistics needed to encode any record."""

    numeric: dict  # unit name -> (mean, sd), sd floored at 1e-8
    categorical: dict  # unit name -> vocabulary tuple, "unknown" last
    symptom_vocab: tuple

    def to_json(self) -> dict:
        return {
            "numeric": {k: [m, s] for k, (m, s) in self.numeric.items()},
            "categorical": {k: list(v) for k, v in self.categorical.items()},
            "symptom_vocab": list(self.symptom_vocab),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "FeatureStats":
        return cls(
            numeric={k: (float(m), float(s)) for k, (m, s) in doc["numeric"].items()},
            categorical={k: tuple(v) for k, v in doc["categorical"].items()},
            symptom_vocab=tuple(doc["symptom_vocab"]),
        )


@dataclass
class EncodedPatient:
    patient_id: str
    values: np.ndarray
    missing_mask: np.ndarray


def _demographic_kind(value) -> str:
    if isinstance(value, bool):
        return _KIND_FLAG
    if isinstance(value, (int, float)):
        return _KIND_NUMERIC
    if isinstance(value, str):
        return _KIND_CATEGORY
    raise IngestionError(f"unsupported demographic value {value!r}")


def build_schema(records: list[RawPatientRecord]) -> tuple[VisibleSchema, FeatureStats]:
    """Derive the visible schema and encoding statistics from training records."""
    if not records:
        raise IngestionError("cannot build a schema from an empty cohort")

    demo_kinds: dict[str, str] = {}
    demo_values: dict[str, list] = {}
    lab_values: dict[str, list] = {}
    symptom_vocab: set[str] = set()
    for rec in records:
        overlap = set(rec.demographics) & set(rec.labs)
        if overlap:
            raise IngestionError(
                f"record {rec.patient_id!r} reuses feature names {sorted(overlap)} "
                "in both demographics and labs")
        for name, value in rec.demographics.items():
            if value is None:
                continue
            kind = _demographic_kind(value)
            seen = demo_kinds.setdefault(name, kind)
            if seen != kind:
                raise IngestionError(
                    f"feature {name!r} is {seen} elsewhere but {kind} in record "
                    f"{rec.patient_id!r}")
            demo_values.setdefault(name, []).append(value)
        for name, value in rec.labs.items():
            if value is None:
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise IngestionError(
                    f"lab {name!r} in record {rec.patient_id!r} is not numeric")
            lab_values.setdefault(name, []).append(float(value))
        symptom_vocab.update(rec.symptoms)

    units: list[tuple[str, UnitType]] = []
    numeric_stats: dict[str, tuple[float, float]] = {}
    categorical_vocab: dict[str, tuple] = {}

    def numeric_unit(unit_name: str, observed: list[float]) -> None:
        arr = np.asarray(observed, dtype=float)
        sd = max(float(arr.std()), 1e-8)
        numeric_stats[unit_name] = (float(arr.mean()), sd)
        units.append((unit_name, UnitType.gaussian()))

    for name in sorted(demo_kinds):
        unit_name = f"demo:{name}"
        kind = demo_kinds[name]
        if kind == _KIND_NUMERIC:
            numeric_unit(unit_name, [float(v) for v in demo_values[name]])
        elif kind == _KIND_FLAG:
            units.append((unit_name, UnitType.binary()))
        else:
            cats = sorted(set(demo_values[name]) - {UNKNOWN_CATEGORY})
            vocab = tuple(cats) + (UNKNOWN_CATEGORY,)
            categorical_vocab[unit_name] = vocab
            units.append((unit_name, UnitType.categorical(len(vocab))))
    for name in sorted(lab_values):
        numeric_unit(f"lab:{name}", lab_values[name])
    for concept in sorted(symptom_vocab):
        units.append((f"sym:{concept}", UnitType.binary()))

    stats = FeatureStats(numeric=numeric_stats, categorical=categorical_vocab,
                         symptom_vocab=tuple(sorted(symptom_vocab)))
    return VisibleSchema(tuple(units)), stats


def encode_patient(rec: RawPatientRecord, schema: VisibleSchema,
                   stats: FeatureStats) -> EncodedPatient:
    """Encode one record against a trained schema; never fails."""
    n = schema.n_units
    values = np.zeros(n)
    mask = np.zeros(n, dtype=bool)
    for i, (unit_name, unit_type) in enumerate(schema.units):
        section, _, name = unit_name.partition(":")
        if section == "sym":
            values[i] = 1.0 if name in rec.symptoms else 0.0
            continue
        raw = rec.demographics.get(name) if section == "demo" else rec.labs.get(name)
        if unit_type.kind == "gaussian":
            mean, sd = stats.numeric[unit_name]
            if raw is None or isinstance(raw, bool) or not isinstance(raw, (int, float)):
                values[i], mask[i] = 0.0, True
            else:
                values[i] = (float(raw) - mean) / sd
        elif unit_type.kind == "binary":
            if isinstance(raw, bool):
                values[i] = 1.0 if raw else 0.0
            else:
                values[i], mask[i] = 0.0, True
        else:
            vocab = stats.categorical[unit_name]
            if isinstance(raw, str):
                try:
                    values[i] = vocab.index(raw)
                except ValueError:
                    values[i] = len(vocab) - 1
            else:
                values[i], mask[i] = len(vocab) - 1, True
    return EncodedPatient(rec.patient_id, values, mask)


def encode_cohort(records: list[RawPatientRecord], schema: VisibleSchema,
                  stats: FeatureStats) -> list[EncodedPatient]:
    return [encode_patient(r, schema, stats) for r in records]


def values_matrix(encoded: list[EncodedPatient]) -> np.ndarray:
    return np.array([e.values for e in encoded])


def extract_symptoms(note_text: str, lexicon: list[str]) -> set[str]:
    """Whole-phrase, case-insensitive lexicon matching over a clinical note.

    Whitespace runs (including line breaks) are collapsed before matching, so
    a phrase split across lines still matches.
    """
    if not lexicon:
        raise ValueError("symptom lexicon must be nonempty")
    text = " ".join(note_text.lower().split())
    found = set()
    for phrase in lexicon:
        needle = " ".join(phrase.lower().split())
        if needle and re.search(rf"\b{re.escape(needle)}\b", text):
            found.add(phrase)
    return found


def apply_note_extraction(records: list[RawPatientRecord], lexicon: list[str]) -> None:
    """Union lexicon matches from each record's note into its symptom set."""
    for rec in records:
        if rec.note_text:
            rec.symptoms |= extract_symptoms(rec.note_text, lexicon)


def split_cohort(records: list[RawPatientRecord], test_count: int,
                 seed: int) -> tuple[list[RawPatientRecord], list[RawPatientRecord]]:
    """Seeded uniform train/test split without replacement."""
    if not 0 <= test_count < len(records):
        raise ValueError(
            f"test_count {test_count} must lie in [0, {len(records)})")
    rng = np.random.default_rng(seed)
    test_idx = set(rng.choice(len(records), size=test_count, replace=False).tolist())
    train = [r for i, r in enumerate(records) if i not in test_idx]
    test = [r for i, r in enumerate(records) if i in test_idx]
    return train, test


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def _record_from_dict(doc: dict) -> RawPatientRecord:
    return RawPatientRecord(
        patient_id=str(doc["patient_id"]),
        demographics=dict(doc.get("demographics", {})),
        labs=dict(doc.get("labs", {})),
        symptoms=set(doc.get("symptoms", [])),
        note_text=doc.get("note_text"),
    )


def load_cohort_json(path: str | Path) -> list[RawPatientRecord]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    records = [_record_from_dict(d) for d in doc["records"]]
    seen = set()
    for rec in records:
        if not rec.patient_id:
            raise IngestionError(f"{path}: empty patient_id")
        if rec.patient_id in seen:
            raise IngestionError(f"{path}: duplicate patient_id {rec.patient_id!r}")
        seen.add(rec.patient_id)
    return records


def write_cohort_json(records: list[RawPatientRecord], path: str | Path) -> None:
    doc = {"records": [{
        "patient_id": r.patient_id,
        "demographics": r.demographics,
        "labs": r.labs,
        "symptoms": sorted(r.symptoms),
        **({"note_text": r.note_text} if r.note_text is not None else {}),
    } for r in records]}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def _parse_csv_cell(cell: str):
    s = cell.strip()
    if s == "":
        return None
    if s.lower() in ("true", "false"):
        return s.lower() == "true"
    try:
        return float(s)
    except ValueError:
        return s


def load_cohort_csv(path: str | Path,
                    symptoms_path: str | Path | None = None) -> list[RawPatientRecord]:
    """Flat CSV variant: patient_id plus feature columns, types inferred per
    cell (true/false -> flag, parseable number -> numeric, else category).
    Symptoms come from a sidecar file of `patient_id,concept` lines."""
    records: dict[str, RawPatientRecord] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "patient_id" not in reader.fieldnames:
            raise ParseError(f"{path}: missing patient_id column")
        for lineno, row in enumerate(reader, start=2):
            pid = (row.pop("patient_id") or "").strip()
            if not pid:
                raise ParseError(f"{path}:{lineno}: empty patient_id")
            if pid in records:
                raise IngestionError(f"{path}:{lineno}: duplicate patient_id {pid!r}")
            demo = {}
            for name, cell in row.items():
                value = _parse_csv_cell(cell or "")
                if value is not None:
                    demo[name] = value
            records[pid] = RawPatientRecord(patient_id=pid, demographics=demo)
    if symptoms_path is not None:
        with open(symptoms_path, newline="") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                pid, sep, concept = line.partition(",")
                if not sep or not concept.strip():
                    raise ParseError(f"{symptoms_path}:{lineno}: expected "
                                     "'patient_id,concept'")
                if pid not in records:
                    raise IngestionError(
                        f"{symptoms_path}:{lineno}: unknown patient {pid!r}")
                records[pid].symptoms.add(concept.strip())
    return list(records.values())


def write_encoded_json(encoded: list[EncodedPatient], schema: VisibleSchema,
                       path: str | Path) -> None:
    """Encoded matrix with a schema header, as plain JSON."""
    doc = {
        "schema": schema.to_json(),
        "patients": [{
            "patient_id": e.patient_id,
            "values": e.values.tolist(),
            "missing_mask": e.missing_mask.astype(int).tolist(),
        } for e in encoded],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def save_encoder(schema: VisibleSchema, stats: FeatureStats,
                 path: str | Path) -> None:
    doc = {"schema": schema.to_json(), "stats": stats.to_json()}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_encoder(path: str | Path) -> tuple[VisibleSchema, FeatureStats]:
    doc = json.loads(Path(path).read_text())
    return VisibleSchema.from_json(doc["schema"]), FeatureStats.from_json(doc["stats"])
