"""Drug knowledge base.

Drugs are classified for a target disease from their indication text: a drug
whose indication mentions the disease name is a main drug; otherwise, one
whose indication mentions any listed symptom is a symptom-healing drug; the
rest stay unclassified.  Matching is case-insensitive substring containment
after whitespace normalization, and main takes precedence.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError

MAIN = "main"
SYMPTOM = "symptom"
UNCLASSIFIED = "unclassified"

KB_HEADER = ("drug_name", "indication_text")


def normalize_name(name: str) -> str:
    """Lowercased, whitespace-collapsed drug-name form used everywhere."""
    return " ".join(name.split()).lower()


@dataclass(frozen=True)
class DiseaseSpec:
    disease_name: str
    symptoms: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.disease_name.strip():
            raise ValueError("disease_name must be nonempty")
        object.__setattr__(self, "symptoms", tuple(self.symptoms))


@dataclass(frozen=True)
class DrugIndicationEntry:
    drug_name: str
    indication_text: str


@dataclass(frozen=True)
class DrugKnowledgeBase:
    mdb: frozenset
    sdb: frozenset

    def __post_init__(self):
        if self.mdb & self.sdb:
            raise ValueError("main and symptom-healing sets must be disjoint")

    def class_of(self, drug_name: str) -> str:
        name = normalize_name(drug_name)
        if name in self.mdb:
            return MAIN
        if name in self.sdb:
            return SYMPTOM
        return UNCLASSIFIED


def classify_drugs(entries: list[DrugIndicationEntry],
                   spec: DiseaseSpec) -> DrugKnowledgeBase:
    disease = normalize_name(spec.disease_name)
    symptoms = [normalize_name(s) for s in spec.symptoms if s.strip()]
    mdb, sdb = set(), set()
    for entry in entries:
        name = normalize_name(entry.drug_name)
        text = normalize_name(entry.indication_text)
        if disease in text:
            mdb.add(name)
        elif any(s in text for s in symptoms):
            sdb.add(name)
    return DrugKnowledgeBase(mdb=frozenset(mdb), sdb=frozenset(sdb))


def load_kb(path: str | Path) -> list[DrugIndicationEntry]:
    """Read the two-column TSV; duplicate drug names merge by joining texts."""
    merged: dict[str, str] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        rows = list(reader)
    if not rows:
        return []
    if tuple(c.strip().lower() for c in rows[0]) != KB_HEADER:
        raise ParseError(f"{path}:1: expected header drug_name<TAB>indication_text")
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 2:
            raise ParseError(f"{path}:{lineno}: expected 2 tab-separated fields, "
                             f"got {len(row)}")
        name = normalize_name(row[0])
        if not name:
            raise ParseError(f"{path}:{lineno}: empty drug name")
        text = row[1].strip()
        merged[name] = f"{merged[name]} {text}" if name in merged else text
    return [DrugIndicationEntry(name, text) for name, text in merged.items()]


def write_kb(entries: list[DrugIndicationEntry], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(KB_HEADER)
        for entry in entries:
            writer.writerow([entry.drug_name, entry.indication_text])
