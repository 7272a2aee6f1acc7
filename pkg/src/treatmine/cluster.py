"""Hierarchical agglomerative clustering of binary latent codes.

Distances are raw Hamming counts and inter-cluster distance is the maximum
pairwise distance (complete linkage, monotone merge heights).  All ties are
broken deterministically: merges pick the lowest (left id, right id) pair
among minimum-distance candidates, nearest-neighbor queries pick the lowest
row index.  Node ids follow the usual convention of leaves 0..n-1 and merge
products n, n+1, ...
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import SchemaError


def hamming(u: np.ndarray, v: np.ndarray) -> int:
    """Number of differing positions between two equal-length bit vectors."""
    a, b = np.asarray(u), np.asarray(v)
    if a.shape != b.shape:
        raise SchemaError(f"length mismatch: {a.shape} vs {b.shape}")
    return int(np.count_nonzero(a != b))


@dataclass(frozen=True)
class CodeMatrix:
    patient_ids: tuple[str, ...]
    codes: np.ndarray  # (n, K) bits

    def __post_init__(self):
        object.__setattr__(self, "patient_ids", tuple(self.patient_ids))
        codes = np.asarray(self.codes, dtype=np.uint8)
        if codes.ndim != 2 or codes.shape[0] != len(self.patient_ids):
            raise SchemaError("codes must be one row of bits per patient id")
        if codes.size and not np.isin(codes, (0, 1)).all():
            raise SchemaError("codes must be 0/1 valued")
        object.__setattr__(self, "codes", codes)

    @property
    def n(self) -> int:
        return len(self.patient_ids)


class Merge(NamedTuple):
    left: int
    right: int
    height: float
    new_id: int


@dataclass(frozen=True)
class Dendrogram:
    n_leaves: int
    merges: tuple[Merge, ...]


@dataclass(frozen=True)
class ClusterAssignment:
    k: int
    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=int)
        used = set(labels.tolist())
        if used != set(range(self.k)):
            raise SchemaError(f"labels must use exactly 0..{self.k - 1}")
        object.__setattr__(self, "labels", labels)


def _pairwise_hamming(codes: np.ndarray) -> np.ndarray:
    x = codes.astype(np.float64)
    return x @ (1.0 - x).T + (1.0 - x) @ x.T


def agglomerate(m: CodeMatrix) -> Dendrogram:
    """Complete-linkage agglomeration of all rows into one tree."""
    n = m.n
    if n < 2:
        raise ValueError("agglomeration needs at least two rows")
    size = 2 * n - 1
    dist = np.full((size, size), np.inf)
    dist[:n, :n] = _pairwise_hamming(m.codes)
    np.fill_diagonal(dist, np.inf)

    merges = []
    for step in range(n - 1):
        flat = np.argmin(dist)
        best = dist.flat[flat]
        # row-major scan of the symmetric matrix: the first minimal entry with
        # i < j is exactly the lowest (left, right) pair
        candidates = np.argwhere(dist == best)
        i, j = next((int(a), int(b)) for a, b in candidates if a < b)
        new_id = n + step
        merges.append(Merge(i, j, float(best), new_id))
        merged_row = np.maximum(dist[i], dist[j])
        dist[new_id, :new_id] = merged_row[:new_id]
        dist[:new_id, new_id] = merged_row[:new_id]
        dist[new_id, new_id] = np.inf
        dist[i, :] = np.inf
        dist[:, i] = np.inf
        dist[j, :] = np.inf
        dist[:, j] = np.inf
    return Dendrogram(n_leaves=n, merges=tuple(merges))


def cut(d: Dendrogram, k: int) -> ClusterAssignment:
    """Undo the last k-1 merges and label the remaining components 0..k-1,
    ordered by their smallest contained patient index."""
    n = d.n_leaves
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")
    parent = list(range(2 * n - 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for merge in d.merges[:n - k]:
        parent[find(merge.left)] = merge.new_id
        parent[find(merge.right)] = merge.new_id

    roots: dict[int, int] = {}
    labels = np.empty(n, dtype=int)
    for leaf in range(n):
        root = find(leaf)
        if root not in roots:
            roots[root] = len(roots)  # leaves scanned in index order
        labels[leaf] = roots[root]
    return ClusterAssignment(k=k, labels=labels)


def nearest_neighbor(query: np.ndarray, m: CodeMatrix) -> str:
    """Training patient id at minimum Hamming distance; lowest row wins ties."""
    if m.n == 0:
        raise ValueError("cannot search an empty code matrix")
    q = np.asarray(query)
    if q.shape != (m.codes.shape[1],):
        raise SchemaError(f"query length {q.shape} != code length "
                          f"{m.codes.shape[1]}")
    distances = np.count_nonzero(m.codes != q, axis=1)
    return m.patient_ids[int(np.argmin(distances))]


# ---------------------------------------------------------------------------
# exports
# ---------------------------------------------------------------------------

def dendrogram_to_dot(d: Dendrogram, patient_ids: tuple[str, ...]) -> str:
    """Graphviz rendering: leaves carry patient ids, internal nodes heights."""
    lines = ["digraph dendrogram {", "  node [shape=box];"]
    for leaf, pid in enumerate(patient_ids):
        lines.append(f'  n{leaf} [label="{pid}"];')
    for merge in d.merges:
        lines.append(f'  n{merge.new_id} [label="h={merge.height:g}"];')
        lines.append(f"  n{merge.new_id} -> n{merge.left};")
        lines.append(f"  n{merge.new_id} -> n{merge.right};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_merges_csv(d: Dendrogram, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["left", "right", "height", "new_id"])
        for merge in d.merges:
            writer.writerow([merge.left, merge.right, repr(merge.height),
                             merge.new_id])


def write_assignment_csv(assignment: ClusterAssignment,
                         patient_ids: tuple[str, ...], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["patient_id", "cluster"])
        for pid, label in zip(patient_ids, assignment.labels):
            writer.writerow([pid, int(label)])


def load_assignment_csv(path: str | Path) -> dict[str, int]:
    out: dict[str, int] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for pid, label in reader:
            out[pid] = int(label)
    return out
