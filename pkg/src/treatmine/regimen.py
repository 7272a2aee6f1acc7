"""Regimen-tree construction for one (cluster, period) patient pool.

Input is a map patient -> set of drug names prescribed in scope.  The tree
is grown most-frequent-first: the drug treating the largest number of
distinct patients heads a node whose cotreatment child recurses over those
patients (with the drug removed from their sets) and whose sibling recurses
over the untreated patients at the same depth.  A drug treating fewer
patients than the threshold is skipped entirely: no node, no edge, and its
patients leave the pool.  The depth cap therefore bounds cotreatment-chain
length, never sibling-chain length.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .drugkb import MAIN, DrugKnowledgeBase


@dataclass
class TreeConfig:
    max_depth: int = 4
    threshold: int = 10

    def __post_init__(self):
        if self.max_depth < 1 or self.threshold < 1:
            raise ValueError("max_depth and threshold must be positive")


@dataclass
class RegimenNode:
    drug: str
    drug_class: str
    n_patients: int
    cotreat_child: "RegimenNode | None" = None
    sibling: "RegimenNode | None" = None


def _most_frequent(rows: dict[str, set[str]]) -> tuple[str, int]:
    counts: dict[str, int] = {}
    for drugs in rows.values():
        for d in drugs:
            counts[d] = counts.get(d, 0) + 1
    top = max(counts.values())
    # ties resolve to the lexicographically smallest name
    return min(d for d, c in counts.items() if c == top), top


def build_tree(prescriptions: Mapping[str, set[str]], cfg: TreeConfig,
               kb: DrugKnowledgeBase) -> RegimenNode | None:
    """Grow the regimen tree; returns None when nothing clears the threshold."""

    def grow(depth: int, rows: dict[str, set[str]]) -> RegimenNode | None:
        if depth == cfg.max_depth:
            return None
        nodes: list[RegimenNode] = []
        while rows:
            drug, n_patients = _most_frequent(rows)
            rest = {p: s for p, s in rows.items() if drug not in s}
            if n_patients >= cfg.threshold:
                cotreat = {p: s - {drug} for p, s in rows.items() if drug in s}
                cotreat = {p: s for p, s in cotreat.items() if s}
                nodes.append(RegimenNode(drug, kb.class_of(drug), n_patients,
                                         cotreat_child=grow(depth + 1, cotreat)))
            rows = rest
        for left, right in zip(nodes, nodes[1:]):
            left.sibling = right
        return nodes[0] if nodes else None

    return grow(0, {p: set(s) for p, s in prescriptions.items() if s})


def paths(tree: RegimenNode) -> list[list[tuple[str, int]]]:
    """All maximal cotreatment chains, one per way of descending the tree
    after any number of sibling hops, in most-frequent-first order."""
    out: list[list[tuple[str, int]]] = []
    node = tree
    while node is not None:
        step = (node.drug, node.n_patients)
        if node.cotreat_child is None:
            out.append([step])
        else:
            out.extend([step] + tail for tail in paths(node.cotreat_child))
        node = node.sibling
    return out


def node_label(node: RegimenNode) -> str:
    prefix = "m " if node.drug_class == MAIN else ""
    return f"{prefix}{node.drug} ({node.n_patients})"


def emit_dot(tree: RegimenNode | None, name: str = "regimen") -> str:
    """Graphviz text: cotreatment edges solid, sibling edges dashed."""
    lines = [f"digraph {name} {{", "  node [shape=box];"]
    counter = 0

    def walk(node: RegimenNode) -> int:
        nonlocal counter
        my_id = counter
        counter += 1
        lines.append(f'  n{my_id} [label="{node_label(node)}"];')
        if node.cotreat_child is not None:
            child = walk(node.cotreat_child)
            lines.append(f"  n{my_id} -> n{child} [style=solid];")
        if node.sibling is not None:
            sib = walk(node.sibling)
            lines.append(f"  n{my_id} -> n{sib} [style=dashed];")
        return my_id

    if tree is not None:
        walk(tree)
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_to_json(tree: RegimenNode | None) -> dict | None:
    if tree is None:
        return None
    return {
        "drug": tree.drug,
        "class": tree.drug_class,
        "count": tree.n_patients,
        "cotreat": tree_to_json(tree.cotreat_child),
        "sibling": tree_to_json(tree.sibling),
    }


def tree_from_json(doc: dict | None) -> RegimenNode | None:
    if doc is None:
        return None
    return RegimenNode(
        drug=doc["drug"],
        drug_class=doc["class"],
        n_patients=doc["count"],
        cotreat_child=tree_from_json(doc["cotreat"]),
        sibling=tree_from_json(doc["sibling"]),
    )
