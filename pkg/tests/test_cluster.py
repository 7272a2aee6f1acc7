import numpy as np
import pytest

from treatmine.cluster import (
    CodeMatrix,
    agglomerate,
    cut,
    dendrogram_to_dot,
    hamming,
    load_assignment_csv,
    nearest_neighbor,
    write_assignment_csv,
    write_merges_csv,
)
from treatmine.errors import SchemaError

import oracles


def matrix(rows, prefix="p"):
    rows = np.asarray(rows, dtype=np.uint8)
    return CodeMatrix(tuple(f"{prefix}{i}" for i in range(rows.shape[0])), rows)


def test_hamming_basics():
    assert hamming(np.array([1, 0, 1]), np.array([1, 0, 1])) == 0
    assert hamming(np.zeros(5), np.ones(5)) == 5
    assert hamming(np.array([1, 0, 1, 1]), np.array([1, 1, 1, 0])) == 2
    with pytest.raises(SchemaError):
        hamming(np.zeros(3), np.zeros(4))


def test_agglomerate_identical_rows_merge_at_zero():
    d = agglomerate(matrix([[1, 0, 1], [1, 0, 1]]))
    assert len(d.merges) == 1
    assert d.merges[0] == (0, 1, 0.0, 2)


def test_agglomerate_requires_two_rows():
    with pytest.raises(ValueError):
        agglomerate(matrix([[1, 0]]))


def test_agglomerate_matches_naive_reference():
    rng = np.random.default_rng(0)
    for _ in range(60):
        n = int(rng.integers(2, 21))
        k = int(rng.integers(1, 9))
        codes = rng.integers(0, 2, size=(n, k), dtype=np.uint8)
        d = agglomerate(matrix(codes))
        assert [tuple(m) for m in d.merges] == oracles.naive_complete_linkage(codes)


def test_merge_heights_monotone():
    rng = np.random.default_rng(1)
    for _ in range(40):
        n = int(rng.integers(2, 40))
        codes = rng.integers(0, 2, size=(n, 12), dtype=np.uint8)
        d = agglomerate(matrix(codes))
        heights = [m.height for m in d.merges]
        assert all(b >= a for a, b in zip(heights, heights[1:]))


def tie_free_codes(rng):
    # unary encodings of a Sidon set: all pairwise differences, hence all
    # Hamming distances, are distinct, so no merge ever hits a tie
    sidon = [0, 1, 3, 7, 12, 20, 30, 44]
    k = max(sidon) + 1
    codes = np.zeros((len(sidon), k), dtype=np.uint8)
    for i, t in enumerate(sidon):
        codes[i, :t] = 1
    return codes[:, rng.permutation(k)]


def test_row_permutation_gives_isomorphic_dendrogram():
    # with tied distances the id-based tie-break makes merge order (and so
    # the height multiset) depend on row order; on tie-free instances the
    # dendrogram must be permutation-isomorphic
    rng = np.random.default_rng(2)
    for _ in range(20):
        codes = tie_free_codes(rng)
        d1 = agglomerate(matrix(codes))
        perm = rng.permutation(codes.shape[0])
        d2 = agglomerate(matrix(codes[perm]))
        assert sorted(m.height for m in d1.merges) == \
            sorted(m.height for m in d2.merges)


def test_row_permutation_keeps_first_merge_height():
    # the first merge height is the global minimum distance, ties or not
    rng = np.random.default_rng(6)
    for _ in range(20):
        n = int(rng.integers(3, 25))
        codes = rng.integers(0, 2, size=(n, 10), dtype=np.uint8)
        d1 = agglomerate(matrix(codes))
        d2 = agglomerate(matrix(codes[rng.permutation(n)]))
        assert d1.merges[0].height == d2.merges[0].height
        assert len(d1.merges) == len(d2.merges)


def test_cut_extremes_and_counts():
    rng = np.random.default_rng(3)
    codes = rng.integers(0, 2, size=(12, 6), dtype=np.uint8)
    d = agglomerate(matrix(codes))
    assert cut(d, 12).labels.tolist() == list(range(12))
    assert np.all(cut(d, 1).labels == 0)
    for k in range(1, 13):
        labels = cut(d, k).labels
        assert len(set(labels.tolist())) == k
    with pytest.raises(ValueError):
        cut(d, 0)
    with pytest.raises(ValueError):
        cut(d, 13)


def test_cut_labels_ordered_by_first_member():
    rng = np.random.default_rng(4)
    codes = rng.integers(0, 2, size=(20, 8), dtype=np.uint8)
    d = agglomerate(matrix(codes))
    for k in (2, 3, 5):
        labels = cut(d, k).labels
        firsts = [np.argmin(labels != c) for c in range(k)]
        assert firsts == sorted(firsts)
        assert labels[0] == 0


def test_cut_separates_well_separated_blocks():
    block = np.vstack([np.tile([0] * 8, (5, 1)), np.tile([1] * 8, (5, 1))])
    d = agglomerate(matrix(block))
    labels = cut(d, 2).labels
    assert labels.tolist() == [0] * 5 + [1] * 5


def test_nearest_neighbor_exact_and_ties():
    rows = matrix([[0, 0, 0], [1, 1, 0], [1, 1, 1], [0, 1, 1], [1, 0, 1],
                   [1, 1, 0]])
    assert nearest_neighbor(np.array([1, 1, 1]), rows) == "p2"
    # p1 and p5 are identical rows: the lower index wins
    assert nearest_neighbor(np.array([1, 1, 0]), rows) == "p1"
    with pytest.raises(SchemaError):
        nearest_neighbor(np.array([1, 1]), rows)


def test_nearest_neighbor_is_argmin_over_all_rows():
    rng = np.random.default_rng(5)
    for _ in range(50):
        codes = rng.integers(0, 2, size=(15, 7), dtype=np.uint8)
        m = matrix(codes)
        q = rng.integers(0, 2, size=7, dtype=np.uint8)
        best = nearest_neighbor(q, m)
        best_d = hamming(q, codes[m.patient_ids.index(best)])
        assert all(best_d <= hamming(q, row) for row in codes)


def test_exports_roundtrip(tmp_path):
    codes = matrix([[0, 0], [0, 1], [1, 1]])
    d = agglomerate(codes)
    dot = dendrogram_to_dot(d, codes.patient_ids)
    assert dot.startswith("digraph dendrogram {")
    assert '"p0"' in dot and "h=" in dot
    write_merges_csv(d, tmp_path / "merges.csv")
    assert (tmp_path / "merges.csv").read_text().splitlines()[0] == \
        "left,right,height,new_id"
    assignment = cut(d, 2)
    write_assignment_csv(assignment, codes.patient_ids, tmp_path / "assign.csv")
    assert load_assignment_csv(tmp_path / "assign.csv") == \
        {"p0": 0, "p1": 0, "p2": 1}
