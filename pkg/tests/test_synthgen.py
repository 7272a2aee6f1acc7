import numpy as np
import pytest

from treatmine.drugkb import classify_drugs, load_kb
from treatmine.synthgen import SynthSpec, generate, write_outputs


def small_spec(**kw):
    base = dict(n_groups=2, patients_per_group=8, n_numeric=3, n_binary=4,
                n_categorical=2, seed=5)
    base.update(kw)
    return SynthSpec(**base)


def test_full_separation_spaces_numeric_means():
    result = generate(small_spec(separation=1.0))
    for f in range(result.numeric_means.shape[1]):
        col = sorted(result.numeric_means[:, f])
        assert all(b - a >= 4.0 - 1e-12 for a, b in zip(col, col[1:]))


def test_zero_separation_shares_one_distribution():
    result = generate(small_spec(separation=0.0))
    assert np.all(result.numeric_means == 0.0)


def test_same_seed_identical_outputs(tmp_path):
    spec = small_spec()
    dir_a, dir_b = tmp_path / "a", tmp_path / "b"
    paths_a = write_outputs(generate(spec), dir_a)
    paths_b = write_outputs(generate(spec), dir_b)
    for key in paths_a:
        assert paths_a[key].read_bytes() == paths_b[key].read_bytes()


def test_labels_partition_and_enough_dates():
    spec = small_spec(n_periods=3)
    result = generate(spec)
    assert len(result.labels) == spec.n_groups * spec.patients_per_group
    assert sorted(set(result.labels.values())) == list(range(spec.n_groups))
    for history in result.histories:
        assert len(history.dates) >= spec.n_periods


def test_planted_boundaries_are_period_starts():
    spec = small_spec(n_periods=3, period_days=9)
    result = generate(spec)
    for history in result.histories:
        bounds = result.boundaries[history.patient_id]
        assert len(bounds) == 2
        assert set(bounds) <= set(history.dates)
        assert (bounds[1] - bounds[0]).days == spec.period_days


def test_generated_kb_classifies_planted_drugs():
    result = generate(small_spec())
    kb = classify_drugs(result.kb_entries, result.disease)
    for (g, t), drugs in result.planted.items():
        for drug in drugs:
            expected = "main" if drug.startswith("mdrug") else "symptom"
            assert kb.class_of(drug) == expected
    assert kb.class_of("extra-0") == "unclassified"


def test_outputs_load_back_through_consumers(tmp_path):
    from treatmine.cohort import build_schema, load_cohort_json
    from treatmine.periods import load_prescriptions_csv

    paths = write_outputs(generate(small_spec()), tmp_path)
    records = load_cohort_json(paths["cohort"])
    schema, _ = build_schema(records)
    assert schema.n_units > 0
    histories = load_prescriptions_csv(paths["prescriptions"])
    assert len(histories) == len(records)
    entries = load_kb(paths["drug_kb"])
    assert entries


def test_spec_validation():
    with pytest.raises(ValueError):
        small_spec(separation=1.5)
    with pytest.raises(ValueError):
        small_spec(main_per_period=0, symptom_per_period=0)
    with pytest.raises(ValueError):
        small_spec(period_days=5)
