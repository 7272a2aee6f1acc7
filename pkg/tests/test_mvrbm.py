import math

import numpy as np
import pytest

from treatmine.errors import IngestionError, SchemaError
from treatmine import mvrbm
from treatmine.mvrbm import (
    BernoulliCond,
    CategoricalCond,
    GaussianCond,
    MvRbmParams,
    TrainConfig,
    UnitType,
    VisibleSchema,
    encode,
    energy,
    exact_log_likelihood,
    exact_log_likelihood_grad,
    gibbs_step,
    hidden_conditional,
    init_params,
    train_cd,
    visible_conditional,
)

import oracles


def binary_schema(n):
    return VisibleSchema(tuple((f"b{i}", UnitType.binary()) for i in range(n)))


def zero_params(schema, k, sigma=1.0):
    ng = len(schema.gaussian_units)
    return MvRbmParams(schema, np.zeros(schema.expanded_dim), np.zeros(k),
                       np.zeros((schema.expanded_dim, k)),
                       np.full(ng, sigma))


def random_params(schema, k, seed, scale=0.8):
    rng = np.random.default_rng(seed)
    e = schema.expanded_dim
    ng = len(schema.gaussian_units)
    return MvRbmParams(schema, rng.normal(0, scale, e), rng.normal(0, scale, k),
                       rng.normal(0, scale, (e, k)), np.ones(ng))


# ---------------------------------------------------------------------------
# schema
# ---------------------------------------------------------------------------

def test_schema_rejects_duplicate_names():
    with pytest.raises(SchemaError):
        VisibleSchema((("x", UnitType.binary()), ("x", UnitType.gaussian())))


def test_schema_rejects_bad_categorical():
    with pytest.raises(SchemaError):
        UnitType.categorical(1)
    with pytest.raises(SchemaError):
        UnitType(mvrbm.BINARY, cardinality=3)


def test_validate_values_bounds():
    schema = VisibleSchema((("c", UnitType.categorical(3)),))
    schema.validate_values(np.array([2.0]))
    with pytest.raises(SchemaError):
        schema.validate_values(np.array([3.0]))
    with pytest.raises(SchemaError):
        binary_schema(1).validate_values(np.array([0.5]))


# ---------------------------------------------------------------------------
# energy
# ---------------------------------------------------------------------------

def test_energy_all_zero_is_zero():
    schema = binary_schema(2)
    p = zero_params(schema, 3)
    assert energy(np.zeros(2), np.zeros(3), p) == 0.0


def test_energy_single_binary_hand_value():
    schema = binary_schema(1)
    p = MvRbmParams(schema, np.array([0.3]), np.array([0.2]), np.array([[0.5]]),
                    np.array([]))
    assert energy(np.array([1.0]), np.array([1.0]), p) == pytest.approx(-1.0)


def test_energy_gaussian_quadratic_term():
    schema = VisibleSchema((("g", UnitType.gaussian()),))
    p = zero_params(schema, 1)
    assert energy(np.array([2.0]), np.array([0.0]), p) == pytest.approx(2.0)


def test_energy_dimension_mismatch():
    schema = binary_schema(2)
    p = zero_params(schema, 2)
    with pytest.raises(SchemaError):
        energy(np.zeros(3), np.zeros(2), p)
    with pytest.raises(SchemaError):
        energy(np.zeros(2), np.zeros(3), p)


# ---------------------------------------------------------------------------
# conditionals against the enumeration oracle
# ---------------------------------------------------------------------------

def test_hidden_conditional_zero_params_is_half():
    schema = binary_schema(2)
    p = zero_params(schema, 4)
    assert np.allclose(hidden_conditional(np.zeros(2), p), 0.5)


def test_hidden_conditional_matches_enumeration_binary():
    schema = binary_schema(2)
    p = random_params(schema, 2, seed=11)
    for values in oracles.enumerate_visible(schema):
        got = hidden_conditional(values, p)
        want = oracles.hidden_conditional_enum(values, p)
        assert np.allclose(got, want, atol=1e-9)


def test_hidden_conditional_matches_enumeration_categorical():
    schema = VisibleSchema((("c", UnitType.categorical(3)),))
    p = random_params(schema, 2, seed=5)
    for values in oracles.enumerate_visible(schema):
        got = hidden_conditional(values, p)
        want = oracles.hidden_conditional_enum(values, p)
        assert np.allclose(got, want, atol=1e-9)


def test_visible_conditional_matches_enumeration():
    schema = VisibleSchema((("b", UnitType.binary()),
                            ("c", UnitType.categorical(3))))
    p = random_params(schema, 2, seed=7)
    for hidden in oracles.enumerate_hidden(2):
        bern = visible_conditional(hidden, p, 0)
        want_b = oracles.visible_conditional_enum(hidden, p, 0)
        assert bern.p == pytest.approx(want_b[1], abs=1e-9)
        cat = visible_conditional(hidden, p, 1)
        want_c = oracles.visible_conditional_enum(hidden, p, 1)
        assert np.allclose(cat.probs, want_c, atol=1e-9)


def test_visible_conditional_hand_values():
    schema = VisibleSchema((("g", UnitType.gaussian()),))
    p = zero_params(schema, 1)
    p.visible_bias[0] = 0.5
    cond = visible_conditional(np.zeros(1), p, 0)
    assert isinstance(cond, GaussianCond)
    assert cond.mean == pytest.approx(0.5)
    assert cond.scale == pytest.approx(1.0)

    schema = binary_schema(1)
    p = zero_params(schema, 1)
    p.weights[0, 0] = 1.0
    cond = visible_conditional(np.ones(1), p, 0)
    assert isinstance(cond, BernoulliCond)
    assert cond.p == pytest.approx(0.7310585786, abs=1e-9)

    schema = VisibleSchema((("c", UnitType.categorical(3)),))
    p = zero_params(schema, 1)
    cond = visible_conditional(np.zeros(1), p, 0)
    assert isinstance(cond, CategoricalCond)
    assert np.allclose(cond.probs, 1.0 / 3.0)


def test_visible_conditional_is_valid_distribution():
    schema = VisibleSchema((("b", UnitType.binary()), ("g", UnitType.gaussian()),
                            ("c", UnitType.categorical(4))))
    rng = np.random.default_rng(3)
    for seed in range(20):
        p = random_params(schema, 3, seed=seed, scale=2.0)
        h = (rng.random(3) < 0.5).astype(float)
        b = visible_conditional(h, p, 0)
        assert 0.0 < b.p < 1.0
        g = visible_conditional(h, p, 1)
        assert g.scale > 0
        c = visible_conditional(h, p, 2)
        assert c.probs.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(c.probs >= 0)


def test_visible_conditional_unit_out_of_range():
    schema = binary_schema(1)
    p = zero_params(schema, 1)
    with pytest.raises(SchemaError):
        visible_conditional(np.zeros(1), p, 1)


# ---------------------------------------------------------------------------
# gibbs sampling
# ---------------------------------------------------------------------------

def mixed_schema():
    return VisibleSchema((("b", UnitType.binary()), ("g", UnitType.gaussian()),
                          ("c", UnitType.categorical(3))))


def test_gibbs_step_seeded_reproducibility():
    schema = mixed_schema()
    p = random_params(schema, 4, seed=2)
    v0 = np.array([1.0, 0.3, 2.0])
    runs = []
    for _ in range(2):
        rng = np.random.default_rng(99)
        v = v0
        chain = [gibbs_step(v, p, rng) for _ in range(20)]
        runs.append(np.array(chain))
    assert np.array_equal(runs[0], runs[1])


def test_gibbs_step_zero_params_binary_marginal():
    schema = binary_schema(1)
    p = zero_params(schema, 2)
    rng = np.random.default_rng(0)
    v = np.zeros(1)
    draws = []
    for _ in range(10_000):
        v = gibbs_step(v, p, rng)
        draws.append(v[0])
    assert abs(np.mean(draws) - 0.5) < 0.02


def test_gibbs_step_respects_supports():
    schema = mixed_schema()
    p = random_params(schema, 3, seed=8, scale=1.5)
    rng = np.random.default_rng(4)
    v = np.array([0.0, 0.0, 0.0])
    for _ in range(200):
        v = gibbs_step(v, p, rng)
        assert v[0] in (0.0, 1.0)
        assert 0 <= int(v[2]) < 3 and v[2] == int(v[2])


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------

def test_encode_zero_params_thresholds_up():
    schema = binary_schema(2)
    p = zero_params(schema, 3)
    code = encode(np.zeros(2), p)
    assert np.allclose(code.posteriors, 0.5)
    assert np.array_equal(code.states, np.ones(3, dtype=np.uint8))


def test_encode_is_pure():
    schema = mixed_schema()
    p = random_params(schema, 5, seed=21)
    v = np.array([1.0, -0.7, 2.0])
    a, b = encode(v, p), encode(v, p)
    assert np.array_equal(a.posteriors, b.posteriors)
    assert np.array_equal(a.states, b.states)


def test_encode_threshold_boundary():
    schema = binary_schema(1)
    p = zero_params(schema, 1)
    p.hidden_bias[0] = math.log(0.4999 / 0.5001)
    code = encode(np.zeros(1), p)
    assert code.posteriors[0] == pytest.approx(0.4999, abs=1e-12)
    assert code.states[0] == 0


def test_encode_sampled_mode_needs_rng():
    schema = binary_schema(1)
    p = zero_params(schema, 1)
    with pytest.raises(ValueError):
        encode(np.zeros(1), p, sample=True)
    code = encode(np.zeros(1), p, sample=True, rng=np.random.default_rng(0))
    assert code.states[0] in (0, 1)


# ---------------------------------------------------------------------------
# training
# ---------------------------------------------------------------------------

def test_train_cd_learns_constant_binary():
    schema = binary_schema(1)
    data = [np.ones(1)] * 32
    cfg = TrainConfig(hidden_units=2, epochs=200, learning_rate=0.05,
                      batch_size=8, seed=1)
    params, trace = train_cd(schema, data, cfg)
    post = hidden_conditional(np.ones(1), params)
    phi = params.visible_bias + params.weights @ post
    recon_p = 1.0 / (1.0 + np.exp(-phi[0]))
    assert recon_p > 0.9
    assert len(trace) == 200


def test_train_cd_zero_epochs_returns_initialization():
    schema = mixed_schema()
    data = [np.array([1.0, 0.2, 1.0])]
    cfg = TrainConfig(hidden_units=3, epochs=0, seed=42)
    params, trace = train_cd(schema, data, cfg)
    ref = init_params(schema, 3, seed=42)
    assert np.array_equal(params.weights, ref.weights)
    assert np.array_equal(params.visible_bias, ref.visible_bias)
    assert trace == []


def test_train_cd_rejects_empty_and_bad_records():
    schema = binary_schema(1)
    with pytest.raises(IngestionError):
        train_cd(schema, [], TrainConfig(hidden_units=1, epochs=1))
    with pytest.raises(IngestionError, match="record 1"):
        train_cd(schema, [np.zeros(1), np.array([0.5])],
                 TrainConfig(hidden_units=1, epochs=1))


def test_train_cd_seeded_determinism():
    schema = mixed_schema()
    rng = np.random.default_rng(0)
    data = [np.array([float(rng.integers(2)), rng.normal(), float(rng.integers(3))])
            for _ in range(40)]
    cfg = TrainConfig(hidden_units=4, epochs=5, seed=77, batch_size=16)
    p1, t1 = train_cd(schema, data, cfg)
    p2, t2 = train_cd(schema, data, cfg)
    assert t1 == t2
    assert np.array_equal(p1.weights, p2.weights)
    assert np.array_equal(p1.visible_bias, p2.visible_bias)
    assert np.array_equal(p1.hidden_bias, p2.hidden_bias)


def test_train_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(hidden_units=0, epochs=1)
    with pytest.raises(ValueError):
        TrainConfig(hidden_units=1, epochs=1, momentum=1.0)
    with pytest.raises(ValueError):
        TrainConfig(hidden_units=1, epochs=1, learning_rate=0.0)


# ---------------------------------------------------------------------------
# exact likelihood oracle
# ---------------------------------------------------------------------------

def test_exact_log_likelihood_uniform_model():
    schema = binary_schema(1)
    p = zero_params(schema, 1)
    ll = exact_log_likelihood([np.zeros(1), np.ones(1)], p)
    assert ll == pytest.approx(math.log(0.5), abs=1e-12)


def test_exact_log_likelihood_matches_bruteforce():
    schema = VisibleSchema((("b0", UnitType.binary()),
                            ("c", UnitType.categorical(3)),
                            ("b1", UnitType.binary())))
    p = random_params(schema, 2, seed=123)
    data = [np.array([1.0, 2.0, 0.0]), np.array([0.0, 0.0, 1.0])]
    assert exact_log_likelihood(data, p) == pytest.approx(
        oracles.log_likelihood_enum(data, p), abs=1e-10)


def test_exact_log_likelihood_hidden_permutation_invariance():
    schema = VisibleSchema((("b0", UnitType.binary()), ("b1", UnitType.binary())))
    p = random_params(schema, 3, seed=9)
    data = [np.array([1.0, 0.0])]
    before = exact_log_likelihood(data, p)
    perm = [2, 0, 1]
    q = MvRbmParams(schema, p.visible_bias.copy(), p.hidden_bias[perm],
                    p.weights[:, perm], np.array([]))
    assert exact_log_likelihood(data, q) == pytest.approx(before, abs=1e-12)


def test_exact_log_likelihood_rejects_gaussian_and_large():
    schema = VisibleSchema((("g", UnitType.gaussian()),))
    p = zero_params(schema, 1)
    with pytest.raises(SchemaError):
        exact_log_likelihood([np.zeros(1)], p)
    big = binary_schema(15)
    p = zero_params(big, 10)
    with pytest.raises(SchemaError):
        exact_log_likelihood([np.zeros(15)], p)


def test_gradient_matches_finite_differences():
    schema = VisibleSchema((("b0", UnitType.binary()),
                            ("c", UnitType.categorical(3)),
                            ("b1", UnitType.binary())))
    p = random_params(schema, 2, seed=31)
    rng = np.random.default_rng(6)
    data = [np.array([float(rng.integers(2)), float(rng.integers(3)),
                      float(rng.integers(2))]) for _ in range(6)]
    grad = exact_log_likelihood_grad(data, p)
    step = 1e-5

    def fd(array, index):
        plus, minus = p.copy(), p.copy()
        getattr(plus, array)[index] += step
        getattr(minus, array)[index] -= step
        return (exact_log_likelihood(data, plus)
                - exact_log_likelihood(data, minus)) / (2 * step)

    for array, analytic in (("visible_bias", grad.visible_bias),
                            ("hidden_bias", grad.hidden_bias),
                            ("weights", grad.weights)):
        it = np.nditer(analytic, flags=["multi_index"])
        for val in it:
            approx = fd(array, it.multi_index)
            denom = max(abs(float(val)), abs(approx), 1e-10)
            assert abs(float(val) - approx) / denom < 1e-4


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_model_roundtrip_bit_exact(tmp_path):
    schema = mixed_schema()
    p = random_params(schema, 4, seed=55)
    path = tmp_path / "model.json"
    mvrbm.save_model(p, path)
    q = mvrbm.load_model(path)
    assert q.schema == p.schema
    assert np.array_equal(q.visible_bias, p.visible_bias)
    assert np.array_equal(q.hidden_bias, p.hidden_bias)
    assert np.array_equal(q.weights, p.weights)
    assert np.array_equal(q.gaussian_scale, p.gaussian_scale)


def test_model_rejects_unknown_version(tmp_path):
    schema = binary_schema(1)
    doc = mvrbm.model_to_json(zero_params(schema, 1))
    doc["format_version"] = 99
    with pytest.raises(SchemaError):
        mvrbm.model_from_json(doc)
