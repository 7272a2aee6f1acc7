"""Mixed-variate restricted Boltzmann machine.

Visible units are typed (binary, gaussian, or categorical); hidden units are
binary.  The joint energy is

    E(v, h) = -( sum_i G_i(v_i) + sum_k b_k h_k + sum_ik H_ik(v_i) h_k )

with the per-type terms

    binary       G_i = a_i v_i                H_ik = w_ik v_i
    gaussian     G_i = -v_i^2/(2 s_i^2) + a_i v_i   H_ik = w_ik v_i
    categorical  G_i = sum_m a_im d_m(v_i)    H_ik = sum_m w_imk d_m(v_i)

where d_m(v_i) is the one-hot indicator of category m.  Internally each unit
occupies a block of an "expanded" design vector x(v): one column for a binary
or gaussian unit, M one-hot columns for a categorical unit with M categories.
All bias/weight parameters live in expanded coordinates, which makes the
linear terms plain matrix products:

    sum_ik H_ik(v_i) h_k = x(v) . W h        sum_i a-part of G = x(v) . a
"""

from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import IngestionError, SchemaError

logger = logging.getLogger(__name__)

BINARY = "binary"
GAUSSIAN = "gaussian"
CATEGORICAL = "categorical"

MODEL_FORMAT_VERSION = 1

#: hard cap on (visible configurations) x (hidden configurations) for exact
#: likelihood evaluation
MAX_ENUMERATION = 2 ** 20


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=float)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _softmax(logits: np.ndarray, axis: int = -1) -> np.ndarray:
    z = logits - logits.max(axis=axis, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=axis, keepdims=True)


def _softplus(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, x)


# ---------------------------------------------------------------------------
# schema
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnitType:
    """Type of one visible unit; cardinality is set for categorical units only."""

    kind: str
    cardinality: int | None = None

    def __post_init__(self):
        if self.kind not in (BINARY, GAUSSIAN, CATEGORICAL):
            raise SchemaError(f"unknown unit kind {self.kind!r}")
        if self.kind == CATEGORICAL:
            if self.cardinality is None or self.cardinality < 2:
                raise SchemaError("categorical unit needs cardinality >= 2")
        elif self.cardinality is not None:
            raise SchemaError(f"{self.kind} unit must not carry a cardinality")

    @classmethod
    def binary(cls) -> "UnitType":
        return cls(BINARY)

    @classmethod
    def gaussian(cls) -> "UnitType":
        return cls(GAUSSIAN)

    @classmethod
    def categorical(cls, cardinality: int) -> "UnitType":
        return cls(CATEGORICAL, cardinality)


@dataclass(frozen=True)
class VisibleSchema:
    """Ordered, named, typed visible units."""

    units: tuple[tuple[str, UnitType], ...]

    def __post_init__(self):
        object.__setattr__(self, "units", tuple((n, t) for n, t in self.units))
        if not self.units:
            raise SchemaError("schema needs at least one visible unit")
        names = [n for n, _ in self.units]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise SchemaError(f"duplicate unit names: {dup}")

    @property
    def n_units(self) -> int:
        return len(self.units)

    @cached_property
    def slices(self) -> tuple[slice, ...]:
        """Expanded-column slice of each unit, in schema order."""
        out, start = [], 0
        for _, t in self.units:
            width = t.cardinality if t.kind == CATEGORICAL else 1
            out.append(slice(start, start + width))
            start += width
        return tuple(out)

    @property
    def expanded_dim(self) -> int:
        return self.slices[-1].stop

    @cached_property
    def binary_cols(self) -> np.ndarray:
        return np.array([self.slices[i].start for i, (_, t) in enumerate(self.units)
                         if t.kind == BINARY], dtype=int)

    @cached_property
    def gaussian_cols(self) -> np.ndarray:
        return np.array([self.slices[i].start for i, (_, t) in enumerate(self.units)
                         if t.kind == GAUSSIAN], dtype=int)

    @cached_property
    def binary_units(self) -> np.ndarray:
        return np.array([i for i, (_, t) in enumerate(self.units) if t.kind == BINARY],
                        dtype=int)

    @cached_property
    def gaussian_units(self) -> np.ndarray:
        return np.array([i for i, (_, t) in enumerate(self.units) if t.kind == GAUSSIAN],
                        dtype=int)

    @cached_property
    def categorical_units(self) -> tuple[int, ...]:
        return tuple(i for i, (_, t) in enumerate(self.units) if t.kind == CATEGORICAL)

    def validate_values(self, values: np.ndarray, where: str = "state") -> np.ndarray:
        """Check one value vector against the schema; returns it as float64."""
        v = np.asarray(values, dtype=float)
        if v.shape != (self.n_units,):
            raise SchemaError(
                f"{where}: expected {self.n_units} values, got shape {v.shape}")
        for i, (name, t) in enumerate(self.units):
            x = v[i]
            if not np.isfinite(x):
                raise SchemaError(f"{where}: unit {name!r} has non-finite value {x}")
            if t.kind == BINARY and x not in (0.0, 1.0):
                raise SchemaError(f"{where}: binary unit {name!r} got {x}")
            if t.kind == CATEGORICAL:
                if x != int(x) or not (0 <= int(x) < t.cardinality):
                    raise SchemaError(
                        f"{where}: categorical unit {name!r} index {x} outside "
                        f"[0, {t.cardinality})")
        return v

    def expand(self, values: np.ndarray) -> np.ndarray:
        """Map value rows (n x N or N) to expanded design rows (n x E or E)."""
        v = np.atleast_2d(np.asarray(values, dtype=float))
        x = np.zeros((v.shape[0], self.expanded_dim))
        for i, (_, t) in enumerate(self.units):
            sl = self.slices[i]
            if t.kind == CATEGORICAL:
                idx = v[:, i].astype(int)
                x[np.arange(v.shape[0]), sl.start + idx] = 1.0
            else:
                x[:, sl.start] = v[:, i]
        return x[0] if np.asarray(values).ndim == 1 else x

    def to_json(self) -> list[dict]:
        out = []
        for name, t in self.units:
            d = {"name": name, "kind": t.kind}
            if t.kind == CATEGORICAL:
                d["cardinality"] = t.cardinality
            out.append(d)
        return out

    @classmethod
    def from_json(cls, data: list[dict]) -> "VisibleSchema":
        return cls(tuple((d["name"], UnitType(d["kind"], d.get("cardinality")))
                         for d in data))


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------

@dataclass
class MvRbmParams:
    """All energy parameters in expanded coordinates.

    visible_bias holds a_i for binary/gaussian units and a_im per category for
    categorical units; weights holds w_ik rows and w_imk rows in the same
    layout.  gaussian_scale is the per-gaussian-unit s_i, in schema order of
    the gaussian units.
    """

    schema: VisibleSchema
    visible_bias: np.ndarray
    hidden_bias: np.ndarray
    weights: np.ndarray
    gaussian_scale: np.ndarray = field(default_factory=lambda: np.array([]))

    def __post_init__(self):
        self.visible_bias = np.asarray(self.visible_bias, dtype=float)
        self.hidden_bias = np.asarray(self.hidden_bias, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        self.gaussian_scale = np.asarray(self.gaussian_scale, dtype=float)
        e, k = self.schema.expanded_dim, self.n_hidden
        if self.visible_bias.shape != (e,):
            raise SchemaError(f"visible_bias shape {self.visible_bias.shape} != ({e},)")
        if self.weights.shape != (e, k):
            raise SchemaError(f"weights shape {self.weights.shape} != ({e}, {k})")
        ng = len(self.schema.gaussian_units)
        if self.gaussian_scale.shape != (ng,):
            raise SchemaError(
                f"gaussian_scale shape {self.gaussian_scale.shape} != ({ng},)")
        if ng and not np.all(self.gaussian_scale > 0):
            raise SchemaError("gaussian scales must be positive")

    @property
    def n_hidden(self) -> int:
        return len(self.hidden_bias)

    def copy(self) -> "MvRbmParams":
        return MvRbmParams(self.schema, self.visible_bias.copy(),
                           self.hidden_bias.copy(), self.weights.copy(),
                           self.gaussian_scale.copy())

    def _scale_cols(self) -> tuple[np.ndarray, np.ndarray]:
        """(expanded gaussian columns, their scales)."""
        return self.schema.gaussian_cols, self.gaussian_scale


def init_params(schema: VisibleSchema, n_hidden: int, seed: int,
                gaussian_scale: float | Sequence[float] = 1.0) -> MvRbmParams:
    """Fresh parameters: weights ~ Normal(0, 0.01), all biases zero."""
    if n_hidden < 1:
        raise ValueError("n_hidden must be positive")
    rng = np.random.default_rng(seed)
    e = schema.expanded_dim
    ng = len(schema.gaussian_units)
    scale = np.broadcast_to(np.asarray(gaussian_scale, dtype=float), (ng,)).copy()
    return MvRbmParams(
        schema=schema,
        visible_bias=np.zeros(e),
        hidden_bias=np.zeros(n_hidden),
        weights=rng.normal(0.0, 0.01, size=(e, n_hidden)),
        gaussian_scale=scale,
    )


# ---------------------------------------------------------------------------
# energy and conditionals
# ---------------------------------------------------------------------------

def energy(values: np.ndarray, hidden: np.ndarray, params: MvRbmParams) -> float:
    """Joint energy E(v, h) of one visible/hidden configuration."""
    schema = params.schema
    v = schema.validate_values(values)
    h = np.asarray(hidden, dtype=float)
    if h.shape != (params.n_hidden,):
        raise SchemaError(f"hidden vector shape {h.shape} != ({params.n_hidden},)")
    x = schema.expand(v)
    g = float(x @ params.visible_bias)
    if len(schema.gaussian_units):
        gv = v[schema.gaussian_units]
        g -= float(np.sum(gv ** 2 / (2.0 * params.gaussian_scale ** 2)))
    interaction = float(x @ params.weights @ h)
    return -(g + float(params.hidden_bias @ h) + interaction)


def hidden_conditional(values: np.ndarray, params: MvRbmParams) -> np.ndarray:
    """P(h_k = 1 | v) for all k: logistic(b_k + sum_i H_ik(v_i))."""
    v = params.schema.validate_values(values)
    x = params.schema.expand(v)
    return _sigmoid(params.hidden_bias + x @ params.weights)


@dataclass(frozen=True)
class BernoulliCond:
    p: float


@dataclass(frozen=True)
class GaussianCond:
    mean: float
    scale: float


@dataclass(frozen=True)
class CategoricalCond:
    probs: np.ndarray


def visible_conditional(hidden: np.ndarray, params: MvRbmParams,
                        unit: int) -> BernoulliCond | GaussianCond | CategoricalCond:
    """Distribution of visible unit `unit` given a hidden configuration."""
    schema = params.schema
    if not (0 <= unit < schema.n_units):
        raise SchemaError(f"unit index {unit} outside [0, {schema.n_units})")
    h = np.asarray(hidden, dtype=float)
    if h.shape != (params.n_hidden,):
        raise SchemaError(f"hidden vector shape {h.shape} != ({params.n_hidden},)")
    sl = schema.slices[unit]
    phi = params.visible_bias[sl] + params.weights[sl] @ h
    kind = schema.units[unit][1].kind
    if kind == BINARY:
        return BernoulliCond(p=float(_sigmoid(phi)[0]))
    if kind == GAUSSIAN:
        pos = int(np.searchsorted(schema.gaussian_units, unit))
        s = float(params.gaussian_scale[pos])
        return GaussianCond(mean=float(s * s * phi[0]), scale=s)
    return CategoricalCond(probs=_softmax(phi))


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def _sample_hidden(x: np.ndarray, params: MvRbmParams,
                   rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """(posterior probabilities, sampled bits) for expanded rows x."""
    p = _sigmoid(params.hidden_bias + x @ params.weights)
    return p, (rng.random(p.shape) < p).astype(float)


def _sample_visible(h: np.ndarray, params: MvRbmParams,
                    rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Sample v | h unit-wise; returns (values rows, expanded rows).

    Draw order is fixed (binary block, gaussian block, categorical units in
    schema order) so a given generator state yields a reproducible sample.
    """
    schema = params.schema
    n = h.shape[0]
    phi = params.visible_bias + h @ params.weights.T
    values = np.zeros((n, schema.n_units))
    x = np.zeros((n, schema.expanded_dim))
    bcols = schema.binary_cols
    if len(bcols):
        p = _sigmoid(phi[:, bcols])
        bits = (rng.random(p.shape) < p).astype(float)
        x[:, bcols] = bits
        values[:, schema.binary_units] = bits
    gcols = schema.gaussian_cols
    if len(gcols):
        s = params.gaussian_scale
        mean = (s ** 2) * phi[:, gcols]
        draw = mean + s * rng.standard_normal(mean.shape)
        x[:, gcols] = draw
        values[:, schema.gaussian_units] = draw
    for i in schema.categorical_units:
        sl = schema.slices[i]
        probs = _softmax(phi[:, sl])
        u = rng.random((n, 1))
        idx = np.minimum((probs.cumsum(axis=1) < u).sum(axis=1), sl.stop - sl.start - 1)
        x[np.arange(n), sl.start + idx] = 1.0
        values[:, i] = idx
    return values, x


def gibbs_step(values: np.ndarray, params: MvRbmParams,
               rng: np.random.Generator) -> np.ndarray:
    """One block Gibbs sweep: h ~ P(h|v), then v' ~ P(v|h)."""
    v = params.schema.validate_values(values)
    x = params.schema.expand(v)[None, :]
    _, h = _sample_hidden(x, params, rng)
    new_values, _ = _sample_visible(h, params, rng)
    return new_values[0]


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HiddenCode:
    """Hidden posteriors and their binarization for one visible state."""

    posteriors: np.ndarray
    states: np.ndarray


def encode(values: np.ndarray, params: MvRbmParams, sample: bool = False,
           rng: np.random.Generator | None = None) -> HiddenCode:
    """Latent code of a visible state.

    Deterministic by default: states[k] = 1 iff posterior[k] >= 0.5.  With
    sample=True the states are Bernoulli draws from the posteriors instead.
    """
    post = hidden_conditional(values, params)
    if sample:
        if rng is None:
            raise ValueError("sampled encoding needs an rng")
        states = (rng.random(post.shape) < post).astype(np.uint8)
    else:
        states = (post >= 0.5).astype(np.uint8)
    return HiddenCode(posteriors=post, states=states)


def encode_batch(value_rows: np.ndarray, params: MvRbmParams) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic posteriors/states for many states at once (n x K each)."""
    rows = np.atleast_2d(np.asarray(value_rows, dtype=float))
    x = params.schema.expand(rows)
    post = _sigmoid(params.hidden_bias + x @ params.weights)
    return post, (post >= 0.5).astype(np.uint8)


# ---------------------------------------------------------------------------
# training
# ---------------------------------------------------------------------------

@dataclass
class TrainConfig:
    hidden_units: int
    epochs: int
    cd_steps: int = 1
    learning_rate: float = 0.01
    batch_size: int = 64
    seed: int = 0
    weight_decay: float = 1e-4
    momentum: float = 0.5
    early_stop: bool = False
    early_stop_tol: float = 1e-3
    early_stop_patience: int = 5

    def __post_init__(self):
        if self.hidden_units < 1 or self.cd_steps < 1 or self.batch_size < 1:
            raise ValueError("hidden_units, cd_steps, batch_size must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.weight_decay < 0:
            raise ValueError("weight_decay must be >= 0")
        if not (0 <= self.momentum < 1):
            raise ValueError("momentum must lie in [0, 1)")


def reconstruction_error(params: MvRbmParams, value_rows: np.ndarray) -> float:
    """Mean per-record reconstruction error under a mean-field pass.

    Gaussian units contribute squared error, binary units Bernoulli
    cross-entropy, categorical units categorical cross-entropy; unit
    contributions are summed per record and averaged over records.
    """
    schema = params.schema
    rows = np.atleast_2d(np.asarray(value_rows, dtype=float))
    x = schema.expand(rows)
    hid = _sigmoid(params.hidden_bias + x @ params.weights)
    phi = params.visible_bias + hid @ params.weights.T
    total = np.zeros(rows.shape[0])
    eps = 1e-12
    bcols = schema.binary_cols
    if len(bcols):
        p = np.clip(_sigmoid(phi[:, bcols]), eps, 1 - eps)
        t = x[:, bcols]
        total += -(t * np.log(p) + (1 - t) * np.log(1 - p)).sum(axis=1)
    gcols = schema.gaussian_cols
    if len(gcols):
        mean = (params.gaussian_scale ** 2) * phi[:, gcols]
        total += ((x[:, gcols] - mean) ** 2).sum(axis=1)
    for i in schema.categorical_units:
        sl = schema.slices[i]
        probs = np.clip(_softmax(phi[:, sl]), eps, 1.0)
        idx = rows[:, i].astype(int)
        total += -np.log(probs[np.arange(rows.shape[0]), idx])
    return float(total.mean())


def train_cd(schema: VisibleSchema, data: Sequence[np.ndarray], cfg: TrainConfig,
             gaussian_scale: float | Sequence[float] = 1.0
             ) -> tuple[MvRbmParams, list[float]]:
    """Contrastive-divergence training; returns (params, per-epoch error trace).

    Bit-reproducible for a fixed seed: one generator drives initialization,
    shuffling, and all Gibbs draws, and updates are applied in batch order.
    """
    if len(data) == 0:
        raise IngestionError("cannot train on an empty dataset")
    rows = np.empty((len(data), schema.n_units))
    for r, values in enumerate(data):
        try:
            rows[r] = schema.validate_values(values, where=f"record {r}")
        except SchemaError as exc:
            raise IngestionError(str(exc)) from exc

    params = init_params(schema, cfg.hidden_units, cfg.seed, gaussian_scale)
    rng = np.random.default_rng(cfg.seed + 1)
    x_data = schema.expand(rows)
    n = rows.shape[0]

    vel_w = np.zeros_like(params.weights)
    vel_a = np.zeros_like(params.visible_bias)
    vel_b = np.zeros_like(params.hidden_bias)

    trace: list[float] = []
    stall = 0
    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        for start in range(0, n, cfg.batch_size):
            batch = order[start:start + cfg.batch_size]
            xb = x_data[batch]
            m = xb.shape[0]
            pos_h, h = _sample_hidden(xb, params, rng)
            xk = xb
            for _ in range(cfg.cd_steps):
                _, xk = _sample_visible(h, params, rng)
                neg_h, h = _sample_hidden(xk, params, rng)
            grad_w = (xb.T @ pos_h - xk.T @ neg_h) / m - cfg.weight_decay * params.weights
            grad_a = (xb - xk).mean(axis=0)
            grad_b = (pos_h - neg_h).mean(axis=0)
            vel_w = cfg.momentum * vel_w + cfg.learning_rate * grad_w
            vel_a = cfg.momentum * vel_a + cfg.learning_rate * grad_a
            vel_b = cfg.momentum * vel_b + cfg.learning_rate * grad_b
            params.weights += vel_w
            params.visible_bias += vel_a
            params.hidden_bias += vel_b
        err = reconstruction_error(params, rows)
        trace.append(err)
        logger.debug("epoch %d reconstruction error %.6f", epoch + 1, err)
        if cfg.early_stop and len(trace) >= 2:
            prev = trace[-2]
            rel = (prev - err) / abs(prev) if prev != 0 else 0.0
            stall = stall + 1 if rel < cfg.early_stop_tol else 0
            if stall >= cfg.early_stop_patience:
                logger.debug("early stop after epoch %d", epoch + 1)
                break
    return params, trace


# ---------------------------------------------------------------------------
# exact likelihood (test oracle for small binary/categorical models)
# ---------------------------------------------------------------------------

def _enumerate_values(schema: VisibleSchema) -> np.ndarray:
    supports = []
    for _, t in schema.units:
        if t.kind == GAUSSIAN:
            raise SchemaError("exact enumeration requires a gaussian-free schema")
        supports.append(range(2 if t.kind == BINARY else t.cardinality))
    return np.array(list(itertools.product(*supports)), dtype=float)


def _check_enumeration_size(schema: VisibleSchema, n_hidden: int) -> None:
    size = 2 ** n_hidden
    for _, t in schema.units:
        size *= 2 if t.kind == BINARY else (t.cardinality or 2)
        if size > MAX_ENUMERATION:
            raise SchemaError(
                f"enumeration size exceeds {MAX_ENUMERATION}; model too large")


def _free_energy(x: np.ndarray, params: MvRbmParams) -> np.ndarray:
    """-log sum_h exp(-E(v, h)) for expanded rows of a gaussian-free schema."""
    logits = params.hidden_bias + x @ params.weights
    return -(x @ params.visible_bias + _softplus(logits).sum(axis=-1))


def exact_log_likelihood(data: Sequence[np.ndarray], params: MvRbmParams) -> float:
    """Mean log P(v) over records, by full enumeration of the state space."""
    schema = params.schema
    _check_enumeration_size(schema, params.n_hidden)
    all_x = schema.expand(_enumerate_values(schema))
    neg_f = -_free_energy(all_x, params)
    m = neg_f.max()
    log_z = m + math.log(np.exp(neg_f - m).sum())
    rows = np.array([schema.validate_values(v, where=f"record {i}")
                     for i, v in enumerate(data)])
    return float((-_free_energy(schema.expand(rows), params) - log_z).mean())


@dataclass(frozen=True)
class LikelihoodGrad:
    """Gradient of the mean exact log-likelihood, in expanded coordinates."""

    visible_bias: np.ndarray
    hidden_bias: np.ndarray
    weights: np.ndarray


def exact_log_likelihood_grad(data: Sequence[np.ndarray],
                              params: MvRbmParams) -> LikelihoodGrad:
    """Analytic gradient: data-conditional minus model expectations of the
    sufficient statistics (x, P(h|v), x P(h|v)^T)."""
    schema = params.schema
    _check_enumeration_size(schema, params.n_hidden)
    rows = np.array([schema.validate_values(v) for v in data])
    xd = schema.expand(rows)
    pd = _sigmoid(params.hidden_bias + xd @ params.weights)
    n = xd.shape[0]

    all_x = schema.expand(_enumerate_values(schema))
    neg_f = -_free_energy(all_x, params)
    m = neg_f.max()
    pv = np.exp(neg_f - m)
    pv /= pv.sum()
    pm = _sigmoid(params.hidden_bias + all_x @ params.weights)

    return LikelihoodGrad(
        visible_bias=xd.mean(axis=0) - pv @ all_x,
        hidden_bias=pd.mean(axis=0) - pv @ pm,
        weights=xd.T @ pd / n - all_x.T @ (pv[:, None] * pm),
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def model_to_json(params: MvRbmParams) -> dict:
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "schema": params.schema.to_json(),
        "hidden_units": params.n_hidden,
        "visible_bias": params.visible_bias.tolist(),
        "hidden_bias": params.hidden_bias.tolist(),
        "weights": params.weights.tolist(),
        "gaussian_scale": params.gaussian_scale.tolist(),
    }


def model_from_json(doc: dict) -> MvRbmParams:
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise SchemaError(f"unsupported model format version {version!r}")
    return MvRbmParams(
        schema=VisibleSchema.from_json(doc["schema"]),
        visible_bias=np.array(doc["visible_bias"], dtype=float),
        hidden_bias=np.array(doc["hidden_bias"], dtype=float),
        weights=np.array(doc["weights"], dtype=float),
        gaussian_scale=np.array(doc["gaussian_scale"], dtype=float),
    )


def save_model(params: MvRbmParams, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_json(params), indent=2) + "\n")


def load_model(path: str | Path) -> MvRbmParams:
    return model_from_json(json.loads(Path(path).read_text()))
