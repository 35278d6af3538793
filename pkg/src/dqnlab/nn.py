"""From-scratch dense Q-network.

Three linear layers with ReLU on the hidden layers, inverted dropout
after the first two, Kaiming-initialized weights, Huber loss, Adam with
bias correction, elementwise gradient clipping, and a versioned JSON
checkpoint format.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels as K
from .errors import CheckpointError, CheckpointVersionError, ConfigError, ShapeError

CHECKPOINT_VERSION = 1
N_LAYERS = 3


@dataclass(frozen=True)
class LayerSpec:
    """Dimensions of one linear layer."""

    fan_in: int
    fan_out: int

    def __post_init__(self):
        if self.fan_in < 1 or self.fan_out < 1:
            raise ConfigError(
                f"layer dimensions must be >= 1, got {self.fan_in}x{self.fan_out}"
            )


def kaiming_init(spec: LayerSpec, rng: np.random.Generator):
    """Weights ~ Normal(0, 2/fan_in), biases zero.

    The variance scaling keeps activation magnitudes stable under ReLU.
    """
    std = math.sqrt(2.0 / spec.fan_in)
    w = rng.normal(0.0, std, size=(spec.fan_out, spec.fan_in))
    b = np.zeros(spec.fan_out)
    return w, b


@dataclass
class ForwardCache:
    """Intermediate values of a train-mode forward pass.

    ``inputs[k]`` is what layer k consumed, ``pre_acts[k]`` its affine
    output before ReLU, ``masks[k]`` the 0/1 dropout mask applied after
    hidden layer k (None when dropout was inactive).
    """

    inputs: list
    pre_acts: list
    masks: list
    squeeze: bool


@dataclass
class Gradients:
    """Per-parameter partial derivatives, shape-congruent with a network."""

    weights: list
    biases: list


class QNetwork:
    """3-layer MLP mapping an observation vector to per-action Q-values."""

    def __init__(self, weights, biases, dropout_p: float = 0.1):
        if len(weights) != N_LAYERS or len(biases) != N_LAYERS:
            raise ShapeError(f"expected exactly {N_LAYERS} layers, got {len(weights)}")
        self.weights = [np.ascontiguousarray(w, dtype=np.float64) for w in weights]
        self.biases = [np.ascontiguousarray(b, dtype=np.float64) for b in biases]
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.ndim != 1 or w.shape[0] != b.shape[0]:
                raise ShapeError(f"layer {k}: weight {w.shape} and bias {b.shape} disagree")
            if k > 0 and w.shape[1] != self.weights[k - 1].shape[0]:
                raise ShapeError(
                    f"layer {k} fan_in {w.shape[1]} != layer {k - 1} fan_out "
                    f"{self.weights[k - 1].shape[0]}"
                )
        if not 0.0 <= dropout_p < 1.0:
            raise ConfigError(f"dropout_p must be in [0, 1), got {dropout_p}")
        self.dropout_p = float(dropout_p)

    @classmethod
    def create(
        cls,
        in_dim: int,
        hidden_dim: int,
        out_dim: int,
        dropout_p: float = 0.1,
        rng: np.random.Generator | None = None,
    ) -> "QNetwork":
        """Kaiming-initialized in -> hidden -> hidden -> out network."""
        rng = np.random.default_rng() if rng is None else rng
        specs = [
            LayerSpec(in_dim, hidden_dim),
            LayerSpec(hidden_dim, hidden_dim),
            LayerSpec(hidden_dim, out_dim),
        ]
        pairs = [kaiming_init(s, rng) for s in specs]
        return cls([w for w, _ in pairs], [b for _, b in pairs], dropout_p)

    @property
    def in_dim(self) -> int:
        return self.weights[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights[-1].shape[0]

    def layer_specs(self):
        return [LayerSpec(w.shape[1], w.shape[0]) for w in self.weights]

    def copy(self) -> "QNetwork":
        return QNetwork(
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            self.dropout_p,
        )

    def parameters(self):
        """Flat iteration order used by the optimizer and soft updates."""
        for w, b in zip(self.weights, self.biases):
            yield w
            yield b

    def forward(self, x, train: bool = False, rng: np.random.Generator | None = None):
        """Q-values for x; returns (q, cache). cache is None in eval mode.

        Train mode applies inverted dropout after the two hidden ReLUs:
        activations are zeroed with probability p and survivors divided
        by (1 - p), so eval mode needs no rescaling.
        """
        x = np.ascontiguousarray(x, dtype=np.float64)
        squeeze = x.ndim == 1
        if squeeze:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != self.in_dim:
            got = x.shape[-1] if x.ndim else 0
            raise ShapeError(f"expected input length {self.in_dim}, got {got}")
        use_dropout = train and self.dropout_p > 0.0
        if use_dropout and rng is None:
            raise ConfigError("train-mode forward with dropout requires an rng")

        inputs, pre_acts, masks = [], [], []
        h = x
        for k in range(N_LAYERS):
            inputs.append(h)
            z = K.affine_forward(h, self.weights[k], self.biases[k])
            pre_acts.append(z)
            if k < N_LAYERS - 1:
                a = K.relu_forward(z)
                if use_dropout:
                    mask = (rng.random(a.shape) >= self.dropout_p).astype(np.float64)
                    a = K.apply_mask(a, mask, 1.0 / (1.0 - self.dropout_p))
                    masks.append(mask)
                else:
                    masks.append(None)
                h = a
            else:
                h = z
        q = h[0] if squeeze else h
        cache = ForwardCache(inputs, pre_acts, masks, squeeze) if train else None
        return q, cache

    def backward(self, cache: ForwardCache, output_grad) -> Gradients:
        """Backpropagate d(loss)/d(q) through the cached forward pass."""
        if cache is None:
            raise ShapeError("backward requires the cache of a train-mode forward")
        output_grad = np.ascontiguousarray(output_grad, dtype=np.float64)
        if cache.squeeze and output_grad.ndim == 1:
            output_grad = output_grad[None, :]
        if output_grad.shape != cache.pre_acts[-1].shape:
            raise ShapeError(
                f"output_grad shape {output_grad.shape} != "
                f"q-value shape {cache.pre_acts[-1].shape}"
            )
        if cache.inputs[0].shape[1] != self.in_dim:
            raise ShapeError("cache was produced by a network of different shape")

        dweights = [None] * N_LAYERS
        dbiases = [None] * N_LAYERS
        g = output_grad
        for k in reversed(range(N_LAYERS)):
            dx, dw, db = K.affine_backward(cache.inputs[k], self.weights[k], g)
            dweights[k] = dw
            dbiases[k] = db
            if k > 0:
                mask = cache.masks[k - 1]
                if mask is not None:
                    dx = K.apply_mask(dx, mask, 1.0 / (1.0 - self.dropout_p))
                g = K.relu_backward(cache.pre_acts[k - 1], dx)
        return Gradients(dweights, dbiases)


def huber_loss(pred: float, target: float, delta: float):
    """Scalar Huber loss and its derivative w.r.t. pred.

    Quadratic within delta of the target, linear beyond; the derivative
    is (pred - target) clamped to [-delta, +delta].
    """
    if delta <= 0:
        raise ConfigError(f"delta must be > 0, got {delta}")
    diff = pred - target
    if abs(diff) <= delta:
        return 0.5 * diff * diff, diff
    return delta * abs(diff) - 0.5 * delta * delta, math.copysign(delta, diff)


def clip_gradients(grads: Gradients, limit: float) -> Gradients:
    """Clamp every gradient component to [-limit, +limit]."""
    if limit <= 0:
        raise ConfigError(f"clip limit must be > 0, got {limit}")

    def _clip(a):
        return K.clip_elementwise(np.ascontiguousarray(a).ravel(), limit).reshape(a.shape)

    return Gradients([_clip(w) for w in grads.weights], [_clip(b) for b in grads.biases])


@dataclass
class Adam:
    """Bias-corrected adaptive-moment optimizer state."""

    lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step_count: int = 0
    m: list = field(default_factory=list)
    v: list = field(default_factory=list)

    @classmethod
    def for_network(cls, net: QNetwork, lr: float) -> "Adam":
        opt = cls(lr=lr)
        opt.m = [np.zeros_like(p) for p in net.parameters()]
        opt.v = [np.zeros_like(p) for p in net.parameters()]
        return opt

    def step(self, net: QNetwork, grads: Gradients) -> None:
        """One in-place parameter update from the given gradients."""
        params = list(net.parameters())
        gs = [g for pair in zip(grads.weights, grads.biases) for g in pair]
        if len(params) != len(self.m):
            raise ShapeError("optimizer state does not match network layout")
        self.step_count += 1
        for p, g, m, v in zip(params, gs, self.m, self.v):
            if p.shape != g.shape:
                raise ShapeError(f"gradient shape {g.shape} != parameter shape {p.shape}")
            K.adam_update(
                p.ravel(),
                np.ascontiguousarray(g).ravel(),
                m.ravel(),
                v.ravel(),
                self.step_count,
                self.lr,
                self.beta1,
                self.beta2,
                self.eps,
            )


def network_to_document(net: QNetwork) -> dict:
    """Version-1 checkpoint document (plain JSON-serializable dict)."""
    return {
        "version": CHECKPOINT_VERSION,
        "dropout_p": net.dropout_p,
        "layers": [
            {
                "fan_in": int(w.shape[1]),
                "fan_out": int(w.shape[0]),
                "w": w.ravel().tolist(),
                "b": b.tolist(),
            }
            for w, b in zip(net.weights, net.biases)
        ],
    }


def network_from_document(doc) -> QNetwork:
    """Rebuild a network from a checkpoint document.

    Raises CheckpointVersionError on version mismatch, ShapeError on
    dimension inconsistencies, CheckpointError on anything malformed.
    """
    if not isinstance(doc, dict):
        raise CheckpointError(f"checkpoint must be a JSON object, got {type(doc).__name__}")
    version = doc.get("version")
    if version != CHECKPOINT_VERSION:
        raise CheckpointVersionError(
            f"unsupported checkpoint version {version!r}, expected {CHECKPOINT_VERSION}"
        )
    unknown = set(doc) - {"version", "dropout_p", "layers"}
    if unknown:
        raise CheckpointError(f"unknown checkpoint fields: {sorted(unknown)}")
    try:
        dropout_p = float(doc["dropout_p"])
        layers = doc["layers"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"malformed checkpoint: {exc}") from exc
    if not isinstance(layers, list) or len(layers) != N_LAYERS:
        raise ShapeError(f"checkpoint must describe {N_LAYERS} layers")
    weights, biases = [], []
    for k, layer in enumerate(layers):
        try:
            fan_in = int(layer["fan_in"])
            fan_out = int(layer["fan_out"])
            w = np.asarray(layer["w"], dtype=np.float64)
            b = np.asarray(layer["b"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as exc:
            raise CheckpointError(f"malformed layer {k}: {exc}") from exc
        if w.size != fan_in * fan_out:
            raise ShapeError(
                f"layer {k}: {w.size} weights cannot fill {fan_out}x{fan_in}"
            )
        if b.size != fan_out:
            raise ShapeError(f"layer {k}: {b.size} biases for {fan_out} units")
        weights.append(w.reshape(fan_out, fan_in))
        biases.append(b)
    try:
        return QNetwork(weights, biases, dropout_p)
    except ConfigError as exc:
        raise CheckpointError(str(exc)) from exc


def save_network(net: QNetwork, path) -> None:
    """Write the checkpoint as UTF-8 JSON with round-trip float precision."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(network_to_document(net), f)
        f.write("\n")


def load_network(path) -> QNetwork:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"checkpoint is not valid JSON: {exc}") from exc
    return network_from_document(doc)
