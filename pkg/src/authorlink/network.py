"""Feedforward classifier trained with resilient backpropagation.

The network is a plain multi-layer perceptron: equally wide hidden
layers with a bounded softsign activation x / (1 + |x|) by default, and
a two-unit softmax output giving class posteriors.  Weights start from
a fan-based uniform draw in +-sqrt(6 / (fan_in + fan_out)) and biases
at zero.  Training is full-batch: the mean cross-entropy gradient over
the whole training set drives one iRprop- update per epoch, with early
stopping on validation accuracy.

iRprop- adapts one step size per parameter from gradient-sign
agreement only; gradient magnitudes never enter the update, which keeps
deep softsign stacks trainable where magnitude-based rules stall.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from authorlink.errors import (
    ConfigError,
    DataError,
    NumericFaultError,
    SchemaMismatchError,
)
from authorlink.features import FEATURE_SCHEMA_VERSION

__all__ = [
    "ACTIVATIONS",
    "EpochStats",
    "ForwardTrace",
    "LayerParams",
    "MlpModel",
    "NetworkConfig",
    "Prediction",
    "RpropState",
    "forward",
    "init_network",
    "init_rprop_state",
    "load_model",
    "loss_and_gradients",
    "predict",
    "rprop_step",
    "save_model",
    "train",
]


def _softsign(z: np.ndarray) -> np.ndarray:
    return z / (1.0 + np.abs(z))


def _softsign_deriv(z: np.ndarray) -> np.ndarray:
    return 1.0 / np.square(1.0 + np.abs(z))


def _tanh_deriv(z: np.ndarray) -> np.ndarray:
    return 1.0 - np.square(np.tanh(z))


def _rectifier(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def _rectifier_deriv(z: np.ndarray) -> np.ndarray:
    return (z > 0.0).astype(np.float64)


#: name -> (activation, derivative), applied element-wise to hidden layers.
ACTIVATIONS: dict[str, tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]] = {
    "softsign": (_softsign, _softsign_deriv),
    "tanh": (np.tanh, _tanh_deriv),
    "rectifier": (_rectifier, _rectifier_deriv),
}


@dataclass(frozen=True)
class NetworkConfig:
    """Architecture and seed for one classifier column.

    All hidden layers share one width; the output layer always has two
    units (same-author vs not).
    """

    input_dim: int
    hidden_layers: int
    hidden_width: int
    output_classes: int = 2
    activation: str = "softsign"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.input_dim < 1:
            raise ConfigError(f"input_dim must be positive, got {self.input_dim}")
        if self.hidden_layers < 1:
            raise ConfigError(f"hidden_layers must be positive, got {self.hidden_layers}")
        if self.hidden_width < 1:
            raise ConfigError(f"hidden_width must be positive, got {self.hidden_width}")
        if self.output_classes != 2:
            raise ConfigError(
                f"output_classes must be 2, got {self.output_classes}"
            )
        if self.activation not in ACTIVATIONS:
            raise ConfigError(
                f"unknown activation {self.activation!r}; "
                f"expected one of {sorted(ACTIVATIONS)}"
            )

    def layer_dims(self) -> list[int]:
        """Unit counts from input through hidden layers to output."""
        return [self.input_dim] + [self.hidden_width] * self.hidden_layers + [
            self.output_classes
        ]


@dataclass
class LayerParams:
    """One layer's weight matrix (fan_out x fan_in) and bias vector."""

    weights: np.ndarray
    bias: np.ndarray

    def copy(self) -> "LayerParams":
        return LayerParams(self.weights.copy(), self.bias.copy())


@dataclass(frozen=True)
class ForwardTrace:
    """Per-layer pre-activations and activations for a single input."""

    pre_activations: tuple[np.ndarray, ...]
    activations: tuple[np.ndarray, ...]
    posteriors: np.ndarray


@dataclass(frozen=True)
class Prediction:
    """Posterior for the same-author class and the thresholded label."""

    posterior: float
    label: int


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    loss: float
    train_accuracy: float
    val_accuracy: float


@dataclass(frozen=True)
class MlpModel:
    """A trained (or initialized) network plus its architecture."""

    config: NetworkConfig
    layers: tuple[LayerParams, ...]
    feature_schema_version: int = FEATURE_SCHEMA_VERSION

    def posteriors(self, features: np.ndarray) -> np.ndarray:
        """Class posteriors for a batch of feature rows, shape (n, 2)."""
        batch = _as_batch(features, self.config.input_dim)
        return _forward_arrays(self.layers, batch, self.config.activation)[2]


def init_network(config: NetworkConfig) -> list[LayerParams]:
    """Seeded fan-based uniform weights, zero biases.

    Each weight matrix is drawn uniformly from
    +-sqrt(6 / (fan_in + fan_out)); the draw order is fixed (input to
    output), so equal seeds give bit-identical parameters.
    """
    rng = np.random.default_rng(config.seed)
    dims = config.layer_dims()
    layers = []
    for fan_in, fan_out in zip(dims, dims[1:]):
        bound = math.sqrt(6.0 / (fan_in + fan_out))
        weights = rng.uniform(-bound, bound, size=(fan_out, fan_in))
        layers.append(LayerParams(weights, np.zeros(fan_out)))
    return layers


def _as_batch(features: np.ndarray, input_dim: int) -> np.ndarray:
    batch = np.asarray(features, dtype=np.float64)
    if batch.ndim == 1:
        batch = batch[np.newaxis, :]
    if batch.ndim != 2 or batch.shape[1] != input_dim:
        raise ConfigError(
            f"feature shape {batch.shape} does not match input_dim {input_dim}"
        )
    return batch


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _forward_arrays(
    layers: Sequence[LayerParams], batch: np.ndarray, activation: str
) -> tuple[list[np.ndarray], list[np.ndarray], np.ndarray]:
    """Batch forward pass returning pre-activations, activations, posteriors."""
    act_fn = ACTIVATIONS[activation][0]
    pre: list[np.ndarray] = []
    post: list[np.ndarray] = []
    h = batch
    last = len(layers) - 1
    for index, layer in enumerate(layers):
        z = h @ layer.weights.T + layer.bias
        if not np.all(np.isfinite(z)):
            raise NumericFaultError(
                f"non-finite pre-activation in layer {index}"
            )
        pre.append(z)
        h = _softmax(z) if index == last else act_fn(z)
        post.append(h)
    return pre, post, post[-1]


def forward(model: MlpModel, features: np.ndarray) -> ForwardTrace:
    """Forward pass for one input vector.

    The returned posteriors sum to 1 (softmax output); hidden
    activations are bounded by the configured activation function.
    """
    batch = _as_batch(features, model.config.input_dim)
    if batch.shape[0] != 1:
        raise ConfigError("forward expects a single feature vector")
    pre, post, probs = _forward_arrays(model.layers, batch, model.config.activation)
    return ForwardTrace(
        pre_activations=tuple(z[0] for z in pre),
        activations=tuple(h[0] for h in post),
        posteriors=probs[0],
    )


def loss_and_gradients(
    layers: Sequence[LayerParams],
    features: np.ndarray,
    labels: np.ndarray,
    activation: str = "softsign",
) -> tuple[float, list[LayerParams]]:
    """Mean cross-entropy over the batch and its exact gradients.

    The loss is -log p(label | x) averaged over the batch, computed via
    log-sum-exp for stability; gradients come from standard
    backpropagation and share the parameter structure (a LayerParams per
    layer).
    """
    y = np.asarray(labels, dtype=np.int64)
    batch = _as_batch(features, layers[0].weights.shape[1])
    n = batch.shape[0]
    if n == 0:
        raise DataError("empty batch")
    if y.shape != (n,):
        raise ConfigError(f"labels shape {y.shape} does not match batch size {n}")
    pre, post, probs = _forward_arrays(layers, batch, activation)
    z_out = pre[-1]
    shifted = z_out - z_out.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    rows = np.arange(n)
    loss = float(np.mean(log_norm - shifted[rows, y]))

    deriv_fn = ACTIVATIONS[activation][1]
    delta = probs.copy()
    delta[rows, y] -= 1.0
    delta /= n
    grads: list[LayerParams] = [None] * len(layers)  # type: ignore[list-item]
    for index in range(len(layers) - 1, -1, -1):
        h_prev = batch if index == 0 else post[index - 1]
        grads[index] = LayerParams(delta.T @ h_prev, delta.sum(axis=0))
        if index > 0:
            delta = (delta @ layers[index].weights) * deriv_fn(pre[index - 1])
    return loss, grads


@dataclass
class RpropState:
    """Per-parameter step sizes and previous gradient signs for iRprop-.

    ``steps`` and ``prev_signs`` mirror the parameter structure; signs
    live in {-1, 0, +1} and step sizes stay clamped to
    [step_min, step_max].
    """

    steps: list[LayerParams]
    prev_signs: list[LayerParams]
    eta_plus: float = 1.2
    eta_minus: float = 0.5
    step_init: float = 0.1
    step_min: float = 1e-6
    step_max: float = 50.0


def init_rprop_state(
    layers: Sequence[LayerParams],
    eta_plus: float = 1.2,
    eta_minus: float = 0.5,
    step_init: float = 0.1,
    step_min: float = 1e-6,
    step_max: float = 50.0,
) -> RpropState:
    steps = [
        LayerParams(
            np.full_like(layer.weights, step_init), np.full_like(layer.bias, step_init)
        )
        for layer in layers
    ]
    signs = [
        LayerParams(np.zeros_like(layer.weights), np.zeros_like(layer.bias))
        for layer in layers
    ]
    return RpropState(
        steps, signs, eta_plus, eta_minus, step_init, step_min, step_max
    )


def _rprop_update(
    param: np.ndarray,
    grad: np.ndarray,
    step: np.ndarray,
    prev_sign: np.ndarray,
    state: RpropState,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    sign_now = np.sign(grad)
    agreement = prev_sign * sign_now
    new_step = step.copy()
    grew = agreement > 0
    shrunk = agreement < 0
    new_step[grew] = np.minimum(step[grew] * state.eta_plus, state.step_max)
    new_step[shrunk] = np.maximum(step[shrunk] * state.eta_minus, state.step_min)
    # iRprop-: a sign flip zeroes the working gradient, so the parameter
    # holds still this step and the next step sees a zero sign memory.
    move_sign = np.where(shrunk, 0.0, sign_now)
    return param - move_sign * new_step, new_step, move_sign


def rprop_step(
    layers: Sequence[LayerParams],
    grads: Sequence[LayerParams],
    state: RpropState,
) -> tuple[list[LayerParams], RpropState]:
    """One iRprop- update; returns fresh parameters and state.

    Per parameter: gradient-sign agreement grows the step by eta_plus,
    a sign flip shrinks it by eta_minus (both clamped) and suppresses
    the move, and the parameter otherwise moves by
    -sign(gradient) * step.
    """
    new_layers: list[LayerParams] = []
    new_steps: list[LayerParams] = []
    new_signs: list[LayerParams] = []
    for layer, grad, step, sign in zip(layers, grads, state.steps, state.prev_signs):
        w, w_step, w_sign = _rprop_update(
            layer.weights, grad.weights, step.weights, sign.weights, state
        )
        b, b_step, b_sign = _rprop_update(
            layer.bias, grad.bias, step.bias, sign.bias, state
        )
        new_layers.append(LayerParams(w, b))
        new_steps.append(LayerParams(w_step, b_step))
        new_signs.append(LayerParams(w_sign, b_sign))
    new_state = replace(state, steps=new_steps, prev_signs=new_signs)
    return new_layers, new_state


def _accuracy(
    layers: Sequence[LayerParams],
    features: np.ndarray,
    labels: np.ndarray,
    activation: str,
) -> float:
    probs = _forward_arrays(layers, features, activation)[2]
    predicted = (probs[:, 1] >= 0.5).astype(np.int64)
    return float(np.mean(predicted == labels))


def train(
    train_features: np.ndarray,
    train_labels: np.ndarray,
    val_features: np.ndarray,
    val_labels: np.ndarray,
    config: NetworkConfig,
    max_epochs: int = 1000,
    patience: int = 25,
    feature_schema_version: int = FEATURE_SCHEMA_VERSION,
) -> tuple[MlpModel, list[EpochStats]]:
    """Full-batch iRprop- training with accuracy-based early stopping.

    Each epoch applies one update from the whole training batch, then
    evaluates train and validation accuracy.  The best validation
    parameters are kept; training stops after ``patience`` consecutive
    epochs without improvement (patience 0 therefore runs exactly one
    epoch) or at ``max_epochs``.  Deterministic given the config seed
    and inputs.
    """
    train_x = _as_batch(train_features, config.input_dim)
    val_x = _as_batch(val_features, config.input_dim)
    train_y = np.asarray(train_labels, dtype=np.int64)
    val_y = np.asarray(val_labels, dtype=np.int64)
    if train_x.shape[0] == 0 or val_x.shape[0] == 0:
        raise DataError("training and validation sets must be non-empty")
    if train_y.shape != (train_x.shape[0],) or val_y.shape != (val_x.shape[0],):
        raise ConfigError("label vectors must match their feature matrices")
    if max_epochs < 1:
        raise ConfigError(f"max_epochs must be positive, got {max_epochs}")
    if patience < 0:
        raise ConfigError(f"patience must be >= 0, got {patience}")

    layers = init_network(config)
    state = init_rprop_state(layers)
    best_layers = [layer.copy() for layer in layers]
    best_val = -1.0
    stale = 0
    log: list[EpochStats] = []
    for epoch in range(1, max_epochs + 1):
        loss, grads = loss_and_gradients(
            layers, train_x, train_y, config.activation
        )
        layers, state = rprop_step(layers, grads, state)
        train_acc = _accuracy(layers, train_x, train_y, config.activation)
        val_acc = _accuracy(layers, val_x, val_y, config.activation)
        log.append(EpochStats(epoch, loss, train_acc, val_acc))
        if val_acc > best_val:
            best_val = val_acc
            best_layers = [layer.copy() for layer in layers]
            stale = 0
        else:
            stale += 1
        if stale >= patience:
            break
    model = MlpModel(config, tuple(best_layers), feature_schema_version)
    return model, log


def predict(model: MlpModel, features: np.ndarray) -> Prediction:
    """Classify one feature vector: label 1 iff posterior >= 0.5."""
    probs = model.posteriors(features)
    posterior = float(probs[0, 1])
    return Prediction(posterior=posterior, label=1 if posterior >= 0.5 else 0)


# ---------------------------------------------------------------------------
# Persistence: a self-describing JSON file with weights as decimal text.

MODEL_FORMAT = "authorlink-mlp"
MODEL_FORMAT_VERSION = 1


def _format_float(value: float) -> str:
    # 17 significant digits: enough to reproduce any float64 bit-exactly.
    return format(value, ".16e")


def _encode_matrix(arr: np.ndarray) -> list:
    if arr.ndim == 1:
        return [_format_float(v) for v in arr.tolist()]
    return [[_format_float(v) for v in row] for row in arr.tolist()]


def model_to_dict(model: MlpModel) -> dict:
    return {
        "format": MODEL_FORMAT,
        "format_version": MODEL_FORMAT_VERSION,
        "feature_schema_version": model.feature_schema_version,
        "config": {
            "input_dim": model.config.input_dim,
            "hidden_layers": model.config.hidden_layers,
            "hidden_width": model.config.hidden_width,
            "output_classes": model.config.output_classes,
            "activation": model.config.activation,
            "seed": model.config.seed,
        },
        "layers": [
            {
                "weights": _encode_matrix(layer.weights),
                "bias": _encode_matrix(layer.bias),
            }
            for layer in model.layers
        ],
    }


def model_from_dict(payload: dict, source: str = "<model>") -> MlpModel:
    if payload.get("format") != MODEL_FORMAT:
        raise SchemaMismatchError(
            f"{source}: not a {MODEL_FORMAT} payload (format={payload.get('format')!r})"
        )
    if payload.get("format_version") != MODEL_FORMAT_VERSION:
        raise SchemaMismatchError(
            f"{source}: model format version {payload.get('format_version')!r} "
            f"is not the supported version {MODEL_FORMAT_VERSION}"
        )
    config = NetworkConfig(**payload["config"])
    layers = []
    for entry in payload["layers"]:
        weights = np.array([[float(v) for v in row] for row in entry["weights"]])
        bias = np.array([float(v) for v in entry["bias"]])
        layers.append(LayerParams(weights, bias))
    dims = config.layer_dims()
    expected = list(zip(dims[1:], dims))
    actual = [layer.weights.shape for layer in layers]
    if actual != expected:
        raise SchemaMismatchError(
            f"{source}: layer shapes {actual} do not match config {expected}"
        )
    return MlpModel(
        config, tuple(layers), int(payload.get("feature_schema_version", 0))
    )


def save_model(model: MlpModel, path: str | Path) -> None:
    """Write the model as deterministic JSON (sorted keys, compact)."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(model_to_dict(model), fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_model(path: str | Path) -> MlpModel:
    """Read a model file; forward outputs reproduce bit-identically."""
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        payload = json.load(fh)
    return model_from_dict(payload, source=str(path))
