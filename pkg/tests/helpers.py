"""Shared test utilities: independent oracles and dataset builders."""

from __future__ import annotations

import sys
from functools import lru_cache

import numpy as np

from authorlink.network import NetworkConfig, init_network, loss_and_gradients

sys.setrecursionlimit(20000)


@lru_cache(maxsize=None)
def naive_edit_distance(a: str, b: str) -> int:
    """Textbook recursive edit distance; the memo only saves repeat work."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    return min(
        naive_edit_distance(a[1:], b) + 1,
        naive_edit_distance(a, b[1:]) + 1,
        naive_edit_distance(a[1:], b[1:]) + (a[0] != b[0]),
    )


def expected_levenshtein_sim(a: str, b: str) -> float:
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    return 1.0 - naive_edit_distance(a, b) / max(len(a), len(b))


def brute_force_monge_elkan(a, b, inner) -> float:
    """Independent double-loop max-match evaluation, both directions averaged."""
    if not a or not b:
        return 0.0

    def directed(xs, ys):
        return sum(max(inner(x, y) for y in ys) for x in xs) / len(xs)

    return (directed(a, b) + directed(b, a)) / 2.0


def max_gradient_mismatch(
    config: NetworkConfig, n_samples: int = 8, eps: float = 1e-5, data_seed: int = 0
) -> float:
    """Worst relative error between analytic and central-difference gradients."""
    rng = np.random.default_rng(data_seed)
    layers = init_network(config)
    x = rng.uniform(0.0, 1.0, size=(n_samples, config.input_dim))
    y = rng.integers(0, 2, size=n_samples)
    _, grads = loss_and_gradients(layers, x, y, config.activation)
    worst = 0.0
    for layer, grad in zip(layers, grads):
        for arr, analytic in ((layer.weights, grad.weights), (layer.bias, grad.bias)):
            it = np.nditer(arr, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                original = arr[idx]
                arr[idx] = original + eps
                loss_plus = loss_and_gradients(layers, x, y, config.activation)[0]
                arr[idx] = original - eps
                loss_minus = loss_and_gradients(layers, x, y, config.activation)[0]
                arr[idx] = original
                fd = (loss_plus - loss_minus) / (2.0 * eps)
                ga = float(analytic[idx])
                denom = max(abs(ga), abs(fd))
                err = abs(ga - fd) if denom < 1e-8 else abs(ga - fd) / denom
                if err > worst:
                    worst = err
    return worst


class FixedPosteriorModel:
    """Stub classifier returning preset same-author posteriors."""

    def __init__(self, p1_by_row):
        self.p1 = np.asarray(p1_by_row, dtype=np.float64)

    def posteriors(self, features: np.ndarray) -> np.ndarray:
        p1 = self.p1[: features.shape[0]]
        return np.column_stack([1.0 - p1, p1])
