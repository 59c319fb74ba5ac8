"""Multi-layer degree-corrected stochastic co-block model.

Each layer ``l`` of a bipartite network with ``n_r`` row nodes and ``n_c``
column nodes is drawn entrywise as

    A_l(i, j) ~ Bernoulli(theta_r[i] * theta_c[j] * B_l[g_r(i), g_c(j)])

where ``g_r``/``g_c`` map nodes to their (shared across layers) communities.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class InvalidArgumentError(ValueError):
    """An argument violates an operation's precondition."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def labels_to_membership(labels: np.ndarray, k: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    z = np.zeros((labels.size, k), dtype=np.int8)
    z[np.arange(labels.size), labels] = 1
    return z


def membership_to_labels(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z)
    if z.ndim != 2 or not np.all((z == 0) | (z == 1)) or not np.all(z.sum(axis=1) == 1):
        raise InvalidArgumentError("membership matrix must be one-hot by rows")
    return np.argmax(z, axis=1).astype(np.int64)


@dataclass(frozen=True)
class ModelParams:
    """Parameters ``(Z_r, Z_c, theta_r, theta_c, {B_l})``.

    ``B`` is stored as one ``(L, K_r, K_c)`` array.
    """

    Z_r: np.ndarray
    Z_c: np.ndarray
    theta_r: np.ndarray
    theta_c: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        Z_r = np.array(self.Z_r, dtype=np.int8)
        Z_c = np.array(self.Z_c, dtype=np.int8)
        theta_r = np.array(self.theta_r, dtype=np.float64).ravel()
        theta_c = np.array(self.theta_c, dtype=np.float64).ravel()
        B = np.array(self.B, dtype=np.float64)
        if B.ndim == 2:
            B = B[None]
        if B.ndim != 3 or B.shape[0] < 1:
            raise InvalidArgumentError("B must have shape (L, K_r, K_c) with L >= 1")
        for name, z in (("Z_r", Z_r), ("Z_c", Z_c)):
            if z.ndim != 2:
                raise InvalidArgumentError(f"{name} must be a matrix")
            if not np.all((z == 0) | (z == 1)) or not np.all(z.sum(axis=1) == 1):
                raise InvalidArgumentError(f"{name} rows must be one-hot")
            if not np.all(z.sum(axis=0) >= 1):
                raise InvalidArgumentError(f"{name} has an empty community")
        if theta_r.size != Z_r.shape[0] or theta_c.size != Z_c.shape[0]:
            raise InvalidArgumentError("theta length does not match membership rows")
        if B.shape[1:] != (Z_r.shape[1], Z_c.shape[1]):
            raise InvalidArgumentError(
                f"B blocks have shape {B.shape[1:]}, expected {(Z_r.shape[1], Z_c.shape[1])}"
            )
        for name, t in (("theta_r", theta_r), ("theta_c", theta_c)):
            if not np.all((t > 0) & (t <= 1)):
                raise InvalidArgumentError(f"{name} entries must lie in (0, 1]")
        if not np.all((B >= 0) & (B <= 1)):
            raise InvalidArgumentError("B entries must lie in [0, 1]")
        # probabilities are products of numbers in [0, 1], so they stay in [0, 1]
        for name, value in (("Z_r", Z_r), ("Z_c", Z_c), ("theta_r", theta_r), ("theta_c", theta_c), ("B", B)):
            object.__setattr__(self, name, _frozen(value))

    @property
    def n_r(self) -> int:
        return self.Z_r.shape[0]

    @property
    def n_c(self) -> int:
        return self.Z_c.shape[0]

    @property
    def K_r(self) -> int:
        return self.Z_r.shape[1]

    @property
    def K_c(self) -> int:
        return self.Z_c.shape[1]

    @property
    def L(self) -> int:
        return self.B.shape[0]

    @property
    def row_labels(self) -> np.ndarray:
        return np.argmax(self.Z_r, axis=1).astype(np.int64)

    @property
    def col_labels(self) -> np.ndarray:
        return np.argmax(self.Z_c, axis=1).astype(np.int64)

    @classmethod
    def from_labels(cls, row_labels, col_labels, theta_r, theta_c, B, K_r=None, K_c=None) -> "ModelParams":
        row_labels = np.asarray(row_labels, dtype=np.int64)
        col_labels = np.asarray(col_labels, dtype=np.int64)
        B = np.asarray(B, dtype=np.float64)
        if B.ndim == 2:
            B = B[None]
        K_r = B.shape[1] if K_r is None else K_r
        K_c = B.shape[2] if K_c is None else K_c
        return cls(
            labels_to_membership(row_labels, K_r),
            labels_to_membership(col_labels, K_c),
            theta_r,
            theta_c,
            B,
        )

    def to_dict(self) -> dict:
        return {
            "row_labels": self.row_labels.tolist(),
            "col_labels": self.col_labels.tolist(),
            "K_r": self.K_r,
            "K_c": self.K_c,
            "theta_r": self.theta_r.tolist(),
            "theta_c": self.theta_c.tolist(),
            "B": self.B.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        return cls.from_labels(
            d["row_labels"], d["col_labels"], d["theta_r"], d["theta_c"], d["B"], d.get("K_r"), d.get("K_c")
        )


@dataclass(frozen=True)
class MultiLayerBipartiteNetwork:
    """``L`` binary ``n_r x n_c`` adjacency matrices, stored as one ``(L, n_r, n_c)`` uint8 array."""

    layers: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        a = np.asarray(self.layers)
        if a.ndim == 2:
            a = a[None]
        if a.ndim != 3:
            raise InvalidArgumentError("layers must have shape (L, n_r, n_c)")
        if a.dtype != np.uint8:
            if not np.all((a == 0) | (a == 1)):
                raise InvalidArgumentError("adjacency entries must be 0 or 1")
            a = a.astype(np.uint8)
        elif a.size and a.max() > 1:
            raise InvalidArgumentError("adjacency entries must be 0 or 1")
        a = np.array(a, copy=True)
        object.__setattr__(self, "layers", _frozen(a))

    @property
    def L(self) -> int:
        return self.layers.shape[0]

    @property
    def n_r(self) -> int:
        return self.layers.shape[1]

    @property
    def n_c(self) -> int:
        return self.layers.shape[2]

    def transpose(self) -> "MultiLayerBipartiteNetwork":
        """Swap the roles of row and column nodes in every layer."""
        return MultiLayerBipartiteNetwork(self.layers.transpose(0, 2, 1))

    def edge_count(self) -> int:
        return int(self.layers.sum(dtype=np.int64))

    def __eq__(self, other):
        if not isinstance(other, MultiLayerBipartiteNetwork):
            return NotImplemented
        return self.layers.shape == other.layers.shape and bool(np.array_equal(self.layers, other.layers))

    __hash__ = None


@dataclass(frozen=True)
class ExpectedAdjacency:
    omega: np.ndarray  # (L, n_r, n_c)

    def __post_init__(self):
        object.__setattr__(self, "omega", _frozen(np.asarray(self.omega, dtype=np.float64)))


def sample_membership(n: int, K: int, rng: np.random.Generator) -> np.ndarray:
    """One-hot ``n x K`` membership with uniform community draws and no empty community.

    The whole matrix is redrawn until every community is occupied.
    """
    if K < 1 or n < K:
        raise InvalidArgumentError(f"need n >= K >= 1, got n={n}, K={K}")
    while True:
        labels = rng.integers(0, K, size=n)
        if np.unique(labels).size == K:
            return labels_to_membership(labels, K)


def _positive_uniform(rng: np.random.Generator, shape) -> np.ndarray:
    u = rng.random(shape)
    # Generator.random samples [0, 1); an exact zero is redrawn
    while True:
        zero = u == 0.0
        if not zero.any():
            return u
        u[zero] = rng.random(int(zero.sum()))


def sample_simulation_params(
    n_r: int, n_c: int, K_r: int, K_c: int, L: int, rho: float, rng: np.random.Generator
) -> ModelParams:
    """Random parameters following the simulation protocol.

    ``theta = sqrt(rho) * U(0, 1)`` for every node and ``B_l(k, m) ~ U(0, 1)``.
    """
    if not (0.0 < rho <= 1.0):
        raise InvalidArgumentError(f"rho must lie in (0, 1], got {rho}")
    if L < 1:
        raise InvalidArgumentError(f"L must be >= 1, got {L}")
    Z_r = sample_membership(n_r, K_r, rng)
    Z_c = sample_membership(n_c, K_c, rng)
    scale = np.sqrt(rho)
    theta_r = scale * _positive_uniform(rng, n_r)
    theta_c = scale * _positive_uniform(rng, n_c)
    B = _positive_uniform(rng, (L, K_r, K_c))
    return ModelParams(Z_r, Z_c, theta_r, theta_c, B)


def expected_adjacency(params: ModelParams) -> ExpectedAdjacency:
    g_r = params.row_labels
    g_c = params.col_labels
    blocks = params.B[:, g_r][:, :, g_c]  # (L, n_r, n_c)
    omega = params.theta_r[None, :, None] * blocks * params.theta_c[None, None, :]
    return ExpectedAdjacency(omega)


def sample_network(params: ModelParams, rng: np.random.Generator) -> MultiLayerBipartiteNetwork:
    omega = expected_adjacency(params).omega
    u = rng.random(omega.shape)
    return MultiLayerBipartiteNetwork((u < omega).astype(np.uint8))
