"""Row/column gram matrices of a multi-layer network.

The debiased row gram is ``sum_l (A_l A_l' - D_l)`` with ``D_l`` the diagonal
of layer-``l`` row degrees.  For binary ``A_l`` the diagonal of ``A_l A_l'``
*is* ``D_l``, so the debiased gram has an exactly zero diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .model import InvalidArgumentError, ModelParams, MultiLayerBipartiteNetwork, expected_adjacency

Side = Literal["row", "col"]


@dataclass(frozen=True)
class GramMatrix:
    side: Side
    debiased: bool
    values: np.ndarray


@dataclass(frozen=True)
class PopulationGram:
    side: Side
    values: np.ndarray


def _stack(layers: np.ndarray, side: Side) -> np.ndarray:
    # sum_l A_l A_l' = M M' with M = [A_1 | ... | A_L]; column side uses the vertical stack
    L, n_r, n_c = layers.shape
    a = layers.astype(np.float64)
    if side == "row":
        return a.transpose(1, 0, 2).reshape(n_r, L * n_c)
    return a.reshape(L * n_r, n_c).T


def _raw(net: MultiLayerBipartiteNetwork, side: Side) -> np.ndarray:
    if side not in ("row", "col"):
        raise InvalidArgumentError(f"side must be 'row' or 'col', got {side!r}")
    m = _stack(net.layers, side)
    # entries are integers < 2**53, so the float product is exact
    return m @ m.T


def _degrees(net: MultiLayerBipartiteNetwork, side: Side) -> np.ndarray:
    axis = 2 if side == "row" else 1
    return net.layers.sum(axis=axis, dtype=np.int64).sum(axis=0).astype(np.float64)


def raw_row_gram(net: MultiLayerBipartiteNetwork) -> GramMatrix:
    return GramMatrix("row", False, _raw(net, "row"))


def raw_col_gram(net: MultiLayerBipartiteNetwork) -> GramMatrix:
    return GramMatrix("col", False, _raw(net, "col"))


def _debiased(net: MultiLayerBipartiteNetwork, side: Side) -> GramMatrix:
    s = _raw(net, side)
    s[np.diag_indices_from(s)] -= _degrees(net, side)
    return GramMatrix(side, True, s)


def debiased_row_gram(net: MultiLayerBipartiteNetwork) -> GramMatrix:
    return _debiased(net, "row")


def debiased_col_gram(net: MultiLayerBipartiteNetwork) -> GramMatrix:
    return _debiased(net, "col")


def gram(net: MultiLayerBipartiteNetwork, side: Side, debiased: bool) -> GramMatrix:
    return _debiased(net, side) if debiased else GramMatrix(side, False, _raw(net, side))


def layer_sum(net: MultiLayerBipartiteNetwork) -> np.ndarray:
    return net.layers.sum(axis=0, dtype=np.int64).astype(np.float64)


def population_gram(params: ModelParams, side: Side) -> PopulationGram:
    """``sum_l Omega_l Omega_l'`` (row) or ``sum_l Omega_l' Omega_l`` (col)."""
    if side not in ("row", "col"):
        raise InvalidArgumentError(f"side must be 'row' or 'col', got {side!r}")
    omega = expected_adjacency(params).omega
    L, n_r, n_c = omega.shape
    if side == "row":
        m = omega.transpose(1, 0, 2).reshape(n_r, L * n_c)
    else:
        m = omega.reshape(L * n_r, n_c).T
    s = m @ m.T
    # symmetrize to remove last-bit asymmetry from the BLAS kernel
    s = 0.5 * (s + s.T)
    return PopulationGram(side, s)
