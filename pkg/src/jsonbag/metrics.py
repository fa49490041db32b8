"""Distances between discrete probability distributions and feature vectors.

Distributions are plain mappings from outcome id to probability. All
divergences use log base 2, so the Jensen-Shannon divergence lies in [0, 1]
and its square root (a true metric) does too. Alignment between two
distributions is the union of their keys with zero fill; summation always
runs in sorted key order so that swapping the arguments returns the exact
same float.
"""

from __future__ import annotations

import logging
import math
from typing import Mapping, Sequence

import numpy as np

logger = logging.getLogger(__name__)

Distribution = Mapping[str, float]


def kl_divergence(p: Distribution, q: Distribution) -> float:
    """KL(P || Q) in bits. Returns +inf when q lacks mass somewhere p has it."""
    total = 0.0
    for x in sorted(set(p) | set(q)):
        px = p.get(x, 0.0)
        if px <= 0.0:
            continue
        qx = q.get(x, 0.0)
        if qx <= 0.0:
            logger.warning("kl_divergence is infinite: %r has zero mass under q", x)
            return math.inf
        total += px * math.log2(px / qx)
    return total


def js_divergence(p: Distribution, q: Distribution) -> float:
    """Jensen-Shannon divergence: mean KL of p and q against their mixture.

    Always finite; 0 for identical distributions, 1 for disjoint supports.
    """
    total = 0.0
    for x in sorted(set(p) | set(q)):
        px = p.get(x, 0.0)
        qx = q.get(x, 0.0)
        m = 0.5 * (px + qx)
        if m <= 0.0:
            continue
        # Summing the two one-sided terms before accumulating keeps the
        # result bit-identical under argument swap.
        term = 0.0
        if px > 0.0:
            term += px * math.log2(px / m)
        if qx > 0.0:
            term += qx * math.log2(qx / m)
        total += term
    # Guard against -1 ulp drift for near-identical inputs.
    return 0.0 if total < 0.0 else 0.5 * total


def js_distance(p: Distribution, q: Distribution) -> float:
    """Jensen-Shannon distance: square root of the JS divergence."""
    return math.sqrt(js_divergence(p, q))


def _as_vector(u: Sequence[float]) -> np.ndarray:
    arr = np.asarray(u, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {arr.shape}")
    return arr


def cosine_similarity(u: Sequence[float], v: Sequence[float]) -> float:
    """Cosine similarity; by convention 0 when either vector is all zero."""
    a, b = _as_vector(u), _as_vector(v)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    na = math.sqrt(float(a @ a))
    nb = math.sqrt(float(b @ b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(a @ b) / (na * nb)


def euclidean_distance(u: Sequence[float], v: Sequence[float]) -> float:
    a, b = _as_vector(u), _as_vector(v)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    d = a - b
    return math.sqrt(float(d @ d))


def js_distance_rows(x: np.ndarray, refs: np.ndarray, extra_mass: float = 0.0) -> np.ndarray:
    """JSD between one distribution row and each row of ``refs``.

    ``x`` and ``refs`` are aligned to the same vocabulary (zero-filled).
    ``extra_mass`` is probability mass of x living outside that vocabulary;
    each such coordinate meets zero reference mass and contributes exactly
    half its probability to the divergence.
    """
    x = np.asarray(x, dtype=float)
    refs = np.atleast_2d(np.asarray(refs, dtype=float))
    if x.shape[0] != refs.shape[1]:
        raise ValueError(f"length mismatch: {x.shape[0]} vs {refs.shape[1]}")
    m2 = x[None, :] + refs  # 2 * mixture
    with np.errstate(divide="ignore", invalid="ignore"):
        tx = np.where(x[None, :] > 0.0, x[None, :] * np.log2(2.0 * x[None, :] / m2), 0.0)
        tr = np.where(refs > 0.0, refs * np.log2(2.0 * refs / m2), 0.0)
    div = 0.5 * (tx + tr).sum(axis=1) + 0.5 * extra_mass
    return np.sqrt(np.maximum(div, 0.0))
