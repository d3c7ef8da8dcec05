"""Entropy-based distances between quantum states.

Implements the classical Kullback-Leibler divergence, von Neumann entropy,
quantum relative entropy, the Lueders post-measurement map, and the
a-posteriori distance D(rho, phi) obtained by measuring a pure state in the
eigenbasis of rho.  All logarithms are natural; all distances use the
nonnegative convention sum p log(p/q) and return ``math.inf`` when the
support condition fails.

Support handling: a component counts as populated when it exceeds
``SUPPORT_TOL``; 0 log 0 is 0 by continuity.  Inside a degenerate eigenspace
of rho the distances depend on the orthonormal basis that
:func:`qgibbs.qcore.spectral_decompose` happened to return; callers that care
must fix the basis themselves.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import rel_entr, xlogy

from .qcore import (
    DensityOperator,
    DimensionMismatch,
    LengthMismatch,
    NotNormalized,
    PureState,
    spectral_decompose,
    validate_density,
)

__all__ = [
    "SUPPORT_TOL",
    "kl_divergence",
    "von_neumann_entropy",
    "quantum_relative_entropy",
    "lueders_state",
    "a_posteriori_distance",
]

SUPPORT_TOL = 1e-12
PROB_SUM_TOL = 1e-10


def kl_divergence(p, q) -> float:
    """Kullback-Leibler divergence sum_k p_k log(p_k / q_k) in nats.

    Returns ``math.inf`` exactly when some component has p_k > 0 and
    q_k == 0.  Both arguments must be probability vectors of equal length
    (entries nonnegative, summing to one within 1e-10).
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.ndim != 1 or q.ndim != 1 or p.size != q.size:
        raise LengthMismatch(f"shapes {p.shape} and {q.shape} do not match")
    for name, vec in (("p", p), ("q", q)):
        if np.any(vec < 0.0):
            raise NotNormalized(f"{name} has negative entries")
        total = float(vec.sum())
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise NotNormalized(
                f"{name} sums to {total!r}, off by {abs(total - 1.0):.3e}"
            )
    return float(np.sum(rel_entr(p, q)))


def von_neumann_entropy(rho: DensityOperator) -> float:
    """Entropy -sum_k p_k log p_k of the eigenvalue distribution, in nats."""
    w = np.clip(np.linalg.eigvalsh(rho.matrix), 0.0, 1.0)
    return max(0.0, -float(np.sum(xlogy(w, w))))


def _kl_support(p: np.ndarray, q: np.ndarray, support_tol: float = SUPPORT_TOL) -> float:
    """sum p log(p/q) over populated components; inf on support violation."""
    populated = p > support_tol
    if np.any(populated & (q <= support_tol)):
        return math.inf
    return max(0.0, float(np.sum(rel_entr(p[populated], q[populated]))))


def _kl_support_batch(
    p: np.ndarray, q_rows: np.ndarray, support_tol: float = SUPPORT_TOL
) -> np.ndarray:
    """Row-wise :func:`_kl_support` for a batch of overlap vectors (N, n)."""
    populated = p > support_tol
    pp = p[populated]
    qq = q_rows[:, populated]
    values = np.maximum(0.0, np.sum(rel_entr(pp[np.newaxis, :], qq), axis=1))
    values[np.any(qq <= support_tol, axis=1)] = math.inf
    return values


def quantum_relative_entropy(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Quantum relative entropy trace[rho (log rho - log sigma)] in nats.

    Computed in the joint eigenrepresentation.  Returns ``math.inf`` when the
    range of rho is not contained in the range of sigma: some eigenvector of
    rho with eigenvalue above ``SUPPORT_TOL`` carries more than
    ``SUPPORT_TOL`` squared norm outside the span of sigma's populated
    eigenvectors.  Tiny negative rounding is clamped to zero.
    """
    if rho.n != sigma.n:
        raise DimensionMismatch(f"dimensions {rho.n} and {sigma.n} differ")
    p, u = np.linalg.eigh(rho.matrix)
    q, v = np.linalg.eigh(sigma.matrix)
    p = np.clip(p, 0.0, 1.0)
    q = np.clip(q, 0.0, 1.0)
    mixing = np.abs(u.conj().T @ v) ** 2  # mixing[k, j] = |<u_k|v_j>|^2

    p_populated = p > SUPPORT_TOL
    q_populated = q > SUPPORT_TOL
    outside = 1.0 - mixing[:, q_populated].sum(axis=1)
    if np.any(p_populated & (outside > SUPPORT_TOL)):
        return math.inf

    pk = p[p_populated]
    entropy_term = float(np.sum(xlogy(pk, pk)))
    cross = mixing[np.ix_(p_populated, q_populated)] @ np.log(q[q_populated])
    return max(0.0, entropy_term - float(pk @ cross))


def lueders_state(rho: DensityOperator, sigma: DensityOperator) -> DensityOperator:
    """Post-measurement state sum_k |e_k><e_k| sigma |e_k><e_k|.

    The projectors are onto the eigenvectors of rho, so the result is
    diagonal in rho's eigenbasis with entries <e_k|sigma|e_k>; the trace of
    sigma is preserved.
    """
    if rho.n != sigma.n:
        raise DimensionMismatch(f"dimensions {rho.n} and {sigma.n} differ")
    v = spectral_decompose(rho).eigenvectors
    diag = np.einsum("jk,jl,lk->k", v.conj(), sigma.matrix, v).real
    return validate_density((v * diag) @ v.conj().T)


def a_posteriori_distance(rho: DensityOperator, phi: PureState) -> float:
    """Distance sum_k p_k log(p_k / |<e_k|phi>|^2) in nats.

    p_k and e_k are the eigenvalues and eigenvectors of rho.  Equals the
    quantum relative entropy between rho and the Lueders state of |phi><phi|
    under the measurement defined by rho.  Returns ``math.inf`` when phi has
    no component along some populated eigenvector, a strictly stronger
    requirement than nonzero total overlap <phi|rho|phi>.
    """
    if rho.n != phi.n:
        raise DimensionMismatch(f"dimensions {rho.n} and {phi.n} differ")
    decomposition = spectral_decompose(rho)
    overlaps = decomposition.overlaps_squared(phi.amplitudes)
    return _kl_support(decomposition.eigenvalues, overlaps)
