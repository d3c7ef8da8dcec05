"""Core state types and dense complex linear algebra for finite quantum systems.

Everything is a thin immutable container around ``complex128`` numpy arrays in
the computational basis.  The intended scale is small dense matrices (n up to
a few dozen), where exact eigendecompositions are cheap and numerically solid.

Also defines the JSON interchange document used by the command-line tools:
an object with fields ``n`` (dimension), ``re`` and ``im`` (row-major real and
imaginary parts, length ``n`` for vectors and ``n*n`` for matrices).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_CLUSTER_TOL",
    "NotHermitian",
    "NotTraceOne",
    "NotPositive",
    "NotNormalized",
    "DimensionMismatch",
    "LengthMismatch",
    "EpsilonOutOfRange",
    "DimensionTooSmall",
    "NotFullRange",
    "PureState",
    "DensityOperator",
    "SpectralDecomposition",
    "validate_density",
    "spectral_decompose",
    "projector",
    "overlap",
    "white_noise",
    "to_interchange",
    "from_interchange",
    "dump_interchange",
    "load_interchange",
]

DEFAULT_TOL = 1e-12
ORTHONORMALITY_TOL = 1e-10
DEFAULT_CLUSTER_TOL = 1e-9


class NotHermitian(ValueError):
    """Matrix differs from its conjugate transpose beyond tolerance."""


class NotTraceOne(ValueError):
    """Trace deviates from one beyond tolerance."""


class NotPositive(ValueError):
    """An eigenvalue is negative beyond tolerance."""


class NotNormalized(ValueError):
    """Vector norm or probability total deviates from one beyond tolerance."""


class DimensionMismatch(ValueError):
    """Operands live in spaces of different dimension."""


class LengthMismatch(ValueError):
    """Probability vectors have different lengths."""


class EpsilonOutOfRange(ValueError):
    """Noise parameter outside the admissible interval (0, 1]."""


class DimensionTooSmall(ValueError):
    """Operation needs a higher-dimensional input."""


class NotFullRange(ValueError):
    """Density operator has an eigenvalue too close to zero."""


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit-norm complex amplitude vector in the computational basis.

    The squared amplitudes must sum to one within 1e-12; construction raises
    :class:`NotNormalized` otherwise.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.atleast_1d(np.asarray(self.amplitudes, dtype=np.complex128))
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError("amplitudes must be a nonempty 1-d vector")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > DEFAULT_TOL:
            raise NotNormalized(
                f"squared amplitudes sum to {norm_sq!r}, off by "
                f"{abs(norm_sq - 1.0):.3e} (tolerance {DEFAULT_TOL:.1e})"
            )
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def n(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive-semidefinite, trace-one complex matrix.

    Construct through :func:`validate_density`, which symmetrizes the input
    and checks all three invariants; direct construction only normalizes the
    dtype and trusts the caller.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError("matrix must be square and nonempty")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigensystem of a density operator, eigenvalues sorted descending.

    ``eigenvectors[:, k]`` is the unit eigenvector for ``eigenvalues[k]``.
    ``degeneracy_groups`` partitions the index range into runs of eigenvalues
    that are pairwise closer than ``cluster_tolerance``; any orthonormal basis
    of such a cluster's eigenspace is equally valid, so quantities that read
    individual eigenvectors are only determined up to that freedom.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    cluster_tolerance: float
    degeneracy_groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        p = _frozen(np.asarray(self.eigenvalues, dtype=np.float64))
        v = _frozen(np.asarray(self.eigenvectors, dtype=np.complex128))
        object.__setattr__(self, "eigenvalues", p)
        object.__setattr__(self, "eigenvectors", v)

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    def matrix(self) -> np.ndarray:
        """Reassemble the decomposed operator as a dense matrix."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def overlaps_squared(self, amplitudes: np.ndarray) -> np.ndarray:
        """Squared moduli of eigenbasis components, |<e_k|phi>|^2.

        Accepts a single amplitude vector of shape (n,) or a batch of shape
        (N, n); the eigenbasis index is always the last axis.
        """
        a = np.asarray(amplitudes, dtype=np.complex128)
        return np.abs(a @ self.eigenvectors.conj()) ** 2


def validate_density(matrix, tol: float = DEFAULT_TOL) -> DensityOperator:
    """Check a matrix against the density-operator invariants.

    The input must be Hermitian, trace-one and positive semidefinite, each
    within ``tol``.  The returned operator stores the symmetrized matrix
    ``(M + M^dagger) / 2`` so that downstream eigensolves see an exactly
    Hermitian input.

    Raises
    ------
    NotHermitian, NotTraceOne, NotPositive
        Naming the violated invariant and the measured violation.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    herm_violation = float(np.max(np.abs(m - m.conj().T)))
    if herm_violation > tol:
        raise NotHermitian(
            f"max |M - M^dagger| entry is {herm_violation:.3e} "
            f"(tolerance {tol:.1e})"
        )
    sym = 0.5 * (m + m.conj().T)
    trace_violation = abs(complex(np.trace(sym)) - 1.0)
    if trace_violation > tol:
        raise NotTraceOne(
            f"trace is {complex(np.trace(sym)).real!r}, off by "
            f"{trace_violation:.3e} (tolerance {tol:.1e})"
        )
    min_eig = float(np.linalg.eigvalsh(sym)[0])
    if min_eig < -tol:
        raise NotPositive(
            f"minimum eigenvalue is {min_eig:.3e} (tolerance -{tol:.1e})"
        )
    return DensityOperator(sym)


def spectral_decompose(
    rho: DensityOperator, cluster_tol: float = DEFAULT_CLUSTER_TOL
) -> SpectralDecomposition:
    """Eigendecompose a density operator, eigenvalues descending.

    Eigenvalues are clipped into [0, 1] to absorb rounding at the spectrum
    edges.  Consecutive eigenvalues closer than ``cluster_tol`` are chained
    into one degeneracy group.
    """
    w, v = np.linalg.eigh(rho.matrix)
    w = np.clip(w[::-1], 0.0, 1.0)
    v = v[:, ::-1]

    groups: list[tuple[int, ...]] = []
    start = 0
    for k in range(1, w.size + 1):
        if k == w.size or w[k - 1] - w[k] > cluster_tol:
            groups.append(tuple(range(start, k)))
            start = k
    return SpectralDecomposition(w, v, float(cluster_tol), tuple(groups))


def projector(phi: PureState) -> np.ndarray:
    """Rank-one projector |phi><phi| as a dense matrix."""
    a = phi.amplitudes
    return np.outer(a, a.conj())


def overlap(phi: PureState, rho: DensityOperator) -> float:
    """Expectation <phi|rho|phi>, clipped into [0, 1]."""
    if phi.n != rho.n:
        raise DimensionMismatch(
            f"state dimension {phi.n} != operator dimension {rho.n}"
        )
    value = float(np.vdot(phi.amplitudes, rho.matrix @ phi.amplitudes).real)
    return min(max(value, 0.0), 1.0)


def white_noise(n: int) -> DensityOperator:
    """Completely mixed state, identity over n."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    return DensityOperator(np.eye(n, dtype=np.complex128) / n)


# ---------------------------------------------------------------------------
# Interchange documents (used by the CLI for states and matrices on disk).


def to_interchange(array: np.ndarray) -> str:
    """Serialize a complex vector or square matrix as a JSON document.

    The document has fields ``n``, ``re`` and ``im``; ``re``/``im`` are the
    row-major real and imaginary parts, of length n for a vector and n*n for
    a matrix.
    """
    a = np.asarray(array, dtype=np.complex128)
    if a.ndim == 2:
        if a.shape[0] != a.shape[1]:
            raise ValueError(f"matrix must be square, got shape {a.shape}")
        n = a.shape[0]
    elif a.ndim == 1:
        n = a.shape[0]
    else:
        raise ValueError(f"expected a vector or matrix, got ndim {a.ndim}")
    flat = a.reshape(-1)
    doc = {
        "n": n,
        "re": [float(x) for x in flat.real],
        "im": [float(x) for x in flat.imag],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def from_interchange(text: str, filename: str = "<string>") -> np.ndarray:
    """Parse an interchange document back into a complex array.

    A length-n payload parses to a vector, a length-n*n payload to a matrix;
    anything else is a format error.  Parse failures report the offending
    file and line.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"{filename}:{exc.lineno}: invalid document: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ValueError(f"{filename}:1: top level must be an object")
    for field in ("n", "re", "im"):
        if field not in doc:
            raise ValueError(f"{filename}:1: missing field {field!r}")
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"{filename}:1: field 'n' must be a positive integer")
    re = np.asarray(doc["re"], dtype=np.float64)
    im = np.asarray(doc["im"], dtype=np.float64)
    if re.shape != im.shape or re.ndim != 1:
        raise ValueError(f"{filename}:1: 're' and 'im' must be equal-length lists")
    if re.size == n:
        return re + 1j * im
    if re.size == n * n:
        return (re + 1j * im).reshape(n, n)
    raise ValueError(
        f"{filename}:1: payload length {re.size} matches neither n={n} "
        f"(vector) nor n*n={n * n} (matrix)"
    )


def dump_interchange(path, array: np.ndarray) -> None:
    """Write an interchange document to ``path``."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(to_interchange(array))
        handle.write("\n")


def load_interchange(path) -> np.ndarray:
    """Read an interchange document from ``path``."""
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return from_interchange(text, filename=str(path))
