"""Dense complex linear algebra and entropy toolkit for 2x2 / 4x4 states.

Everything here is deliberately small: the package only ever deals with a
qubit, or a qubit plus one purifying/ancilla qubit.  Matrices are plain
row-major complex numpy arrays; ``DensityMatrix`` and ``KrausSet`` are thin
validated containers around them.  Tensor products are taken in
(system (x) ancilla) Kronecker order, i.e. the system is the first factor.

All entropies are base-2 (bits).
"""

import numpy as np

from chancap.errors import NumericalError

#: default tolerance for Hermiticity checks
HERMITICITY_TOL = 1e-12
#: default tolerance for the smallest admissible eigenvalue of a state
PSD_TOL = 1e-10
#: default tolerance for Kraus completeness
COMPLETENESS_TOL = 1e-10

_EIG_CLAMP = 1e-10  # eigenvalues in [-clamp, 0) are treated as exact zeros


def _as_complex_matrix(matrix, dims=(2, 4)) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] not in dims:
        raise ValueError(f"unsupported dimension {m.shape[0]}; expected one of {dims}")
    return m


class DensityMatrix:
    """A 2x2 or 4x4 density matrix: Hermitian, unit trace, PSD.

    Validation tolerances can be widened for heavily chained maps; the
    defaults absorb roundoff from repeated Kraus applications.  Instances
    are immutable; the wrapped array is read-only.
    """

    __slots__ = ("_m",)

    def __init__(self, matrix, *, hermiticity_tol=HERMITICITY_TOL, psd_tol=PSD_TOL):
        m = _as_complex_matrix(matrix)
        if np.max(np.abs(m - m.conj().T)) > hermiticity_tol:
            raise ValueError("matrix is not Hermitian within tolerance")
        if abs(m.trace() - 1.0) > hermiticity_tol:
            raise ValueError(f"trace must be 1, got {m.trace()}")
        m = 0.5 * (m + m.conj().T)  # symmetrise roundoff away
        if np.min(np.linalg.eigvalsh(m)) < -psd_tol:
            raise ValueError("matrix has a negative eigenvalue beyond tolerance")
        m.setflags(write=False)
        self._m = m

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def dim(self) -> int:
        return self._m.shape[0]

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


class KrausSet:
    """A set of 1-4 qubit Kraus operators with the completeness check."""

    __slots__ = ("_ops",)

    def __init__(self, operators, *, completeness_tol=COMPLETENESS_TOL):
        ops = [_as_complex_matrix(k, dims=(2,)) for k in operators]
        if not 1 <= len(ops) <= 4:
            raise ValueError(f"expected 1-4 operators, got {len(ops)}")
        total = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(total - np.eye(2))) > completeness_tol:
            raise ValueError("Kraus operators do not resolve the identity")
        for k in ops:
            k.setflags(write=False)
        self._ops = tuple(ops)

    @property
    def operators(self) -> tuple:
        return self._ops

    @property
    def dim(self) -> int:
        return 2

    def __len__(self):
        return len(self._ops)

    def __iter__(self):
        return iter(self._ops)


def _state_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return DensityMatrix(rho).matrix


def binary_entropy(x: float) -> float:
    """Binary Shannon entropy in bits, with 0 log 0 := 0.

    ``x`` slightly outside [0, 1] (within 1e-12) is clamped; anything
    further out signals a caller bug and raises ``ValueError``.
    """
    if not -1e-12 <= x <= 1.0 + 1e-12:
        raise ValueError(f"binary_entropy argument outside [0, 1]: {x}")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-(x * np.log2(x) + (1.0 - x) * np.log2(1.0 - x)))


def binary_entropy_arr(x: np.ndarray) -> np.ndarray:
    """Vectorised ``binary_entropy`` without the domain check (internal hot path)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = (x > 0.0) & (x < 1.0)
    xi = x[inside]
    out[inside] = -(xi * np.log2(xi) + (1.0 - xi) * np.log2(1.0 - xi))
    return out


def entropy_from_eigenvalues(eigs: np.ndarray) -> float:
    """-sum lam log2 lam with tiny negative eigenvalues clamped to zero."""
    lam = np.asarray(eigs, dtype=float)
    if np.min(lam) < -_EIG_CLAMP:
        raise NumericalError(f"eigenvalue {np.min(lam)} below PSD clamp")
    lam = np.clip(lam, 0.0, None)
    pos = lam[lam > 0.0]
    return float(-np.sum(pos * np.log2(pos)))


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy S(rho) in bits."""
    m = _state_matrix(rho)
    try:
        eigs = np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - pathological input
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    return entropy_from_eigenvalues(eigs)


def apply_operators(ops, matrix: np.ndarray) -> np.ndarray:
    """sum_i K_i M K_i^dagger for raw arrays of matching dimension."""
    out = np.zeros_like(matrix)
    for k in ops:
        out += k @ matrix @ k.conj().T
    return out


def apply_kraus(kraus: KrausSet, rho) -> DensityMatrix:
    """Apply a qubit Kraus map to a qubit state."""
    m = _state_matrix(rho)
    if m.shape[0] != kraus.dim:
        raise ValueError(f"dimension mismatch: state {m.shape[0]}, Kraus {kraus.dim}")
    return DensityMatrix(apply_operators(kraus.operators, m))


def partial_trace(rho, keep: int) -> DensityMatrix:
    """Trace out one qubit of a two-qubit state.

    ``keep=0`` keeps the first tensor factor, ``keep=1`` the second.
    """
    m = _state_matrix(rho)
    if m.shape[0] != 4:
        raise ValueError("partial_trace needs a 4x4 state")
    if keep not in (0, 1):
        raise ValueError("keep must be 0 (first factor) or 1 (second factor)")
    r = m.reshape(2, 2, 2, 2)
    reduced = np.einsum("abcb->ac", r) if keep == 0 else np.einsum("abac->bc", r)
    return DensityMatrix(reduced)


def purify(rho) -> DensityMatrix:
    """Purify a qubit state into a rank-1 two-qubit state.

    The first factor carries ``rho`` (``partial_trace(result, 0) == rho``).
    Construction is deterministic: eigenvalues sorted descending, and each
    eigenvector's first nonzero component is made real positive.
    """
    m = _state_matrix(rho)
    if m.shape[0] != 2:
        raise ValueError("purify expects a qubit state")
    eigs, vecs = np.linalg.eigh(m)
    order = np.argsort(-eigs, kind="stable")
    eigs = np.clip(eigs[order], 0.0, None)
    vecs = vecs[:, order]
    for j in range(2):
        col = vecs[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-14)
        if nz.size:
            phase = col[nz[0]] / abs(col[nz[0]])
            vecs[:, j] = col / phase
    psi = np.zeros(4, dtype=complex)
    for j in range(2):
        basis = np.zeros(2)
        basis[j] = 1.0
        psi += np.sqrt(eigs[j]) * np.kron(vecs[:, j], basis)
    return DensityMatrix(np.outer(psi, psi.conj()))
