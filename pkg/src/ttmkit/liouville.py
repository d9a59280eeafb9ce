"""Liouville-space conventions and small operator utilities.

Density matrices are plain complex ndarrays. A ``D x D`` matrix is
flattened row-major, ``vec(rho)[i*D + j] = rho[i, j]``, so superoperators
are ``D^2 x D^2`` matrices acting on these vectors and

    vec(A rho B) = (A kron B^T) vec(rho).

Everything in the package sticks to this one convention.
"""

import numpy as np

from .errors import DimensionError

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def vectorize(rho):
    """Flatten a square matrix to a Liouville vector (row-major)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {rho.shape}")
    return rho.reshape(-1)


def devectorize(vec):
    """Inverse of :func:`vectorize`.

    Raises
    ------
    DimensionError
        If the vector length is not a perfect square.
    """
    vec = np.asarray(vec, dtype=complex)
    if vec.ndim != 1:
        raise DimensionError(f"expected a 1-d vector, got shape {vec.shape}")
    dim = round(np.sqrt(vec.size))
    if dim * dim != vec.size:
        raise DimensionError(f"vector length {vec.size} is not a perfect square")
    return vec.reshape(dim, dim)


def basis_element(dim, i, j):
    """Matrix unit |i><j| in dimension ``dim`` (zero-based indices)."""
    if not (0 <= i < dim and 0 <= j < dim):
        raise DimensionError(f"basis indices ({i}, {j}) out of range for dim {dim}")
    out = np.zeros((dim, dim), dtype=complex)
    out[i, j] = 1.0
    return out


def spre(op):
    """Superoperator of left multiplication, rho -> op rho."""
    op = np.asarray(op, dtype=complex)
    return np.kron(op, np.eye(op.shape[0]))


def spost(op):
    """Superoperator of right multiplication, rho -> rho op."""
    op = np.asarray(op, dtype=complex)
    return np.kron(np.eye(op.shape[0]), op.T)


def liouvillian_superop(h):
    """Commutator superoperator of a Hermitian ``h``: rho -> [h, rho].

    Note the bare commutator; the Schroedinger generator is -1j times
    this matrix.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {h.shape}")
    if not np.allclose(h, h.conj().T, atol=1e-12 * max(1.0, np.abs(h).max())):
        raise DimensionError("hamiltonian must be Hermitian")
    return spre(h) - spost(h)


def unitary_superop(u):
    """Conjugation superoperator rho -> u rho u^dagger."""
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {u.shape}")
    return np.kron(u, u.conj())


def superop_norm(s):
    """Spectral norm (largest singular value) of a superoperator."""
    s = np.asarray(s)
    if s.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {s.shape}")
    return float(np.linalg.norm(s, 2))


def dagger_flip(s):
    """Superoperator conjugated by the adjoint map, A -> (S(A^+))^+.

    A superoperator preserves Hermiticity iff ``dagger_flip(s) == s``.
    """
    s = np.asarray(s, dtype=complex)
    dim2 = s.shape[0]
    dim = round(np.sqrt(dim2))
    if dim * dim != dim2 or s.shape != (dim2, dim2):
        raise DimensionError(f"superoperator shape {s.shape} is not (D^2, D^2)")
    s4 = s.reshape(dim, dim, dim, dim)
    return s4.transpose(1, 0, 3, 2).conj().reshape(dim2, dim2)


def hermiticity_defect(s):
    """Max deviation of a superoperator from preserving Hermiticity."""
    return float(np.abs(np.asarray(s, dtype=complex) - dagger_flip(s)).max())


def trace_defect(s):
    """Max deviation of a superoperator from preserving the trace.

    The trace functional in vectorized form is the row vector
    ``vec(I)^T``; trace preservation means it is a left fixed point.
    """
    s = np.asarray(s, dtype=complex)
    dim = round(np.sqrt(s.shape[0]))
    tr_row = np.eye(dim, dtype=complex).reshape(-1)
    return float(np.abs(tr_row @ s - tr_row).max())


def choi_matrix(s):
    """Choi matrix of a superoperator under the row-major convention.

    The map is completely positive iff the returned matrix is positive
    semidefinite.
    """
    s = np.asarray(s, dtype=complex)
    dim = round(np.sqrt(s.shape[0]))
    if s.shape != (dim * dim, dim * dim):
        raise DimensionError(f"superoperator shape {s.shape} is not (D^2, D^2)")
    s4 = s.reshape(dim, dim, dim, dim)  # [out_row, out_col, in_row, in_col]
    return s4.transpose(2, 0, 3, 1).reshape(dim * dim, dim * dim)


def validate_state(rho, atol=1e-8, psd_tol=1e-8):
    """Check that ``rho`` is a physical density matrix.

    Returns the array unchanged; raises :class:`DimensionError` on a
    non-square input and ``ValueError`` on an unphysical one.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > atol:
        raise ValueError("state is not Hermitian")
    if abs(rho.trace() - 1.0) > atol:
        raise ValueError(f"state trace {rho.trace():.6g} differs from 1")
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if w.min() < -psd_tol:
        raise ValueError(f"state has negative eigenvalue {w.min():.3g}")
    return rho


def bloch_vector(m):
    """Pauli components (tr(m sigma_i)/2) of a 2x2 Hermitian matrix."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise DimensionError(f"Bloch decomposition needs a 2x2 matrix, got {m.shape}")
    return np.array([np.trace(m @ p).real / 2.0 for p in PAULI])


def bloch_axis(m, tol=1e-12):
    """Unit Bloch axis of a 2x2 Hermitian matrix, or ``None``.

    The traceless part of ``m`` is decomposed over the Pauli basis and
    normalized. The overall sign is fixed by making the first component
    larger than ``tol`` in magnitude positive, so that ``m`` and ``-m``
    (and any positive rescaling) give the same axis. Returns ``None``
    when the traceless part is smaller than ``tol`` (no resolvable
    axis).
    """
    b = bloch_vector(m)
    norm = np.linalg.norm(b)
    if norm < tol:
        return None
    b = b / norm
    for comp in b:
        if abs(comp) > tol:
            if comp < 0:
                b = -b
            break
    return b
