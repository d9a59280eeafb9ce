"""Discrete memory kernels from transfer tensors and back.

On a grid of step dt the tensors and the time-convolution picture are
related by exact identities:

    T_1 = 1 - i L dt + K_1 dt^2,      T_s = K_s dt^2   (s >= 2),

with L the coherent generator. Solving for K_s turns a learned tensor
family into a sampled memory kernel; the inverse map rebuilds the
tensors without loss. K_1 absorbs an O(dt) discretization bias on top
of the physical kernel value near zero delay; it is reported as-is
rather than massaged (fitting and subtracting the bias would trade a
documented artifact for an undocumented one).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError
from .liouville import PAULI, basis_element, liouvillian_superop, superop_norm
from .tensors import TransferTensorSequence


@dataclass(frozen=True)
class LiouvillianFit:
    """Commutator-form fit of a short-time generator.

    Attributes
    ----------
    hamiltonian : ndarray
        Traceless Hermitian matrix whose commutator superoperator best
        matches the raw estimate (least squares).
    residual : ndarray
        Raw estimate minus the fitted commutator part; anything
        dissipative the single-step data contains.
    residual_norm : float
        Spectral norm of the residual.
    """

    hamiltonian: np.ndarray = field(repr=False)
    residual: np.ndarray = field(repr=False)
    residual_norm: float


def _hermitian_basis(dim):
    """Orthogonal traceless Hermitian basis (generalized Pauli set)."""
    if dim == 2:
        return list(PAULI)
    out = []
    for i in range(dim):
        for j in range(i + 1, dim):
            sym = basis_element(dim, i, j) + basis_element(dim, j, i)
            asym = -1j * basis_element(dim, i, j) + 1j * basis_element(dim, j, i)
            out.append(sym)
            out.append(asym)
    for level in range(1, dim):
        diag = np.zeros(dim)
        diag[:level] = 1.0
        diag[level] = -level
        out.append(np.diag(diag * np.sqrt(2.0 / (level * (level + 1)))).astype(complex))
    return out


def extract_liouvillian(t1, dt, known_h=None, details=False):
    """Coherent generator consistent with the first transfer tensor.

    With ``known_h`` the commutator superoperator of that Hamiltonian
    is returned directly. Otherwise the raw estimate i (T_1 - 1)/dt is
    projected (real least squares) onto the span of commutator
    superoperators; the orthogonal remainder is dissipative content
    plus O(dt) kernel contamination and is available through
    ``details=True``.

    Returns
    -------
    superop : ndarray
        The commutator-form generator L (apply as -1j L for evolution).
    fit : LiouvillianFit, only when ``details`` is true.
    """
    t1 = np.asarray(t1, dtype=complex)
    d2 = t1.shape[0]
    dim = round(np.sqrt(d2))
    if t1.shape != (d2, d2) or dim * dim != d2:
        raise DimensionError(f"tensor shape {t1.shape} is not (D^2, D^2)")
    raw = 1j * (t1 - np.eye(d2)) / dt
    if known_h is not None:
        known_h = np.asarray(known_h, dtype=complex)
        if known_h.shape != (dim, dim):
            raise DimensionError(
                f"known_h shape {known_h.shape} does not match dim {dim}"
            )
        superop = liouvillian_superop(known_h)
        if not details:
            return superop
        resid = raw - superop
        return superop, LiouvillianFit(
            hamiltonian=known_h,
            residual=resid,
            residual_norm=superop_norm(resid),
        )
    basis = _hermitian_basis(dim)
    columns = np.stack(
        [liouvillian_superop(g).reshape(-1) for g in basis], axis=1
    )
    target = raw.reshape(-1)
    # Force real coefficients by stacking real and imaginary parts.
    lhs = np.vstack([columns.real, columns.imag])
    rhs = np.concatenate([target.real, target.imag])
    coeff, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    h_fit = sum(c * g for c, g in zip(coeff, basis))
    superop = liouvillian_superop(h_fit)
    if not details:
        return superop
    resid = raw - superop
    return superop, LiouvillianFit(
        hamiltonian=h_fit,
        residual=resid,
        residual_norm=superop_norm(resid),
    )


@dataclass(frozen=True)
class KernelSequence:
    """Sampled memory kernel plus the coherent generator it pairs with.

    ``kernels[s - 1]`` is K_s, carrying units of energy squared.
    """

    dim: int
    dt: float
    liouvillian: np.ndarray = field(repr=False)
    kernels: np.ndarray = field(repr=False)

    def __post_init__(self):
        d2 = self.dim * self.dim
        liou = np.asarray(self.liouvillian, dtype=complex)
        kern = np.asarray(self.kernels, dtype=complex)
        if liou.shape != (d2, d2):
            raise DimensionError(
                f"liouvillian shape {liou.shape} does not match dim {self.dim}"
            )
        if kern.ndim != 3 or kern.shape[1:] != (d2, d2) or kern.shape[0] < 1:
            raise DimensionError(
                f"kernel array shape {kern.shape} does not match dim {self.dim}"
            )
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        object.__setattr__(self, "liouvillian", liou)
        object.__setattr__(self, "kernels", kern)

    def __len__(self):
        return self.kernels.shape[0]


def extract_kernel(tensors, liouvillian):
    """Memory kernel samples solving the discrete identities.

    Parameters
    ----------
    tensors : TransferTensorSequence
    liouvillian : ndarray
        Commutator-form generator, typically from
        :func:`extract_liouvillian`.
    """
    liou = np.asarray(liouvillian, dtype=complex)
    d2 = tensors.dim * tensors.dim
    if liou.shape != (d2, d2):
        raise DimensionError(
            f"liouvillian shape {liou.shape} does not match dim {tensors.dim}"
        )
    dt = tensors.dt
    kern = tensors.tensors / dt**2
    kern[0] = (tensors.tensors[0] - np.eye(d2) + 1j * liou * dt) / dt**2
    return KernelSequence(
        dim=tensors.dim, dt=dt, liouvillian=liou, kernels=kern
    )


def kernel_to_tensors(kernel):
    """Exact inverse of :func:`extract_kernel`."""
    d2 = kernel.dim * kernel.dim
    dt = kernel.dt
    tensors = kernel.kernels * dt**2
    tensors[0] = (
        np.eye(d2) - 1j * kernel.liouvillian * dt + kernel.kernels[0] * dt**2
    )
    return TransferTensorSequence(dim=kernel.dim, dt=dt, tensors=tensors)


def kernel_norms(kernel):
    """Spectral norm of each kernel sample (decay diagnostic)."""
    return np.array([superop_norm(k) for k in kernel.kernels])


def kernel_element_series(kernel, source, target):
    """Time series of one kernel matrix element.

    Parameters
    ----------
    source : (int, int)
        Zero-based (row, col) of the density-matrix element the kernel
        acts on.
    target : (int, int)
        Zero-based (row, col) of the density-matrix element it feeds.

    Returns
    -------
    times : ndarray
        Delays s*dt for s = 1 .. N.
    values : complex ndarray
    """
    d = kernel.dim
    si, sj = source
    ti, tj = target
    for idx in (si, sj, ti, tj):
        if not 0 <= idx < d:
            raise DimensionError(f"element index {idx} out of range for dim {d}")
    row = ti * d + tj
    col = si * d + sj
    times = kernel.dt * np.arange(1, len(kernel) + 1)
    return times, kernel.kernels[:, row, col].copy()
