"""Transfer tensors: learning, truncation and long-time propagation.

The tensors T_s are defined by peeling repeated-map content out of the
learned map sequence,

    T_1 = E_1,    T_n = E_n - sum_{m=1}^{n-1} T_{n-m} E_m,

so that rho(t_m) = sum_{s=1}^{K} T_s rho(t_{m-s}) continues the dynamics
with a finite memory depth K. Under time-translation invariance of the
bath influence this is an identity, and the discarded tail norm bounds
the truncation error per step.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InsufficientLearningError
from .liouville import superop_norm


@dataclass(frozen=True)
class TransferTensorSequence:
    """Tensors T_1 .. T_N sharing one grid step.

    Attributes
    ----------
    dim : int
        Hilbert-space dimension D.
    dt : float
        Grid step the tensors were learned on.
    tensors : ndarray, shape (N, D^2, D^2)
        ``tensors[s - 1]`` is T_s.
    assumed_tti : bool
        Records that learning assumed a time-translation-invariant
        memory (separable initial bath, no driving).
    """

    dim: int
    dt: float
    tensors: np.ndarray = field(repr=False)
    assumed_tti: bool = True

    def __post_init__(self):
        tensors = np.asarray(self.tensors, dtype=complex)
        d2 = self.dim * self.dim
        if tensors.ndim != 3 or tensors.shape[1:] != (d2, d2):
            raise DimensionError(
                f"tensor array shape {tensors.shape} does not match dim {self.dim}"
            )
        if tensors.shape[0] < 1:
            raise DimensionError("need at least one tensor")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        object.__setattr__(self, "tensors", tensors)

    def __len__(self):
        return self.tensors.shape[0]

    def truncated(self, k_cutoff):
        """First ``k_cutoff`` tensors as a new sequence."""
        if not 1 <= k_cutoff <= len(self):
            raise DimensionError(
                f"cutoff {k_cutoff} outside 1..{len(self)}"
            )
        return TransferTensorSequence(
            dim=self.dim,
            dt=self.dt,
            tensors=self.tensors[:k_cutoff].copy(),
            assumed_tti=self.assumed_tti,
        )


def maps_to_tensors(seq):
    """Learn transfer tensors from a dynamical map sequence.

    The sequence must contain at least E_0 and E_1; E_0 is checked to
    be the identity (the container construction already enforces it).
    """
    if seq.n_steps < 1:
        raise DimensionError("map sequence must reach at least t_1")
    maps = seq.maps
    n = seq.n_steps
    tensors = np.empty_like(maps[1:])
    for s in range(1, n + 1):
        acc = maps[s].copy()
        for m in range(1, s):
            acc -= tensors[s - m - 1] @ maps[m]
        tensors[s - 1] = acc
    return TransferTensorSequence(dim=seq.dim, dt=seq.dt, tensors=tensors)


def tensors_to_maps(tensors, n_steps=None):
    """Rebuild the map sequence generated by a tensor family.

    With ``n_steps`` equal to the tensor count (the default) this is
    the exact inverse of :func:`maps_to_tensors`; larger values
    extrapolate with the finite memory.
    """
    if n_steps is None:
        n_steps = len(tensors)
    if n_steps < 1:
        raise DimensionError("n_steps must be at least 1")
    d2 = tensors.dim * tensors.dim
    t_arr = tensors.tensors
    maps = np.empty((n_steps + 1, d2, d2), dtype=complex)
    maps[0] = np.eye(d2)
    for n in range(1, n_steps + 1):
        acc = np.zeros((d2, d2), dtype=complex)
        for s in range(1, min(n, len(tensors)) + 1):
            acc += t_arr[s - 1] @ maps[n - s]
        maps[n] = acc
    from .maps import DynamicalMapSequence

    return DynamicalMapSequence(dim=tensors.dim, dt=tensors.dt, maps=maps)


def markovianity_profile(tensors):
    """Spectral norms ||T_s|| for s = 1 .. N.

    A memoryless evolution has everything beyond s = 1 at the numerical
    floor; the decay of the tail is the memory fingerprint.
    """
    return np.array([superop_norm(t) for t in tensors.tensors])


def truncation_error(tensors, k_cutoff):
    """Norm of the first discarded tensor, ||T_{K+1}||.

    This is the standard per-step estimate of the error committed by
    cutting the memory at K.
    """
    if not 1 <= k_cutoff < len(tensors):
        raise DimensionError(
            f"cutoff {k_cutoff} leaves no discarded tensor in 1..{len(tensors)}"
        )
    return superop_norm(tensors.tensors[k_cutoff])


def choose_cutoff(tensors, tol):
    """Smallest K whose entire discarded tail stays below ``tol``.

    Raises
    ------
    InsufficientLearningError
        If the last learned tensor is itself above ``tol``; the error
        carries the tail norms so the caller can size a longer learning
        window.
    """
    norms = markovianity_profile(tensors)
    if norms[-1] >= tol:
        raise InsufficientLearningError(
            f"tail norm {norms[-1]:.3g} at s = {len(norms)} still above "
            f"tol = {tol:.3g}; extend the learning window",
            tail_norms=norms,
        )
    k = len(norms)
    while k > 1 and norms[k - 1] < tol:
        k -= 1
    return max(k, 1)


def propagate(tensors, k_cutoff, seed, n_total):
    """Propagate a state with the first ``k_cutoff`` tensors.

    Parameters
    ----------
    tensors : TransferTensorSequence
    k_cutoff : int
        Memory depth K; only T_1 .. T_K are used.
    seed : ndarray
        Either a single (D, D) initial state or an (m, D, D) history
        occupying t_0 .. t_{m-1}. During warm-up (fewer than K past
        states known) the recursion runs over the history available,
        which reproduces the learning-window maps exactly.
    n_total : int
        Final step index; the result holds t_0 .. t_{n_total}.

    Returns
    -------
    ndarray, shape (n_total + 1, D, D)
    """
    if not 1 <= k_cutoff <= len(tensors):
        raise DimensionError(f"cutoff {k_cutoff} outside 1..{len(tensors)}")
    d = tensors.dim
    seed = np.asarray(seed, dtype=complex)
    if seed.shape == (d, d):
        seed = seed[None]
    if seed.ndim != 3 or seed.shape[1:] != (d, d):
        raise DimensionError(
            f"seed shape {seed.shape} does not match dim {d}"
        )
    n_seed = seed.shape[0]
    if n_seed > n_total + 1:
        raise DimensionError(
            f"seed supplies {n_seed} frames but only {n_total + 1} requested"
        )
    t_arr = tensors.tensors[:k_cutoff]
    out = np.empty((n_total + 1, d, d), dtype=complex)
    out[:n_seed] = seed
    for m in range(n_seed, n_total + 1):
        depth = min(m, k_cutoff)
        acc = np.zeros(d * d, dtype=complex)
        for s in range(1, depth + 1):
            acc += t_arr[s - 1] @ out[m - s].reshape(-1)
        out[m] = acc.reshape(d, d)
    return out
