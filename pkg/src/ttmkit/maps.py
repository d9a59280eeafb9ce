"""Dynamical maps assembled from evolved operator bases.

Because every trajectory starts from a matrix unit, the map at time t_k
simply has the vectorized frame k of trajectory (i, j) as its column
i*D + j; extraction is a transpose, not an inversion.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError
from .liouville import choi_matrix, hermiticity_defect, trace_defect


@dataclass(frozen=True)
class DynamicalMapSequence:
    """Maps E_k with E_0 = identity on a uniform grid.

    Attributes
    ----------
    dim : int
        Hilbert-space dimension D.
    dt : float
        Grid step.
    maps : ndarray, shape (n_steps + 1, D^2, D^2)
        ``maps[k]`` sends vec(rho(0)) to vec(rho(t_k)).
    """

    dim: int
    dt: float
    maps: np.ndarray = field(repr=False)

    def __post_init__(self):
        maps = np.asarray(self.maps, dtype=complex)
        d2 = self.dim * self.dim
        if maps.ndim != 3 or maps.shape[1:] != (d2, d2):
            raise DimensionError(
                f"maps shape {maps.shape} does not match dim {self.dim}"
            )
        if maps.shape[0] < 1:
            raise DimensionError("need at least the t = 0 map")
        if float(np.abs(maps[0] - np.eye(d2)).max()) > 1e-12:
            raise DimensionError("map at t = 0 must be the identity")
        object.__setattr__(self, "maps", maps)

    @property
    def n_steps(self):
        return self.maps.shape[0] - 1


def extract_maps(trajs, tol=1e-10):
    """Dynamical maps from a basis trajectory set.

    Parameters
    ----------
    trajs : BasisTrajectorySet
        Must start from the exact operator basis and respect the
        adjoint pairing between (i, j) and (j, i) trajectories.
    tol : float
        Bound on the initial-frame and adjoint-symmetry defects.
    """
    if trajs.initial_defect() > tol:
        raise DimensionError(
            f"initial frames deviate from the operator basis by "
            f"{trajs.initial_defect():.3g}"
        )
    sym = trajs.dagger_defect()
    if sym > tol:
        raise DimensionError(
            f"adjoint symmetry violated by {sym:.3g}; trajectories do not "
            "come from a linear Hermiticity-preserving evolution"
        )
    d2 = trajs.dim * trajs.dim
    n_frames = trajs.grid.n_steps + 1
    # data[alpha, k] reshaped so column alpha of maps[k] is vec(frame).
    maps = trajs.data.reshape(d2, n_frames, d2).transpose(1, 2, 0).copy()
    maps[0] = np.eye(d2)
    return DynamicalMapSequence(dim=trajs.dim, dt=trajs.grid.dt, maps=maps)


@dataclass(frozen=True)
class MapValidationReport:
    """Per-step physicality diagnostics of a map sequence.

    ``choi_min_eig[k]`` below zero (beyond tolerance) flags a map that
    is not completely positive.
    """

    trace_defects: np.ndarray
    hermiticity_defects: np.ndarray
    choi_min_eigs: np.ndarray

    def worst(self):
        return (
            float(self.trace_defects.max()),
            float(self.hermiticity_defects.max()),
            float(self.choi_min_eigs.min()),
        )


def validate_maps(seq):
    """Trace, Hermiticity and complete-positivity diagnostics per step."""
    n = seq.maps.shape[0]
    tr = np.empty(n)
    he = np.empty(n)
    ch = np.empty(n)
    for k in range(n):
        tr[k] = trace_defect(seq.maps[k])
        he[k] = hermiticity_defect(seq.maps[k])
        choi = choi_matrix(seq.maps[k])
        ch[k] = float(np.linalg.eigvalsh(0.5 * (choi + choi.conj().T)).min())
    return MapValidationReport(
        trace_defects=tr, hermiticity_defects=he, choi_min_eigs=ch
    )
