"""Time grids and basis-trajectory containers.

A basis trajectory set holds the evolution of every matrix unit
|i><j| of the system space on a uniform time grid. Feeding the full
operator basis through the dynamics is what makes the later map
extraction a plain reshape instead of a fit.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError
from .liouville import basis_element


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_k = k * dt, k = 0 .. n_steps."""

    dt: float
    n_steps: int

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be at least 1, got {self.n_steps}")

    @property
    def times(self):
        return self.dt * np.arange(self.n_steps + 1)


@dataclass(frozen=True)
class BasisTrajectorySet:
    """Evolved operator basis on a time grid.

    Attributes
    ----------
    dim : int
        Hilbert-space dimension D.
    grid : TimeGrid
        The sampling grid; trajectories carry ``grid.n_steps + 1`` frames.
    data : ndarray, shape (D*D, n_steps + 1, D, D)
        ``data[i*D + j, k]`` is the matrix unit |i><j| evolved to t_k.
        Frame 0 is the untouched basis element.
    """

    dim: int
    grid: TimeGrid
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        d, n = self.dim, self.grid.n_steps
        data = np.asarray(self.data, dtype=complex)
        if data.shape != (d * d, n + 1, d, d):
            raise DimensionError(
                f"trajectory data shape {data.shape} does not match "
                f"dim={d}, n_steps={n}"
            )
        object.__setattr__(self, "data", data)

    def element(self, i, j):
        """Trajectory of the basis element |i><j|, shape (n_steps+1, D, D)."""
        if not (0 <= i < self.dim and 0 <= j < self.dim):
            raise DimensionError(f"basis indices ({i}, {j}) out of range")
        return self.data[i * self.dim + j]

    def initial_defect(self):
        """Max deviation of frame 0 from the exact operator basis."""
        d = self.dim
        expected = np.stack(
            [basis_element(d, i, j) for i in range(d) for j in range(d)]
        )
        return float(np.abs(self.data[:, 0] - expected).max())

    def dagger_defect(self):
        """Max violation of the (i,j) <-> (j,i) adjoint symmetry.

        Linearity of the dynamics forces the |j><i| trajectory to be the
        elementwise adjoint of the |i><j| one at every time.
        """
        d = self.dim
        sw = self.data.reshape(d, d, -1, d, d)
        flipped = sw.transpose(1, 0, 2, 4, 3).conj().reshape(self.data.shape)
        return float(np.abs(self.data - flipped).max())

    def evolve_state(self, rho0):
        """Trajectory of an arbitrary initial matrix by linearity."""
        rho0 = np.asarray(rho0, dtype=complex)
        if rho0.shape != (self.dim, self.dim):
            raise DimensionError(
                f"initial state shape {rho0.shape} does not match dim {self.dim}"
            )
        weights = rho0.reshape(-1)
        return np.tensordot(weights, self.data, axes=(0, 0))
