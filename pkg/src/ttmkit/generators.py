"""Reference trajectory generators: unitary, Lindblad, exact dephasing.

Each generator feeds the complete operator basis through its dynamics
and returns a :class:`~ttmkit.trajectories.BasisTrajectorySet`. The
hierarchy integrator for the non-perturbative bath lives in
:mod:`ttmkit.heom`.
"""

import numpy as np
from scipy.integrate import quad

from .errors import ConfigurationError, DimensionError
from .liouville import basis_element, spre, spost
from .trajectories import BasisTrajectorySet, TimeGrid


def _basis_stack(dim):
    return np.stack(
        [basis_element(dim, i, j) for i in range(dim) for j in range(dim)]
    )


def _rk4_matrix(gen, h):
    """One classical 4th-order step matrix for x' = gen x, step h."""
    m = h * gen
    eye = np.eye(gen.shape[0], dtype=complex)
    r = eye + m / 4.0
    r = eye + (m @ r) / 3.0
    r = eye + (m @ r) / 2.0
    return eye + m @ r


def _stability_substeps(gen, dt, floor):
    """Substep count for x' = gen x keeping RK4 well inside its accuracy range.

    The row-sum norm bounds the spectrum; h * ||gen|| <= 0.08 keeps the
    local error of the 4th-order step near the 1e-9 level per step,
    far below the truncation errors of the surrounding machinery.
    """
    bound = float(np.abs(gen).sum(axis=1).max())
    needed = int(np.ceil(dt * bound / 0.08)) if bound > 0 else 1
    return max(floor, needed, 1)


def step_matrix(gen, dt, substeps):
    """Grid-step propagator: ``substeps`` RK4 substeps of x' = gen x."""
    r = _rk4_matrix(gen, dt / substeps)
    return np.linalg.matrix_power(r, substeps)


def gen_unitary(h, grid):
    """Closed-system basis trajectories under a Hermitian ``h``.

    Every frame is produced from the exact propagator exp(-i h t_k)
    via the eigendecomposition of ``h``, not by accumulating steps, so
    frames carry no integration error.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"hamiltonian must be square, got shape {h.shape}")
    if not np.allclose(h, h.conj().T, atol=1e-12 * max(1.0, np.abs(h).max())):
        raise DimensionError("hamiltonian must be Hermitian")
    dim = h.shape[0]
    energies, modes = np.linalg.eigh(h)
    basis = _basis_stack(dim)
    data = np.empty((dim * dim, grid.n_steps + 1, dim, dim), dtype=complex)
    data[:, 0] = basis
    for k, t in enumerate(grid.times[1:], start=1):
        u = (modes * np.exp(-1j * energies * t)) @ modes.conj().T
        data[:, k] = np.einsum("ab,nbc,dc->nad", u, basis, u.conj())
    return BasisTrajectorySet(dim=dim, grid=grid, data=data)


def lindblad_superop(h, jump_ops, rates):
    """Vectorized generator of a Lindblad master equation.

    Parameters
    ----------
    h : ndarray
        Hermitian system Hamiltonian.
    jump_ops : sequence of ndarray
        Jump operators A_m.
    rates : sequence of float
        Nonnegative rates r_m, one per jump operator.
    """
    h = np.asarray(h, dtype=complex)
    dim = h.shape[0]
    if len(jump_ops) != len(rates):
        raise ConfigurationError(
            f"{len(jump_ops)} jump operators but {len(rates)} rates"
        )
    gen = -1j * (spre(h) - spost(h))
    for op, rate in zip(jump_ops, rates):
        op = np.asarray(op, dtype=complex)
        if op.shape != (dim, dim):
            raise DimensionError(
                f"jump operator shape {op.shape} does not match dim {dim}"
            )
        if rate < 0:
            raise ConfigurationError(f"negative rate {rate}")
        opdop = op.conj().T @ op
        gen += rate * (
            np.kron(op, op.conj())
            - 0.5 * (spre(opdop) + spost(opdop))
        )
    return gen


def gen_lindblad(h, jump_ops, rates, grid, substeps=None):
    """Basis trajectories of a Lindblad equation on ``grid``.

    Integrates the vectorized equation with the classical 4th-order
    one-step method. The substep is at most dt/10 and is shrunk further
    if stiff rates demand it; passing ``substeps`` overrides the floor.
    """
    gen = lindblad_superop(h, jump_ops, rates)
    dim = np.asarray(h).shape[0]
    if substeps is None:
        substeps = _stability_substeps(gen, grid.dt, floor=10)
    step = step_matrix(gen, grid.dt, substeps)
    data = np.empty((dim * dim, grid.n_steps + 1, dim, dim), dtype=complex)
    data[:, 0] = _basis_stack(dim)
    emap = np.eye(dim * dim, dtype=complex)
    for k in range(1, grid.n_steps + 1):
        emap = step @ emap
        data[:, k] = emap.T.reshape(dim * dim, dim, dim)
    return BasisTrajectorySet(dim=dim, grid=grid, data=data)


def dephasing_exponent(t, lam, gamma, beta, epsrel=1e-10):
    """Real decoherence exponent of the Drude-Lorentz dephasing bath.

    Evaluates (1/pi) * integral of J(w)/w^2 * coth(beta w/2) * (1 - cos wt)
    over w >= 0 by adaptive quadrature. The low-frequency window is
    integrated directly (the integrand is finite at w = 0); the smooth
    and oscillatory parts of the tail are handled separately so large t
    stays cheap and accurate.
    """
    if t == 0.0:
        return 0.0
    if t < 0:
        raise ValueError("t must be nonnegative")
    if lam == 0.0:
        return 0.0

    def smooth(w):
        x = 0.5 * beta * w
        cth = 1.0 / x + x / 3.0 if x < 1e-8 else 1.0 / np.tanh(x)
        return 2.0 * lam * gamma / (w * (w * w + gamma * gamma)) * cth

    def window(w):
        if w == 0.0:
            return 2.0 * lam * t * t / (beta * gamma)
        return smooth(w) * 2.0 * np.sin(0.5 * w * t) ** 2

    split = min(gamma, 1.0 / beta, 50.0 / t)
    part_lo, _ = quad(window, 0.0, split, epsabs=0.0, epsrel=epsrel, limit=400)
    part_hi, _ = quad(smooth, split, np.inf, epsabs=0.0, epsrel=epsrel, limit=400)
    scale = max(abs(part_lo), abs(part_hi), 1e-300)
    part_osc, _ = quad(
        smooth, split, np.inf, weight="cos", wvar=t,
        epsabs=epsrel * scale, limlst=200,
    )
    return (part_lo + part_hi - part_osc) / np.pi


def dephasing_phase(t, lam, gamma):
    """Imaginary counterpart of the exponent (closed form for Drude).

    Equals (1/pi) * integral of -J(w)/w^2 * (wt - sin wt); only enters
    when the coupling operator has an asymmetric spectrum.
    """
    t = np.asarray(t, dtype=float)
    return -lam * (gamma * t - 1.0 + np.exp(-gamma * t)) / gamma


def gen_dephasing_analytic(params, grid, epsrel=1e-10):
    """Exactly solvable pure-dephasing basis trajectories.

    Requires the coupling operator to commute with the system
    Hamiltonian. In the common eigenbasis each matrix element (a, b)
    evolves independently:

        exp(-i (E_a - E_b) t)                    free phase
        * exp(-(q_a - q_b)^2 * reg(t))           Gaussian decoherence
        * exp(-i (q_a^2 - q_b^2) * img(t))       bath-induced shift

    with q the coupling-operator eigenvalues and reg/img the quadrature
    exponent pair above. The quadrature prefactor is pinned by the
    weak-coupling agreement with the hierarchy integrator (see the
    cross-check in the test suite).
    """
    h = params.hamiltonian
    q_op = params.coupling_op
    dim = params.dim
    scale = max(1.0, float(np.abs(h).max()), float(np.abs(q_op).max()))
    if np.abs(h @ q_op - q_op @ h).max() > 1e-10 * scale:
        raise ConfigurationError(
            "coupling operator must commute with the Hamiltonian for the "
            "pure-dephasing solution"
        )
    energies, modes = np.linalg.eigh(h)
    q_rot = modes.conj().T @ q_op @ modes
    if np.abs(q_rot - np.diag(np.diag(q_rot))).max() > 1e-10 * scale:
        raise ConfigurationError(
            "coupling operator is not diagonal in the Hamiltonian eigenbasis"
        )
    q = np.diag(q_rot).real

    basis = _basis_stack(dim)
    rotated = np.einsum("ba,nbc,cd->nad", modes.conj(), basis, modes)
    gap = energies[:, None] - energies[None, :]
    damp = (q[:, None] - q[None, :]) ** 2
    shift = (q[:, None] ** 2 - q[None, :] ** 2)

    data = np.empty((dim * dim, grid.n_steps + 1, dim, dim), dtype=complex)
    data[:, 0] = basis
    for k, t in enumerate(grid.times[1:], start=1):
        reg = dephasing_exponent(t, params.lam, params.gamma, params.beta,
                                 epsrel=epsrel)
        img = dephasing_phase(t, params.lam, params.gamma)
        factor = np.exp(-1j * gap * t - damp * reg - 1j * shift * img)
        data[:, k] = np.einsum(
            "ab,nbc,dc->nad", modes, factor[None, :, :] * rotated, modes.conj()
        )
    return BasisTrajectorySet(dim=dim, grid=grid, data=data)
