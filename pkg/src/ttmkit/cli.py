"""Command-line pipeline: generate, learn, propagate, kernel, analyze.

All data moves through files (JSON documents and TSV tables); stdout
and stderr carry only logs. Internally everything is dimensionless
(hbar = 1, energies in units of the exchange coupling); the
``--units wavenumber`` switch converts cm^-1 / Kelvin / fs inputs at
this boundary and nowhere else.

Exit codes: 0 success, 2 validation or schema failure, 3 numerical
failure (divergence, unsettled trajectory, insufficient learning).
"""

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import fileio
from .analysis import canonical_state, detect_equilibrium, noncanonical_angle
from .errors import (
    ConfigurationError,
    DegenerateStateError,
    DimensionError,
    NotSettledError,
    NumericalError,
    SchemaError,
)
from .generators import gen_dephasing_analytic, gen_lindblad, gen_unitary
from .heom import HeomConfig, gen_heom
from .liouville import SIGMA_X, SIGMA_Z, validate_state
from .maps import extract_maps
from .models import (
    SpinBosonParams,
    beta_from_kelvin,
    time_from_fs,
    tls_hamiltonian,
)
from .tensors import (
    choose_cutoff,
    maps_to_tensors,
    markovianity_profile,
    propagate,
    truncation_error,
)
from .kernels import extract_kernel, extract_liouvillian, kernel_element_series
from .trajectories import TimeGrid

log = logging.getLogger("ttm")

COUPLING_OPS = {"sz": SIGMA_Z, "sx": SIGMA_X}


def _add_model_arguments(parser):
    parser.add_argument("--omega0", type=float, default=1.0,
                        help="level splitting (default 1)")
    parser.add_argument("--j", type=float, default=1.0,
                        help="exchange coupling (default 1)")
    parser.add_argument("--lambda", dest="lam", type=float, default=0.1,
                        help="bath reorganization energy (default 0.1)")
    parser.add_argument("--gamma", type=float, default=1.0,
                        help="bath cutoff frequency (default 1)")
    parser.add_argument("--beta", type=float, default=0.5,
                        help="inverse temperature, dimensionless units only")
    parser.add_argument("--temperature", type=float, default=None,
                        help="temperature in Kelvin (wavenumber units only)")
    parser.add_argument("--coupling", choices=sorted(COUPLING_OPS),
                        default="sz", help="system-bath coupling operator")
    parser.add_argument("--heom-depth", type=int, default=5,
                        help="hierarchy depth (model heom)")
    parser.add_argument("--heom-matsubara", type=int, default=2,
                        help="Matsubara modes kept (model heom)")
    parser.add_argument("--units", choices=["dimensionless", "wavenumber"],
                        default="dimensionless",
                        help="input unit system (wavenumber: energies in "
                             "cm^-1, temperature in K, dt in fs)")


def _convert_units(args):
    """Dimensionless (omega0, j, lam, gamma, beta, dt) from the flags."""
    if args.units == "dimensionless":
        return (args.omega0, args.j, args.lam, args.gamma, args.beta, args.dt)
    unit = args.j if args.j > 0 else args.omega0
    if unit <= 0:
        raise ConfigurationError(
            "wavenumber units need a positive --j or --omega0 to set the scale"
        )
    if args.temperature is None:
        raise ConfigurationError("wavenumber units need --temperature in Kelvin")
    return (
        args.omega0 / unit,
        args.j / unit,
        args.lam / unit,
        args.gamma / unit,
        beta_from_kelvin(args.temperature, unit),
        time_from_fs(args.dt, unit),
    )


def _model_meta(args, omega0, j, lam, gamma, beta):
    meta = {
        "model": args.model,
        "omega0": omega0,
        "j": j,
        "lambda": lam,
        "gamma": gamma,
        "beta": beta,
        "coupling": args.coupling,
    }
    if args.model == "heom":
        meta["heom_depth"] = args.heom_depth
        meta["heom_matsubara"] = args.heom_matsubara
    return meta


def _parse_initial(spec, dim):
    """Initial state from a label (e11, plus, mixed) or a JSON file."""
    if spec.startswith("e") and len(spec) == 3 and spec[1:].isdigit():
        i, j = int(spec[1]) - 1, int(spec[2]) - 1
        if i != j:
            raise ConfigurationError(
                f"initial {spec!r} is not a population state"
            )
        if not 0 <= i < dim:
            raise ConfigurationError(f"initial {spec!r} out of range for dim {dim}")
        rho = np.zeros((dim, dim), dtype=complex)
        rho[i, i] = 1.0
        return rho
    if spec == "plus":
        if dim != 2:
            raise ConfigurationError("'plus' is only defined for dim 2")
        return np.full((2, 2), 0.5, dtype=complex)
    if spec == "mixed":
        return np.eye(dim, dtype=complex) / dim
    import json

    try:
        with open(spec) as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise ConfigurationError(f"cannot read initial state {spec!r}: {exc}")
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{spec}: not valid JSON ({exc})")
    if not isinstance(doc, dict) or "state" not in doc:
        raise SchemaError(f"{spec}: expected an object with a 'state' matrix")
    arr = np.asarray(doc["state"], dtype=float)
    if arr.ndim != 3 or arr.shape != (dim, dim, 2):
        raise SchemaError(
            f"{spec}: state must be a {dim}x{dim} matrix of [re, im] pairs"
        )
    return validate_state(arr[..., 0] + 1j * arr[..., 1])


def cmd_generate(args):
    omega0, j, lam, gamma, beta, dt = _convert_units(args)
    grid = TimeGrid(dt=dt, n_steps=args.steps)
    coupling = COUPLING_OPS[args.coupling]
    if args.model == "unitary":
        trajs = gen_unitary(tls_hamiltonian(omega0, j), grid)
    else:
        params = SpinBosonParams(
            omega0=omega0, j_coupling=j, lam=lam, gamma=gamma, beta=beta,
            coupling_op=coupling,
        )
        if args.model == "lindblad":
            trajs = gen_lindblad(
                params.hamiltonian, [coupling], [lam], grid
            )
        elif args.model == "dephasing":
            trajs = gen_dephasing_analytic(params, grid)
        else:
            cfg = HeomConfig(
                depth=args.heom_depth, n_matsubara=args.heom_matsubara
            )
            trajs = gen_heom(params, cfg, grid)
    meta = _model_meta(args, omega0, j, lam, gamma, beta)
    fileio.save_basis_trajectories(args.out, trajs, meta=meta)
    log.info("wrote %s (%d basis trajectories, %d steps, dt=%g)",
             args.out, trajs.dim**2, grid.n_steps, grid.dt)
    return 0


def cmd_learn(args):
    trajs, meta = fileio.load_basis_trajectories(args.trajectory)
    maps = extract_maps(trajs)
    full = maps_to_tensors(maps)
    profile = markovianity_profile(full)
    if args.cutoff_k is not None:
        if not 1 <= args.cutoff_k <= len(full):
            raise ConfigurationError(
                f"--cutoff-k {args.cutoff_k} outside 1..{len(full)}"
            )
        cutoff = args.cutoff_k
    else:
        cutoff = choose_cutoff(full, args.cutoff_tol)
    trunc = truncation_error(full, cutoff) if cutoff < len(full) else None
    fileio.save_tensors(
        args.out, full.truncated(cutoff), profile=profile, truncation=trunc,
        meta=meta,
    )
    log.info("learned %d tensors, kept K=%d, truncation error %s",
             len(full), cutoff,
             "n/a" if trunc is None else f"{trunc:.3e}")
    return 0


def cmd_propagate(args):
    tensors, doc = fileio.load_tensors(args.tensors)
    rho0 = _parse_initial(args.initial, tensors.dim)
    frames = propagate(tensors, len(tensors), rho0, args.steps)
    traces = np.abs(np.einsum("kii->k", frames) - 1.0)
    allowed = 1e-6 * (np.arange(args.steps + 1) / 100.0 + 1.0)
    drift = float(traces.max())
    summary = {
        "final_state": fileio._encode_matrix(frames[-1]),
        "max_trace_drift": drift,
    }
    fileio.save_state_trajectory(
        args.out, frames, tensors.dt, meta=doc.get("meta", {}), summary=summary,
    )
    log.info("wrote %s (%d steps, max trace drift %.3e)",
             args.out, args.steps, drift)
    if bool(np.any(traces > allowed)):
        raise NumericalError(
            f"trace drift {drift:.3e} beyond tolerance; tensors are "
            "inaccurate or the cutoff is too aggressive"
        )
    return 0


def _parse_elements(spec, dim):
    out = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        parts = chunk.split("->")
        if len(parts) != 2 or len(parts[0]) != 2 or len(parts[1]) != 2:
            raise ConfigurationError(
                f"element {chunk!r} is not of the form rc->rc (zero-based)"
            )
        try:
            src = (int(parts[0][0]), int(parts[0][1]))
            dst = (int(parts[1][0]), int(parts[1][1]))
        except ValueError:
            raise ConfigurationError(f"element {chunk!r} has non-digit indices")
        for idx in src + dst:
            if not 0 <= idx < dim:
                raise ConfigurationError(f"element {chunk!r} out of range")
        out.append((src, dst))
    return out


def cmd_kernel(args):
    tensors, doc = fileio.load_tensors(args.tensors)
    meta = dict(doc.get("meta", {}))
    if args.fit_liouvillian or "omega0" not in meta:
        liou, fit = extract_liouvillian(
            tensors.tensors[0], tensors.dt, details=True
        )
        meta["liouvillian_fit_residual"] = fit.residual_norm
        log.info("fitted coherent generator, dissipative remainder %.3e",
                 fit.residual_norm)
    else:
        known_h = tls_hamiltonian(meta["omega0"], meta["j"])
        liou = extract_liouvillian(tensors.tensors[0], tensors.dt, known_h)
    kernel = extract_kernel(tensors, liou)
    fileio.save_kernel(args.out, kernel, meta=meta)
    log.info("wrote %s (%d kernel samples)", args.out, len(kernel))
    if args.table:
        if args.elements:
            pairs = _parse_elements(args.elements, tensors.dim)
        else:
            d = tensors.dim
            pairs = [
                ((a, b), (c, e))
                for a in range(d) for b in range(d)
                for c in range(d) for e in range(d)
            ]
        columns = ["s", "time"]
        series = []
        for src, dst in pairs:
            label = f"{src[0]}{src[1]}to{dst[0]}{dst[1]}"
            columns += [f"re_{label}", f"im_{label}"]
            series.append(kernel_element_series(kernel, src, dst)[1])
        times = tensors.dt * np.arange(1, len(kernel) + 1)
        rows = []
        for s in range(len(kernel)):
            row = [s + 1, float(times[s])]
            for values in series:
                row += [float(values[s].real), float(values[s].imag)]
            rows.append(row)
        fileio.write_table(args.table, columns, rows)
        log.info("wrote %s (%d elements)", args.table, len(pairs))
    return 0


def _analyze_trajectory(frames, dt, meta, tol, window):
    """One sweep row: equilibrium detection plus the deviation angle."""
    row = {
        "lambda": meta.get("lambda", float("nan")),
        "beta": meta.get("beta", float("nan")),
        "theta": float("nan"),
        "settled_at": -1,
        "residual": float("nan"),
        "status": "ok",
    }
    try:
        report = detect_equilibrium(frames, tol=tol, window=window)
    except NotSettledError as exc:
        row["status"] = "not_settled"
        if exc.residual is not None:
            row["residual"] = exc.residual
        return row
    row["settled_at"] = report.settled_at
    row["residual"] = report.residual
    if "omega0" not in meta or "j" not in meta or "beta" not in meta:
        raise SchemaError(
            "trajectory meta lacks omega0/j/beta; cannot build the "
            "canonical reference"
        )
    reference = canonical_state(
        tls_hamiltonian(meta["omega0"], meta["j"]), meta["beta"]
    )
    try:
        measurement = noncanonical_angle(report.state, reference)
    except DegenerateStateError:
        row["status"] = "degenerate"
        return row
    row["theta"] = measurement.theta
    return row


def _sweep_point(task):
    """Full pipeline for one sweep point (runs in a worker process)."""
    (lam, beta, omega0, j, gamma, coupling, depth, n_mats, dt, learn_steps,
     cutoff_tol, initial, steps, tol, window) = task
    params = SpinBosonParams(
        omega0=omega0, j_coupling=j, lam=lam, gamma=gamma, beta=beta,
        coupling_op=COUPLING_OPS[coupling],
    )
    grid = TimeGrid(dt=dt, n_steps=learn_steps)
    trajs = gen_heom(params, HeomConfig(depth=depth, n_matsubara=n_mats), grid)
    full = maps_to_tensors(extract_maps(trajs))
    cutoff = choose_cutoff(full, cutoff_tol)
    rho0 = _parse_initial(initial, params.dim)
    frames = propagate(full.truncated(cutoff), cutoff, rho0, steps)
    meta = {"lambda": lam, "beta": beta, "omega0": omega0, "j": j}
    return _analyze_trajectory(frames, dt, meta, tol, window)


def cmd_analyze(args):
    rows = []
    if args.sweep_lambda or args.sweep_beta:
        if args.trajectories:
            raise ConfigurationError(
                "give either trajectory files or sweep flags, not both"
            )
        if args.sweep_lambda and args.sweep_beta:
            raise ConfigurationError("sweep one axis at a time")
        omega0, j, lam, gamma, beta, dt = _convert_units(args)
        if args.sweep_lambda:
            points = [(float(x), beta) for x in args.sweep_lambda.split(",")]
        else:
            points = [(lam, float(x)) for x in args.sweep_beta.split(",")]
        tasks = [
            (pl, pb, omega0, j, gamma, args.coupling, args.heom_depth,
             args.heom_matsubara, dt, args.learn_steps, args.cutoff_tol,
             args.initial, args.steps, args.tol, args.window)
            for pl, pb in points
        ]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                rows = list(pool.map(_sweep_point, tasks))
        else:
            rows = [_sweep_point(task) for task in tasks]
    else:
        if not args.trajectories:
            raise ConfigurationError(
                "need trajectory files or --sweep-lambda/--sweep-beta"
            )
        for path in args.trajectories:
            frames, dt, meta = fileio.load_state_trajectory(path)
            rows.append(
                _analyze_trajectory(frames, dt, meta, args.tol, args.window)
            )
    columns = ["lambda", "beta", "theta", "settled_at", "residual", "status"]
    fileio.write_table(
        args.out,
        columns,
        [[row[c] for c in columns] for row in rows],
    )
    flagged = sum(row["status"] != "ok" for row in rows)
    log.info("wrote %s (%d rows, %d flagged)", args.out, len(rows), flagged)
    unsettled = sum(row["status"] == "not_settled" for row in rows)
    if unsettled:
        raise NotSettledError(
            f"{unsettled} of {len(rows)} trajectories did not settle"
        )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ttm",
        description="Learn transfer tensors from short open-system "
                    "simulations, then extrapolate, reconstruct memory "
                    "kernels and analyze equilibria.",
    )
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="run a reference simulation")
    p_gen.add_argument("--model", required=True,
                       choices=["unitary", "lindblad", "dephasing", "heom"])
    p_gen.add_argument("--dt", type=float, required=True)
    p_gen.add_argument("--steps", type=int, required=True,
                       help="number of grid steps")
    _add_model_arguments(p_gen)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_generate)

    p_learn = sub.add_parser("learn", help="extract transfer tensors")
    p_learn.add_argument("trajectory")
    group = p_learn.add_mutually_exclusive_group()
    group.add_argument("--cutoff-k", type=int, default=None,
                       help="fixed memory depth K")
    group.add_argument("--cutoff-tol", type=float, default=1e-7,
                       help="tail-norm tolerance for automatic K")
    p_learn.add_argument("--out", required=True)
    p_learn.set_defaults(func=cmd_learn)

    p_prop = sub.add_parser("propagate", help="extrapolate a state")
    p_prop.add_argument("tensors")
    p_prop.add_argument("--initial", default="e11",
                        help="e11/e22/plus/mixed or a JSON state file")
    p_prop.add_argument("--steps", type=int, required=True)
    p_prop.add_argument("--out", required=True)
    p_prop.set_defaults(func=cmd_propagate)

    p_kern = sub.add_parser("kernel", help="reconstruct the memory kernel")
    p_kern.add_argument("tensors")
    p_kern.add_argument("--fit-liouvillian", action="store_true",
                        help="fit the coherent generator instead of using "
                             "model metadata")
    p_kern.add_argument("--out", required=True)
    p_kern.add_argument("--table", default=None,
                        help="optional TSV of kernel element series")
    p_kern.add_argument("--elements", default=None,
                        help="comma list rc->rc (zero-based), default all")
    p_kern.set_defaults(func=cmd_kernel)

    p_ana = sub.add_parser("analyze",
                           help="equilibrium detection and deviation angles")
    p_ana.add_argument("trajectories", nargs="*",
                       help="propagated state files (file mode)")
    p_ana.add_argument("--sweep-lambda", default=None,
                       help="comma list of couplings (pipeline mode)")
    p_ana.add_argument("--sweep-beta", default=None,
                       help="comma list of inverse temperatures")
    p_ana.add_argument("--dt", type=float, default=0.02)
    p_ana.add_argument("--learn-steps", type=int, default=100)
    p_ana.add_argument("--steps", type=int, default=20000)
    p_ana.add_argument("--cutoff-tol", type=float, default=1e-7)
    p_ana.add_argument("--initial", default="e11")
    p_ana.add_argument("--tol", type=float, default=1e-9,
                       help="equilibrium per-step tolerance")
    p_ana.add_argument("--window", type=int, default=50)
    p_ana.add_argument("--jobs", type=int, default=1,
                       help="worker processes for sweep points")
    _add_model_arguments(p_ana)
    p_ana.add_argument("--out", required=True)
    p_ana.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(message)s",
    )
    try:
        return args.func(args)
    except SchemaError as exc:
        log.error("schema: %s", exc)
        return 2
    except (ConfigurationError, DimensionError, ValueError) as exc:
        log.error("invalid input: %s", exc)
        return 2
    except NumericalError as exc:
        log.error("numerical failure: %s", exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
