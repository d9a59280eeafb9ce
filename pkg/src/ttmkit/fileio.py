"""On-disk formats: JSON documents for arrays, TSV tables for series.

Every document carries the same header block (format version, kind,
dimension, grid step, vectorization convention, unit note). Complex
matrices are nested arrays of [re, im] pairs. Floats are emitted with
Python's shortest-roundtrip repr, so files parse back bit-exact and
reruns are byte-identical. All writes go through a temp file in the
target directory followed by an atomic rename.
"""

import json
import os
import tempfile

import numpy as np

from .errors import SchemaError
from .tensors import TransferTensorSequence
from .trajectories import BasisTrajectorySet, TimeGrid
from .kernels import KernelSequence

FORMAT_VERSION = 1
VECTORIZATION = "row-major"
UNITS_NOTE = "dimensionless, hbar=1, energy in J"


def _encode_matrix(m):
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _decode_matrix(obj, shape, what):
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{what}: not a numeric matrix") from exc
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[:2] != shape:
        raise SchemaError(
            f"{what}: expected shape {shape} of [re, im] pairs, got {arr.shape}"
        )
    return arr[..., 0] + 1j * arr[..., 1]


def _atomic_write_text(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump_json(path, doc):
    _atomic_write_text(path, json.dumps(doc, sort_keys=True, indent=1) + "\n")


def _header(kind, dim, dt, n_steps):
    return {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "dim": int(dim),
        "dt": float(dt),
        "n_steps": int(n_steps),
        "vectorization": VECTORIZATION,
        "units": UNITS_NOTE,
    }


def _load_checked(path, kind):
    try:
        with open(path) as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise SchemaError(f"{path}: cannot read ({exc})") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: top level must be an object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise SchemaError(
            f"{path}: format_version {doc.get('format_version')!r}, "
            f"expected {FORMAT_VERSION}"
        )
    if doc.get("kind") != kind:
        raise SchemaError(f"{path}: kind {doc.get('kind')!r}, expected {kind!r}")
    if doc.get("vectorization") != VECTORIZATION:
        raise SchemaError(f"{path}: unsupported vectorization convention")
    for key in ("dim", "dt", "n_steps"):
        if key not in doc:
            raise SchemaError(f"{path}: missing header field {key!r}")
    return doc


def save_basis_trajectories(path, trajs, meta=None):
    """Write a BasisTrajectorySet as a kind='trajectory' document."""
    dim = trajs.dim
    doc = _header("trajectory", dim, trajs.grid.dt, trajs.grid.n_steps)
    doc["content"] = "basis"
    if meta:
        doc["meta"] = meta
    doc["trajectories"] = [
        {
            "row": i,
            "col": j,
            "frames": [_encode_matrix(f) for f in trajs.data[i * dim + j]],
        }
        for i in range(dim)
        for j in range(dim)
    ]
    _dump_json(path, doc)


def load_basis_trajectories(path):
    """Read a basis trajectory document.

    Returns
    -------
    trajs : BasisTrajectorySet
    meta : dict
    """
    doc = _load_checked(path, "trajectory")
    if doc.get("content") != "basis":
        raise SchemaError(f"{path}: content {doc.get('content')!r} is not 'basis'")
    dim = int(doc["dim"])
    n_steps = int(doc["n_steps"])
    entries = doc.get("trajectories")
    if not isinstance(entries, list) or len(entries) != dim * dim:
        raise SchemaError(f"{path}: expected {dim * dim} basis trajectories")
    data = np.empty((dim * dim, n_steps + 1, dim, dim), dtype=complex)
    seen = set()
    for entry in entries:
        try:
            i, j = int(entry["row"]), int(entry["col"])
            frames = entry["frames"]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"{path}: malformed trajectory entry") from exc
        if not (0 <= i < dim and 0 <= j < dim) or (i, j) in seen:
            raise SchemaError(f"{path}: bad or repeated basis label ({i}, {j})")
        seen.add((i, j))
        if len(frames) != n_steps + 1:
            raise SchemaError(
                f"{path}: trajectory ({i}, {j}) has {len(frames)} frames, "
                f"expected {n_steps + 1}"
            )
        for k, frame in enumerate(frames):
            data[i * dim + j, k] = _decode_matrix(
                frame, (dim, dim), f"{path}: frame {k} of ({i}, {j})"
            )
    grid = TimeGrid(dt=float(doc["dt"]), n_steps=n_steps)
    return BasisTrajectorySet(dim=dim, grid=grid, data=data), doc.get("meta", {})


def save_state_trajectory(path, frames, dt, meta=None, summary=None):
    """Write a single propagated state as a kind='trajectory' document."""
    frames = np.asarray(frames, dtype=complex)
    doc = _header("trajectory", frames.shape[1], dt, frames.shape[0] - 1)
    doc["content"] = "state"
    if meta:
        doc["meta"] = meta
    if summary:
        doc["summary"] = summary
    doc["frames"] = [_encode_matrix(f) for f in frames]
    _dump_json(path, doc)


def load_state_trajectory(path):
    """Read a propagated-state document.

    Returns
    -------
    frames : ndarray, shape (n_steps + 1, D, D)
    dt : float
    meta : dict
    """
    doc = _load_checked(path, "trajectory")
    if doc.get("content") != "state":
        raise SchemaError(f"{path}: content {doc.get('content')!r} is not 'state'")
    dim = int(doc["dim"])
    n_steps = int(doc["n_steps"])
    frames_raw = doc.get("frames")
    if not isinstance(frames_raw, list) or len(frames_raw) != n_steps + 1:
        raise SchemaError(f"{path}: expected {n_steps + 1} frames")
    frames = np.empty((n_steps + 1, dim, dim), dtype=complex)
    for k, frame in enumerate(frames_raw):
        frames[k] = _decode_matrix(frame, (dim, dim), f"{path}: frame {k}")
    return frames, float(doc["dt"]), doc.get("meta", {})


def save_tensors(path, tensors, profile=None, truncation=None, meta=None):
    """Write a TransferTensorSequence as a kind='tensors' document.

    ``profile`` may carry the full learned markovianity profile (before
    truncation) and ``truncation`` the norm of the first discarded
    tensor; both are diagnostics, not needed to reload.
    """
    doc = _header("tensors", tensors.dim, tensors.dt, len(tensors))
    doc["cutoff"] = len(tensors)
    doc["assumed_tti"] = bool(tensors.assumed_tti)
    if profile is not None:
        doc["markovianity_profile"] = [float(x) for x in profile]
    doc["truncation_error"] = None if truncation is None else float(truncation)
    if meta:
        doc["meta"] = meta
    doc["tensors"] = [_encode_matrix(t) for t in tensors.tensors]
    _dump_json(path, doc)


def load_tensors(path):
    """Read a tensors document.

    Returns
    -------
    tensors : TransferTensorSequence
    doc : dict
        The full document, for access to diagnostics and meta.
    """
    doc = _load_checked(path, "tensors")
    dim = int(doc["dim"])
    count = int(doc["n_steps"])
    raw = doc.get("tensors")
    if not isinstance(raw, list) or len(raw) != count:
        raise SchemaError(f"{path}: expected {count} tensors")
    d2 = dim * dim
    tensors = np.empty((count, d2, d2), dtype=complex)
    for s, entry in enumerate(raw):
        tensors[s] = _decode_matrix(entry, (d2, d2), f"{path}: tensor {s + 1}")
    seq = TransferTensorSequence(
        dim=dim,
        dt=float(doc["dt"]),
        tensors=tensors,
        assumed_tti=bool(doc.get("assumed_tti", True)),
    )
    return seq, doc


def save_kernel(path, kernel, meta=None):
    """Write a KernelSequence as a kind='kernel' document."""
    doc = _header("kernel", kernel.dim, kernel.dt, len(kernel))
    if meta:
        doc["meta"] = meta
    doc["liouvillian"] = _encode_matrix(kernel.liouvillian)
    doc["kernels"] = [_encode_matrix(k) for k in kernel.kernels]
    _dump_json(path, doc)


def load_kernel(path):
    """Read a kernel document.

    Returns
    -------
    kernel : KernelSequence
    meta : dict
    """
    doc = _load_checked(path, "kernel")
    dim = int(doc["dim"])
    count = int(doc["n_steps"])
    d2 = dim * dim
    liou = _decode_matrix(doc.get("liouvillian"), (d2, d2), f"{path}: liouvillian")
    raw = doc.get("kernels")
    if not isinstance(raw, list) or len(raw) != count:
        raise SchemaError(f"{path}: expected {count} kernel samples")
    kernels = np.empty((count, d2, d2), dtype=complex)
    for s, entry in enumerate(raw):
        kernels[s] = _decode_matrix(entry, (d2, d2), f"{path}: kernel {s + 1}")
    kernel = KernelSequence(
        dim=dim, dt=float(doc["dt"]), liouvillian=liou, kernels=kernels
    )
    return kernel, doc.get("meta", {})


def write_table(path, columns, rows):
    """Write a tab-separated table with a commented header row.

    Floats are printed with 17 significant digits; other values with
    str(). Rows must match the column count.
    """
    lines = ["# " + "\t".join(columns)]
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(
                f"row has {len(row)} fields, header has {len(columns)}"
            )
        fields = []
        for value in row:
            if isinstance(value, float):
                fields.append(f"{value:.17g}")
            else:
                fields.append(str(value))
        lines.append("\t".join(fields))
    _atomic_write_text(path, "\n".join(lines) + "\n")
