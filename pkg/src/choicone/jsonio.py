"""JSON interchange for matrices, maps, transforms and certificates.

Matrices are ``{"rows", "cols", "entries": [[re, im], ...]}`` in row-major
order. Every reader raises :class:`FormatError` on malformed input.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .cones import Certificate
from .errors import ChoiconeError, FormatError
from .mapspace import LinearMap, identity_map, kraus_to_choi, trace_map, transpose_map
from .matlin import TensorMatrix
from .transforms import (
    AdGlobal,
    AdLocal,
    Flip,
    SuperOp,
    TransformSpec,
    TransposeLeft,
    TransposeRight,
    compile_spec,
)


def _num(x: float) -> float:
    x = float(x)
    return 0.0 if x == 0.0 else x  # no negative zero in output


def complex_to_json(z: complex) -> dict:
    return {"re": _num(z.real), "im": _num(z.imag)}


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    return {
        "rows": a.shape[0],
        "cols": a.shape[1],
        "entries": [[_num(z.real), _num(z.imag)] for z in a.reshape(-1)],
    }


def vector_to_json(v) -> list:
    return [[_num(z.real), _num(z.imag)] for z in np.asarray(v, dtype=complex).reshape(-1)]


def _require(obj: Any, key: str):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"missing key {key!r}")
    return obj[key]


def _int(obj, key: str) -> int:
    val = _require(obj, key)
    if isinstance(val, bool) or not isinstance(val, int) or val < 1:
        raise FormatError(f"{key!r} must be a positive integer")
    return val


def _entries(raw) -> np.ndarray:
    try:
        arr = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad matrix entries: {exc}") from None
    if arr.ndim == 1:
        return arr.astype(complex)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise FormatError("entries must be [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def matrix_from_json(obj) -> np.ndarray:
    rows, cols = _int(obj, "rows"), _int(obj, "cols")
    vals = _entries(_require(obj, "entries"))
    if vals.size != rows * cols:
        raise FormatError(f"{vals.size} entries for a {rows}x{cols} matrix")
    if not np.all(np.isfinite(vals)):
        raise FormatError("non-finite matrix entry")
    return vals.reshape(rows, cols)


def vector_from_json(raw) -> np.ndarray:
    return _entries(raw)


def tensor_to_json(z: TensorMatrix) -> dict:
    return {"m": z.m, "n": z.n, **matrix_to_json(z.mat)}


def tensor_from_json(obj) -> TensorMatrix:
    m, n = _int(obj, "m"), _int(obj, "n")
    return _wrap(lambda: TensorMatrix(m, n, matrix_from_json(obj)))


def map_to_json(phi: LinearMap) -> dict:
    return {"m": phi.m, "n": phi.n, "choi": matrix_to_json(phi.choi.mat)}


NAMED_MAPS = ("identity", "transpose", "trace")


def map_from_json(obj) -> LinearMap:
    """Accepts ``{"m", "n", "choi"}``, ``{"kraus": [...]}`` or ``{"name", "m"}``."""
    if not isinstance(obj, dict):
        raise FormatError("map must be a JSON object")
    if "name" in obj:
        name, m = obj["name"], _int(obj, "m")
        if name == "identity":
            return identity_map(m)
        if name == "transpose":
            return transpose_map(m)
        if name == "trace":
            return trace_map(m, obj.get("n", m))
        raise FormatError(f"unknown named map {name!r}; choose from {', '.join(NAMED_MAPS)}")
    if "kraus" in obj:
        ops = obj["kraus"]
        if not isinstance(ops, list) or not ops:
            raise FormatError("'kraus' must be a nonempty list of matrices")
        return _wrap(lambda: kraus_to_choi([matrix_from_json(k) for k in ops]))
    m, n = _int(obj, "m"), _int(obj, "n")
    choi = matrix_from_json(_require(obj, "choi"))
    return _wrap(lambda: LinearMap(m, n, TensorMatrix(m, n, choi)))


_SIMPLE_ATOMS = {"transposeLeft": TransposeLeft, "transposeRight": TransposeRight, "flip": Flip}


def spec_to_json(spec: TransformSpec) -> dict:
    atoms = []
    for atom in spec.atoms:
        if isinstance(atom, AdLocal):
            atoms.append({"kind": "adLocal", "s": matrix_to_json(atom.s), "t": matrix_to_json(atom.t)})
        elif isinstance(atom, AdGlobal):
            atoms.append({"kind": "adGlobal", "v": matrix_to_json(atom.v)})
        else:
            atoms.append({"kind": atom.kind})
    return {"m": spec.m, "n": spec.n, "atoms": atoms}


def spec_from_json(obj) -> TransformSpec:
    m, n = _int(obj, "m"), _int(obj, "n")
    raw = _require(obj, "atoms")
    if not isinstance(raw, list):
        raise FormatError("'atoms' must be a list")
    atoms = []
    for a in raw:
        kind = _require(a, "kind")
        if kind == "adLocal":
            atoms.append(AdLocal(matrix_from_json(_require(a, "s")), matrix_from_json(_require(a, "t"))))
        elif kind == "adGlobal":
            atoms.append(AdGlobal(matrix_from_json(_require(a, "v"))))
        elif kind in _SIMPLE_ATOMS:
            atoms.append(_SIMPLE_ATOMS[kind]())
        else:
            raise FormatError(f"unknown atom kind {kind!r}")
    return TransformSpec(m, n, atoms)


def superop_to_json(theta: SuperOp) -> dict:
    return {"m": theta.m, "n": theta.n, "matrix": matrix_to_json(theta.matrix)}


def superop_from_json(obj) -> SuperOp:
    """A superoperator given directly, or compiled from a transform spec."""
    if isinstance(obj, dict) and "atoms" in obj:
        return compile_spec(spec_from_json(obj))
    m, n = _int(obj, "m"), _int(obj, "n")
    mat = matrix_from_json(_require(obj, "matrix"))
    return _wrap(lambda: SuperOp(m, n, mat))


def certificate_to_json(cert: Certificate) -> dict:
    out: dict = {"verdict": cert.verdict.value, "k": cert.k, "dims": list(cert.dims),
                 "method": cert.method}
    if cert.decomposition is not None:
        out["decomposition"] = [{"w": _num(w), "zeta": vector_to_json(z)} for w, z in cert.decomposition]
    if cert.witness is not None:
        wit = {}
        for key, val in cert.witness.items():
            if key == "operator":
                wit[key] = matrix_to_json(val)
            elif isinstance(val, np.ndarray):
                wit[key] = vector_to_json(val)
            else:
                wit[key] = val
        out["witness"] = wit
    out["value"] = None if cert.value is None else _num(cert.value)
    out["samples_used"] = cert.samples_used
    out["seed"] = cert.seed
    out["restarts"] = cert.restarts
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=False, default=_fallback)


def _fallback(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return _num(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_json(complex(obj))
    if isinstance(obj, np.ndarray):
        return matrix_to_json(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def _wrap(build):
    try:
        return build()
    except (ChoiconeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(str(exc)) from None
