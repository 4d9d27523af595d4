"""Serialization: subspace documents (.ncg), the canonical corpus, report payloads."""

import json
import math
import re
from pathlib import Path

import numpy as np

from .errors import CorruptCorpusError, ParseError
from .linalg import gram
from .subspaces import (NoncommGraph, OperatorSubspace, dephasing_graph, from_spanning,
                        full_graph, identity_graph, is_noncomm_graph, pauli_graph)

SCHEMA_VERSION = 1
ORTHONORMAL_TOL = 1e-10
EXTENSION = ".ncg"


# text emission

def _number(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def dumps(obj, indent=2, _level=0):
    """JSON text with a stable key order and 17 significant digits per float.

    Short lists of scalars stay on one line so matrices remain readable.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, int, float, np.bool_, np.integer, np.floating)):
        return _number(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        if all(isinstance(v, (list, tuple)) and all(not isinstance(w, (dict, list, tuple)) for w in v)
               for v in obj) and len(obj) <= 4:
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def complex_pairs(arr):
    """Nested lists of [re, im] pairs with the shape of ``arr``."""
    arr = np.asarray(arr, dtype=complex)
    if arr.ndim == 0:
        return [float(arr.real), float(arr.imag)]
    return [complex_pairs(a) for a in arr]


def from_pairs(data, what):
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise ParseError(f"{what}: entries must be [re, im] number pairs")
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise ParseError(f"{what}: entries must be [re, im] number pairs")
    return arr[..., 0] + 1j * arr[..., 1]


# subspace documents

def subspace_document(space, metadata=None):
    return {
        "schema_version": SCHEMA_VERSION,
        "ambient_rows": space.rows,
        "ambient_cols": space.cols,
        "basis": [complex_pairs(b) for b in space.basis],
        "metadata": {str(k): str(v) for k, v in (metadata or {}).items()},
    }


def write_subspace(space, path, metadata=None):
    meta = dict(metadata or {})
    if isinstance(space, NoncommGraph):
        meta.setdefault("kind", "noncomm_graph")
    Path(path).write_text(dumps(subspace_document(space, meta)) + "\n")


def parse_document(text):
    """Parse SubspaceDocument text into (OperatorSubspace, metadata, orthonormal)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed document: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    for key in ("schema_version", "ambient_rows", "ambient_cols", "basis"):
        if key not in doc:
            raise ParseError(f"missing field '{key}'")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {doc['schema_version']!r}")
    rows, cols = doc["ambient_rows"], doc["ambient_cols"]
    if not (isinstance(rows, int) and isinstance(cols, int) and rows > 0 and cols > 0):
        raise ParseError("ambient_rows and ambient_cols must be positive integers")
    basis = []
    for k, mat in enumerate(doc["basis"]):
        m = from_pairs(mat, f"basis[{k}]")
        if m.shape != (rows, cols):
            raise ParseError(f"basis[{k}] has shape {m.shape[:2]}, expected {(rows, cols)}")
        if not np.all(np.isfinite(m)):
            raise ParseError(f"basis[{k}] has non-finite entries")
        basis.append(m)
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise ParseError("metadata must be an object")
    g = gram(basis)
    orthonormal = bool(np.max(np.abs(g - np.eye(len(basis))), initial=0.0) < ORTHONORMAL_TOL)
    space = OperatorSubspace(np.array(basis).reshape(-1, rows, cols), rows, cols)
    return space, metadata, orthonormal


def read_subspace(path):
    """Load a .ncg file; a non-orthonormal basis is treated as a spanning set."""
    space, meta, orthonormal = parse_document(Path(path).read_text())
    if not orthonormal and space.dim:
        space = from_spanning(list(space.basis))
    if space.rows == space.cols and is_noncomm_graph(space):
        space = NoncommGraph.from_subspace(space)
    return space, meta


# canonical graphs by name

_NAME = re.compile(r"^(pauli|full|identity|dephasing|familyT):(.+)$")


def graph_from_name(name):
    """Build a canonical graph from names like ``pauli:I-Z`` or ``familyT:3``."""
    match = _NAME.match(name)
    if not match:
        return None
    kind, arg = match.groups()
    try:
        if kind == "pauli":
            return pauli_graph(arg)
        if kind == "full":
            return full_graph(int(arg))
        if kind == "identity":
            return identity_graph(int(arg))
        if kind == "dephasing":
            return dephasing_graph(float(arg))
        from .activation import family_graph
        return family_graph(int(arg))
    except ValueError as exc:
        raise ParseError(f"bad graph name {name!r}: {exc}") from None


def resolve(spec):
    """A canonical graph name or a path to a .ncg file."""
    g = graph_from_name(spec)
    if g is not None:
        return g, {"name": spec}
    path = Path(spec)
    if not path.exists():
        raise ParseError(f"{spec!r} is neither a known graph name nor an existing file")
    return read_subspace(path)


# corpus

CORPUS_NAMES = (
    ["pauli:I2", "pauli:I-Z", "pauli:I-X-Z", "full:2"]
    + [f"dephasing:{p}" for p in (0.1, 0.3, 0.5)]
    + [f"familyT:{m}" for m in (3, 4, 5)]
)


def corpus_filename(name):
    return name.replace(":", "_") + EXTENSION


def save_corpus(directory):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in CORPUS_NAMES:
        path = directory / corpus_filename(name)
        write_subspace(graph_from_name(name), path, {"name": name, "kind": "noncomm_graph"})
        paths.append(path)
    return paths


def load_corpus(directory):
    """Load every .ncg file in ``directory``, checking each invariant."""
    out = {}
    for path in sorted(Path(directory).glob("*" + EXTENSION)):
        try:
            space, meta, orthonormal = parse_document(path.read_text())
        except ParseError as exc:
            raise CorruptCorpusError(path, f"parse: {exc}") from None
        if not orthonormal:
            raise CorruptCorpusError(path, "orthonormal basis")
        if meta.get("kind") == "noncomm_graph":
            if space.rows != space.cols:
                raise CorruptCorpusError(path, "square ambient space")
            check = is_noncomm_graph(space)
            if not check:
                raise CorruptCorpusError(path, f"noncommutative graph: {check.diagnostic}")
            space = NoncommGraph.from_subspace(space)
        out[meta.get("name", path.stem)] = space
    return out
