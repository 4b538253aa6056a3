import hashlib
import json
import math
from pathlib import Path
from typing import Any, List, Sequence, Union

import numpy as np

from errors import SchemaError


def load_json(path: Union[str, Path]) -> Any:
    """Read a JSON input file, reporting syntax errors as schema errors"""
    try:
        with open(path, "r") as f:
            return json.load(f)
    except FileNotFoundError:
        raise SchemaError(f"file not found: {path}")
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON in {path}: {e.msg} (line {e.lineno})")


def file_digest(paths: Sequence[Union[str, Path]]) -> str:
    """SHA-256 over the bytes of every input file, in argument order"""
    h = hashlib.sha256()
    for path in paths:
        h.update(str(path).encode())
        h.update(b"\0")
        with open(path, "rb") as f:
            h.update(f.read())
    return h.hexdigest()


def require(node: dict, key: str, path: str) -> Any:
    if not isinstance(node, dict):
        raise SchemaError("expected an object", path)
    if key not in node:
        raise SchemaError(f"missing key '{key}'", path)
    return node[key]


def parse_complex(value: Any, path: str) -> complex:
    """A complex number is either a real number or a pair [re, im]"""
    if isinstance(value, bool):
        raise SchemaError("expected a number", path)
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 \
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return complex(value[0], value[1])
    raise SchemaError("expected a number or [re, im]", path)


def parse_matrix(value: Any, path: str) -> np.ndarray:
    """Parse a row-major matrix of complex entries; an empty list is a 0x0 matrix"""
    if not isinstance(value, list):
        raise SchemaError("expected a list of rows", path)
    if len(value) == 0:
        return np.zeros((0, 0), dtype=complex)
    rows: List[List[complex]] = []
    for i, row in enumerate(value):
        if not isinstance(row, list):
            raise SchemaError("expected a row list", f"{path}[{i}]")
        rows.append([parse_complex(x, f"{path}[{i}][{j}]") for j, x in enumerate(row)])
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise SchemaError(f"row has {len(row)} entries, expected {width}", f"{path}[{i}]")
    return np.array(rows, dtype=complex)


def encode_complex(z: complex) -> Union[float, List[float]]:
    """Real values as a plain number, others as [re, im]"""
    z = complex(z)
    if z.imag == 0.0:
        return z.real
    return [z.real, z.imag]


def _format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if x == int(x) and abs(x) < 1e16:
        return repr(float(x))
    return format(x, ".17g")


def to_plain(obj: Any) -> Any:
    """Convert numpy/complex/dataclass-like values into JSON-ready Python values"""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return encode_complex(complex(obj))
    if hasattr(obj, "numerator") and hasattr(obj, "denominator"):
        # fractions and sympy rationals
        return float(obj)
    return obj


def dumps(obj: Any) -> str:
    """Deterministic JSON text, floats at 17 significant digits, sorted keys"""
    return _encode(to_plain(obj))


def _encode(obj: Any) -> str:
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(k)}: {_encode(obj[k])}" for k in sorted(obj))
        return "{" + items + "}"
    if isinstance(obj, list):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if isinstance(obj, float):
        return _format_float(obj)
    return json.dumps(obj)
