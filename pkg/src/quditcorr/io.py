"""Matrix JSON files: ``{"rows": n, "cols": m, "re": [[...]], "im": [[...]]}``."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .linalg import as_matrix, validate_density


class SchemaError(ValueError):
    pass


def matrix_to_json(a) -> dict:
    m = as_matrix(a)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise SchemaError("matrix JSON must be an object")
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros((rows, cols))), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad matrix JSON: {exc}") from exc
    if rows < 1 or cols < 1 or re.shape != (rows, cols) or im.shape != (rows, cols):
        raise SchemaError(f"re/im must both be {rows}x{cols}")
    m = re + 1j * im
    if not np.all(np.isfinite(m)):
        raise SchemaError("matrix has non-finite entries")
    return m


def load_matrix(path) -> np.ndarray:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    return matrix_from_json(obj)


def load_density(path) -> np.ndarray:
    return validate_density(load_matrix(path))


def save_matrix(path, a) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(a)) + "\n")


# -- canonical fixtures -----------------------------------------------------------


def bell_matrix() -> np.ndarray:
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[0, 3] = rho[3, 0] = rho[3, 3] = 0.5
    return rho


def mixed4() -> np.ndarray:
    return np.eye(4, dtype=complex) / 4


def qutrit_test() -> np.ndarray:
    return np.array([[0.5, 0.1, 0.2], [0.1, 0.3, 0.0], [0.2, 0.0, 0.2]], dtype=complex)


FIXTURES = {
    "bell.json": bell_matrix,
    "mixed4.json": mixed4,
    "qutrit_test.json": qutrit_test,
}


def fixtures(out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, build in FIXTURES.items():
        p = out / name
        save_matrix(p, build())
        paths.append(p)
    return paths
