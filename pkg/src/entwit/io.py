"""Plain-text matrix files.

Format::

    # free-form comment lines start with '#'
    dims m n
    row col re im        # one line per entry, 0-based indices, (mn)^2 lines

Floats are written with 17 significant digits, which makes write/read exact.
Comment lines of the form ``# key value`` are returned as metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import Dims, as_dims


class MatrixFileError(ValueError):
    pass


@dataclass
class MatrixFile:
    mat: np.ndarray
    dims: Dims
    meta: dict[str, str] = field(default_factory=dict)


def format_matrix(mat, dims, meta: dict | None = None) -> str:
    dims = as_dims(dims)
    mat = np.asarray(mat, dtype=complex)
    if mat.shape != (dims.total, dims.total):
        raise ValueError(f"matrix shape {mat.shape} does not match dims {tuple(dims)}")
    lines = [f"# {k} {v}" for k, v in (meta or {}).items()]
    lines.append(f"dims {dims.m} {dims.n}")
    for r in range(dims.total):
        for c in range(dims.total):
            z = mat[r, c]
            lines.append(f"{r} {c} {z.real:.17g} {z.imag:.17g}")
    return "\n".join(lines) + "\n"


def write_matrix(path, mat, dims, meta: dict | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_matrix(mat, dims, meta))


def parse_matrix(text: str, source: str = "<string>") -> MatrixFile:
    dims = None
    meta: dict[str, str] = {}
    mat = None
    seen = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split(None, 1)
            if parts:
                meta[parts[0]] = parts[1].strip() if len(parts) > 1 else ""
            continue
        tok = line.split()
        if dims is None:
            if len(tok) != 3 or tok[0] != "dims":
                raise MatrixFileError(f"{source}:{lineno}: expected header 'dims m n', got {line!r}")
            try:
                dims = as_dims((int(tok[1]), int(tok[2])))
            except ValueError as exc:
                raise MatrixFileError(f"{source}:{lineno}: bad dims: {exc}") from None
            mat = np.zeros((dims.total, dims.total), dtype=complex)
            seen = np.zeros(mat.shape, dtype=bool)
            continue
        if len(tok) != 4:
            raise MatrixFileError(f"{source}:{lineno}: expected 'row col re im', got {line!r}")
        try:
            r, c = int(tok[0]), int(tok[1])
            z = complex(float(tok[2]), float(tok[3]))
        except ValueError:
            raise MatrixFileError(f"{source}:{lineno}: cannot parse entry {line!r}") from None
        if not (0 <= r < dims.total and 0 <= c < dims.total):
            raise MatrixFileError(f"{source}:{lineno}: index ({r}, {c}) out of range for size {dims.total}")
        if seen[r, c]:
            raise MatrixFileError(f"{source}:{lineno}: duplicate entry ({r}, {c})")
        if not np.isfinite(z):
            raise MatrixFileError(f"{source}:{lineno}: non-finite entry")
        mat[r, c] = z
        seen[r, c] = True
    if dims is None:
        raise MatrixFileError(f"{source}: missing 'dims m n' header")
    if not seen.all():
        missing = int((~seen).sum())
        raise MatrixFileError(f"{source}: {missing} of {seen.size} entries missing")
    return MatrixFile(mat, dims, meta)


def read_matrix(path) -> MatrixFile:
    with open(path) as fh:
        return parse_matrix(fh.read(), str(path))
