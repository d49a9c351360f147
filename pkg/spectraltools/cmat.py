"""
Reads and writes the CMAT v1 text format and the
companion vector format used by the command line.

A CMAT file starts with ``# <rows> <cols>`` and holds
rows * cols lines ``<re> <im>`` in row-major order,
written with 17 significant digits. Vector files use
the same layout with a ``# <n> 1`` header; header-less
files of ``re im`` lines are accepted on read.
"""

import io
import pathlib

import numpy as np
from numpy.typing import ArrayLike, NDArray

from spectraltools.errors import InvalidArgumentError
from spectraltools.utils import as_complex_matrix, as_complex_vector

CMAT_FLOAT_FORMAT = "%.16e"


def format_cmat(M: ArrayLike) -> str:
    """Serialize a complex matrix to CMAT v1 text."""
    mat = as_complex_matrix(M, "M")
    rows, cols = mat.shape
    flat = mat.reshape(-1)
    buffer = io.StringIO()
    np.savetxt(
        buffer,
        np.column_stack([flat.real, flat.imag]),
        fmt=CMAT_FLOAT_FORMAT,
        header=f"{rows} {cols}",
        comments="# ",
    )
    return buffer.getvalue()


def _parse_header(line: str) -> tuple[int, int] | None:
    if not line.startswith("#"):
        return None
    fields = line.lstrip("#").split()
    if len(fields) != 2:
        raise InvalidArgumentError(f"Malformed CMAT header: {line!r}.")
    try:
        rows, cols = (int(f) for f in fields)
    except ValueError as e:
        raise InvalidArgumentError(f"Malformed CMAT header: {line!r}.") from e
    if rows < 0 or cols < 0:
        raise InvalidArgumentError(f"Negative CMAT dimensions: {line!r}.")
    return rows, cols


def _parse_pairs(text: str) -> NDArray[np.complex128]:
    try:
        pairs = np.loadtxt(io.StringIO(text), comments="#", ndmin=2)
    except ValueError as e:
        raise InvalidArgumentError(f"Malformed complex entries: {e}") from e
    if pairs.size == 0:
        return np.zeros(0, dtype=np.complex128)
    if pairs.shape[1] != 2:
        raise InvalidArgumentError(
            f"Each entry line needs exactly '<re> <im>'; got {pairs.shape[1]} fields."
        )
    return pairs[:, 0] + 1j * pairs[:, 1]


def parse_cmat(text: str) -> NDArray[np.complex128]:
    """Parse CMAT v1 text into a complex matrix."""
    first_line = text.lstrip().split("\n", 1)[0]
    shape = _parse_header(first_line)
    if shape is None:
        raise InvalidArgumentError("CMAT text must start with '# <rows> <cols>'.")
    entries = _parse_pairs(text)
    if entries.size != shape[0] * shape[1]:
        raise InvalidArgumentError(
            f"CMAT header announces {shape[0] * shape[1]} entries;"
            f" found {entries.size}."
        )
    return as_complex_matrix(entries.reshape(shape), "CMAT")


def parse_vector(text: str) -> NDArray[np.complex128]:
    """Parse a vector file (optional ``# <n> 1`` header)."""
    first_line = text.lstrip().split("\n", 1)[0]
    shape = _parse_header(first_line)
    entries = _parse_pairs(text)
    if shape is not None and entries.size != shape[0] * shape[1]:
        raise InvalidArgumentError(
            f"Vector header announces {shape[0] * shape[1]} entries;"
            f" found {entries.size}."
        )
    return as_complex_vector(entries, "vector")


def read_text(path: str | pathlib.Path) -> str:
    """
    UTF-8 contents of a text input file; undecodable
    bytes are an input error, not an I/O error.
    """
    try:
        return pathlib.Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise InvalidArgumentError(f"{path} is not UTF-8 text: {e.reason}.") from e


def read_cmat(path: str | pathlib.Path) -> NDArray[np.complex128]:
    return parse_cmat(read_text(path))


def write_cmat(path: str | pathlib.Path, M: ArrayLike) -> None:
    pathlib.Path(path).write_text(format_cmat(M))


def read_vector(path: str | pathlib.Path) -> NDArray[np.complex128]:
    return parse_vector(read_text(path))


def write_vector(path: str | pathlib.Path, v: ArrayLike) -> None:
    vec = as_complex_vector(v, "v")
    pathlib.Path(path).write_text(format_cmat(vec.reshape(-1, 1)))
