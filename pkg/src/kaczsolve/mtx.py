"""Matrix Market file I/O for matrices and single-column vectors.

Supports real, general matrices in coordinate or array format. Values are
written with 17 significant digits, so write/read round-trips reproduce every
float64 bit for bit. Sparse matrices round-trip through coordinate files and
dense matrices through array files, preserving the storage class.
"""

import numpy as np

from .errors import ParseError, UnsupportedFormatError
from .linalg import RowMatrix, as_vector

_HEADER_PREFIX = "%%MatrixMarket"


def _fmt(v: float) -> str:
    return format(v, ".17g")


def write_matrix_market(path, A: RowMatrix, *, vector_path=None, b=None) -> None:
    """Write A to `path`; optionally write the vector b beside it.

    Sparse storage produces a coordinate file (1-based indices), dense
    storage an array file (column-major entry order, per the format).
    """
    with open(path, "w") as fh:
        if A.is_sparse:
            indptr, indices, data = A.csr_arrays()
            fh.write(f"{_HEADER_PREFIX} matrix coordinate real general\n")
            fh.write(f"{A.m} {A.n} {data.size}\n")
            rows = A._entry_row_indices()
            for r, c, v in zip(rows, indices, data):
                fh.write(f"{r + 1} {c + 1} {_fmt(v)}\n")
        else:
            fh.write(f"{_HEADER_PREFIX} matrix array real general\n")
            fh.write(f"{A.m} {A.n}\n")
            dense = A.dense_array()
            for j in range(A.n):
                for i in range(A.m):
                    fh.write(f"{_fmt(dense[i, j])}\n")
    if b is not None:
        if vector_path is None:
            raise ValueError("vector_path is required when b is given")
        write_vector(vector_path, b)


def write_vector(path, v) -> None:
    """Write a vector as a single-column Matrix Market array file."""
    v = as_vector(v, name="v")
    with open(path, "w") as fh:
        fh.write(f"{_HEADER_PREFIX} matrix array real general\n")
        fh.write(f"{v.shape[0]} 1\n")
        for x in v:
            fh.write(f"{_fmt(x)}\n")


def read_matrix_market(path, *, vector_path=None):
    """Read a matrix, and optionally a companion vector file.

    Returns (RowMatrix, Vector or None). Coordinate files yield sparse
    storage, array files dense storage.
    """
    A = _read_object(path, want="matrix")
    b = read_vector(vector_path) if vector_path is not None else None
    return A, b


def read_vector(path) -> np.ndarray:
    """Read a single-column array file as a vector."""
    obj = _read_object(path, want="vector")
    return obj


def _tokens(path):
    """Yield (line_number, stripped_line) for content lines; skip comments."""
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            yield lineno, line.rstrip("\n")


def _read_object(path, want: str):
    lines = _tokens(path)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError(1, "empty file") from None
    parts = header.split()
    if len(parts) != 5 or parts[0] != _HEADER_PREFIX:
        raise ParseError(lineno, "malformed Matrix Market header")
    _, objtype, fmt, field, symmetry = parts
    if objtype.lower() != "matrix":
        raise UnsupportedFormatError(f"unsupported object type {objtype!r}")
    fmt = fmt.lower()
    if fmt not in ("coordinate", "array"):
        raise UnsupportedFormatError(f"unsupported format {fmt!r}")
    if field.lower() != "real":
        raise UnsupportedFormatError(f"unsupported field {field!r}")
    if symmetry.lower() != "general":
        raise UnsupportedFormatError(f"unsupported symmetry {symmetry!r}")

    # size line: first non-comment, non-blank line after the header
    size_line = None
    for lineno, line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("%"):
            continue
        size_line = (lineno, stripped)
        break
    if size_line is None:
        raise ParseError(lineno, "missing size line")

    lineno, stripped = size_line
    dims = stripped.split()
    if fmt == "coordinate":
        if len(dims) != 3:
            raise ParseError(lineno, "coordinate size line needs 'rows cols nnz'")
        try:
            m, n, nnz = (int(t) for t in dims)
        except ValueError:
            raise ParseError(lineno, "size line entries must be integers") from None
        return _read_coordinate(lines, m, n, nnz, want)
    if len(dims) != 2:
        raise ParseError(lineno, "array size line needs 'rows cols'")
    try:
        m, n = (int(t) for t in dims)
    except ValueError:
        raise ParseError(lineno, "size line entries must be integers") from None
    return _read_array(lines, m, n, want)


def _read_coordinate(lines, m, n, nnz, want):
    if want == "vector":
        raise UnsupportedFormatError("expected a single-column array file for a vector")
    rows = np.empty(nnz, dtype=np.int64)
    cols = np.empty(nnz, dtype=np.int64)
    vals = np.empty(nnz, dtype=np.float64)
    count = 0
    seen = set()
    for lineno, line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("%"):
            continue
        parts = stripped.split()
        if len(parts) != 3:
            raise ParseError(lineno, "coordinate entry needs 'row col value'")
        if count >= nnz:
            raise ParseError(lineno, f"more than the declared {nnz} entries")
        try:
            i = int(parts[0])
            j = int(parts[1])
            v = float(parts[2])
        except ValueError:
            raise ParseError(lineno, "could not parse coordinate entry") from None
        if not (1 <= i <= m and 1 <= j <= n):
            raise ParseError(lineno, f"entry ({i}, {j}) outside {m}x{n}")
        if (i, j) in seen:
            raise ParseError(lineno, f"duplicate entry ({i}, {j})")
        seen.add((i, j))
        rows[count] = i - 1
        cols[count] = j - 1
        vals[count] = v
        count += 1
    if count != nnz:
        raise ParseError(0, f"declared {nnz} entries but found {count}")
    return RowMatrix.from_coo(rows, cols, vals, (m, n))


def _read_array(lines, m, n, want):
    total = m * n
    vals = np.empty(total, dtype=np.float64)
    count = 0
    for lineno, line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("%"):
            continue
        if count >= total:
            raise ParseError(lineno, f"more than the declared {total} entries")
        try:
            vals[count] = float(stripped)
        except ValueError:
            raise ParseError(lineno, "could not parse array entry") from None
        count += 1
    if count != total:
        raise ParseError(0, f"declared {total} entries but found {count}")
    if want == "vector":
        if n != 1:
            raise UnsupportedFormatError("vector files must have a single column")
        return vals
    # array files store entries column by column
    return RowMatrix.from_dense(vals.reshape((n, m)).T)
