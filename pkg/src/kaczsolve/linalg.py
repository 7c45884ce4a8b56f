"""Matrix/vector substrate: row-major storage, projections, norms, density.

A `RowMatrix` stores its rows either densely (one 2-D float64 array) or in
compressed-sparse-row form (indptr/indices/data). Every algorithm in this
package touches whole rows, so no column access path exists. Squared row
norms are computed once at construction and cached on the instance.

`RowMatrix` and the vectors produced here are treated as immutable: the
backing arrays are marked read-only, and all operations return new values.
"""

import numpy as np

from .errors import ShapeMismatchError, ZeroRowError

ZERO_ROW_THRESHOLD = 1e-300


def as_vector(values, length: int | None = None, name: str = "vector") -> np.ndarray:
    """Validate and convert to a 1-D float64 array with finite entries."""
    v = np.ascontiguousarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise ShapeMismatchError(f"{name} must be 1-D, got shape {v.shape}")
    if length is not None and v.shape[0] != length:
        raise ShapeMismatchError(f"{name} must have length {length}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


class DensityReport:
    """Structural nonzero fractions: overall delta plus one fraction per row."""

    def __init__(self, delta: float, per_row_delta: np.ndarray):
        self.delta = float(delta)
        self.per_row_delta = per_row_delta

    def __repr__(self):
        return f"DensityReport(delta={self.delta:.6g}, m={self.per_row_delta.shape[0]})"


class RowMatrix:
    """Row-major matrix with dense or CSR storage and cached squared row norms.

    Construct through :meth:`from_dense` or :meth:`from_csr`. Rows of exactly
    zero norm are rejected at construction.
    """

    def __init__(self, m, n, dense, indptr, indices, data):
        self.m = int(m)
        self.n = int(n)
        self._dense = dense
        self._indptr = indptr
        self._indices = indices
        self._data = data
        self._density = None
        self._entry_rows = None
        self._csr_cache = None
        if dense is not None:
            sq = np.einsum("ij,ij->i", dense, dense)
        else:
            empty = np.flatnonzero(indptr[:-1] == indptr[1:])
            if empty.size:
                raise ZeroRowError(int(empty[0]))
            sq = np.add.reduceat(data * data, indptr[:-1]) if m else np.zeros(0)
        bad = np.flatnonzero(sq <= 0.0)
        if bad.size:
            raise ZeroRowError(int(bad[0]))
        self.row_sq_norms = sq
        for arr in (dense, indptr, indices, data, sq):
            if arr is not None:
                arr.flags.writeable = False

    # -- construction -----------------------------------------------------

    @classmethod
    def from_dense(cls, array) -> "RowMatrix":
        a = np.array(array, dtype=np.float64, order="C", copy=True)
        if a.ndim != 2:
            raise ShapeMismatchError(f"dense storage needs a 2-D array, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix contains non-finite entries")
        m, n = a.shape
        return cls(m, n, a, None, None, None)

    @classmethod
    def from_csr(cls, indptr, indices, data, shape) -> "RowMatrix":
        m, n = map(int, shape)
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        indices = np.ascontiguousarray(indices, dtype=np.int64)
        data = np.ascontiguousarray(data, dtype=np.float64)
        if indptr.shape != (m + 1,) or indptr[0] != 0 or indptr[-1] != data.size:
            raise ShapeMismatchError("malformed indptr")
        if indices.shape != data.shape:
            raise ShapeMismatchError("indices and data lengths differ")
        if np.any(np.diff(indptr) < 0):
            raise ShapeMismatchError("indptr must be nondecreasing")
        if data.size and (indices.min() < 0 or indices.max() >= n):
            raise ShapeMismatchError("column index out of range")
        # column indices strictly increasing within each row
        inner = np.diff(indices)
        row_starts = indptr[1:-1]
        boundary = np.zeros(inner.shape, dtype=bool)
        boundary[row_starts[(row_starts > 0) & (row_starts < indices.size)] - 1] = True
        if np.any((inner <= 0) & ~boundary):
            raise ShapeMismatchError("column indices must be strictly increasing within a row")
        if not np.all(np.isfinite(data)):
            raise ValueError("matrix contains non-finite entries")
        return cls(m, n, None, indptr, indices, data)

    @classmethod
    def from_coo(cls, rows, cols, values, shape) -> "RowMatrix":
        """Build CSR storage from unordered coordinate triplets."""
        m, n = map(int, shape)
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        order = np.lexsort((cols, rows))
        rows, cols, values = rows[order], cols[order], values[order]
        indptr = np.zeros(m + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        np.cumsum(indptr, out=indptr)
        return cls.from_csr(indptr, cols, values, (m, n))

    # -- basic properties --------------------------------------------------

    @property
    def shape(self):
        return (self.m, self.n)

    @property
    def is_sparse(self) -> bool:
        return self._dense is None

    @property
    def nnz(self) -> int:
        if self.is_sparse:
            return int(self._data.size)
        return int(np.count_nonzero(self._dense))

    def __repr__(self):
        kind = "sparse" if self.is_sparse else "dense"
        return f"RowMatrix({self.m}x{self.n}, {kind}, nnz={self.nnz})"

    # -- row access ---------------------------------------------------------

    def row(self, i: int):
        """Row i: a dense 1-D view, or a (cols, vals) pair for sparse storage."""
        if not 0 <= i < self.m:
            raise IndexError(f"row {i} out of range for {self.m} rows")
        if self.is_sparse:
            lo, hi = self._indptr[i], self._indptr[i + 1]
            return self._indices[lo:hi], self._data[lo:hi]
        return self._dense[i]

    def csr_arrays(self):
        """(indptr, indices, data) triple; built once on demand for dense storage."""
        if self.is_sparse:
            return self._indptr, self._indices, self._data
        if self._csr_cache is None:
            indptr = np.arange(0, (self.m + 1) * self.n, self.n, dtype=np.int64)
            indices = np.tile(np.arange(self.n, dtype=np.int64), self.m)
            data = np.ascontiguousarray(self._dense).reshape(-1).copy()
            for arr in (indptr, indices, data):
                arr.flags.writeable = False
            self._csr_cache = (indptr, indices, data)
        return self._csr_cache

    def dense_array(self) -> np.ndarray | None:
        """The dense backing array, or None for sparse storage."""
        return self._dense

    def to_dense(self) -> np.ndarray:
        if not self.is_sparse:
            return self._dense.copy()
        out = np.zeros((self.m, self.n))
        rows = self._entry_row_indices()
        out[rows, self._indices] = self._data
        return out

    def _entry_row_indices(self) -> np.ndarray:
        if self._entry_rows is None:
            counts = np.diff(self._indptr)
            er = np.repeat(np.arange(self.m, dtype=np.int64), counts)
            er.flags.writeable = False
            self._entry_rows = er
        return self._entry_rows

    # -- products ------------------------------------------------------------

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """A @ x."""
        if x.shape[0] != self.n:
            raise ShapeMismatchError(f"matvec needs length {self.n}, got {x.shape[0]}")
        if self.is_sparse:
            return np.add.reduceat(self._data * x[self._indices], self._indptr[:-1])
        return self._dense @ x

    def matvec_t(self, r: np.ndarray) -> np.ndarray:
        """A.T @ r."""
        if r.shape[0] != self.m:
            raise ShapeMismatchError(f"matvec_t needs length {self.m}, got {r.shape[0]}")
        if self.is_sparse:
            w = self._data * r[self._entry_row_indices()]
            return np.bincount(self._indices, weights=w, minlength=self.n)
        return self._dense.T @ r


def as_row_matrix(X) -> RowMatrix:
    """Coerce an operand into a RowMatrix.

    Accepts a RowMatrix (returned as is), a 2-D array-like (dense storage),
    or any object exposing CSR-style ``indptr``/``indices``/``data``/``shape``
    attributes, e.g. a scipy.sparse CSR matrix.
    """
    if isinstance(X, RowMatrix):
        return X
    if all(hasattr(X, a) for a in ("indptr", "indices", "data", "shape")):
        return RowMatrix.from_csr(X.indptr, X.indices, X.data, X.shape)
    return RowMatrix.from_dense(np.asarray(X, dtype=np.float64))


# -- operations ---------------------------------------------------------------


def normalize_rows(A: RowMatrix, b: np.ndarray):
    """Scale each row of A to unit Euclidean norm, dividing b accordingly.

    The solution set of the system is unchanged. Rows that already have unit
    norm are returned bit for bit. Raises ZeroRowError for rows with norm
    below 1e-300.
    """
    b = as_vector(b, A.m, "b")
    norms = np.sqrt(A.row_sq_norms)
    bad = np.flatnonzero(norms < ZERO_ROW_THRESHOLD)
    if bad.size:
        raise ZeroRowError(int(bad[0]))
    b_out = b / norms
    if A.is_sparse:
        indptr, indices, data = A.csr_arrays()
        scaled = data / norms[A._entry_row_indices()]
        A_out = RowMatrix.from_csr(indptr.copy(), indices.copy(), scaled, A.shape)
    else:
        A_out = RowMatrix.from_dense(A.dense_array() / norms[:, None])
    return A_out, b_out


def project_hyperplane(row, sq_norm: float, b_i: float, x: np.ndarray) -> np.ndarray:
    """Orthogonal projection of x onto the hyperplane {v : row . v = b_i}.

    `row` is either a dense 1-D array or a (cols, vals) pair; only the
    coordinates in the row's support differ between x and the result.
    """
    if not sq_norm > 0.0:
        raise ValueError("sq_norm must be positive")
    if isinstance(row, tuple):
        cols, vals = row
        s = (vals @ x[cols] - b_i) / sq_norm
        out = x.copy()
        out[cols] -= s * vals
        return out
    s = (row @ x - b_i) / sq_norm
    return x - s * row


def residual_norm(A: RowMatrix, x: np.ndarray, b: np.ndarray) -> float:
    """Euclidean norm of A x - b."""
    x = as_vector(x, A.n, "x")
    b = as_vector(b, A.m, "b")
    return float(np.linalg.norm(A.matvec(x) - b))


def density(A: RowMatrix) -> DensityReport:
    """Structural nonzero fractions.

    Sparse storage counts stored entries; dense storage counts entries with
    a nonzero value.
    """
    if A._density is None:
        if A.is_sparse:
            per_row = np.diff(A._indptr) / A.n
        else:
            per_row = np.count_nonzero(A.dense_array(), axis=1) / A.n
        A._density = DensityReport(per_row.mean() if A.m else 0.0, per_row)
    return A._density
