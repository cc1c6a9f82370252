"""Exact dense linear algebra over the rationals and prime fields.

Matrices over Q store arbitrary-precision `Fraction` entries; matrices over
F_p store canonical residues in [0, p) inside an int64 numpy array.  Both
backends are exact: no tolerances appear anywhere in this module.

Values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, FieldMismatch

_SMALL_PRIMES = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p in _SMALL_PRIMES:
        return True
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: either Q or F_p with p prime."""

    kind: str  # "Q" | "Fp"
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise ValueError("rational field takes no modulus")
        elif self.kind == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"modulus must be prime, got {self.p}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def is_rational(self) -> bool:
        return self.kind == "Q"

    def zero(self):
        return Fraction(0) if self.is_rational else 0

    def one(self):
        return Fraction(1) if self.is_rational else 1

    def of(self, x):
        """Coerce an int, string or Fraction into a field scalar."""
        if self.is_rational:
            return Fraction(x)
        return int(Fraction(x)) % self.p if isinstance(x, str) else int(x) % self.p

    def inv(self, x):
        if self.is_rational:
            if x == 0:
                raise ZeroDivisionError("inverse of zero")
            return Fraction(1) / Fraction(x)
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, self.p - 2, self.p)

    def __str__(self):
        return "Q" if self.is_rational else f"F_{self.p}"


QQ = FieldSpec("Q")


def GF(p: int) -> FieldSpec:
    return FieldSpec("Fp", p)


def _check_same_field(a: "Mat", b: "Mat"):
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")


class Mat:
    """Immutable dense matrix over a FieldSpec.

    Entries are row-major.  Over F_p the backing store is an int64 numpy
    array flagged read-only; over Q a tuple of tuples of Fractions.
    """

    __slots__ = ("field", "rows", "cols", "_fp", "_q")

    def __init__(self, field: FieldSpec, rows: int, cols: int, data):
        self.field = field
        self.rows = rows
        self.cols = cols
        if field.is_rational:
            q = tuple(tuple(Fraction(x) for x in row) for row in data)
            if len(q) != rows or any(len(r) != cols for r in q):
                raise DimensionMismatch("entry count does not match shape")
            object.__setattr__ if False else None
            self._q = q
            self._fp = None
        else:
            arr = np.asarray(data, dtype=np.int64).reshape(rows, cols) % field.p
            arr.flags.writeable = False
            self._fp = arr
            self._q = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rows(field: FieldSpec, data: Sequence[Sequence]) -> "Mat":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        if field.is_rational:
            return Mat(field, rows, cols, [[Fraction(x) for x in r] for r in data])
        return Mat(field, rows, cols, data)

    @staticmethod
    def zeros(field: FieldSpec, rows: int, cols: int) -> "Mat":
        if field.is_rational:
            z = Fraction(0)
            return Mat(field, rows, cols, [[z] * cols for _ in range(rows)])
        return Mat(field, rows, cols, np.zeros((rows, cols), dtype=np.int64))

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "Mat":
        if field.is_rational:
            return Mat(
                field, n, n,
                [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)],
            )
        return Mat(field, n, n, np.eye(n, dtype=np.int64))

    @staticmethod
    def row_vector(field: FieldSpec, entries: Sequence) -> "Mat":
        return Mat.from_rows(field, [list(entries)])

    # -- accessors ----------------------------------------------------

    def entry(self, i: int, j: int):
        if self.field.is_rational:
            return self._q[i][j]
        return int(self._fp[i, j])

    def row(self, i: int) -> Tuple:
        if self.field.is_rational:
            return self._q[i]
        return tuple(int(x) for x in self._fp[i])

    def to_lists(self) -> List[List]:
        if self.field.is_rational:
            return [list(r) for r in self._q]
        return self._fp.tolist()

    @property
    def np(self) -> np.ndarray:
        """F_p backing array (read-only)."""
        if self._fp is None:
            raise FieldMismatch("no numpy backing over Q")
        return self._fp

    def is_zero(self) -> bool:
        if self.field.is_rational:
            return all(x == 0 for r in self._q for x in r)
        return not self._fp.any()

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if self.field != other.field or self.rows != other.rows or self.cols != other.cols:
            return False
        if self.field.is_rational:
            return self._q == other._q
        return bool(np.array_equal(self._fp, other._fp))

    def __hash__(self):
        if self.field.is_rational:
            return hash((self.field, self._q))
        return hash((self.field, self._fp.tobytes(), self.rows, self.cols))

    def __repr__(self):
        return f"Mat({self.field}, {self.rows}x{self.cols})"

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "Mat") -> "Mat":
        _check_same_field(self, other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("add shape mismatch")
        if self.field.is_rational:
            return Mat(self.field, self.rows, self.cols,
                       [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self._q, other._q)])
        return Mat(self.field, self.rows, self.cols, (self._fp + other._fp) % self.field.p)

    def __sub__(self, other: "Mat") -> "Mat":
        _check_same_field(self, other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("sub shape mismatch")
        if self.field.is_rational:
            return Mat(self.field, self.rows, self.cols,
                       [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self._q, other._q)])
        return Mat(self.field, self.rows, self.cols, (self._fp - other._fp) % self.field.p)

    def __neg__(self) -> "Mat":
        if self.field.is_rational:
            return Mat(self.field, self.rows, self.cols, [[-a for a in r] for r in self._q])
        return Mat(self.field, self.rows, self.cols, (-self._fp) % self.field.p)

    def scale(self, c) -> "Mat":
        if self.field.is_rational:
            c = Fraction(c)
            return Mat(self.field, self.rows, self.cols, [[c * a for a in r] for r in self._q])
        c = int(c) % self.field.p
        return Mat(self.field, self.rows, self.cols, (self._fp * c) % self.field.p)

    def __matmul__(self, other: "Mat") -> "Mat":
        _check_same_field(self, other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"matmul {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        f = self.field
        if f.is_rational:
            bt = list(zip(*other._q)) if other._q else []
            out = [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self._q]
            if self.cols == 0:
                out = [[Fraction(0)] * other.cols for _ in range(self.rows)]
            return Mat(f, self.rows, other.cols, out)
        return Mat(f, self.rows, other.cols, _matmul_fp(self._fp, other._fp, f.p))

    def transpose(self) -> "Mat":
        if self.field.is_rational:
            return Mat(self.field, self.cols, self.rows, list(zip(*self._q)) if self._q else
                       [[] for _ in range(self.cols)])
        return Mat(self.field, self.cols, self.rows, self._fp.T.copy())

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Mat":
        if self.field.is_rational:
            return Mat(self.field, len(row_idx), len(col_idx),
                       [[self._q[i][j] for j in col_idx] for i in row_idx])
        return Mat(self.field, len(row_idx), len(col_idx),
                   self._fp[np.ix_(list(row_idx), list(col_idx))] if row_idx and col_idx
                   else np.zeros((len(row_idx), len(col_idx)), dtype=np.int64))

    def power(self, k: int) -> "Mat":
        if self.rows != self.cols:
            raise DimensionMismatch("power of non-square matrix")
        acc = Mat.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                acc = acc @ base
            base = base @ base
            k >>= 1
        return acc


def _matmul_fp(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # BLAS float64 products are exact while k * (p-1)^2 < 2^53.
    k = a.shape[1]
    if k == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if k * (p - 1) * (p - 1) < 2**53:
        c = np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
        return c % p
    return (a.astype(object) @ b.astype(object)).astype(np.int64) % p


# -- stacking helpers --------------------------------------------------

def hstack(mats: Sequence[Mat]) -> Mat:
    mats = [m for m in mats]
    f = mats[0].field
    rows = mats[0].rows
    if any(m.rows != rows or m.field != f for m in mats):
        raise DimensionMismatch("hstack mismatch")
    if f.is_rational:
        data = [sum((list(m._q[i]) for m in mats), []) for i in range(rows)]
        return Mat(f, rows, sum(m.cols for m in mats), data)
    return Mat(f, rows, sum(m.cols for m in mats), np.hstack([m._fp for m in mats]))


def vstack(mats: Sequence[Mat]) -> Mat:
    mats = [m for m in mats]
    f = mats[0].field
    cols = mats[0].cols
    if any(m.cols != cols or m.field != f for m in mats):
        raise DimensionMismatch("vstack mismatch")
    if f.is_rational:
        data = [list(r) for m in mats for r in m._q]
        return Mat(f, sum(m.rows for m in mats), cols, data)
    return Mat(f, sum(m.rows for m in mats), cols, np.vstack([m._fp for m in mats]))


def block_diag(mats: Sequence[Mat]) -> Mat:
    f = mats[0].field
    r = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    if f.is_rational:
        out = [[Fraction(0)] * c for _ in range(r)]
        ro = co = 0
        for m in mats:
            for i in range(m.rows):
                for j in range(m.cols):
                    out[ro + i][co + j] = m._q[i][j]
            ro += m.rows
            co += m.cols
        return Mat(f, r, c, out)
    out = np.zeros((r, c), dtype=np.int64)
    ro = co = 0
    for m in mats:
        out[ro:ro + m.rows, co:co + m.cols] = m._fp
        ro += m.rows
        co += m.cols
    return Mat(f, r, c, out)


# -- echelon forms ------------------------------------------------------

@dataclass(frozen=True)
class RrefResult:
    reduced: Mat
    pivots: Tuple[int, ...]
    rank: int


def _rref_q(rows: List[List[Fraction]], cols: int):
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        if pv != 1:
            inv = Fraction(1) / pv
            rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                ri, rr = rows[i], rows[r]
                rows[i] = [a - f * b for a, b in zip(ri, rr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def _rref_fp(arr: np.ndarray, p: int):
    a = arr.astype(np.int64).copy()
    m, n = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        col_all = a[:, c].copy()
        col_all[r] = 0
        nz_rows = np.nonzero(col_all)[0]
        if nz_rows.size:
            a[nz_rows] = (a[nz_rows] - np.outer(col_all[nz_rows], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: Mat) -> RrefResult:
    """Unique reduced row-echelon form with pivot columns and rank."""
    if m.field.is_rational:
        rows = [list(r) for r in m._q]
        rows, pivots = _rref_q(rows, m.cols)
        red = Mat(m.field, m.rows, m.cols, rows)
    else:
        arr, pivots = _rref_fp(m._fp, m.field.p)
        red = Mat(m.field, m.rows, m.cols, arr)
    return RrefResult(red, tuple(pivots), len(pivots))


def rank(m: Mat) -> int:
    return rref(m).rank


def kernel_basis(m: Mat) -> List[Tuple]:
    """Basis of the right null space {v : m @ v = 0}, as coordinate tuples."""
    res = rref(m)
    piv = set(res.pivots)
    free = [c for c in range(m.cols) if c not in piv]
    basis = []
    f = m.field
    pivlist = list(res.pivots)
    for fc in free:
        v = [f.zero()] * m.cols
        v[fc] = f.one()
        for r_i, pc in enumerate(pivlist):
            coef = res.reduced.entry(r_i, fc)
            if coef != 0:
                v[pc] = -coef if f.is_rational else (-coef) % f.p
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class SolveResult:
    particular: Mat  # cols x b.cols
    kernel: Tuple[Tuple, ...]


def solve(m: Mat, b: Mat) -> Optional[SolveResult]:
    """Solve m @ x = b exactly; None when the system is inconsistent."""
    if m.field != b.field:
        raise FieldMismatch("solve over mixed fields")
    if m.rows != b.rows:
        raise DimensionMismatch("solve: row counts differ")
    aug = hstack([m, b])
    res = rref(aug)
    f = m.field
    for pc in res.pivots:
        if pc >= m.cols:
            return None
    part = [[f.zero()] * b.cols for _ in range(m.cols)]
    for r_i, pc in enumerate(res.pivots):
        for j in range(b.cols):
            part[pc][j] = res.reduced.entry(r_i, m.cols + j)
    return SolveResult(Mat(f, m.cols, b.cols, part), tuple(kernel_basis(m)))


def row_space_basis(m: Mat) -> Mat:
    """Matrix whose rows are the nonzero rows of rref(m)."""
    res = rref(m)
    idx = list(range(res.rank))
    return res.reduced.submatrix(idx, list(range(m.cols)))


def is_invertible(m: Mat) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def inverse(m: Mat) -> Mat:
    if m.rows != m.cols:
        raise DimensionMismatch("inverse of non-square matrix")
    aug = hstack([m, Mat.identity(m.field, m.rows)])
    res = rref(aug)
    if res.rank != m.rows or any(p >= m.rows for p in res.pivots):
        raise DimensionMismatch("matrix is singular")
    return res.reduced.submatrix(list(range(m.rows)), list(range(m.rows, 2 * m.rows)))


class SubspaceReducer:
    """Incremental echelon of a row subspace with residue computation.

    Supports membership tests and canonical residues modulo the subspace;
    used for quotient-space coordinates (balanced tensors, homotopy classes).
    """

    def __init__(self, field: FieldSpec, ambient_dim: int):
        self.field = field
        self.n = ambient_dim
        self._rows: List = []       # echelon rows (lists / np arrays)
        self._pivots: List[int] = []

    @property
    def dim(self) -> int:
        return len(self._rows)

    def _reduce_vec(self, v):
        f = self.field
        if f.is_rational:
            v = [Fraction(x) for x in v]
            for row, pv in zip(self._rows, self._pivots):
                c = v[pv]
                if c != 0:
                    v = [a - c * b for a, b in zip(v, row)]
            return v
        v = np.asarray(v, dtype=np.int64) % f.p
        for row, pv in zip(self._rows, self._pivots):
            c = int(v[pv])
            if c:
                v = (v - c * row) % f.p
        return v

    def add(self, v) -> bool:
        """Insert v into the span; returns True when the span grew."""
        f = self.field
        w = self._reduce_vec(v)
        if f.is_rational:
            pv = next((i for i, x in enumerate(w) if x != 0), None)
            if pv is None:
                return False
            inv = Fraction(1) / w[pv]
            w = [x * inv for x in w]
            for i, (row, rpv) in enumerate(zip(self._rows, self._pivots)):
                c = row[pv]
                if c != 0:
                    self._rows[i] = [a - c * b for a, b in zip(row, w)]
        else:
            nz = np.nonzero(w)[0]
            if nz.size == 0:
                return False
            pv = int(nz[0])
            w = (w * pow(int(w[pv]), f.p - 2, f.p)) % f.p
            for i, row in enumerate(self._rows):
                c = int(row[pv])
                if c:
                    self._rows[i] = (row - c * w) % f.p
        self._rows.append(w)
        self._pivots.append(pv)
        order = sorted(range(len(self._pivots)), key=lambda i: self._pivots[i])
        self._rows = [self._rows[i] for i in order]
        self._pivots = [self._pivots[i] for i in order]
        return True

    def add_rows(self, m: Mat):
        for i in range(m.rows):
            self.add(m.row(i))

    def contains(self, v) -> bool:
        w = self._reduce_vec(v)
        if self.field.is_rational:
            return all(x == 0 for x in w)
        return not np.any(w)

    def residue(self, v):
        """Canonical representative of v modulo the subspace."""
        w = self._reduce_vec(v)
        if self.field.is_rational:
            return tuple(w)
        return tuple(int(x) for x in w)

    def nonpivot_columns(self) -> List[int]:
        piv = set(self._pivots)
        return [c for c in range(self.n) if c not in piv]

    def basis_matrix(self) -> Mat:
        if not self._rows:
            return Mat.zeros(self.field, 0, self.n)
        return Mat.from_rows(self.field, [list(r) for r in self._rows])
