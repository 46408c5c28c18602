"""Bipartite states as coefficient matrices, with exact and numeric rank.

A vector in a dA x dB bipartite space is stored as the dA x dB matrix of its
amplitudes: amplitude (i, j) sits at row i, column j, i.e. flat position
i * dB + j (row-major, 0-based).  The Schmidt rank of the state equals the
linear rank of this matrix, which is what every routine here computes.

Three scalar fields are supported: exact rationals (``fractions.Fraction``),
prime fields GF(p) (ints in [0, p)), and complex doubles.  Exact ranks use
fraction-free (Bareiss) elimination so integer inputs stay integers; numeric
ranks count singular values above a relative tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import DimensionError, DomainError, FieldMismatchError, NumericError

RATIONAL = "rational"
COMPLEX = "complex"
GFP = "gfp"

_FIELDS = (RATIONAL, COMPLEX, GFP)

#: Default relative cutoff for numeric rank: singular values are counted
#: when strictly greater than DEFAULT_TOL times the largest one.
DEFAULT_TOL = 1e-9


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _coerce_entry(value, field: str, p: int | None):
    if field == RATIONAL:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, np.integer)):
            return Fraction(int(value))
        raise FieldMismatchError(f"rational matrices take int/Fraction entries, got {type(value).__name__}")
    if field == GFP:
        if not isinstance(value, (int, np.integer)):
            raise FieldMismatchError(f"GF(p) matrices take int entries, got {type(value).__name__}")
        return int(value) % p
    if field == COMPLEX:
        z = complex(value)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise NumericError(f"non-finite entry {value!r}")
        return z
    raise DomainError(f"unknown field {field!r}")


@dataclass(frozen=True)
class StateMatrix:
    """Immutable dA x dB coefficient matrix over one scalar field."""

    rows: int
    cols: int
    field: str
    entries: tuple
    p: int | None = None

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DimensionError(f"need positive dimensions, got {self.rows}x{self.cols}")
        if self.field not in _FIELDS:
            raise DomainError(f"unknown field {self.field!r}")
        if self.field == GFP:
            if self.p is None or not is_prime(self.p):
                raise DomainError(f"GF(p) matrices need a prime p, got {self.p!r}")
        elif self.p is not None:
            raise DomainError(f"field {self.field!r} takes no modulus")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows_of_entries, field: str = RATIONAL, p: int | None = None) -> "StateMatrix":
        rows = len(rows_of_entries)
        if rows == 0:
            raise DimensionError("empty matrix")
        cols = len(rows_of_entries[0])
        if any(len(r) != cols for r in rows_of_entries):
            raise DimensionError("ragged rows")
        flat = tuple(_coerce_entry(v, field, p) for r in rows_of_entries for v in r)
        return cls(rows, cols, field, flat, p)

    @classmethod
    def rational(cls, rows_of_entries) -> "StateMatrix":
        return cls.from_rows(rows_of_entries, RATIONAL)

    @classmethod
    def complex_(cls, rows_of_entries) -> "StateMatrix":
        return cls.from_rows(rows_of_entries, COMPLEX)

    @classmethod
    def gfp(cls, rows_of_entries, p: int) -> "StateMatrix":
        return cls.from_rows(rows_of_entries, GFP, p)

    @classmethod
    def zero(cls, rows: int, cols: int, field: str = RATIONAL, p: int | None = None) -> "StateMatrix":
        zero = {RATIONAL: Fraction(0), COMPLEX: 0j, GFP: 0}[field]
        return cls(rows, cols, field, (zero,) * (rows * cols), p)

    def at(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def to_lists(self) -> list[list]:
        c = self.cols
        return [list(self.entries[i * c : (i + 1) * c]) for i in range(self.rows)]

    def to_numpy(self) -> np.ndarray:
        """Dense numpy view: complex128 for complex, int64 for GF(p), object for rationals."""
        if self.field == COMPLEX:
            dtype = np.complex128
        elif self.field == GFP:
            dtype = np.int64
        else:
            dtype = object
        return np.array(self.to_lists(), dtype=dtype)

    def transpose(self) -> "StateMatrix":
        flat = tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows))
        return StateMatrix(self.cols, self.rows, self.field, flat, self.p)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.entries)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "StateMatrix":
        flat = tuple(self.at(i, j) for i in row_idx for j in col_idx)
        return StateMatrix(len(row_idx), len(col_idx), self.field, flat, self.p)


def matrix_of_state(amplitudes: Sequence, dA: int, dB: int, field: str = RATIONAL, p: int | None = None) -> StateMatrix:
    """Arrange a flat amplitude list (index i*dB + j) into its dA x dB matrix."""
    if len(amplitudes) != dA * dB:
        raise DimensionError(f"{dA}x{dB} state needs {dA * dB} amplitudes, got {len(amplitudes)}")
    flat = tuple(_coerce_entry(v, field, p) for v in amplitudes)
    return StateMatrix(dA, dB, field, flat, p)


def state_of_matrix(m: StateMatrix) -> list:
    """Inverse of matrix_of_state: the row-major amplitude list."""
    return list(m.entries)


def combine(matrices: Sequence[StateMatrix], coeffs: Sequence) -> StateMatrix:
    """Linear combination sum_i coeffs[i] * matrices[i] over the shared field."""
    if not matrices:
        raise DimensionError("empty combination")
    if len(matrices) != len(coeffs):
        raise DimensionError(f"{len(matrices)} matrices but {len(coeffs)} coefficients")
    head = matrices[0]
    for m in matrices[1:]:
        if (m.rows, m.cols, m.field, m.p) != (head.rows, head.cols, head.field, head.p):
            raise FieldMismatchError("combination over mismatched matrices")
    cs = [_coerce_entry(c, head.field, head.p) for c in coeffs]
    n = head.rows * head.cols
    if head.field == GFP:
        acc = [0] * n
        for c, m in zip(cs, matrices):
            for k in range(n):
                acc[k] = (acc[k] + c * m.entries[k]) % head.p
    else:
        zero = Fraction(0) if head.field == RATIONAL else 0j
        acc = [zero] * n
        for c, m in zip(cs, matrices):
            if c == 0:
                continue
            for k in range(n):
                acc[k] += c * m.entries[k]
    return StateMatrix(head.rows, head.cols, head.field, tuple(acc), head.p)


@dataclass(frozen=True)
class SchmidtInfo:
    """Rank plus the singular values backing it (numeric mode only)."""

    rank: int
    singular_values: tuple[float, ...] = ()
    tolerance_used: float | None = None


def schmidt_rank_numeric(m: StateMatrix, tol: float = DEFAULT_TOL) -> SchmidtInfo:
    """Numeric Schmidt rank: singular values above ``tol * sigma_max`` count.

    The zero matrix has rank 0.  ``tol`` is relative, so the answer is
    invariant under rescaling the state.
    """
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if m.field == GFP:
        raise FieldMismatchError("numeric rank is undefined over GF(p)")
    a = np.asarray(m.to_lists(), dtype=np.complex128)
    if not np.all(np.isfinite(a.view(np.float64))):
        raise NumericError("matrix contains non-finite entries")
    sv = np.linalg.svd(a, compute_uv=False)
    smax = float(sv[0]) if sv.size else 0.0
    if smax == 0.0:
        return SchmidtInfo(0, tuple(float(s) for s in sv), tol)
    rank = int(np.sum(sv > tol * smax))
    return SchmidtInfo(rank, tuple(float(s) for s in sv), tol)


# ---------------------------------------------------------------------------
# exact elimination
# ---------------------------------------------------------------------------

def _integer_rows(m: StateMatrix) -> list[list[int]]:
    """Rational rows rescaled to integers (row scaling preserves rank)."""
    out = []
    for row in m.to_lists():
        denom = math.lcm(*(f.denominator for f in row)) if row else 1
        out.append([int(f * denom) for f in row])
    return out


def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free Gaussian elimination.

    Intermediate entries are minors of the input, so all divisions are exact
    and growth stays polynomial in the entry size.
    """
    m = [row[:] for row in rows]
    n_rows, n_cols = len(m), len(m[0]) if m else 0
    rank = 0
    prev = 1
    for col in range(n_cols):
        piv = next((i for i in range(rank, n_rows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pivot = m[rank][col]
        for i in range(rank + 1, n_rows):
            # Every row below the pivot is rescaled, zero head or not: the
            # entries must stay genuine minors for later divisions to be exact.
            head = m[i][col]
            row_i, row_p = m[i], m[rank]
            for j in range(col, n_cols):
                row_i[j] = (pivot * row_i[j] - head * row_p[j]) // prev
        prev = pivot
        rank += 1
        if rank == n_rows:
            break
    return rank


def gfp_rank(rows: list[list[int]], p: int) -> int:
    """Rank over GF(p) by ordinary elimination with modular inverses."""
    m = [[v % p for v in row] for row in rows]
    n_rows, n_cols = len(m), len(m[0]) if m else 0
    rank = 0
    for col in range(n_cols):
        piv = next((i for i in range(rank, n_rows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], p - 2, p)
        for i in range(rank + 1, n_rows):
            if m[i][col] == 0:
                continue
            factor = (m[i][col] * inv) % p
            row_i, row_p = m[i], m[rank]
            for j in range(col, n_cols):
                row_i[j] = (row_i[j] - factor * row_p[j]) % p
        rank += 1
        if rank == n_rows:
            break
    return rank


def rank_exact(m: StateMatrix) -> int:
    """Exact linear rank over an exact field (rationals or GF(p))."""
    if m.field == RATIONAL:
        return bareiss_rank(_integer_rows(m))
    if m.field == GFP:
        return gfp_rank(m.to_lists(), m.p)
    raise FieldMismatchError("rank_exact needs an exact field; use schmidt_rank_numeric for complex")


def exact_det(rows: list[list]) -> Fraction | int:
    """Determinant of a square exact matrix by fraction-free elimination."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError("determinant needs a square matrix")
    if n == 0:
        return 1
    denom = Fraction(1)
    int_rows = []
    for row in rows:
        fr = [Fraction(v) for v in row]
        d = math.lcm(*(f.denominator for f in fr))
        denom *= d
        int_rows.append([int(f * d) for f in fr])
    m = int_rows
    sign = 1
    prev = 1
    for col in range(n - 1):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return Fraction(0) if denom != 1 else 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        pivot = m[col][col]
        for i in range(col + 1, n):
            head = m[i][col]
            row_i, row_p = m[i], m[col]
            for j in range(col, n):
                row_i[j] = (pivot * row_i[j] - head * row_p[j]) // prev
        prev = pivot
    det = sign * m[n - 1][n - 1]
    if denom == 1:
        return det
    value = Fraction(det, 1) / denom
    return value


def _gfp_det(rows: list[list[int]], p: int) -> int:
    n = len(rows)
    m = [[v % p for v in row] for row in rows]
    det = 1
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = (-det) % p
        pivot = m[col][col]
        det = (det * pivot) % p
        inv = pow(pivot, p - 2, p)
        for i in range(col + 1, n):
            if m[i][col] == 0:
                continue
            factor = (m[i][col] * inv) % p
            for j in range(col, n):
                m[i][j] = (m[i][j] - factor * m[col][j]) % p
    return det


def minor_value(m: StateMatrix, row_idx: Sequence[int], col_idx: Sequence[int]):
    """Determinant of the submatrix on the given (increasing) index sets."""
    sub = [[m.at(i, j) for j in col_idx] for i in row_idx]
    if m.field == RATIONAL:
        return Fraction(exact_det(sub))
    if m.field == GFP:
        return _gfp_det(sub, m.p)
    return complex(np.linalg.det(np.array(sub, dtype=np.complex128)))


def order_r_minors(m: StateMatrix, r: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], object]]:
    """Lazily yield every order-r minor as (row-set, col-set, determinant).

    There are C(rows, r) * C(cols, r) of them; callers scanning for a nonzero
    one can stop at the first hit without paying for the rest.
    """
    if not 1 <= r <= min(m.rows, m.cols):
        raise DimensionError(f"minor order {r} out of range for {m.rows}x{m.cols}")
    for row_idx in itertools.combinations(range(m.rows), r):
        for col_idx in itertools.combinations(range(m.cols), r):
            yield row_idx, col_idx, minor_value(m, row_idx, col_idx)


# ---------------------------------------------------------------------------
# JSON encoding shared by every module
# ---------------------------------------------------------------------------

def _encode_entry(value, field: str):
    if field == RATIONAL:
        return f"{value.numerator}/{value.denominator}"
    if field == COMPLEX:
        return [value.real, value.imag]
    return int(value)


def _decode_entry(value, field: str, p: int | None):
    if field == RATIONAL:
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, int):
            return Fraction(value)
        raise DomainError(f"bad rational entry {value!r}")
    if field == COMPLEX:
        re, im = value
        return complex(re, im)
    if field == GFP:
        if p is None:
            raise DomainError("GF(p) matrix object is missing its modulus field 'p'")
        return int(value) % p
    raise DomainError(f"unknown field {field!r}")


def matrix_to_json_dict(m: StateMatrix) -> dict:
    out = {
        "rows": m.rows,
        "cols": m.cols,
        "field": m.field,
        "entries": [_encode_entry(v, m.field) for v in m.entries],
    }
    if m.field == GFP:
        out["p"] = m.p
    return out


def matrix_from_json_dict(d: dict) -> StateMatrix:
    try:
        rows, cols, field = d["rows"], d["cols"], d["field"]
        entries = d["entries"]
    except KeyError as exc:
        raise DomainError(f"matrix object missing key {exc}") from None
    p = d.get("p")
    flat = tuple(_decode_entry(v, field, p) for v in entries)
    return StateMatrix(rows, cols, field, flat, p)
