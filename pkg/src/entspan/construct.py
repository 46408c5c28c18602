"""Explicit bases for subspaces with constrained Schmidt rank.

The centerpiece builds, for any 2 <= r <= min(dA, dB), a basis of exactly
(dA - r + 1)(dB - r + 1) integer matrices whose every nonzero combination has
rank at least r.  Matrices are grouped by matrix diagonal: diagonal k (k =
col - row, increasing from lower-left to upper-right) of length L >= r
contributes L - r + 1 matrices, each carrying one column of a totally
non-singular matrix down that diagonal.  A combination then keeps at least r
nonzero entries on its top-rightmost occupied diagonal, which forces a
triangular nonzero r x r minor.

Also here: the row-factor construction maximizing dimension under a rank
*upper* bound, the fixed-rank family r = dA, the 3x3 antisymmetric basis,
and seeded random complex subspaces used as optimizer fodder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CertificateError, DimensionError, DomainError, FieldMismatchError
from .statemat import (
    GFP,
    RATIONAL,
    StateMatrix,
    bareiss_rank,
    combine,
    gfp_rank,
    matrix_from_json_dict,
    matrix_to_json_dict,
    rank_exact,
)
from .tns import TnsMatrix, default_tns

KIND_MIN_RANK = "min_rank_geq_r"
KIND_MAX_RANK = "max_rank_leq_r"
KIND_FIXED_RANK = "fixed_rank"
KIND_ANTISYMMETRIC = "antisymmetric"
KIND_RANDOM = "random"
KIND_USER = "user"

KINDS = (KIND_MIN_RANK, KIND_MAX_RANK, KIND_FIXED_RANK, KIND_ANTISYMMETRIC, KIND_RANDOM, KIND_USER)

#: Number of seeded combinations each rational constructor rank-checks on exit.
SELF_CHECK_SAMPLES = 32
_SELF_CHECK_SEED = 0x5EED


@dataclass(frozen=True)
class DiagonalIndex:
    """One diagonal of a dA x dB matrix: label k = col - row, cells by row."""

    dA: int
    dB: int
    k: int
    length: int
    cells: tuple[tuple[int, int], ...]


def diagonals(dA: int, dB: int) -> list[DiagonalIndex]:
    """All dA + dB - 1 diagonals, in increasing k order.

    Diagonal k has length min(dA, dB, dA + k, dB - k); for dA <= dB that
    means 1 + dB - dA diagonals of full length dA and two of every shorter
    length.
    """
    if dA < 1 or dB < 1:
        raise DimensionError(f"need positive dimensions, got {dA}x{dB}")
    out = []
    for k in range(-(dA - 1), dB):
        i0 = max(0, -k)
        length = min(dA, dB, dA + k, dB - k)
        cells = tuple((i, i + k) for i in range(i0, i0 + length))
        out.append(DiagonalIndex(dA, dB, k, length, cells))
    return out


@dataclass(frozen=True)
class SubspaceBasis:
    """Ordered linearly independent basis of a matrix subspace."""

    dA: int
    dB: int
    r: int | None
    kind: str
    matrices: tuple[StateMatrix, ...]
    metadata: dict

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown basis kind {self.kind!r}")
        if not self.matrices:
            raise DimensionError("a basis needs at least one matrix")
        head = self.matrices[0]
        for m in self.matrices:
            if (m.rows, m.cols) != (self.dA, self.dB):
                raise DimensionError(f"basis is {self.dA}x{self.dB} but found a {m.rows}x{m.cols} matrix")
            if (m.field, m.p) != (head.field, head.p):
                raise FieldMismatchError("basis matrices must share one field")

    @property
    def dimension(self) -> int:
        return len(self.matrices)

    @property
    def field(self) -> str:
        return self.matrices[0].field

    @property
    def p(self) -> int | None:
        return self.matrices[0].p

    def combination(self, coeffs: Sequence) -> StateMatrix:
        return combine(self.matrices, coeffs)

    def vectorized_stack(self) -> list[list]:
        """dimension x (dA*dB) stack of the row-major matrix entries."""
        return [list(m.entries) for m in self.matrices]


def basis_stack_rank(basis: SubspaceBasis) -> int:
    """Exact (or, for complex, numeric) rank of the vectorized basis stack."""
    stack = basis.vectorized_stack()
    if basis.field == RATIONAL:
        int_rows = []
        for row in stack:
            denom = math.lcm(*(f.denominator for f in row))
            int_rows.append([int(f * denom) for f in row])
        return bareiss_rank(int_rows)
    if basis.field == GFP:
        return gfp_rank(stack, basis.p)
    a = np.array(stack, dtype=np.complex128)
    sv = np.linalg.svd(a, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > 1e-9 * sv[0]))


def _check_independent(basis: SubspaceBasis) -> None:
    rank = basis_stack_rank(basis)
    if rank != basis.dimension:
        raise CertificateError(
            f"constructed basis is not linearly independent: stack rank {rank} != {basis.dimension}"
        )


def _self_check_rank_floor(basis: SubspaceBasis, r: int, samples: int = SELF_CHECK_SAMPLES) -> None:
    rng = np.random.default_rng(_SELF_CHECK_SEED)
    dim = basis.dimension
    if all(v.denominator == 1 for m in basis.matrices for v in m.entries):
        # Integer entries with single-diagonal support: combine sparsely over
        # plain ints instead of paying Fraction overhead per cell.
        sparse = [
            [(k, int(v)) for k, v in enumerate(m.entries) if v != 0] for m in basis.matrices
        ]
        size = basis.dA * basis.dB
        for _ in range(samples):
            coeffs = rng.integers(-9, 10, size=dim)
            while not coeffs.any():
                coeffs = rng.integers(-9, 10, size=dim)
            acc = [0] * size
            for c, cells in zip(coeffs, sparse):
                if c:
                    c = int(c)
                    for k, v in cells:
                        acc[k] += c * v
            rows = [acc[i * basis.dB : (i + 1) * basis.dB] for i in range(basis.dA)]
            got = bareiss_rank(rows)
            if got < r:
                raise CertificateError(f"self-check found a combination of rank {got} < {r}")
        return
    for _ in range(samples):
        coeffs = rng.integers(-9, 10, size=dim)
        while not coeffs.any():
            coeffs = rng.integers(-9, 10, size=dim)
        got = rank_exact(basis.combination([int(c) for c in coeffs]))
        if got < r:
            raise CertificateError(f"self-check found a combination of rank {got} < {r}")


def build_diagonal_family(diag: DiagonalIndex, r: int, tns: TnsMatrix) -> list[StateMatrix]:
    """The length - r + 1 generators living on one diagonal.

    Matrix j carries column j of the leading length x length block of ``tns``
    down the diagonal's cells.  Diagonals shorter than r contribute nothing
    and yield an empty list.
    """
    if r < 1:
        raise DomainError(f"rank threshold must be at least 1, got {r}")
    if diag.length < r:
        return []
    if tns.size < diag.length:
        raise DimensionError(f"TNS source of size {tns.size} too small for a length-{diag.length} diagonal")
    out = []
    for j in range(diag.length - r + 1):
        column = tns.leading_column(diag.length, j)
        entries = [[Fraction(0)] * diag.dB for _ in range(diag.dA)]
        for value, (row, col) in zip(column, diag.cells):
            entries[row][col] = value
        out.append(StateMatrix.rational(entries))
    return out


def construct_min_rank_subspace(dA: int, dB: int, r: int) -> SubspaceBasis:
    """Basis of dimension (dA-r+1)(dB-r+1) whose combinations all have rank >= r."""
    if not 2 <= r <= min(dA, dB):
        raise DomainError(f"need 2 <= r <= min(dA, dB) = {min(dA, dB)}, got r={r}")
    tns = default_tns(min(dA, dB))
    matrices: list[StateMatrix] = []
    per_matrix: list[dict] = []
    for diag in diagonals(dA, dB):
        for j, mat in enumerate(build_diagonal_family(diag, r, tns)):
            matrices.append(mat)
            per_matrix.append({"k": diag.k, "tns_column": j})
    expected = (dA - r + 1) * (dB - r + 1)
    if len(matrices) != expected:
        raise CertificateError(f"diagonal counting bug: built {len(matrices)} matrices, expected {expected}")
    basis = SubspaceBasis(
        dA,
        dB,
        r,
        KIND_MIN_RANK,
        tuple(matrices),
        {
            "per_matrix": per_matrix,
            "tns_nodes": [str(x) for x in tns.nodes],
            "tns_certified": tns.certified,
        },
    )
    _check_independent(basis)
    _self_check_rank_floor(basis, r)
    return basis


def construct_max_rank_leq_subspace(dA: int, dB: int, r: int) -> SubspaceBasis:
    """The r * max(dA, dB) elementary matrices supported on r rows (or columns).

    Every combination lives in (span of r rows) x full column space, so its
    rank never exceeds r; this meets the dimension bound for rank-<=-r
    subspaces exactly.
    """
    if not 1 <= r <= min(dA, dB):
        raise DomainError(f"need 1 <= r <= min(dA, dB) = {min(dA, dB)}, got r={r}")
    factor_side = "rows" if dA <= dB else "cols"
    matrices = []
    per_matrix = []
    if factor_side == "rows":
        span = [(i, j) for i in range(r) for j in range(dB)]
    else:
        span = [(i, j) for j in range(r) for i in range(dA)]
    for i, j in span:
        entries = [[Fraction(0)] * dB for _ in range(dA)]
        entries[i][j] = Fraction(1)
        matrices.append(StateMatrix.rational(entries))
        per_matrix.append({"row": i, "col": j})
    basis = SubspaceBasis(
        dA,
        dB,
        r,
        KIND_MAX_RANK,
        tuple(matrices),
        {"factor_side": factor_side, "factor_count": r, "per_matrix": per_matrix},
    )
    _check_independent(basis)
    return basis


def construct_fixed_rank_subspace(dA: int, dB: int) -> SubspaceBasis:
    """Dimension dB-dA+1 subspace in which every nonzero element has rank dA.

    This is the minimum-rank construction at its extreme r = dA: rank cannot
    exceed dA, and the construction forbids anything below it.
    """
    if dA > dB:
        raise DomainError(f"need dA <= dB, got {dA} > {dB}; transpose the problem first")
    if dA < 2:
        raise DomainError("fixed-rank construction needs dA >= 2")
    base = construct_min_rank_subspace(dA, dB, dA)
    return replace(base, kind=KIND_FIXED_RANK)


def antisymmetric_basis_3x3() -> SubspaceBasis:
    """The three antisymmetric 3x3 generators; every combination has rank 2.

    Nonzero antisymmetric matrices of odd size have even rank below the size,
    which pins the rank of every nonzero combination at exactly 2.
    """
    pairs = [(0, 1), (0, 2), (1, 2)]
    matrices = []
    for i, j in pairs:
        entries = [[Fraction(0)] * 3 for _ in range(3)]
        entries[i][j] = Fraction(1)
        entries[j][i] = Fraction(-1)
        matrices.append(StateMatrix.rational(entries))
    basis = SubspaceBasis(
        3,
        3,
        2,
        KIND_ANTISYMMETRIC,
        tuple(matrices),
        {"generators": [f"E{i}{j}-E{j}{i}" for i, j in pairs]},
    )
    _check_independent(basis)
    return basis


def random_subspace(dA: int, dB: int, dim: int, seed: int) -> SubspaceBasis:
    """Seeded complex Gaussian basis of the requested dimension.

    Gaussian stacks are almost surely full rank; independence is still
    checked, and the draw is deterministic in the seed.
    """
    if not 1 <= dim <= dA * dB:
        raise DomainError(f"need 1 <= dim <= {dA * dB}, got {dim}")
    rng = np.random.default_rng(seed)
    matrices = []
    for _ in range(dim):
        a = rng.standard_normal((dA, dB)) + 1j * rng.standard_normal((dA, dB))
        matrices.append(StateMatrix.complex_(a.tolist()))
    basis = SubspaceBasis(dA, dB, None, KIND_RANDOM, tuple(matrices), {"seed": seed})
    _check_independent(basis)
    return basis


# ---------------------------------------------------------------------------
# JSON encoding
# ---------------------------------------------------------------------------

def basis_to_json_dict(basis: SubspaceBasis) -> dict:
    return {
        "da": basis.dA,
        "db": basis.dB,
        "r": basis.r,
        "kind": basis.kind,
        "field": basis.field,
        "matrices": [matrix_to_json_dict(m) for m in basis.matrices],
        "metadata": basis.metadata,
    }


def basis_from_json_dict(d: dict) -> SubspaceBasis:
    try:
        dA, dB, kind = d["da"], d["db"], d["kind"]
        matrices = tuple(matrix_from_json_dict(md) for md in d["matrices"])
    except KeyError as exc:
        raise DomainError(f"basis object missing key {exc}") from None
    return SubspaceBasis(dA, dB, d.get("r"), kind, matrices, d.get("metadata", {}))
