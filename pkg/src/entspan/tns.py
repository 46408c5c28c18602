"""Totally non-singular matrices: generation, certification, zero counting.

A square matrix is totally non-singular when every minor of every order is
nonzero.  Vandermonde matrices on strictly increasing positive nodes are the
deterministic source used throughout: they are totally positive, hence
totally non-singular.  Construction certifies this exhaustively up to
``CERTIFICATION_CAP``; larger sizes rely on the total-positivity theorem and
say so in their ``certified`` tag.

The payoff is the zero-count bound: a nonzero combination of n columns of an
m x m totally non-singular matrix has at most n - 1 zero entries, i.e. at
least m - n + 1 nonzero ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import DimensionError, DomainError
from .statemat import GFP, RATIONAL, StateMatrix, exact_det

#: Largest size for which construction proves total non-singularity by
#: enumerating every minor; the count grows like C(2m, m), so beyond this the
#: Vandermonde total-positivity theorem is trusted instead.
CERTIFICATION_CAP = 8

CERTIFIED_EXHAUSTIVE = "exhaustive"
CERTIFIED_BY_THEOREM = "by-theorem"


@dataclass(frozen=True)
class TnsMatrix:
    """Square exact matrix with all minors certified (or asserted) nonzero."""

    size: int
    entries: tuple  # row-major Fractions
    nodes: tuple | None
    certified: str

    def at(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.size + j]

    def to_lists(self) -> list[list[Fraction]]:
        s = self.size
        return [list(self.entries[i * s : (i + 1) * s]) for i in range(s)]

    def as_state_matrix(self) -> StateMatrix:
        return StateMatrix(self.size, self.size, RATIONAL, self.entries)

    def leading_column(self, length: int, j: int) -> list[Fraction]:
        """Column j of the leading length x length submatrix."""
        if not (0 <= j < length <= self.size):
            raise DimensionError(f"column {j} of leading {length}x{length} block out of range")
        return [self.at(i, j) for i in range(length)]


def _as_fraction_rows(matrix) -> list[list[Fraction]]:
    if isinstance(matrix, TnsMatrix):
        return matrix.to_lists()
    if isinstance(matrix, StateMatrix):
        if matrix.field == GFP:
            raise DomainError("total non-singularity checks run over the rationals")
        return [[Fraction(v) for v in row] for row in matrix.to_lists()]
    return [[Fraction(v) for v in row] for row in matrix]


def is_totally_nonsingular(matrix, order_cap: int | None = None) -> tuple[bool, tuple | None]:
    """Check all minors up to ``order_cap`` (default: full size) are nonzero.

    Returns ``(True, None)`` or ``(False, (row_set, col_set))`` with the first
    vanishing minor in (order, row, column) lexicographic scan order.
    """
    rows = _as_fraction_rows(matrix)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError("total non-singularity is defined for square matrices")
    cap = n if order_cap is None else min(order_cap, n)
    for order in range(1, cap + 1):
        for row_idx in itertools.combinations(range(n), order):
            for col_idx in itertools.combinations(range(n), order):
                sub = [[rows[i][j] for j in col_idx] for i in row_idx]
                if exact_det(sub) == 0:
                    return False, (row_idx, col_idx)
    return True, None


def vandermonde(nodes: Sequence) -> TnsMatrix:
    """Vandermonde matrix on strictly increasing positive nodes.

    Entry (i, j) is nodes[i]**j.  Such matrices are totally positive, so all
    minors are nonzero; sizes up to CERTIFICATION_CAP are verified minor by
    minor anyway.
    """
    fr_nodes = tuple(Fraction(x) for x in nodes)
    if not fr_nodes:
        raise DomainError("need at least one node")
    if fr_nodes[0] <= 0:
        raise DomainError(f"nodes must be positive, got {fr_nodes[0]}")
    for a, b in zip(fr_nodes, fr_nodes[1:]):
        if b <= a:
            raise DomainError(f"nodes must be strictly increasing, got {a} then {b}")
    m = len(fr_nodes)
    flat = tuple(x**j for x in fr_nodes for j in range(m))
    if m <= CERTIFICATION_CAP:
        ok, witness = is_totally_nonsingular([[flat[i * m + j] for j in range(m)] for i in range(m)])
        if not ok:
            raise DomainError(f"vanishing minor {witness} in a Vandermonde matrix; nodes {fr_nodes}")
        certified = CERTIFIED_EXHAUSTIVE
    else:
        certified = CERTIFIED_BY_THEOREM
    return TnsMatrix(m, flat, fr_nodes, certified)


@lru_cache(maxsize=None)
def default_tns(m: int) -> TnsMatrix:
    """The package-wide deterministic source: Vandermonde on nodes 1..m."""
    return vandermonde(range(1, m + 1))


def combination_nonzero_count(tns: TnsMatrix, cols: Sequence[int], coeffs: Sequence) -> int:
    """Nonzero entries of a combination of columns; at least m - n + 1 of them.

    ``cols`` picks n distinct columns, ``coeffs`` weights them (not all
    zero); coefficients pair with the columns in increasing index order, and
    the count bound holds whichever pairing was meant.
    """
    col_list = sorted(set(cols))
    if len(col_list) != len(cols):
        raise DomainError("column indices must be distinct")
    n = len(col_list)
    if not 1 <= n <= tns.size:
        raise DimensionError(f"need between 1 and {tns.size} columns, got {n}")
    if any(not 0 <= c < tns.size for c in col_list):
        raise DimensionError(f"column index out of range in {col_list}")
    if len(coeffs) != n:
        raise DimensionError(f"{n} columns but {len(coeffs)} coefficients")
    cs = [Fraction(c) for c in coeffs]
    if all(c == 0 for c in cs):
        raise DomainError("coefficients must not all be zero")
    count = 0
    for i in range(tns.size):
        if sum(c * tns.at(i, j) for c, j in zip(cs, col_list)) != 0:
            count += 1
    return count


def tns_to_json_dict(t: TnsMatrix) -> dict:
    from .statemat import matrix_to_json_dict

    out = matrix_to_json_dict(t.as_state_matrix())
    out["nodes"] = None if t.nodes is None else [f"{x.numerator}/{x.denominator}" for x in t.nodes]
    out["certified"] = t.certified
    return out
