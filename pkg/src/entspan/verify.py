"""Certify or refute rank properties of matrix subspaces.

Minimum rank over a whole subspace is a worst-case quantity, so no single
tool settles it.  This module layers four kinds of evidence:

* structural certificates: for bases built by the diagonal construction, an
  exactly computed nonzero triangular minor on the top-rightmost occupied
  diagonal, mirroring why the construction works;
* seeded exact sampling over the rationals, which can refute but only ever
  reports "consistent" on success;
* exhaustive enumeration over GF(p), an exact finite oracle whose verdict is
  one-sided (rank can only drop when reducing mod p);
* numerical descent on the r-th singular value, a heuristic search for the
  low-rank element whose existence is guaranteed above the dimension bound.

Verdicts are "consistent", "refuted" or "inconclusive"; a refutation always
carries a checkable witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.linalg

from . import _kernels
from .construct import KIND_FIXED_RANK, KIND_MIN_RANK, SubspaceBasis, diagonals
from .errors import CertificateError, DimensionError, DomainError, FieldMismatchError
from .statemat import (
    COMPLEX,
    RATIONAL,
    StateMatrix,
    is_prime,
    matrix_to_json_dict,
    minor_value,
    rank_exact,
    schmidt_rank_numeric,
)

VERDICT_CONSISTENT = "consistent"
VERDICT_REFUTED = "refuted"
VERDICT_INCONCLUSIVE = "inconclusive"

CERT_STRUCTURAL = "structural_geq"
CERT_WITNESS_LT = "witness_lt"
CERT_WITNESS_GT = "witness_gt"

#: Relative sigma_r below which the optimizer claims a rank drop (then
#: re-checks it numerically before emitting a witness).
SIGMA_TOL = 1e-7

#: Residual bound every reported pencil root must satisfy.
PENCIL_TOL = 1e-8

#: Default ceiling on the number of projective points enumerated over GF(p).
GFP_ENUMERATION_CAP = 10**6

#: Sampled integer coefficients are drawn uniformly from this box.
SAMPLE_BOX = 9


@dataclass(frozen=True)
class RankCertificate:
    """Witness for a rank statement about one combination.

    ``structural_geq`` pins rank >= r via r positions on diagonal ``kappa``
    whose triangular minor has the recorded nonzero exact value;
    ``witness_lt`` / ``witness_gt`` record a combination whose computed rank
    violates a claimed bound, matrix included for independent re-checking.
    """

    kind: str
    coeffs: tuple
    kappa: int | None = None
    positions: tuple[tuple[int, int], ...] | None = None
    minor_value: object | None = None
    rank_found: int | None = None
    matrix: StateMatrix | None = None


@dataclass(frozen=True)
class VerificationReport:
    mode: str
    samples_or_points: int
    verdict: str
    min_rank_observed: int | None = None
    max_rank_observed: int | None = None
    min_sigma_r: float | None = None
    tolerance: float | None = None
    seed: int | None = None
    witnesses: tuple[RankCertificate, ...] = ()
    params: dict | None = None


def _nonzero_indices(coeffs: Sequence) -> list[int]:
    idx = [i for i, c in enumerate(coeffs) if c != 0]
    if not idx:
        raise DomainError("coefficients must not all be zero")
    return idx


def structural_certificate(basis: SubspaceBasis, coeffs: Sequence) -> RankCertificate:
    """Exact rank >= r certificate for a diagonal-construction combination.

    Takes kappa as the largest diagonal label carrying a nonzero coefficient,
    collects r nonzero entries on that diagonal, and evaluates the r x r
    minor they head.  Everything above diagonal kappa vanishes, so the minor
    is triangular with those entries on its main diagonal, hence nonzero.
    """
    if basis.kind not in (KIND_MIN_RANK, KIND_FIXED_RANK):
        raise DomainError(f"structural certificates need a diagonal-construction basis, not kind {basis.kind!r}")
    per_matrix = basis.metadata.get("per_matrix")
    if not per_matrix or len(per_matrix) != basis.dimension:
        raise DomainError("basis lacks per-matrix diagonal metadata")
    if basis.field != RATIONAL:
        raise FieldMismatchError("structural certificates are exact; basis must be rational")
    if len(coeffs) != basis.dimension:
        raise DimensionError(f"{basis.dimension} basis matrices but {len(coeffs)} coefficients")
    r = basis.r
    cs = [Fraction(c) for c in coeffs]
    support = _nonzero_indices(cs)
    kappa = max(per_matrix[i]["k"] for i in support)
    combo = basis.combination(cs)
    diag = next(d for d in diagonals(basis.dA, basis.dB) if d.k == kappa)
    nonzero_cells = [(i, j) for (i, j) in diag.cells if combo.at(i, j) != 0]
    if len(nonzero_cells) < r:
        raise CertificateError(
            f"construction bug: diagonal k={kappa} holds {len(nonzero_cells)} nonzero entries, needs {r}"
        )
    chosen = nonzero_cells[:r]
    row_idx = tuple(i for i, _ in chosen)
    col_idx = tuple(j for _, j in chosen)
    value = minor_value(combo, row_idx, col_idx)
    if value == 0:
        raise CertificateError(f"construction bug: triangular minor at rows {row_idx} cols {col_idx} vanished")
    return RankCertificate(
        kind=CERT_STRUCTURAL,
        coeffs=tuple(cs),
        kappa=kappa,
        positions=tuple(chosen),
        minor_value=value,
    )


def _draw_coeffs(rng: np.random.Generator, dim: int) -> list[int]:
    coeffs = rng.integers(-SAMPLE_BOX, SAMPLE_BOX + 1, size=dim)
    while not coeffs.any():
        coeffs = rng.integers(-SAMPLE_BOX, SAMPLE_BOX + 1, size=dim)
    return [int(c) for c in coeffs]


def sample_verify_exact(
    basis: SubspaceBasis,
    r: int,
    n: int,
    seed: int,
    require: str = "geq",
) -> VerificationReport:
    """Exact ranks of n seeded integer combinations against a rank bound.

    ``require`` selects the property under test: every combination has rank
    >= r ("geq", the default), <= r ("leq") or == r ("eq").  Any violation
    refutes with a witness; absence of violations is reported as consistent,
    never as proof.
    """
    if n < 1:
        raise DomainError(f"need at least one sample, got {n}")
    if require not in ("geq", "leq", "eq"):
        raise DomainError(f"unknown requirement {require!r}")
    if basis.field != RATIONAL:
        raise FieldMismatchError("exact sampling needs a rational basis")
    rng = np.random.default_rng(seed)
    lo, hi = None, None
    witnesses: list[RankCertificate] = []
    for _ in range(n):
        coeffs = _draw_coeffs(rng, basis.dimension)
        combo = basis.combination(coeffs)
        rank = rank_exact(combo)
        lo = rank if lo is None else min(lo, rank)
        hi = rank if hi is None else max(hi, rank)
        bad_low = require in ("geq", "eq") and rank < r
        bad_high = require in ("leq", "eq") and rank > r
        if bad_low or bad_high:
            witnesses.append(
                RankCertificate(
                    kind=CERT_WITNESS_LT if bad_low else CERT_WITNESS_GT,
                    coeffs=tuple(coeffs),
                    rank_found=rank,
                    matrix=combo,
                )
            )
    return VerificationReport(
        mode="sample_exact",
        samples_or_points=n,
        verdict=VERDICT_REFUTED if witnesses else VERDICT_CONSISTENT,
        min_rank_observed=lo,
        max_rank_observed=hi,
        seed=seed,
        witnesses=tuple(witnesses),
        params={"r": r, "require": require, "box": SAMPLE_BOX},
    )


def gfp_exhaustive_min_rank(
    basis: SubspaceBasis,
    p: int,
    r: int | None = None,
    cap: int = GFP_ENUMERATION_CAP,
) -> VerificationReport:
    """Exact minimum rank of the reduction mod p over all projective points.

    Reduction mod p can only lower rank, so a minimum >= r is consistent
    evidence for the rational statement while a drop below r proves nothing
    about it; the verdict is "inconclusive" in that case, never "refuted".
    """
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    r = basis.r if r is None else r
    if r is None:
        raise DomainError("no rank threshold: basis carries none and r was not given")
    dim = basis.dimension
    points = (p**dim - 1) // (p - 1)
    if points > cap:
        raise DomainError(
            f"enumeration needs {points} projective points, above the cap of {cap}; "
            f"raise cap to at least {points} to run this"
        )
    if basis.field == COMPLEX:
        raise FieldMismatchError("GF(p) enumeration needs an exact integer basis")
    if basis.field != RATIONAL and basis.p != p:
        raise DomainError(f"basis lives over GF({basis.p}); re-reducing mod {p} is undefined")
    stack = np.empty((dim, basis.dA * basis.dB), dtype=np.int64)
    for i, m in enumerate(basis.matrices):
        for k, v in enumerate(m.entries):
            if basis.field == RATIONAL:
                if v.denominator != 1:
                    raise DomainError(f"basis entry {v} is not an integer; reduce mod {p} undefined")
                stack[i, k] = int(v) % p
            else:
                stack[i, k] = int(v) % p
    check = stack.copy()
    if _kernels.gfp_rank_inplace(check, p) != dim:
        raise DomainError(f"basis loses linear independence when reduced mod {p}")
    min_rank, argmin, count = _kernels.gfp_min_rank_scan(stack, p, basis.dA, basis.dB)
    if count != points:
        raise CertificateError(f"enumeration bug: visited {count} points, expected {points}")
    return VerificationReport(
        mode="gfp_exhaustive",
        samples_or_points=points,
        verdict=VERDICT_CONSISTENT if min_rank >= r else VERDICT_INCONCLUSIVE,
        min_rank_observed=int(min_rank),
        params={"p": p, "r": r, "argmin_coeffs": [int(c) for c in argmin]},
    )


def _complex_stack(basis: SubspaceBasis) -> np.ndarray:
    """Vectorized basis as columns of a complex matrix, unit Frobenius each."""
    cols = []
    for m in basis.matrices:
        v = np.asarray(m.to_lists(), dtype=np.complex128).reshape(-1)
        nrm = np.linalg.norm(v)
        if nrm == 0.0:
            raise DomainError("basis contains the zero matrix")
        cols.append(v / nrm)
    return np.column_stack(cols)


def minimize_sigma_r(
    basis: SubspaceBasis,
    r: int,
    restarts: int = 64,
    iters: int = 500,
    seed: int = 0,
    tol: float = SIGMA_TOL,
) -> tuple[np.ndarray, float, VerificationReport]:
    """Search for a combination whose r-th singular value (relatively) vanishes.

    Multi-restart alternating projection: truncate the current combination to
    rank r-1, refit coefficients by least squares, renormalize, repeat.  The
    objective sigma_r / sigma_1 is scale invariant.  A best value below
    ``tol`` is re-checked with a numeric rank computation before a witness is
    emitted; floors at least sqrt(tol) count as consistent, and anything in
    between is inconclusive, never refuted.
    """
    if r < 1:
        raise DomainError(f"need r >= 1, got {r}")
    if r > min(basis.dA, basis.dB):
        raise DomainError(f"r={r} exceeds min(dA, dB) = {min(basis.dA, basis.dB)}")
    if restarts < 1 or iters < 1:
        raise DomainError("need at least one restart and one iteration")
    A = _complex_stack(basis)
    P = np.linalg.pinv(A)
    rng = np.random.default_rng(seed)
    dim = basis.dimension
    best_val = np.inf
    best_x = None
    for _ in range(restarts):
        x0 = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        val, x = _kernels.sigma_descent(A, P, r, iters, x0, basis.dA, basis.dB)
        if val < best_val:
            best_val = val
            best_x = x
        if best_val < tol * 1e-3:
            break
    best_val = float(best_val)
    witnesses: tuple[RankCertificate, ...] = ()
    if best_val < tol:
        combo_vec = A @ best_x
        combo = StateMatrix.complex_(combo_vec.reshape(basis.dA, basis.dB).tolist())
        info = schmidt_rank_numeric(combo, tol=1e-6)
        if info.rank < r:
            witnesses = (
                RankCertificate(
                    kind=CERT_WITNESS_LT,
                    coeffs=tuple(complex(c) for c in best_x),
                    rank_found=info.rank,
                    matrix=combo,
                ),
            )
            verdict = VERDICT_REFUTED
        else:
            verdict = VERDICT_INCONCLUSIVE
    elif best_val >= math.sqrt(tol):
        verdict = VERDICT_CONSISTENT
    else:
        # Close enough to the tolerance that more restarts might cross it.
        verdict = VERDICT_INCONCLUSIVE
    report = VerificationReport(
        mode="sigma_min",
        samples_or_points=restarts,
        verdict=verdict,
        min_sigma_r=best_val,
        tolerance=tol,
        seed=seed,
        witnesses=witnesses,
        params={"r": r, "restarts": restarts, "iters": iters},
    )
    return best_x, best_val, report


@dataclass(frozen=True)
class PencilResult:
    """Roots x of det(a + x b) = 0, split by character.

    ``finite`` holds the values passing the residual check; ``infinite_count``
    counts directions where b alone is singular; ``identically_singular``
    flags a pencil whose determinant vanishes for every x.
    """

    finite: tuple[complex, ...]
    infinite_count: int
    identically_singular: bool
    residuals: tuple[float, ...]


def _relative_smallest_sv(m: np.ndarray) -> float:
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[0] == 0.0:
        return 0.0
    return float(sv[-1] / sv[0])


def pencil_low_rank(a, b, residual_tol: float = PENCIL_TOL) -> PencilResult:
    """Singular points of the pencil a + x b via the generalized eigenproblem.

    det(a + x b) is a polynomial of degree at most d, so unless it vanishes
    identically there is a root over the complex numbers; those roots are the
    generalized eigenvalues of (a, -b).  Homogeneous (alpha, beta) pairs
    classify each one: beta ~ 0 means an infinite root (b singular in that
    direction), both ~ 0 means the pencil is identically singular.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise DimensionError(f"need two square matrices of equal size, got {a.shape} and {b.shape}")
    if not (np.all(np.isfinite(a.view(np.float64))) and np.all(np.isfinite(b.view(np.float64)))):
        raise DomainError("pencil matrices must be finite")
    d = a.shape[0]
    # A degree-<=d polynomial vanishing at d+1 distinct points is zero, so
    # probing that many fixed points decides "every x is a root" up front.
    probes = [complex(0.31 + 0.17 * t, 0.41 - 0.05 * t) for t in range(d + 1)]
    if all(_relative_smallest_sv(a + x * b) < 1e-10 for x in probes):
        return PencilResult((), 0, True, ())
    alpha, beta = scipy.linalg.eig(a, -b, right=False, homogeneous_eigvals=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = alpha / beta
    finite: list[complex] = []
    residuals: list[float] = []
    infinite = 0
    for val in np.atleast_1d(w):
        if np.isinf(val):
            infinite += 1
        elif np.isnan(val):
            continue
        else:
            x = complex(val)
            res = _relative_smallest_sv(a + x * b)
            if res < residual_tol:
                finite.append(x)
                residuals.append(res)
    return PencilResult(tuple(finite), infinite, False, tuple(residuals))


# ---------------------------------------------------------------------------
# JSON encoding
# ---------------------------------------------------------------------------

def _encode_scalar(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (int, float)):
        return v
    return str(v)


def certificate_to_json_dict(c: RankCertificate) -> dict:
    return {
        "kind": c.kind,
        "coeffs": [_encode_scalar(v) for v in c.coeffs],
        "kappa": c.kappa,
        "positions": None if c.positions is None else [list(pos) for pos in c.positions],
        "minor_value": None if c.minor_value is None else _encode_scalar(c.minor_value),
        "rank_found": c.rank_found,
        "matrix": None if c.matrix is None else matrix_to_json_dict(c.matrix),
    }


def report_to_json_dict(rep: VerificationReport) -> dict:
    return {
        "mode": rep.mode,
        "samples_or_points": rep.samples_or_points,
        "verdict": rep.verdict,
        "min_rank_observed": rep.min_rank_observed,
        "max_rank_observed": rep.max_rank_observed,
        "min_sigma_r": rep.min_sigma_r,
        "tolerance": rep.tolerance,
        "seed": rep.seed,
        "witnesses": [certificate_to_json_dict(w) for w in rep.witnesses],
        "params": rep.params,
    }
