"""Degeneration paths, vanishing multiplicities, and the connection solve.

A one-parameter family of arrangements (rows over PathPoly) realizes a type
T away from finitely many parameter values and a more degenerate type T' at
t = 0.  For each newly dependent (ℓ+1)-subset J the multiplicity m_J is the
order of vanishing of the corresponding minor along the path.  The connection
matrix on the degenerate-locus side solves

    P(T) · Ω = (Σ_J m_J · Ω_general(J)) · P(T)

exactly over the weight field, with every residual row verified.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .aomoto_kita import ConnectionMatrix, omega_general
from .arrangement import (
    CombinatorialType,
    Realization,
    RealizationError,
    Weights,
    betanbc_frames,
    compute_type,
    stv_check,
)
from .exact import MultiPoly, RatFunc, _as_fraction, poly_exact_div, poly_gcd
from .linalg import fraction_free_echelon, mat_mul, solve_all
from .orlik_solomon import ProjectionMatrix, ResonantWeights, projection_matrix

COVER_CAVEAT = (
    "cover relation not verified: the tool checks dep(T) is a proper subset "
    "of dep(T') and that the path is valid, but not that no intermediate "
    "type exists"
)


class PathError(ValueError):
    """A degeneration path fails validation."""


class InconsistentSystem(RuntimeError):
    """The connection equation has no exact solution on the given data."""

    def __init__(self, row_label, message):
        self.row_label = row_label
        super().__init__(message)


def relative_dep(T: CombinatorialType, Tprime: CombinatorialType):
    """Newly dependent (ℓ+1)-subsets: dep(T') ∖ dep(T), requiring a strict
    inclusion dep(T) ⊊ dep(T')."""
    if (T.n, T.ell) != (Tprime.n, Tprime.ell):
        raise ValueError(
            f"types do not share (n, ell): ({T.n},{T.ell}) vs ({Tprime.n},{Tprime.ell})"
        )
    if not (T.dep < Tprime.dep):
        raise ValueError(
            "not a degeneration: dep of the first type must be a proper "
            "subset of dep of the second"
        )
    return tuple(sorted(Tprime.dep - T.dep))


class DegenerationPath:
    """A validated one-parameter family connecting T (at the witness) to the
    degenerate type T' (at t = 0).

    Declared types, when supplied, are checked against the recomputed ones;
    mismatches are reported with the offending subsets.
    """

    __slots__ = ("realization", "t_witness", "T", "Tprime")

    def __init__(
        self,
        realization: Realization,
        t_witness,
        declared_T: CombinatorialType | None = None,
        declared_Tprime: CombinatorialType | None = None,
    ):
        if not realization.is_path:
            raise PathError("realization has no parameter: not a path")
        t_star = _as_fraction(t_witness)
        if not t_star:
            raise PathError("witness parameter value must be nonzero")
        try:
            at_witness = realization.specialize(t_star)
        except RealizationError as e:
            raise PathError(f"path is degenerate at the witness t = {t_star}: {e}") from e
        T = compute_type(at_witness)
        at_zero = realization.specialize(0, allow_coincident=True)
        Tprime = compute_type(at_zero)
        if declared_T is not None and declared_T != T:
            raise PathError(_declared_mismatch("T at the witness", declared_T, T))
        if declared_Tprime is not None and declared_Tprime != Tprime:
            raise PathError(_declared_mismatch("T' at t = 0", declared_Tprime, Tprime))
        if not (T.dep < Tprime.dep):
            raise PathError(
                "not a degeneration: the type at t = 0 must be strictly more "
                "dependent than the type at the witness"
            )
        self.realization = realization
        self.t_witness = t_star
        self.T = T
        self.Tprime = Tprime


def _declared_mismatch(what, declared, computed) -> str:
    missing = sorted(declared.dep - computed.dep)
    extra = sorted(computed.dep - declared.dep)
    parts = [f"declared type for {what} does not match the path"]
    if missing:
        parts.append(f"declared-but-absent: {missing}")
    if extra:
        parts.append(f"present-but-undeclared: {extra}")
    return "; ".join(parts)


@dataclass(frozen=True)
class MultiplicityTable:
    """Vanishing orders m_J for J in dep(T',T), with the standing caveat."""

    items: tuple[tuple[tuple[int, ...], int], ...]
    caveat: str = COVER_CAVEAT

    def mapping(self) -> dict[tuple[int, ...], int]:
        return dict(self.items)


def multiplicities(p: DegenerationPath) -> MultiplicityTable:
    """m_J = order of vanishing at t = 0 of the J-minor along the path.

    The endpoint types are recomputed from the rows rather than trusted, so
    a path object whose stored types were tampered with is rejected here;
    the per-minor checks run first so a claimed newly-dependent subset whose
    minor never vanishes, or never varies, gets the specific diagnostic.
    """
    rel = relative_dep(p.T, p.Tprime)
    items = []
    for J in rel:
        poly = p.realization.minor(J)
        order = poly.ord_t()
        if order is None:
            raise PathError(
                f"minor for {J} vanishes identically along the path; the "
                "subset is degenerate for every parameter value"
            )
        if order < 1:
            raise PathError(
                f"minor for {J} does not vanish at t = 0; the path does not "
                "realize the degenerate type"
            )
        items.append((J, order))
    t_w = compute_type(p.realization.specialize(p.t_witness))
    t_0 = compute_type(p.realization.specialize(0, allow_coincident=True))
    if t_w != p.T or t_0 != p.Tprime:
        raise PathError(
            "stored endpoint types do not match a recomputation from the rows"
        )
    return MultiplicityTable(items=tuple(items))


def combined_omega(
    T: CombinatorialType,
    Tprime: CombinatorialType,
    mult: MultiplicityTable | Mapping[tuple[int, ...], int],
    n: int,
    ell: int,
    w: Weights | None = None,
    jobs: int = 1,
) -> ConnectionMatrix:
    """Σ_J m_J · omega_general(J) over the general-position basis.

    With jobs > 1 the per-J matrices are computed on a thread pool; the
    weighted sum is always taken in sorted-J order, so the result (and any
    rendering of it) is identical for every jobs value.
    """
    if (T.n, T.ell) != (n, ell) or (Tprime.n, Tprime.ell) != (n, ell):
        raise ValueError("types disagree with the supplied n, ell")
    if not T.dep <= Tprime.dep:
        raise ValueError(
            "not a degeneration: dep of the first type must be contained in "
            "dep of the second"
        )
    table = mult.mapping() if isinstance(mult, MultiplicityTable) else dict(mult)
    expected = set(Tprime.dep - T.dep)
    if set(table) != expected:
        missing = sorted(expected - set(table))
        extra = sorted(set(table) - expected)
        raise ValueError(
            f"multiplicity keys do not match dep(T',T); missing {missing}, "
            f"unexpected {extra}"
        )
    if w is None:
        w = Weights.generic(n)
    zero = w.zero_scalar()
    basis = tuple(itertools.combinations(range(2, n + 1), ell))
    acc = [[zero for _ in basis] for _ in basis]
    order = sorted(table)
    for J in order:
        m = table[J]
        if not (isinstance(m, int) and m >= 1):
            raise ValueError(f"multiplicity for {J} must be a positive integer")
    if jobs > 1 and len(order) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            mats = list(pool.map(lambda J: omega_general(J, n, ell, w), order))
    else:
        mats = [omega_general(J, n, ell, w) for J in order]
    for J, M in zip(order, mats):
        m = table[J]
        for i in range(len(basis)):
            row = M.entries[i]
            for j in range(len(basis)):
                if row[j]:
                    acc[i][j] = acc[i][j] + m * row[j]
    return ConnectionMatrix(basis=basis, entries=tuple(tuple(r) for r in acc))


def _clear_denominators(entries):
    """Turn a field matrix into a domain matrix by one global denominator.

    Returns (domain_rows, kind) where kind is 'poly' or 'rational'.
    """
    nvars = None
    for row in entries:
        for e in row:
            if isinstance(e, RatFunc):
                nvars = e.num.nvars
            elif isinstance(e, MultiPoly):
                nvars = e.nvars
            elif not isinstance(e, (Fraction, int)):
                raise TypeError(f"unsupported matrix entry type {type(e).__name__}")
    if nvars is None:
        return [[_as_fraction(e) for e in row] for row in entries], "rational"
    # promote everything to RatFunc to read off numerators and denominators
    lifted = []
    for row in entries:
        out = []
        for e in row:
            if isinstance(e, RatFunc):
                out.append(e)
            elif isinstance(e, MultiPoly):
                out.append(RatFunc(e))
            else:
                out.append(RatFunc(MultiPoly.const(nvars, _as_fraction(e))))
        lifted.append(out)
    common = MultiPoly.const(nvars, 1)
    for row in lifted:
        for e in row:
            den = e.den
            if den.is_const():
                continue
            g = poly_gcd(common, den)
            common = poly_exact_div(common * den, g)
    cleared = [
        [e.num * poly_exact_div(common, e.den) for e in row] for row in lifted
    ]
    return cleared, "poly"


def solve_connection(P: ProjectionMatrix, B: ConnectionMatrix) -> ConnectionMatrix:
    """Solve P·Ω = B·P for Ω exactly and verify every row of the system.

    Rows of P are selected greedily in order until an invertible square
    block is found (fraction-free rank tests, deterministic); the remaining
    rows are then checked against the solved Ω and any exact mismatch is
    reported as an inconsistency.
    """
    if P.row_basis != B.basis:
        raise ValueError("projection rows and connection basis disagree")
    k = len(P.col_basis)
    if k == 0:
        return ConnectionMatrix(basis=(), entries=())
    domain_p, _ = _clear_denominators(P.entries)
    rhs_full = mat_mul(B.entries, domain_p)

    kept: list[int] = []
    kept_rows: list[list] = []
    current_rank = 0
    for i, row in enumerate(domain_p):
        trial = kept_rows + [list(row)]
        r = fraction_free_echelon(trial).rank
        if r > current_rank:
            kept.append(i)
            kept_rows.append(list(row))
            current_rank = r
        if current_rank == k:
            break
    if current_rank < k:
        raise InconsistentSystem(
            None,
            f"projection matrix has column rank {current_rank} < {k}; "
            "cannot determine a connection matrix",
        )
    square = [domain_p[i] for i in kept]
    rhs = [rhs_full[i] for i in kept]
    res = solve_all(square, rhs)
    omega = tuple(
        tuple(res.solution[i][j] for j in range(k)) for i in range(k)
    )
    # verify every row of the original field-level equation
    lhs_all = mat_mul(P.entries, [list(row) for row in omega])
    rhs_all = mat_mul(B.entries, [list(row) for row in P.entries])
    for i, label in enumerate(P.row_basis):
        for j in range(k):
            if not (lhs_all[i][j] == rhs_all[i][j]):
                raise InconsistentSystem(
                    label,
                    f"connection equation fails on the row for {label}: "
                    "resonant weights, an invalid path, or inconsistent bases",
                )
    return ConnectionMatrix(basis=P.col_basis, entries=omega)


def connection_for_path(
    p: DegenerationPath, w: Weights | None = None, jobs: int = 1
) -> tuple[ConnectionMatrix, MultiplicityTable]:
    """End-to-end: multiplicities, combined general matrix, projection, solve."""
    if w is None:
        w = Weights.generic(p.T.n)
    mult = multiplicities(p)
    B = combined_omega(p.T, p.Tprime, mult, p.T.n, p.T.ell, w, jobs=jobs)
    P = projection_matrix(p.T, w)
    return solve_connection(P, B), mult


# ---------------------------------------------------------------------------
# codimension-one closed forms
# ---------------------------------------------------------------------------


def normalize_codim1_type(T: CombinatorialType):
    """Relabel hyperplanes so the unique dependent subset sits in standard
    position: [1..ℓ+1] when the subset avoids n+1, else [n−ℓ+1..n+1].

    Returns (normalized type, mapping old index → new index on [n]); the
    infinity index n+1 is never moved.  Frame labels produced for the
    normalized type refer to the new indices.
    """
    if len(T.dep) != 1:
        raise ValueError(f"type has {len(T.dep)} dependent subsets; need exactly 1")
    (K,) = T.dep
    n, ell = T.n, T.ell
    finite = [x for x in K if x <= n]
    if n + 1 in K:
        targets = list(range(n - ell + 1, n + 1))
    else:
        targets = list(range(1, ell + 2))
    perm: dict[int, int] = {}
    for old, new in zip(finite, targets):
        perm[old] = new
    others = [x for x in range(1, n + 1) if x not in perm]
    slots = [x for x in range(1, n + 1) if x not in set(targets)]
    for old, new in zip(others, slots):
        perm[old] = new
    new_K = tuple(sorted(perm.get(x, x) for x in K))
    return CombinatorialType(n, ell, [new_K]), perm


def codim1_projection_closed_form(
    T: CombinatorialType, w: Weights | None = None
) -> ProjectionMatrix:
    """Projection matrix of a type with exactly one dependent subset, by the
    known closed form (no linear solve).

    The dependent subset must be in standard position ([1..ℓ+1] or
    [n−ℓ+1..n+1]); use normalize_codim1_type to relabel first.  Frame bases
    are order-sensitive, so results for a relabeled type are expressed in
    the new labels and are not mapped back.
    """
    if len(T.dep) != 1:
        raise ValueError(f"type has {len(T.dep)} dependent subsets; need exactly 1")
    (K,) = T.dep
    n, ell = T.n, T.ell
    if w is None:
        w = Weights.generic(n)
    elif w.n != n:
        raise ValueError(f"weights are for n={w.n}, type has n={T.n}")
    if not w.is_generic:
        report = stv_check(T, w)
        if not report.ok:
            raise ResonantWeights(report)
    sources = tuple(itertools.combinations(range(2, n + 1), ell))
    cols = betanbc_frames(T)
    zero = w.zero_scalar()
    one = w.one_scalar()

    if n + 1 in K:
        expected = tuple(range(n - ell + 1, n + 2))
        if K != expected:
            raise ValueError(
                f"dependent subset {K} is not in standard position {expected}; "
                "apply normalize_codim1_type first"
            )
        L = K[:-1]
        if cols != tuple(S for S in sources if S != L):
            raise RuntimeError(
                "betanbc frames disagree with the closed form's basis"
            )
        col_index = {S: i for i, S in enumerate(cols)}
        entries = []
        for I in sources:
            row = [zero] * len(cols)
            if I != L:
                row[col_index[I]] = one
            entries.append(tuple(row))
        return ProjectionMatrix(row_basis=sources, col_basis=cols, entries=tuple(entries))

    expected = tuple(range(1, ell + 2))
    if K != expected:
        raise ValueError(
            f"dependent subset {K} is not in standard position {expected}; "
            "apply normalize_codim1_type first"
        )
    F = tuple(range(2, ell + 2))
    if cols != tuple(S for S in sources if S != F):
        raise RuntimeError("betanbc frames disagree with the closed form's basis")
    col_index = {S: i for i, S in enumerate(cols)}
    lam_K = w.weight_sum(K)
    entries = []
    for I in sources:
        row = [zero] * len(cols)
        if I != F:
            row[col_index[I]] = one
        else:
            for j in range(2, ell + 2):
                lam_j = w.weight(j)
                sign = -1 if (j + ell) % 2 else 1
                for q in range(ell + 2, n + 1):
                    target = tuple(x for x in F if x != j) + (q,)
                    if w.is_generic:
                        value = RatFunc(sign * lam_j, lam_K)
                    else:
                        value = Fraction(sign) * lam_j / lam_K
                    row[col_index[target]] = value
        entries.append(tuple(row))
    return ProjectionMatrix(row_basis=sources, col_basis=cols, entries=tuple(entries))
