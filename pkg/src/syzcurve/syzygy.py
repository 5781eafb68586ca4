"""Graded syzygies of the Jacobian ideal of a reduced plane curve.

For a curve f = 0 of degree d the module of interest is the kernel of
(a, b, c) -> a*f_x + b*f_y + c*f_z on triples of homogeneous forms.  The
engine computes, degree by degree, the minimal generator degrees
(exponents), canonical generator representatives, the degrees of the
minimal first relations among the generators, the shifts eps_j those
relations carry, and the regularity.  Everything is finite-dimensional
linear algebra; no Groebner machinery is involved.

In the default "prime" field mode ranks are discovered over GF(p) and
then confirmed rationally at every degree that contributes a generator
or a relation: the confirmed kernel basis is exact, each generator is
verified against the defining identity with exact arithmetic, and the
counting argument (prime nullity >= exact nullity >= exact span >= prime
span) makes the no-new-generator verdict at the remaining degrees exact
as well whenever the prime and exact span dimensions agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, InternalConsistencyError
from .linalg import (PRIME, echelon_insert, forward_eliminate_mod,
                     kernel_from_int_rref, primitive_int_vector, rank_mod,
                     rref_int_rows, to_mod_array)
from .poly import (HomogeneousPoly, dim_S, jacobian, monomial_basis,
                   parse_poly, primitive_integer_poly, vector_to_poly)


@dataclass
class SyzygyVector:
    """A triple (a, b, c) with a*f_x + b*f_y + c*f_z = 0, all of one degree."""

    a: HomogeneousPoly
    b: HomogeneousPoly
    c: HomogeneousPoly
    degree: int

    @classmethod
    def checked(cls, a, b, c, partials):
        fx, fy, fz = partials
        if not (a.is_zero() and b.is_zero() and c.is_zero()):
            combo = a * fx + b * fy + c * fz
            if not combo.is_zero():
                raise InternalConsistencyError(
                    "candidate triple is not a syzygy of the curve")
        degree = max(a.degree, b.degree, c.degree)
        return cls(a, b, c, degree)

    def components(self):
        return (self.a, self.b, self.c)


@dataclass
class Relation:
    """A minimal first relation sum_j h_j * r_j = 0 among the generators."""

    degree: int
    multipliers: list


@dataclass
class SyzygySummary:
    d: int
    m: int
    exponents: list
    generators: list
    relation_degrees: list = field(default_factory=list)
    epsilons: list = field(default_factory=list)
    regularity: int = None
    is_free: bool = False


@dataclass
class SecondSyzygyDegreeTable:
    """Degrees of the possible multiplier entries in the first relations:
    entry (i, j) carries d_m - d_j + eps_i and is present when that value
    allows a nonzero homogeneous multiplier."""

    shape: tuple
    degrees: dict
    bound_checks: list


class _Generator:
    __slots__ = ("degree", "vec", "syz")

    def __init__(self, degree, vec, syz):
        self.degree = degree
        self.vec = vec
        self.syz = syz


class CurveContext:
    """Per-curve caches: integer partials, graded ranks, pivot data."""

    def __init__(self, f, mode="prime"):
        if isinstance(f, str):
            f = parse_poly(f)
        f = primitive_integer_poly(f)
        if f.is_zero() or f.degree < 3:
            raise InputError("need a homogeneous curve of degree >= 3")
        if mode not in ("prime", "rational"):
            raise InputError(f"unknown field mode {mode!r}")
        self.f = f
        self.d = f.degree
        self.mode = mode
        self.partials = jacobian(f)
        self._rank = {}
        self._pivot_cols = {}
        self.stats = {"exact_kernel_fallbacks": 0}
        self._check_not_cone()

    # -- degenerate-input gate -----------------------------------------

    def _check_not_cone(self):
        rows = []
        basis = monomial_basis(self.d - 1)
        for g in self.partials:
            row = [0] * len(basis)
            for e, c in g.terms.items():
                row[basis.index[e]] = int(c)
            rows.append(row)
        _, piv = rref_int_rows(rows, len(basis))
        if len(piv) < 3:
            raise InputError(
                "partial derivatives are linearly dependent; "
                "the curve is a cone and outside the supported class")

    # -- Jacobian multiplication rows ------------------------------------

    def _jac_rows_np(self, k):
        """Rows mu*g over GF(p): shape (3*dim S_{k-d+1}, dim S_k)."""
        src = monomial_basis(k - self.d + 1)
        dst = monomial_basis(k)
        a = np.zeros((3 * len(src), len(dst)), dtype=np.int64)
        row_idx = np.arange(len(src))
        for blk, g in enumerate(self.partials):
            base = blk * len(src)
            for e, c in g.terms.items():
                cols = np.fromiter(
                    (dst.index[(e[0] + m[0], e[1] + m[1], e[2] + m[2])]
                     for m in src.triples), dtype=np.int64, count=len(src))
                a[base + row_idx, cols] = int(c) % PRIME
        return a

    def _jac_rows_int(self, k):
        src = monomial_basis(k - self.d + 1)
        dst = monomial_basis(k)
        rows = []
        for g in self.partials:
            for m in src.triples:
                row = [0] * len(dst)
                for e, c in g.terms.items():
                    row[dst.index[(e[0] + m[0], e[1] + m[1], e[2] + m[2])]] = int(c)
                rows.append(row)
        return rows

    # -- graded ranks ---------------------------------------------------

    def rank_data(self, k):
        """(rank, pivot_cols) of the degree-k multiplication rows.

        pivot_cols index monomials of S_k and name an independent row
        subset of the degree-(k-d+1) syzygy matrix.
        """
        if k < self.d - 1:
            return 0, []
        if k not in self._rank:
            if self.mode == "prime":
                ech = forward_eliminate_mod(self._jac_rows_np(k))
                self._rank[k] = ech.rank
                self._pivot_cols[k] = list(ech.pivot_cols)
            else:
                red, piv = rref_int_rows(self._jac_rows_int(k), dim_S(k))
                self._rank[k] = len(piv)
                self._pivot_cols[k] = piv
        return self._rank[k], self._pivot_cols[k]

    def override_rank(self, k, rank):
        self._rank[k] = rank

    def nullity(self, j):
        """dim of the degree-j piece of the syzygy module."""
        if j < 0:
            return 0
        rank, _ = self.rank_data(j + self.d - 1)
        return 3 * dim_S(j) - rank

    # -- syzygy matrices --------------------------------------------------

    def syz_matrix_int(self, j, row_monomials=None):
        """Exact syzygy matrix at degree j, optionally restricted to the
        given rows (monomial indices of S_{j+d-1})."""
        dst = monomial_basis(j + self.d - 1)
        src = monomial_basis(j)
        if row_monomials is None:
            row_monomials = range(len(dst))
        sel = {mi: i for i, mi in enumerate(row_monomials)}
        mat = [[0] * (3 * len(src)) for _ in sel]
        for blk, g in enumerate(self.partials):
            for cj, m in enumerate(src.triples):
                col = blk * len(src) + cj
                for e, c in g.terms.items():
                    t = dst.index[(e[0] + m[0], e[1] + m[1], e[2] + m[2])]
                    if t in sel:
                        mat[sel[t]][col] = int(c)
        return mat

    def vec_to_syzygy(self, vec, j):
        n = dim_S(j)
        a = vector_to_poly(vec[:n], j)
        b = vector_to_poly(vec[n:2 * n], j)
        c = vector_to_poly(vec[2 * n:], j)
        return SyzygyVector.checked(a, b, c, self.partials)


# ----------------------------------------------------------------------
# generator scan
# ----------------------------------------------------------------------

def _gen_multiple_rows_int(gens, k):
    """Monomial multiples of the generators, as vectors in (S_k)^3."""
    kb = monomial_basis(k)
    n = len(kb)
    rows = []
    for g in gens:
        if g.degree > k:
            continue
        for m in monomial_basis(k - g.degree).triples:
            row = [0] * (3 * n)
            for blk, p in enumerate(g.syz.components()):
                for e, c in p.terms.items():
                    row[blk * n + kb.index[(e[0] + m[0], e[1] + m[1], e[2] + m[2])]] = int(c)
            rows.append(row)
    return rows


def _span_rank(ctx, gens, k):
    rows = _gen_multiple_rows_int(gens, k)
    if not rows:
        return 0
    if ctx.mode == "prime":
        return rank_mod(to_mod_array(rows, 3 * dim_S(k)))
    _, piv = rref_int_rows(rows, 3 * dim_S(k))
    return len(piv)


def _exact_kernel_at(ctx, j):
    """Exact canonical kernel basis at syzygy degree j.

    Uses the independent-row subset discovered during rank computation to
    shrink the system, then verifies every kernel vector against the full
    defining identity; a verification failure (possible only when the
    prime-field rank undershot) falls back to a full exact elimination.
    """
    k = j + ctx.d - 1
    _, piv_cols = ctx.rank_data(k)
    ncols = 3 * dim_S(j)
    restricted = ctx.syz_matrix_int(j, piv_cols)
    red, piv = rref_int_rows(restricted, ncols)
    if len(piv) != len(restricted):
        raise InternalConsistencyError(
            "independent row subset collapsed during exact elimination")
    kernel = kernel_from_int_rref(red, piv, ncols)
    syzygies = []
    ok = True
    for vec in kernel:
        try:
            syzygies.append(ctx.vec_to_syzygy(vec, j))
        except InternalConsistencyError:
            ok = False
            break
    if not ok:
        ctx.stats["exact_kernel_fallbacks"] += 1
        full = ctx.syz_matrix_int(j)
        red, piv = rref_int_rows(full, ncols)
        kernel = kernel_from_int_rref(red, piv, ncols)
        syzygies = [ctx.vec_to_syzygy(vec, j) for vec in kernel]
        ctx.override_rank(k, 3 * dim_S(j) - len(kernel))
    return kernel, syzygies


def compute_generators(ctx, scan_limit=None):
    """Scan degrees for new minimal generators (graded Nakayama counting)."""
    d = ctx.d
    kmax = scan_limit if scan_limit is not None else max(2 * d - 4, d - 1)
    gens = []
    for k in range(1, kmax + 1):
        nu = ctx.nullity(k)
        if nu == 0:
            continue
        span = _span_rank(ctx, gens, k)
        if nu < span:
            raise InternalConsistencyError(
                f"span dimension exceeds kernel dimension at degree {k}")
        if nu == span:
            continue
        # candidate degree: settle it exactly
        kernel, syzygies = _exact_kernel_at(ctx, k)
        span_rows = _gen_multiple_rows_int(gens, k)
        ech, piv = rref_int_rows(span_rows, 3 * dim_S(k)) if span_rows else ([], [])
        new_needed = len(kernel) - len(piv)
        if new_needed < 0:
            raise InternalConsistencyError(
                f"exact span exceeds exact kernel at degree {k}")
        for vec, syz in zip(kernel, syzygies):
            if new_needed == 0:
                break
            if echelon_insert(ech, piv, vec):
                gens.append(_Generator(k, primitive_int_vector(vec), syz))
                new_needed -= 1
        if new_needed:
            raise InternalConsistencyError(
                f"could not complete the generator complement at degree {k}")
    if len(gens) < 2:
        raise InternalConsistencyError(
            f"found only {len(gens)} generators up to degree {kmax}")
    exponents = [g.degree for g in gens]
    is_free = len(gens) == 2
    if is_free and exponents[0] + exponents[1] != d - 1:
        raise InternalConsistencyError(
            "two generators found but their degrees do not split d-1; "
            "input may be non-reduced or a generator was missed")
    return SyzygySummary(
        d=d, m=len(gens), exponents=exponents,
        generators=[g.syz for g in gens], is_free=is_free), gens


# ----------------------------------------------------------------------
# relation scan
# ----------------------------------------------------------------------

def _relation_matrix_int(ctx, gens, rho):
    """Columns: monomial multiples per generator; rows: (S_rho)^3."""
    kb = monomial_basis(rho)
    n = len(kb)
    cols = []
    for g in gens:
        if rho - g.degree < 0:
            cols.append(0)
            continue
        cols.append(dim_S(rho - g.degree))
    total = sum(cols)
    mat = [[0] * total for _ in range(3 * n)]
    col = 0
    for g in gens:
        if rho - g.degree < 0:
            continue
        for m in monomial_basis(rho - g.degree).triples:
            for blk, p in enumerate(g.syz.components()):
                for e, c in p.terms.items():
                    mat[blk * n + kb.index[(e[0] + m[0], e[1] + m[1], e[2] + m[2])]][col] = int(c)
            col += 1
    return mat, cols, total


def _relation_multiple_rows_int(gens, rels, rho, block_dims):
    """Monomial multiples of the known relations inside the degree-rho
    coefficient space (concatenated blocks, one per generator)."""
    offsets = []
    off = 0
    for nd in block_dims:
        offsets.append(off)
        off += nd
    rows = []
    for rel in rels:
        if rel.degree > rho:
            continue
        for m in monomial_basis(rho - rel.degree).triples:
            row = [0] * off
            for jg, (g, h) in enumerate(zip(gens, rel.multipliers)):
                if h.is_zero():
                    continue
                tb = monomial_basis(rho - g.degree)
                for e, c in (h.monomial_times(m)).terms.items():
                    row[offsets[jg] + tb.index[e]] = int(c)
            rows.append(row)
    return rows


def _vec_to_multipliers(vec, gens, rho, block_dims):
    mult = []
    off = 0
    for g, nd in zip(gens, block_dims):
        if nd == 0:
            mult.append(HomogeneousPoly.zero(max(rho - g.degree, 0)))
            continue
        mult.append(vector_to_poly(vec[off:off + nd], rho - g.degree))
        off += nd
    return mult


def _verify_relation(gens, multipliers):
    sa = sb = sc = None
    for g, h in zip(gens, multipliers):
        if h.is_zero():
            continue
        a, b, c = g.syz.components()
        ta, tb, tc = h * a, h * b, h * c
        sa = ta if sa is None else sa + ta
        sb = tb if sb is None else sb + tb
        sc = tc if sc is None else sc + tc
    return (sa is None or sa.is_zero()) and (sb is None or sb.is_zero()) \
        and (sc is None or sc.is_zero())


def compute_relations(ctx, summary, gens, scan_limit=None):
    """Find the m-2 minimal first relations and derive the eps shifts.

    The scan cap follows from the resolution shape: the shifts are
    positive and their sum is d_1 + d_2 - (d - 1), so no minimal relation
    can sit above d_m + sum - (m - 3).
    """
    d = ctx.d
    exps = summary.exponents
    m = summary.m
    sum_eps = exps[0] + exps[1] - (d - 1)
    if sum_eps < m - 2:
        raise InternalConsistencyError(
            f"exponent data admits no positive shifts: sum {sum_eps}, need {m - 2}")
    bound = scan_limit if scan_limit is not None \
        else exps[-1] + sum_eps - (m - 3)
    rels = []
    for rho in range(exps[0] + 1, bound + 1):
        mat, block_dims, total = _relation_matrix_int(ctx, gens, rho)
        if total == 0:
            continue
        if ctx.mode == "prime":
            rank = rank_mod(to_mod_array(mat, total))
        else:
            _, piv = rref_int_rows(mat, total)
            rank = len(piv)
        dim_k = total - rank
        span_rows = _relation_multiple_rows_int(gens, rels, rho, block_dims)
        if ctx.mode == "prime":
            span = rank_mod(to_mod_array(span_rows, total)) if span_rows else 0
        else:
            span = len(rref_int_rows(span_rows, total)[1]) if span_rows else 0
        if dim_k < span:
            raise InternalConsistencyError(
                f"relation span exceeds relation space at degree {rho}")
        if dim_k == span:
            continue
        # settle exactly
        red, piv = rref_int_rows(mat, total)
        kernel = kernel_from_int_rref(red, piv, total)
        ech, epiv = (rref_int_rows(span_rows, total)
                     if span_rows else ([], []))
        new_needed = len(kernel) - len(epiv)
        if new_needed < 0:
            raise InternalConsistencyError(
                f"exact relation span exceeds kernel at degree {rho}")
        for vec in kernel:
            if new_needed == 0:
                break
            if echelon_insert(ech, epiv, vec):
                mult = _vec_to_multipliers(vec, gens, rho, block_dims)
                if not _verify_relation(gens, mult):
                    raise InternalConsistencyError(
                        f"candidate relation at degree {rho} fails exact check")
                rels.append(Relation(rho, mult))
                new_needed -= 1
        if new_needed:
            raise InternalConsistencyError(
                f"could not complete the relation complement at degree {rho}")
    if len(rels) != m - 2:
        raise InternalConsistencyError(
            f"found {len(rels)} minimal relations, expected {m - 2}; "
            "input may be non-reduced or a scan bound is violated")
    rel_degrees = [r.degree for r in rels]
    epsilons = [rel_degrees[i] - exps[i + 2] for i in range(m - 2)]
    if any(e < 1 for e in epsilons):
        raise InternalConsistencyError(
            f"non-positive shift in {epsilons}; resolution shape violated")
    summary.relation_degrees = rel_degrees
    summary.epsilons = epsilons
    summary.regularity = exps[-1] + epsilons[-1] - 1
    return summary, rels


# ----------------------------------------------------------------------
# public operations
# ----------------------------------------------------------------------

def d0_dimension(f, k, mode="prime"):
    """Dimension of the degree-k graded piece of the syzygy module."""
    ctx = f if isinstance(f, CurveContext) else CurveContext(f, mode)
    return ctx.nullity(k)


def exponents(f, mode="prime", scan_limit=None):
    """Minimal generator degrees and canonical generators."""
    ctx = f if isinstance(f, CurveContext) else CurveContext(f, mode)
    summary, gens = compute_generators(ctx, scan_limit)
    if not summary.is_free:
        compute_relations(ctx, summary, gens, scan_limit=None)
    return summary


def expected_nullity(summary, j):
    """Degree-j dimension predicted by the resolution shape."""
    val = sum(dim_S(j - dj) for dj in summary.exponents)
    if not summary.is_free:
        val -= sum(dim_S(j - rho) for rho in summary.relation_degrees)
    return val


def second_syzygy_degree_table(summary: SyzygySummary) -> SecondSyzygyDegreeTable:
    """Degrees of the multiplier entries in the minimal first relations."""
    if summary.is_free:
        raise ValueError("free module: there are no first relations")
    exps = summary.exponents
    m, d = summary.m, summary.d
    dm = exps[-1]
    degrees = {}
    for i, eps in enumerate(summary.epsilons, start=1):
        for j, dj in enumerate(exps, start=1):
            deg = dm - dj + eps
            if deg >= 1:
                degrees[(i, j)] = deg
    checks = []
    t = exps[0] + exps[1] + 1 - d
    if t == 3 and m == 3:
        d11 = degrees.get((1, 1))
        d12 = degrees.get((1, 2))
        d13 = degrees.get((1, 3))
        checks.append(("multiplier_degree_1_1_bound", f"<= {d - 1}", d11,
                       d11 is not None and d11 <= d - 1))
        checks.append(("multiplier_degree_1_2_bound", f"<= {d}/2 + 1", d12,
                       d12 is not None and 2 * d12 <= d + 2))
        checks.append(("multiplier_degree_1_3_value", 3, d13, d13 == 3))
    return SecondSyzygyDegreeTable((m - 2, m), degrees, checks)
