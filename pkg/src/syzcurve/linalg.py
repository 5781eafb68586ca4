"""Dense exact linear algebra over the rationals, with a prime-field fast path.

Two layers live here.  The exact layer works on arbitrary-precision
rationals; elimination is fraction-free on integer rows with content
normalization after every row update, so intermediate entries stay the
size of minors instead of exploding.  The prime layer is a vectorized
row reduction over GF(p) with p = 2**31 - 1; ranks computed there can
only drop relative to the rational rank, never rise, which is what makes
it usable as a discovery pass that exact computations later confirm.

Pivot selection is deterministic everywhere (leftmost nonzero column,
then topmost row) so reduced forms and kernel bases are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

PRIME = 2147483647  # 2**31 - 1, largest prime with products of residues in int64


# ----------------------------------------------------------------------
# exact layer
# ----------------------------------------------------------------------

@dataclass
class Matrix:
    """Dense matrix with rational entries, row-major."""

    rows: int
    cols: int
    entries: list

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry grid does not match declared shape")

    @classmethod
    def from_rows(cls, rows_data, cols=None):
        rows_data = [[Fraction(x) for x in row] for row in rows_data]
        if cols is None:
            if not rows_data:
                raise ValueError("cannot infer column count of an empty matrix")
            cols = len(rows_data[0])
        return cls(len(rows_data), cols, rows_data)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    def transpose(self):
        return Matrix(self.cols, self.rows,
                      [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)


@dataclass
class RrefResult:
    reduced: Matrix
    rank: int
    pivot_columns: list


def _row_content(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, abs(x))
            if g == 1:
                return 1
    return g if g else 1


def _normalize_int_row(row):
    """Divide by the content; make the leading nonzero entry positive."""
    g = _row_content(row)
    lead = next((x for x in row if x), 0)
    if lead < 0:
        g = -g
    if g != 1:
        row = [x // g for x in row]
    return row


def rref_int_rows(rows, ncols):
    """Reduced echelon form of integer rows, kept fraction-free.

    Returns (reduced_rows, pivot_cols).  Reduced rows are primitive integer
    vectors with positive pivot entries and zeros above and below every
    pivot; dividing each by its pivot value gives the unit-pivot RREF.
    """
    work = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        src = next((i for i in range(r, len(work)) if work[i][c]), None)
        if src is None:
            continue
        if src != r:
            work[r], work[src] = work[src], work[r]
        piv_row = work[r]
        piv = piv_row[c]
        for t in range(len(work)):
            if t == r or not work[t][c]:
                continue
            a = work[t][c]
            work[t] = _normalize_int_row([piv * x - a * y for x, y in zip(work[t], piv_row)])
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    reduced = [w for w in work[:r]]
    reduced = [_normalize_int_row(w) for w in reduced]
    return reduced, pivots


def _rows_to_int(rows):
    """Scale rational rows to primitive integer rows."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            f = Fraction(x)
            den = den * f.denominator // gcd(den, f.denominator)
        out.append([int(Fraction(x) * den) for x in row])
    return out


def rref(m: Matrix) -> RrefResult:
    """Unique reduced row echelon form with unit pivots."""
    int_rows = _rows_to_int(m.entries)
    reduced, pivots = rref_int_rows(int_rows, m.cols)
    frac_rows = []
    for row, c in zip(reduced, pivots):
        piv = row[c]
        frac_rows.append([Fraction(x, piv) for x in row])
    frac_rows += [[Fraction(0)] * m.cols for _ in range(m.rows - len(frac_rows))]
    return RrefResult(Matrix(m.rows, m.cols, frac_rows), len(pivots), list(pivots))


def kernel_from_int_rref(reduced, pivots, ncols):
    """Canonical right-kernel basis from an integer RREF.

    One basis vector per free column, in ascending free-column order; the
    vector has 1 at its own free column and 0 at every other free column.
    Vectors are returned as primitive integer lists.
    """
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for cf in free_cols:
        vec = [Fraction(0)] * ncols
        vec[cf] = Fraction(1)
        for row, cp in zip(reduced, pivots):
            if row[cf]:
                vec[cp] = Fraction(-row[cf], row[cp])
        basis.append(primitive_int_vector(vec))
    return basis


def kernel_basis(m: Matrix):
    """Basis of the right null space, canonical free-variable parametrization."""
    int_rows = _rows_to_int(m.entries)
    reduced, pivots = rref_int_rows(int_rows, m.cols)
    return [[Fraction(x) for x in v] for v in kernel_from_int_rref(reduced, pivots, m.cols)]


def subspace_dim_sum(a, b):
    """Dimension of span(a ∪ b) for two lists of equal-length vectors."""
    vecs = list(a) + list(b)
    if not vecs:
        return 0
    n = len(vecs[0])
    if any(len(v) != n for v in vecs):
        raise ValueError("vectors have mismatched lengths")
    int_rows = _rows_to_int(vecs)
    _, pivots = rref_int_rows(int_rows, n)
    return len(pivots)


def primitive_int_vector(vec):
    """Clear denominators, strip the content, make the first nonzero positive."""
    den = 1
    for x in vec:
        f = Fraction(x)
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(Fraction(x) * den) for x in vec]
    return _normalize_int_row(ints)


def reduce_against_echelon(echelon_rows, pivots, vec):
    """Residual of vec after elimination by an integer echelon basis.

    Returns a Fraction list; the residual is zero iff vec lies in the span.
    """
    res = [Fraction(x) for x in vec]
    for row, c in zip(echelon_rows, pivots):
        if res[c]:
            coef = res[c] / row[c]
            res = [x - coef * y for x, y in zip(res, row)]
    return res


def echelon_insert(echelon_rows, pivots, vec):
    """Insert vec into an integer echelon basis in place; returns True if new."""
    res = reduce_against_echelon(echelon_rows, pivots, vec)
    lead = next((i for i, x in enumerate(res) if x), None)
    if lead is None:
        return False
    new_row = primitive_int_vector(res)
    pos = 0
    while pos < len(pivots) and pivots[pos] < lead:
        pos += 1
    echelon_rows.insert(pos, new_row)
    pivots.insert(pos, lead)
    return True


# ----------------------------------------------------------------------
# prime-field layer
# ----------------------------------------------------------------------

def to_mod_array(rows, ncols):
    """Integer rows (python ints of any size) -> int64 array of residues."""
    return np.array([[x % PRIME for x in row] for row in rows] or
                    np.zeros((0, ncols), dtype=np.int64), dtype=np.int64).reshape(-1, ncols)


@dataclass
class ModEchelon:
    rows: np.ndarray          # echelon rows (forward-eliminated, unit pivots)
    pivot_cols: list
    pivot_rows: list          # original row indices that carry the pivots
    rank: int
    reduced: bool = False


def forward_eliminate_mod(a: np.ndarray) -> ModEchelon:
    """Forward Gaussian elimination over GF(PRIME), column-sliced.

    Deterministic: leftmost nonzero column, topmost row.  Row order of the
    input is tracked so callers can recover an independent row subset.
    """
    a = np.array(a % PRIME, dtype=np.int64)
    nr, nc = a.shape
    perm = np.arange(nr)
    piv_cols = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
            perm[[r, i]] = perm[[i, r]]
        inv = pow(int(a[r, c]), PRIME - 2, PRIME)
        a[r, c:] = (a[r, c:] * inv) % PRIME
        block = a[r + 1:, c:]
        if block.shape[0]:
            colv = block[:, 0]
            mask = colv != 0
            if mask.any():
                block[mask] = (block[mask] - colv[mask, None] * a[r, c:]) % PRIME
        piv_cols.append(c)
        r += 1
    return ModEchelon(a[:r], piv_cols, [int(x) for x in perm[:r]], r)


def back_substitute_mod(ech: ModEchelon) -> ModEchelon:
    """Clear entries above the pivots; yields the reduced echelon form."""
    if ech.reduced or ech.rank == 0:
        ech.reduced = True
        return ech
    u = ech.rows.copy()
    for i in range(ech.rank - 1, 0, -1):
        c = ech.pivot_cols[i]
        colv = u[:i, c]
        mask = colv != 0
        if mask.any():
            u[:i, c:][mask] = (u[:i, c:][mask] - colv[mask, None] * u[i, c:]) % PRIME
    return ModEchelon(u, ech.pivot_cols, ech.pivot_rows, ech.rank, reduced=True)


def rref_mod(a: np.ndarray) -> ModEchelon:
    return back_substitute_mod(forward_eliminate_mod(a))


def rank_mod(a: np.ndarray) -> int:
    return forward_eliminate_mod(a).rank


def kernel_mod(a: np.ndarray):
    """Canonical kernel basis over GF(PRIME), rows of the returned array."""
    ech = rref_mod(a)
    nc = a.shape[1]
    pivot_set = set(ech.pivot_cols)
    free_cols = [c for c in range(nc) if c not in pivot_set]
    basis = np.zeros((len(free_cols), nc), dtype=np.int64)
    for idx, cf in enumerate(free_cols):
        basis[idx, cf] = 1
        for row, cp in zip(ech.rows, ech.pivot_cols):
            if row[cf]:
                basis[idx, cp] = (-int(row[cf])) % PRIME
    return basis
