"""Sparse homogeneous polynomials in x, y, z over the rationals.

Monomials are exponent triples (a, b, c); the term order everywhere is
graded lexicographic with x > y > z, which fixes the monomial bases and
hence all printed generator representatives.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import NonHomogeneousError, PolyParseError
from .linalg import Matrix

VARS = ("x", "y", "z")


class HomogeneousPoly:
    """Homogeneous trivariate polynomial; terms map exponent triples to
    nonzero rational coefficients.  The degree is carried explicitly so
    the zero polynomial still remembers its graded slot."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree, terms):
        clean = {}
        for exp, coeff in terms.items():
            coeff = Fraction(coeff)
            if not coeff:
                continue
            if len(exp) != 3 or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent triple {exp}")
            if sum(exp) != degree:
                raise NonHomogeneousError(degree, sum(exp))
            clean[tuple(exp)] = coeff
        self.degree = degree
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, degree=0):
        return cls(degree, {})

    @classmethod
    def constant(cls, value):
        return cls(0, {(0, 0, 0): Fraction(value)})

    @classmethod
    def variable(cls, name):
        i = VARS.index(name)
        exp = tuple(1 if j == i else 0 for j in range(3))
        return cls(1, {exp: Fraction(1)})

    @classmethod
    def from_terms(cls, terms):
        """Infer the degree from the terms; zero-term input is degree 0."""
        degs = {sum(e) for e in terms if terms[e]}
        if not degs:
            return cls.zero()
        if len(degs) > 1:
            lo, hi = min(degs), max(degs)
            raise NonHomogeneousError(lo, hi)
        return cls(degs.pop(), terms)

    # -- predicates / basics ------------------------------------------

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise NonHomogeneousError(self.degree, other.degree)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return HomogeneousPoly(self.degree, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return HomogeneousPoly(self.degree, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return HomogeneousPoly(self.degree,
                                   {e: c * other for e, c in self.terms.items()})
        if self.is_zero() or other.is_zero():
            return HomogeneousPoly.zero(self.degree + other.degree)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return HomogeneousPoly(self.degree + other.degree, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = HomogeneousPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def partial(self, var):
        """Partial derivative with respect to x, y or z."""
        i = VARS.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            terms[tuple(ne)] = c * e[i]
        return HomogeneousPoly(max(self.degree - 1, 0), terms)

    def monomial_times(self, exp):
        """Multiply by a single monomial given as an exponent triple."""
        shift = tuple(exp)
        return HomogeneousPoly(
            self.degree + sum(shift),
            {(e[0] + shift[0], e[1] + shift[1], e[2] + shift[2]): c
             for e, c in self.terms.items()})

    # -- printing ---------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(f"{v}^{k}" if k > 1 else v
                            for v, k in zip(VARS, e) if k)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"HomogeneousPoly({self})"


def jacobian(f: HomogeneousPoly):
    """The three partial derivatives (f_x, f_y, f_z)."""
    if f.degree < 1:
        raise ValueError("need degree >= 1")
    return f.partial("x"), f.partial("y"), f.partial("z")


def euler_combination(f: HomogeneousPoly):
    """x*f_x + y*f_y + z*f_z, which must equal deg(f) * f."""
    fx, fy, fz = jacobian(f)
    x, y, z = (HomogeneousPoly.variable(v) for v in VARS)
    return x * fx + y * fy + z * fz


def primitive_integer_poly(f: HomogeneousPoly):
    """Rescale by a positive rational so coefficients are coprime integers
    and the graded-lex leading coefficient is positive.  Rescaling does not
    change the curve, its syzygies or any invariant computed here."""
    if f.is_zero():
        return f
    den = 1
    for c in f.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    nums = [int(c * den) for c in f.terms.values()]
    g = 0
    for n in nums:
        g = gcd(g, abs(n))
    lead = f.terms[max(f.terms, key=lambda e: e)]
    scale = Fraction(den, g)
    if lead < 0:
        scale = -scale
    return f * scale


# ----------------------------------------------------------------------
# monomial bases and graded dimensions
# ----------------------------------------------------------------------

def dim_S(k):
    """Dimension of the degree-k graded piece of the polynomial ring."""
    if k < 0:
        return 0
    return (k + 1) * (k + 2) // 2


class MonomialBasis:
    """Ordered monomial basis of one graded piece (graded-lex, x > y > z)."""

    __slots__ = ("degree", "triples", "index")

    def __init__(self, degree):
        self.degree = degree
        self.triples = [(a, b, degree - a - b)
                        for a in range(degree, -1, -1)
                        for b in range(degree - a, -1, -1)]
        self.index = {t: i for i, t in enumerate(self.triples)}

    def __len__(self):
        return len(self.triples)


@lru_cache(maxsize=None)
def monomial_basis(degree) -> MonomialBasis:
    if degree < 0:
        raise ValueError("negative degree has an empty basis")
    return MonomialBasis(degree)


def poly_to_vector(f: HomogeneousPoly, basis: MonomialBasis = None):
    basis = basis or monomial_basis(f.degree)
    vec = [Fraction(0)] * len(basis)
    for e, c in f.terms.items():
        vec[basis.index[e]] = c
    return vec


def vector_to_poly(vec, degree):
    basis = monomial_basis(degree)
    return HomogeneousPoly(degree, {basis.triples[i]: Fraction(v)
                                    for i, v in enumerate(vec) if v})


def multiplication_matrix(g: HomogeneousPoly, k) -> Matrix:
    """Matrix of S_k -> S_{k + deg g}, h -> g*h, in the monomial bases.

    Columns follow the degree-k basis order; rows the degree-(k + deg g) one.
    """
    if k < 0:
        raise ValueError("need k >= 0")
    src = monomial_basis(k)
    dst = monomial_basis(k + g.degree)
    entries = [[Fraction(0)] * len(src) for _ in range(len(dst))]
    for j, mono in enumerate(src.triples):
        for e, c in g.terms.items():
            row = dst.index[(e[0] + mono[0], e[1] + mono[1], e[2] + mono[2])]
            entries[row][j] = c
    return Matrix(len(dst), len(src), entries)


# ----------------------------------------------------------------------
# parsing
# ----------------------------------------------------------------------

_TOKEN_CHARS = set("xyz+-*^()/ \t\n0123456789")


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in " \t\n":
            i += 1
            continue
        if ch not in _TOKEN_CHARS:
            raise PolyParseError(f"unexpected character {ch!r} at position {i}")
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("num", text[i:j], i))
            i = j
        else:
            kind = {"x": "var", "y": "var", "z": "var"}.get(ch, ch)
            tokens.append((kind, ch, i))
            i += 1
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent for:  expr := term (('+'|'-') term)*;
    term := factor ('*' factor)*;  factor := '-'* atom ('^' INT)?;
    atom := var | number | '(' expr ')';  number := INT ('/' INT)?.
    No implicit multiplication; '/' occurs only inside rational literals."""

    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind and tok[0] != kind:
            raise PolyParseError(
                f"expected {kind} at position {tok[2]}, found {tok[1]!r}")
        self.pos += 1
        return tok

    def parse(self):
        out = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolyParseError(f"unexpected {tok[1]!r} at position {tok[2]}")
        return out

    def expr(self):
        out = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.factor()
        while self.peek()[0] == "*":
            self.take()
            out = out * self.factor()
        return out

    def factor(self):
        negate = False
        while self.peek()[0] == "-":
            self.take()
            negate = not negate
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("num")
            base = base ** int(tok[1])
        return -base if negate else base

    def atom(self):
        tok = self.peek()
        if tok[0] == "var":
            self.take()
            return HomogeneousPoly.variable(tok[1])
        if tok[0] == "num":
            self.take()
            num = int(tok[1])
            if self.peek()[0] == "/":
                self.take()
                den = int(self.take("num")[1])
                if den == 0:
                    raise PolyParseError("zero denominator in rational literal")
                return HomogeneousPoly.constant(Fraction(num, den))
            return HomogeneousPoly.constant(num)
        if tok[0] == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        raise PolyParseError(f"unexpected {tok[1]!r} at position {tok[2]}")


def parse_poly(text: str) -> HomogeneousPoly:
    """Parse polynomial text; rejects non-homogeneous input.

    The addition/multiplication methods raise NonHomogeneousError with the
    two offending degrees as soon as terms of different degrees meet.
    """
    if not text or not text.strip():
        raise PolyParseError("empty polynomial")
    return _Parser(_tokenize(text)).parse()
