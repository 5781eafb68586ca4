"""Numerical invariants of a reduced plane curve and their cross-checks.

The route to every headline number is degreewise linear algebra on the
Jacobian ideal: the Hilbert function of S/J gives the total Tjurina
number once it stabilizes, an iterated degreewise ideal quotient gives
the saturation and hence the graded Jacobian module, and the syzygy data
feeds the type/subtype classification plus a battery of closed-form
cross-checks.  Whenever two independent routes exist for one quantity
both are evaluated and recorded; a mismatch marks the curve FAILED
instead of silently preferring either side.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, InternalConsistencyError, NonReducedError
from .linalg import rref_int_rows, kernel_from_int_rref, forward_eliminate_mod, \
    back_substitute_mod, PRIME
from .poly import dim_S, monomial_basis, parse_poly
from .syzygy import (CurveContext, SyzygySummary, compute_generators,
                     compute_relations, expected_nullity,
                     second_syzygy_degree_table)


@dataclass
class Check:
    name: str
    expected: object
    actual: object
    passed: bool

    def to_dict(self):
        return {"name": self.name, "expected": self.expected,
                "actual": self.actual, "pass": self.passed}


@dataclass
class DpwBounds:
    """Tjurina bounds determined by the degree and the first exponent."""

    tau_min: int
    tau_max: int
    tau_max_strong: int = None

    def applicable_max(self):
        return self.tau_max if self.tau_max_strong is None else self.tau_max_strong


@dataclass
class RunConfig:
    field: str = "prime"          # "rational" | "prime"
    gen_scan_limit: int = None
    rel_scan_limit: int = None
    output: str = "table"         # "table" | "json"
    jobs: int = 1
    seed: int = 0
    timings: bool = False

    def __post_init__(self):
        if self.jobs < 1:
            raise InputError("parallelism width must be >= 1")
        if self.field not in ("rational", "prime"):
            raise InputError(f"unknown field mode {self.field!r}")


@dataclass
class CurveReport:
    name: str
    degree: int
    syzygy: SyzygySummary
    tau: int
    hilbert: list
    n_table: list
    nu: int
    type_t: int
    subtype: str
    checks: list
    timings_ms: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def to_dict(self, include_timings=False):
        out = {
            "name": self.name,
            "degree": self.degree,
            "exponents": list(self.syzygy.exponents),
            "epsilons": list(self.syzygy.epsilons),
            "relation_degrees": list(self.syzygy.relation_degrees),
            "regularity": self.syzygy.regularity,
            "tau": self.tau,
            "nu": self.nu,
            "n_table": {str(k): v for k, v in enumerate(self.n_table)},
            "type": self.type_t,
            "subtype": self.subtype,
            "checks": [c.to_dict() for c in self.checks],
        }
        if include_timings:
            out["timings_ms"] = self.timings_ms
        return out


# ----------------------------------------------------------------------
# closed-form pieces
# ----------------------------------------------------------------------

def binom2(n):
    return n * (n - 1) // 2 if n >= 2 else 0


def dpw_bounds(d, d1) -> DpwBounds:
    """Tjurina sandwich for a degree-d curve with first exponent d1."""
    if not 1 <= d1 <= d - 1:
        raise InputError("first exponent must lie in [1, d-1]")
    tau_min = (d - 1) * (d - d1 - 1)
    tau_max = (d - 1) ** 2 - d1 * (d - d1 - 1)
    strong = tau_max - binom2(2 * d1 + 2 - d) if 2 * d1 >= d else None
    return DpwBounds(tau_min, tau_max, strong)


def classify(summary: SyzygySummary):
    """Type t = d1 + d2 + 1 - d and, for t = 3, the subtype from the
    generator count and the shift pattern."""
    exps = summary.exponents
    t = exps[0] + exps[1] + 1 - summary.d
    if t == 0:
        return t, "Free"
    if t == 1:
        return t, "PlusOne"
    if t == 2:
        return t, "2X"
    if t != 3:
        return t, f"Other({t})"
    key = (summary.m, tuple(summary.epsilons))
    subtype = {
        (3, (3,)): "3A",
        (4, (2, 1)): "3B",
        (4, (1, 2)): "3B'",
        (5, (1, 1, 1)): "3C",
    }.get(key)
    if subtype is None:
        raise InternalConsistencyError(
            f"type 3 with generator/shift pattern {key} matches no subtype")
    if subtype == "3B" and not exps[2] < exps[3]:
        raise InternalConsistencyError(
            "subtype 3B requires d3 < d4, violated by " + str(exps))
    return t, subtype


def check_tau_formula(subtype, exponents):
    """Closed-form Tjurina number of a type-3 curve from its exponents."""
    e = exponents
    head = e[0] ** 2 + e[0] * e[1] + e[1] ** 2
    if subtype == "3A":
        return head - 3 * (e[0] + e[1] + e[2])
    if subtype == "3B":
        return head - 3 * e[0] - 3 * e[1] - 2 * e[2] - e[3] + 2
    if subtype == "3B'":
        return head - 3 * e[0] - 3 * e[1] - e[2] - 2 * e[3] + 2
    if subtype == "3C":
        return head - 3 * e[0] - 3 * e[1] - e[2] - e[3] - e[4] + 3
    raise InputError(f"no Tjurina formula for subtype {subtype}")


def check_nu_formula(subtype, exponents):
    """Closed-form freeness defect of a type-3 curve; returns the value
    and the stated lower bound for the branch that applies."""
    e = exponents
    if e[0] <= e[1] - 2:
        branch = 0
    elif e[0] == e[1] - 1:
        branch = 1
    else:
        branch = 2
    if subtype == "3A":
        base, bound = 3 * (e[2] - e[1]) + 9, 9
    elif subtype == "3B":
        base, bound = 2 * e[2] + e[3] - 3 * e[1] + 7, 7
    elif subtype == "3B'":
        base, bound = e[2] + 2 * e[3] - 3 * e[1] + 7, 7
    elif subtype == "3C":
        base, bound = e[2] + e[3] + e[4] - 3 * e[1] + 6, 6
    else:
        raise InputError(f"no defect formula for subtype {subtype}")
    return base - branch, bound - branch


def defect_formula(d, d1, tau):
    """Freeness defect from (d, d1, tau); branch on 2*d1 vs d-1."""
    if 2 * d1 <= d - 1:
        return (d - 1) ** 2 - d1 * (d - 1 - d1) - tau
    return -((-3 * (d - 1) ** 2) // 4) - tau


def minimal_tjurina_sides(summary, tau):
    """Both sides of the minimal-Tjurina characterization."""
    bounds = dpw_bounds(summary.d, summary.exponents[0])
    lhs = tau == bounds.tau_min
    rhs = (summary.m == 3
           and summary.exponents[1] == summary.exponents[2] == summary.d - 1)
    return lhs, rhs


def maximal_tjurina_flag(summary, tau):
    """Whether tau attains the strengthened upper bound (needs d1 >= d/2)."""
    d1 = summary.exponents[0]
    if 2 * d1 < summary.d:
        return None
    bounds = dpw_bounds(summary.d, d1)
    return tau == bounds.tau_max_strong


# ----------------------------------------------------------------------
# Hilbert function, stabilization, saturation
# ----------------------------------------------------------------------

def hilbert_value(ctx, k):
    if k < 0:
        return 0
    if k < ctx.d - 1:
        return dim_S(k)
    rank, _ = ctx.rank_data(k)
    return dim_S(k) - rank


def hilbert_table(ctx, kmax):
    return [hilbert_value(ctx, k) for k in range(kmax + 1)]


def stabilized_tau(table, d):
    """Stabilized tail value of the Hilbert table.

    Accepts when some k0 <= 3d-3 makes the table constant on [k0, 3d]
    (at least four equal trailing values); otherwise the input is not a
    reduced curve with isolated singularities.
    """
    hi = 3 * d
    for k0 in range(3 * d - 6, 3 * d - 2):
        v = table[k0]
        if all(table[k] == v for k in range(k0, hi + 1)):
            return v, k0
    raise NonReducedError(
        "Hilbert function of the Jacobian quotient does not stabilize; "
        "curve is not reduced or its singular locus is not finite")


def _variable_shift_targets(k):
    """Index arrays for multiplication by x, y, z: S_k -> S_{k+1}."""
    src = monomial_basis(k)
    dst = monomial_basis(k + 1)
    out = []
    for v in range(3):
        idx = [dst.index[(m[0] + (v == 0), m[1] + (v == 1), m[2] + (v == 2))]
               for m in src.triples]
        out.append(idx)
    return out


def saturation_codims(ctx, kmax):
    """Degreewise codimensions of the saturated Jacobian ideal.

    Starting from the quotient projection of J in the boundary degree
    kmax + 2, repeats the degreewise colon step (divide by the three
    variables) in downward sweeps until a full sweep changes nothing;
    the stationary table is the saturation on [0, kmax].
    """
    d = ctx.d
    top = kmax + 2
    prime = ctx.mode == "prime"
    if prime:
        ech = back_substitute_mod(forward_eliminate_mod(ctx._jac_rows_np(top)))
        n_top = dim_S(top)
        pivot_set = set(ech.pivot_cols)
        free_cols = [c for c in range(n_top) if c not in pivot_set]
        q = np.zeros((len(free_cols), n_top), dtype=np.int64)
        for i, cf in enumerate(free_cols):
            q[i, cf] = 1
            for row, cp in zip(ech.rows, ech.pivot_cols):
                if row[cf]:
                    q[i, cp] = (-int(row[cf])) % PRIME
    else:
        red, piv = rref_int_rows(ctx._jac_rows_int(top), dim_S(top))
        q = kernel_from_int_rref(red, piv, dim_S(top))
    shifts = {k: _variable_shift_targets(k) for k in range(top)}
    cur = {top: q}
    codim = {top: len(q)}
    for _ in range(3 * d + 1):
        changed = False
        for k in range(top - 1, -1, -1):
            nxt = cur[k + 1]
            if len(nxt) == 0:
                new_q = nxt[:, :dim_S(k)] if prime else []
            else:
                if prime:
                    stacked = np.vstack([nxt[:, idx] for idx in shifts[k]])
                    new_q = forward_eliminate_mod(stacked).rows
                else:
                    stacked = [[row[t] for t in idx]
                               for idx in shifts[k] for row in nxt]
                    red, piv = rref_int_rows(stacked, dim_S(k))
                    new_q = red
            if codim.get(k) != len(new_q):
                changed = True
            cur[k] = new_q
            codim[k] = len(new_q)
        if not changed:
            return [codim[k] for k in range(kmax + 1)]
    raise InternalConsistencyError(
        "degreewise saturation did not reach a fixed point within budget")


# ----------------------------------------------------------------------
# full analysis
# ----------------------------------------------------------------------

class CurveAnalysis:
    """Lazily evaluated analysis pipeline for one curve."""

    def __init__(self, f, mode="prime", gen_scan_limit=None, rel_scan_limit=None):
        self.ctx = CurveContext(f, mode)
        self.gen_scan_limit = gen_scan_limit
        self.rel_scan_limit = rel_scan_limit
        self._summary = None
        self._gens = None
        self._sat = None
        self.timings_ms = {}

    def _timed(self, key, fn):
        t0 = time.perf_counter()
        out = fn()
        self.timings_ms[key] = round(1000 * (time.perf_counter() - t0), 1)
        return out

    @property
    def d(self):
        return self.ctx.d

    def hilbert(self):
        if not hasattr(self, "_hilbert"):
            table = self._timed("hilbert", lambda: hilbert_table(self.ctx, 3 * self.d))
            tau, k0 = stabilized_tau(table, self.d)
            self._hilbert, self._tau, self._stab_from = table, tau, k0
        return self._hilbert

    @property
    def tau(self):
        self.hilbert()
        return self._tau

    @property
    def summary(self) -> SyzygySummary:
        if self._summary is None:
            self.hilbert()  # reducedness gate first
            def run():
                summary, gens = compute_generators(self.ctx, self.gen_scan_limit)
                if not summary.is_free:
                    compute_relations(self.ctx, summary, gens, self.rel_scan_limit)
                return summary, gens
            self._summary, self._gens = self._timed("syzygies", run)
            # exact adjudication may have sharpened ranks: refresh the table
            table = hilbert_table(self.ctx, 3 * self.d)
            tau, k0 = stabilized_tau(table, self.d)
            self._hilbert, self._tau, self._stab_from = table, tau, k0
        return self._summary

    def sat_table(self):
        """dim (S / saturated ideal)_k for k = 0 .. 3d."""
        if self._sat is None:
            self.summary
            self._sat = self._timed(
                "saturation", lambda: saturation_codims(self.ctx, 3 * self.d))
        return self._sat

    def n_table(self):
        sat = self.sat_table()
        hilb = self.hilbert()
        return [hilb[k] - sat[k] for k in range(3 * self.d + 1)]

    @property
    def nu(self):
        return max(self.n_table())


# -- spec-level operations --------------------------------------------

def hilbert_M(f, k, mode="prime"):
    """dim of the degree-k piece of the Jacobian quotient ring."""
    ctx = f if isinstance(f, CurveContext) else CurveContext(f, mode)
    return hilbert_value(ctx, k)


def tjurina(f, mode="prime"):
    """Total Tjurina number via the stabilized Hilbert function."""
    return CurveAnalysis(f, mode).tau


def saturation_dims(f, mode="prime"):
    """Table k -> dim (S/I)_k for the saturated Jacobian ideal, k = 0..3d."""
    a = CurveAnalysis(f, mode)
    a.tau  # stabilization certificate first
    return {k: v for k, v in enumerate(a.sat_table())}


def freeness_defect(f, mode="prime"):
    """(nu, n_table): maximum and full table of Jacobian-module dimensions."""
    a = CurveAnalysis(f, mode)
    return a.nu, {k: v for k, v in enumerate(a.n_table())}


def analyze_curve(source, name="curve", config: RunConfig = None) -> CurveReport:
    """Run the full pipeline on one curve and assemble the report."""
    config = config or RunConfig()
    f = parse_poly(source) if isinstance(source, str) else source
    if f.is_zero() or f.degree < 3:
        raise InputError(f"degree {f.degree} unsupported; need degree >= 3")
    analysis = CurveAnalysis(f, config.field,
                             config.gen_scan_limit, config.rel_scan_limit)
    summary = analysis.summary
    tau = analysis.tau
    hilb = analysis.hilbert()
    n_table = analysis.n_table()
    nu = analysis.nu
    d = summary.d
    exps = summary.exponents
    type_t, subtype = classify(summary)

    checks = []

    def add(name_, expected, actual):
        checks.append(Check(name_, expected, actual, expected == actual))

    # resolution-shape identities
    lead = exps[:3] if summary.m >= 3 else exps[:2]
    checks.append(Check("exponent_ladder", f"nondecreasing, <= {d - 1}",
                        list(lead), lead[-1] <= d - 1))
    if not summary.is_free:
        add("first_two_split", d - 1 + sum(summary.epsilons), exps[0] + exps[1])
        add("regularity_identity",
            exps[-1] + summary.epsilons[-1] - 1, summary.regularity)
        if tau >= 1:
            checks.append(Check("generator_degree_bound", f"<= {2 * d - 4}",
                                exps[-1], exps[-1] <= 2 * d - 4))
            checks.append(Check("regularity_bound", f"<= {2 * d - 4}",
                                summary.regularity,
                                summary.regularity <= 2 * d - 4))
    series_ok = True
    series_detail = None
    for j in range(0, 2 * d + 2):
        want = expected_nullity(summary, j)
        got = analysis.ctx.nullity(j)
        if want != got:
            series_ok = False
            series_detail = {"degree": j, "resolution": want, "kernel": got}
            break
    checks.append(Check("syzygy_dimension_series",
                        "resolution matches kernel dims on all scanned degrees",
                        series_detail or "match", series_ok))
    add("tau_resolution_formula",
        dim_S(3 * d) - 3 * dim_S(2 * d + 1) + expected_nullity(summary, 2 * d + 1),
        tau)
    checks.append(Check("hilbert_stabilization",
                        f"constant from some degree <= {3 * d - 3}",
                        analysis._stab_from, True))

    # type-3 closed forms
    if subtype in ("3A", "3B", "3B'", "3C"):
        add("tau_type3_formula", check_tau_formula(subtype, exps), tau)
        value, bound = check_nu_formula(subtype, exps)
        add("nu_type3_formula", value, nu)
        checks.append(Check("nu_type3_lower_bound", f">= {bound}", value,
                            value >= bound))
        table = second_syzygy_degree_table(summary)
        for cname, expected, actual, passed in table.bound_checks:
            checks.append(Check(cname, expected, actual, passed))

    # defect routes
    add("nu_route_match", defect_formula(d, exps[0], tau), nu)
    add("free_iff_defect_zero", summary.is_free, nu == 0)
    checks.append(Check("jacobian_module_nonnegative", ">= 0", min(n_table),
                        min(n_table) >= 0))

    # Tjurina sandwich
    bounds = dpw_bounds(d, exps[0])
    checks.append(Check(
        "dpw_bounds",
        f"{bounds.tau_min} <= tau <= {bounds.applicable_max()}",
        tau, bounds.tau_min <= tau <= bounds.applicable_max()))

    # minimal / maximal Tjurina characterizations
    lhs, rhs = minimal_tjurina_sides(summary, tau)
    checks.append(Check("minimal_tjurina_iff", lhs, rhs, lhs == rhs))
    flag = maximal_tjurina_flag(summary, tau)
    if flag is not None:
        equal_five = summary.m == 5 and len(set(exps)) == 1
        if flag and 2 * exps[0] == d + 2:
            checks.append(Check("maximal_tjurina_equivalence",
                                "subtype 3C with equal exponents",
                                {"subtype": subtype, "exponents": exps},
                                subtype == "3C" and equal_five))
        elif subtype == "3C" and equal_five:
            checks.append(Check("maximal_tjurina_equivalence",
                                "tau attains the strengthened upper bound",
                                tau, bool(flag)))

    return CurveReport(
        name=name, degree=d, syzygy=summary, tau=tau, hilbert=hilb,
        n_table=n_table, nu=nu, type_t=type_t, subtype=subtype,
        checks=checks, timings_ms=analysis.timings_ms)
