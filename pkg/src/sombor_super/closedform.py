"""Catalog of closed-form Sombor spectra for super graphs on D, Q and SD.

Each :class:`CatalogEntry` is plain data: an identifier, the graph cell it
describes, a parity/range predicate and two formula callables that evaluate
the claimed eigenvalues and the residual (a polynomial or an explicit
quotient matrix) at a given ``n``.  Several cells carry more than one entry
when a statement admits competing readings; every reading is evaluated and
reported separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .graphs import SimpleGraph, base_graph, super_graph
from .groups import Family, FiniteGroup, GroupSpec, VertexPartition, make_group, parse_family

__all__ = [
    "EXACT",
    "AT_LEAST",
    "KINDS",
    "RELATIONS",
    "CatalogMiss",
    "SpectralClaim",
    "PolynomialCoeffs",
    "QuotientSpec",
    "ClosedFormPrediction",
    "CatalogEntry",
    "CATALOG",
    "euler_phi",
    "divisor_structure",
    "predict",
    "predict_all",
    "quotient_spec",
    "covered_cells",
    "relation_partition",
    "build_super_graph",
    "join_root_pair",
    "join_quotient",
    "export_catalog",
    "audit_catalog",
]

R2 = math.sqrt(2.0)
EXACT = "Exact"
AT_LEAST = "AtLeast"
KINDS = ("power", "enhanced", "commuting")
RELATIONS = ("equality", "order", "conjugacy")


class CatalogMiss(LookupError):
    pass


# ---------------------------------------------------------------- number theory


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi needs n >= 1")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@dataclass(frozen=True)
class DivisorStructure:
    divisors: tuple[int, ...]
    phi: tuple[int, ...]
    skeleton: SimpleGraph


def divisor_structure(n: int) -> DivisorStructure:
    """Proper divisors other than 1, their totients, and the divisibility graph on them."""
    if n < 2:
        raise ValueError("divisor_structure needs n >= 2")
    divs = tuple(d for d in range(2, n) if n % d == 0)
    edges = [
        (i, j)
        for i in range(len(divs))
        for j in range(i + 1, len(divs))
        if divs[j] % divs[i] == 0
    ]
    return DivisorStructure(divs, tuple(euler_phi(d) for d in divs), SimpleGraph.from_edges(len(divs), edges))


# ---------------------------------------------------------------- polynomials (descending coefficients)


def _pmul(p: Sequence[float], q: Sequence[float]) -> list[float]:
    return np.convolve(np.asarray(p, float), np.asarray(q, float)).tolist()


def _padd(*ps: Sequence[float]) -> list[float]:
    width = max(len(p) for p in ps)
    out = np.zeros(width)
    for p in ps:
        out[width - len(p):] += p
    return out.tolist()


def _pscale(c: float, p: Sequence[float]) -> list[float]:
    return [c * x for x in p]


def _lin(root: float) -> list[float]:
    return [1.0, -root]


def _prod(*ps: Sequence[float]) -> list[float]:
    out = [1.0]
    for p in ps:
        out = _pmul(out, p)
    return out


def _ppow(p: Sequence[float], k: int) -> list[float]:
    return _prod(*([p] * k))


def _trim(p: Sequence[float]) -> list[float]:
    p = list(p)
    while len(p) > 1 and p[0] == 0.0:
        p.pop(0)
    return p


def _minus(head: Sequence[float], *terms: tuple[float, Sequence[float]]) -> list[float]:
    """head - sum(c * poly)."""
    return _trim(_padd(head, *(_pscale(-c, p) for c, p in terms)))


# ---------------------------------------------------------------- claim and residual types


@dataclass(frozen=True)
class SpectralClaim:
    value: float
    multiplicity: int
    kind: str = EXACT

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("claim value must be finite")
        if self.kind not in (EXACT, AT_LEAST):
            raise ValueError(f"unknown claim kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"value": self.value, "multiplicity": self.multiplicity, "kind": self.kind}


@dataclass(frozen=True)
class PolynomialCoeffs:
    coeffs: tuple[float, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def to_dict(self) -> dict:
        return {"type": "PolynomialCoeffs", "coeffs": list(self.coeffs)}


@dataclass(frozen=True)
class QuotientSpec:
    rows: tuple[tuple[float, ...], ...]

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=float)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def to_dict(self) -> dict:
        return {"type": "QuotientSpec", "dim": self.dim, "rows": [list(r) for r in self.rows]}


Residual = Optional[Union[PolynomialCoeffs, QuotientSpec]]


@dataclass(frozen=True)
class ClosedFormPrediction:
    source_id: str
    family: Family
    kind: str
    relation: str
    n: int
    claims: tuple[SpectralClaim, ...]
    residual: Residual
    applicability: str
    suspect: bool = False
    note: str = ""

    @property
    def exact_total(self) -> int:
        return sum(c.multiplicity for c in self.claims if c.kind == EXACT)

    def self_consistency(self, order: int, tol: float = 1e-8) -> list[str]:
        """Trace and count checks for predictions made only of exact claims."""
        problems = []
        exact_only = all(c.kind == EXACT for c in self.claims)
        if not exact_only:
            return problems
        if self.residual is None:
            if self.exact_total != order:
                problems.append(f"multiplicities sum to {self.exact_total}, graph order is {order}")
            scale = max((abs(c.value) for c in self.claims), default=1.0)
            trace = sum(c.value * c.multiplicity for c in self.claims)
            if abs(trace) > tol * max(1.0, scale):
                problems.append(f"claimed trace is {trace:.6g}, not 0")
        elif isinstance(self.residual, PolynomialCoeffs):
            if self.exact_total + self.residual.degree != order:
                problems.append(
                    f"exact multiplicities {self.exact_total} plus residual degree "
                    f"{self.residual.degree} differ from graph order {order}"
                )
        elif isinstance(self.residual, QuotientSpec):
            if self.exact_total + self.residual.dim != order:
                problems.append(
                    f"exact multiplicities {self.exact_total} plus quotient dimension "
                    f"{self.residual.dim} differ from graph order {order}"
                )
        return problems

    def to_dict(self) -> dict:
        return {
            "sourceId": self.source_id,
            "family": self.family.value,
            "kind": self.kind,
            "relation": self.relation,
            "n": self.n,
            "applicability": self.applicability,
            "claims": [c.to_dict() for c in self.claims],
            "residual": None if self.residual is None else self.residual.to_dict(),
            "suspect": self.suspect,
            "note": self.note,
        }


# ---------------------------------------------------------------- graph context for implicit degrees


def relation_partition(g: FiniteGroup, relation: str) -> VertexPartition:
    if relation == "equality":
        return g.equality_partition()
    if relation == "order":
        return g.order_partition()
    if relation == "conjugacy":
        return g.conjugacy_partition()
    raise ValueError(f"unknown relation {relation!r}; expected one of {list(RELATIONS)}")


def build_super_graph(g: FiniteGroup, kind: str, relation: str) -> SimpleGraph:
    return super_graph(base_graph(g, kind), relation_partition(g, relation))


class FormulaContext:
    """Evaluation context; builds the graph lazily for formulas that need degrees."""

    def __init__(self, family: Family, kind: str, relation: str, n: int):
        self.family, self.kind, self.relation, self.n = family, kind, relation, n

    @cached_property
    def group(self) -> FiniteGroup:
        return make_group(GroupSpec(self.family, self.n))

    @cached_property
    def graph(self) -> SimpleGraph:
        return build_super_graph(self.group, self.kind, self.relation)

    def rotation_degree(self, order: int) -> int:
        """Degree of a rotation ``a^j`` with ``o(a^j) == order``."""
        g = self.group
        deg = self.graph.degrees()
        for i, x in enumerate(g.elements):
            if not x.refl and g.orders[i] == order:
                return int(deg[i])
        raise ValueError(f"no rotation of order {order}")


Formula = Callable[[FormulaContext], object]


@dataclass(frozen=True)
class CatalogEntry:
    source_id: str
    family: Family
    kind: str
    relation: str
    applicability: str
    applies: Callable[[int], bool] = field(repr=False)
    claims: Callable[[FormulaContext], Sequence[tuple]] = field(repr=False)
    residual: Callable[[FormulaContext], Residual] = field(repr=False, default=lambda ctx: None)
    suspect: str = ""

    @property
    def cell(self) -> tuple[Family, str, str]:
        return (self.family, self.kind, self.relation)

    def evaluate(self, n: int, ctx: FormulaContext | None = None) -> ClosedFormPrediction:
        ctx = ctx or FormulaContext(self.family, self.kind, self.relation, n)
        claims = []
        for item in self.claims(ctx):
            value, mult, *rest = item
            kind = rest[0] if rest else EXACT
            if mult > 0:
                claims.append(SpectralClaim(float(value), int(mult), kind))
        res = self.residual(ctx)
        if isinstance(res, (list, tuple)) and not isinstance(res, QuotientSpec):
            res = PolynomialCoeffs(tuple(float(c) for c in res))
        elif isinstance(res, np.ndarray):
            res = QuotientSpec(tuple(tuple(float(x) for x in row) for row in res))
        return ClosedFormPrediction(
            self.source_id, self.family, self.kind, self.relation, n,
            tuple(claims), res, self.applicability, bool(self.suspect), self.suspect,
        )


# ---------------------------------------------------------------- predicates


def _odd(n: int) -> bool:
    return n % 2 == 1


def _even(n: int) -> bool:
    return n % 2 == 0


def _any(n: int) -> bool:
    return True


def _even_half_odd(n: int) -> bool:
    return n % 4 == 2


def _even_half_even(n: int) -> bool:
    return n % 4 == 0


# ---------------------------------------------------------------- commuting-graph formulas


def _complete(order_factor: int):
    def claims(ctx):
        m = order_factor * ctx.n
        return [(-(m - 1) * R2, m - 1), ((m - 1) ** 2 * R2, 1)]

    return claims


def _cor41i_poly(ctx):
    n = ctx.n
    return [
        1.0,
        R2 * (3 * n - n * n - 2),
        15 * n**2 - 9 * n**3 - 10 * n + 2,
        R2 * (4 * n**5 - 16 * n**4 + 22 * n**3 - 14 * n**2 + 4 * n),
    ]


def _cor41ii_poly(c_term):
    def residual(ctx):
        n = ctx.n
        h = n // 2
        f3 = _lin(3 * R2)
        f_mid = _lin((n - 1) * (n - 3) * R2)
        head = _prod(_lin((2 * n - 1) * R2), f_mid, _ppow(f3, h))
        return _minus(
            head,
            (2 * (n - 2) * (5 * n * n - 6 * n + 2), _ppow(f3, h)),
            (c_term(n), _prod(f_mid, _ppow(f3, h - 1))),
        )

    return residual


def _cor42_claims(ctx):
    n = ctx.n
    return [(-(4 * n - 1) * R2, 1), (-(2 * n - 1) * R2, 2 * n - 3), (-3 * R2, n)]


def _cor42_poly(ctx):
    n = ctx.n
    f3 = _lin(3 * R2)
    f_mid = _lin((2 * n - 1) * (2 * n - 3) * R2)
    head = _prod(_lin((4 * n - 1) * R2), f_mid, _ppow(f3, n))
    return _minus(
        head,
        (8 * (n - 1) * (10 * n * n - 6 * n + 1), _ppow(f3, n)),
        (8 * n * (8 * n * n - 4 * n + 5), _prod(f_mid, _ppow(f3, n - 1))),
    )


def _cubic(top, mid, low, c_low, c_mid):
    """(x-top)(x-mid)(x-low) - c_low (x-low) - c_mid (x-mid)."""
    return _minus(
        _prod(_lin(top), _lin(mid), _lin(low)),
        (c_low, _lin(low)),
        (c_mid, _lin(mid)),
    )


def _cor43i_poly(ctx):
    n = ctx.n
    return _cubic(
        3 * (8 * n - 1) * R2, (4 * n - 5) * (4 * n - 1) * R2, 21 * R2,
        32 * (n - 1) * (40 * n * n - 12 * n + 1), 32 * n * (32 * n * n - 8 * n + 25),
    )


def _cor43ii_poly(c_mid):
    def residual(ctx):
        n = ctx.n
        return _cubic(
            (8 * n - 1) * R2, (4 * n - 1) * (4 * n - 3) * R2, 3 * R2,
            8 * (2 * n - 1) * (40 * n * n - 12 * n + 1), c_mid(n),
        )

    return residual


def _d_order_odd_claims(ctx):
    n = ctx.n
    return [(-(n - 1) * R2, n - 2), (-n * R2, n - 1)]


def _d_order_odd_poly(ctx):
    n = ctx.n
    low = n * (n - 1) * R2
    mid = (n - 1) * (n - 2) * R2
    return _cubic(0.0, mid, low, (n - 1) * (5 * n * n - 6 * n + 2), n * (5 * n * n - 4 * n + 1))


def _q_odd_claims(ctx):
    n = ctx.n
    return [(-(4 * n - 1) * R2, 1), (-(2 * n - 1) * R2, 2 * n - 3), (-(2 * n + 1) * R2, 2 * n - 1)]


def _q_odd_poly(ctx):
    n = ctx.n
    return _cubic(
        (4 * n - 1) * R2, (2 * n - 1) * (2 * n - 3) * R2, (2 * n - 1) * (2 * n + 1) * R2,
        8 * (n - 1) * (10 * n * n - 6 * n + 1), 8 * n * (10 * n * n - 2 * n + 1),
    )


def _cor47i_poly(ctx):
    n = ctx.n
    return _cubic(
        3 * (8 * n - 1) * R2, (4 * n - 1) * (4 * n - 5) * R2, (4 * n - 1) * (4 * n + 3) * R2,
        32 * (n - 1) * (40 * n * n - 12 * n + 1), 32 * n * (40 * n * n + 4 * n + 5),
    )


def _quartic(top, mid, low, c_low, c_mid):
    """(x-top)(x-mid)(x-low)^2 - c_low (x-low)^2 - c_mid (x-mid)(x-low)."""
    fl = _lin(low)
    return _minus(
        _prod(_lin(top), _lin(mid), fl, fl),
        (c_low, _pmul(fl, fl)),
        (c_mid, _pmul(_lin(mid), fl)),
    )


def _cor47ii_poly(ctx):
    n = ctx.n
    return _quartic(
        (8 * n - 1) * R2, (4 * n - 1) * (4 * n - 3) * R2, (2 * n - 1) * (2 * n + 1) * R2,
        8 * (2 * n - 1) * (40 * n * n - 12 * n + 1), 16 * n * (34 * n * n - 6 * n + 1),
    )


def _cor48ii_poly(ctx):
    n = ctx.n
    return _quartic(
        (4 * n - 1) * R2, (2 * n - 1) * (2 * n - 3) * R2, (n * n - 1) * R2,
        8 * (n - 1) * (10 * n * n - 6 * n + 1), 4 * n * (17 * n * n - 6 * n + 2),
    )


def _cor49ii_poly(ctx):
    n = ctx.n
    return _cubic(
        (2 * n - 1) * R2, (n - 1) * (n - 3) * R2, (n * n - 1) * R2,
        2 * (n - 2) * (5 * n * n - 6 * n + 2), 2 * n * (5 * n * n - 2 * n + 2),
    )


def _cor49iii_poly(ctx):
    n = ctx.n
    h = n // 2
    return _quartic(
        (2 * n - 1) * R2, (n - 1) * (n - 3) * R2, (h * h - 1) * R2,
        2 * (n - 2) * (5 * n * n - 6 * n + 2), 2 * n * ((2 * n - 1) ** 2 + (h + 1) ** 2),
    )


# ---------------------------------------------------------------- enhanced-power formulas


def _cor51_poly(ctx):
    n = ctx.n
    mid = (n - 1) * (n - 2) * R2
    return _minus(
        _prod([1.0, 0.0, 0.0], _lin(mid)),
        ((n - 1) * (5 * n * n - 6 * n + 2), [1.0, 0.0]),
        (2 * n * (2 * n * n - 2 * n + 1), _lin(mid)),
    )


def _cor55ii_poly(ctx):
    n = ctx.n
    return _cubic(
        0.0, (n - 1) * (n - 2) * R2, n * (n - 2) * R2 / 4,
        (n - 1) * (5 * n * n - 6 * n + 2), n * (17 * n * n - 16 * n + 4) / 4,
    )


def _cor56ii_poly(ctx):
    n = ctx.n
    return _cubic(
        (4 * n - 1) * R2, (2 * n - 1) * (2 * n - 3) * R2, (n * n - 1) * R2,
        8 * (n - 1) * (10 * n * n - 6 * n + 1), 4 * n * (17 * n * n - 6 * n + 2),
    )


def _sd_abg(n):
    return 8 * n - 1, 6 * n - 1, 4 * n - 1


def _thm54_quotient(ctx):
    n = ctx.n
    a, b, c = _sd_abg(n)
    dim = n + 4
    q = np.zeros((dim, dim))
    q[0, 1] = q[1, 0] = math.hypot(a, b)
    q[0, 2] = (4 * n - 2) * math.hypot(a, c)
    q[1, 2] = (4 * n - 2) * math.hypot(b, c)
    q[2, 0] = math.hypot(a, c)
    q[2, 1] = math.hypot(b, c)
    q[2, 2] = (4 * n - 3) * (4 * n - 1) * R2
    for k in range(3, 3 + n):
        q[0, k] = 2 * math.hypot(a, 3)
        q[1, k] = 2 * math.hypot(b, 3)
        q[k, 0] = math.hypot(a, 3)
        q[k, 1] = math.hypot(b, 3)
        q[k, k] = 3 * R2
    q[0, dim - 1] = 2 * n * math.hypot(a, 1)
    q[dim - 1, 0] = math.hypot(a, 1)
    return q


def _thm58_quotient(ctx):
    n = ctx.n
    a, b, c = _sd_abg(n)
    d = 2 * n + 1
    psi = n if _odd(n) else 2 * n
    blocks = 2 if _odd(n) else 1
    dim = 4 + blocks
    q = np.zeros((dim, dim))
    q[0, 1] = q[1, 0] = math.hypot(a, b)
    q[0, 2] = (4 * n - 2) * math.hypot(a, c)
    q[0, 3] = 2 * n * math.hypot(a, d)
    q[1, 2] = (4 * n - 2) * math.hypot(b, c)
    q[1, 3] = 2 * n * math.hypot(b, d)
    q[2, 0], q[2, 1] = math.hypot(a, c), math.hypot(b, c)
    q[2, 2] = (4 * n - 1) * (4 * n - 3) * R2
    q[3, 0], q[3, 1] = math.hypot(a, d), math.hypot(b, d)
    q[3, 3] = (2 * n - 1) * (2 * n + 1) * R2
    for k in range(4, dim):
        q[0, k] = psi * math.hypot(a, psi)
        q[k, 0] = math.hypot(a, psi)
        q[k, k] = psi * (psi - 1) * R2
    return q


# ---------------------------------------------------------------- power-graph formulas on D


def _rotation_divisors(n: int, skip: Sequence[int] = ()) -> tuple[list[int], list[int]]:
    ds = divisor_structure(n)
    keep = [(d, p) for d, p in zip(ds.divisors, ds.phi) if d not in skip]
    return [d for d, _ in keep], [p for _, p in keep]


def _divides_either(x: int, y: int) -> bool:
    return x % y == 0 or y % x == 0


def _power_d_claims(tail: str):
    def claims(ctx):
        n = ctx.n
        divs, phis = _rotation_divisors(n)
        out = [(-(n - 1) * R2, euler_phi(n) - 1)]
        out += [(-ctx.rotation_degree(d) * R2, p - 1) for d, p in zip(divs, phis)]
        if tail == "independent":
            out.append((0.0, n - 1))
        elif tail == "clique":
            out.append((-n * R2, n - 1))
        else:  # two reflection cliques of size n/2
            out.append((-(n // 2) * R2, n - 2))
        return out

    return claims


def _power_d_quotient(tail: str):
    """Quotient over e / generators / one block per proper divisor / reflections."""

    def residual(ctx):
        n = ctx.n
        alpha, beta = 2 * n - 1, n - 1
        divs, phis = _rotation_divisors(n)
        dbar = [ctx.rotation_degree(d) for d in divs]
        t = len(divs)
        if tail == "split":
            tails = [(n // 2, n // 2), (n // 2, n // 2)]
        elif tail == "clique":
            tails = [(n, n)]
        else:
            tails = [(n, 0)]
        dim = 2 + t + len(tails)
        q = np.zeros((dim, dim))
        q[0, 1] = euler_phi(n) * math.hypot(alpha, beta)
        q[1, 0] = math.hypot(alpha, beta)
        q[1, 1] = beta * (euler_phi(n) - 1) * R2
        for i in range(t):
            r = 2 + i
            q[0, r] = phis[i] * math.hypot(alpha, dbar[i])
            q[1, r] = phis[i] * math.hypot(beta, dbar[i])
            q[r, 0] = math.hypot(alpha, dbar[i])
            q[r, 1] = euler_phi(n) * math.hypot(beta, dbar[i])
            for j in range(t):
                if i == j:
                    q[r, r] = (phis[i] - 1) * dbar[i] * R2
                elif _divides_either(divs[i], divs[j]):
                    q[r, 2 + j] = phis[j] * math.hypot(dbar[i], dbar[j])
        for k, (size, within) in enumerate(tails):
            # ``within`` is the degree inside the reflection block; 0 means independent
            deg = within or 1
            r = 2 + t + k
            q[0, r] = size * math.hypot(alpha, deg)
            q[r, 0] = math.hypot(alpha, deg)
            q[r, r] = (size - 1) * within * R2
        return q

    return residual


def _thm65ii_claims(ctx):
    n = ctx.n
    divs, phis = _rotation_divisors(n, skip=(2,))
    out = [(-(2 * n - 1) * R2, euler_phi(n))]
    out += [(-ctx.rotation_degree(d) * R2, p - 1) for d, p in zip(divs, phis)]
    out.append((-ctx.rotation_degree(2) * R2, n))
    return out


def _thm65ii_quotient(ctx):
    n = ctx.n
    alpha = 2 * n - 1
    divs, phis = _rotation_divisors(n, skip=(2,))
    dbar = [ctx.rotation_degree(d) for d in divs]
    d0 = ctx.rotation_degree(2)
    t = len(divs)
    dim = t + 2
    last = dim - 1
    ph = euler_phi(n)
    q = np.zeros((dim, dim))
    q[0, 0] = ph * alpha * R2
    q[0, last] = (n + 1) * math.hypot(alpha, d0)
    q[last, 0] = (ph + 1) * math.hypot(alpha, d0)
    q[last, last] = n * d0 * R2
    for i in range(t):
        r = 1 + i
        q[0, r] = phis[i] * math.hypot(alpha, dbar[i])
        q[r, 0] = (ph + 1) * math.hypot(alpha, dbar[i])
        for j in range(t):
            if i == j:
                q[r, r] = (phis[i] - 1) * dbar[i] * R2
            elif _divides_either(divs[i], divs[j]):
                q[r, 1 + j] = phis[j] * math.hypot(dbar[i], dbar[j])
        if divs[i] % 2 == 0:
            q[r, last] = (n + 1) * math.hypot(dbar[i], d0)
            q[last, r] = phis[i] * math.hypot(dbar[i], d0)
    return q


# ---------------------------------------------------------------- partial power-graph claims


def _rotation_count(n_rot: int, pred, exclude=()) -> int:
    """Rotations a^i, 1 <= i < n_rot, whose order satisfies ``pred``."""
    count = 0
    for i in range(1, n_rot):
        if i in exclude:
            continue
        o = n_rot // math.gcd(i, n_rot)
        if pred(o):
            count += 1
    return count


def _thm66i_claims(exclude_order_four: bool):
    def claims(ctx):
        n = ctx.n
        m = 2 * n
        if exclude_order_four:
            c = _rotation_count(m, lambda o: o % 4 == 0, exclude=(n // 2, 3 * n // 2))
        else:
            c = _rotation_count(m, lambda o: o % 4 == 0)
        return [(-R2 * (2 * n + 3 + c), 2 * n + 1, AT_LEAST)]

    return claims


def _thm67_claims(full_range: bool):
    def claims(ctx):
        n = ctx.n
        m = 4 * n
        a = _rotation_count(m, lambda o: o % 2 == 0 and o % 4 != 0, exclude=(2 * n,))
        upper = m if full_range else 2 * n
        c = sum(
            1 for i in range(1, upper)
            if i not in (n, 3 * n) and (m // math.gcd(i, m)) % 4 == 0
        )
        return [
            (-R2 * (4 * n + 3 + a + c), 2 * n, AT_LEAST),
            (-R2 * (4 * n + 3 + c), 2 * n + 1, AT_LEAST),
        ]

    return claims


# ---------------------------------------------------------------- catalog

D, Q, SD = Family.DIHEDRAL, Family.QUATERNION, Family.SEMIDIHEDRAL


def _entry(source_id, family, kind, relation, applicability, applies, claims, residual=None, suspect=""):
    return CatalogEntry(
        source_id, family, kind, relation, applicability, applies, claims,
        residual or (lambda ctx: None), suspect,
    )


CATALOG: tuple[CatalogEntry, ...] = (
    # commuting graph
    _entry("Cor4.1.i", D, "commuting", "equality", "n odd", _odd,
           lambda c: [(-(c.n - 1) * R2, c.n - 2), (0.0, c.n - 1)], _cor41i_poly,
           "constant term adopted with the corrected sign"),
    _entry("Cor4.1.ii", D, "commuting", "equality", "n even", _even,
           lambda c: [(-(2 * c.n - 1) * R2, 1), (-(c.n - 1) * R2, c.n - 3), (-3 * R2, c.n // 2)],
           _cor41ii_poly(lambda n: 2 * n * (7 * n * n - 4 * n + 10)),
           "last coefficient as stated; the derivation gives 4n(2n^2-2n+5)"),
    _entry("Cor4.1.ii-proof", D, "commuting", "equality", "n even", _even,
           lambda c: [(-(2 * c.n - 1) * R2, 1), (-(c.n - 1) * R2, c.n - 3), (-3 * R2, c.n // 2)],
           _cor41ii_poly(lambda n: 4 * n * (2 * n * n - 2 * n + 5))),
    _entry("Cor4.2", Q, "commuting", "equality", "n >= 2", _any, _cor42_claims, _cor42_poly),
    _entry("Cor4.3.i", SD, "commuting", "equality", "n odd", _odd,
           lambda c: [(-(8 * c.n - 1) * R2, 3), (-(4 * c.n - 1) * R2, 4 * c.n - 5),
                      (-7 * R2, 3 * c.n), (21 * R2, c.n - 1)], _cor43i_poly),
    _entry("Cor4.3.ii", SD, "commuting", "equality", "n even", _even,
           lambda c: [(-(8 * c.n - 1) * R2, 1), (-(4 * c.n - 1) * R2, 4 * c.n - 3),
                      (-3 * R2, 2 * c.n), (3 * R2, 2 * c.n - 1)],
           _cor43ii_poly(lambda n: 16 * n * (32 * n * n - 12 * n + 1)),
           "last coefficient as stated; expanding the join formula gives 16n(32n^2-8n+5)"),
    _entry("Cor4.3.ii-derived", SD, "commuting", "equality", "n even", _even,
           lambda c: [(-(8 * c.n - 1) * R2, 1), (-(4 * c.n - 1) * R2, 4 * c.n - 3),
                      (-3 * R2, 2 * c.n), (3 * R2, 2 * c.n - 1)],
           _cor43ii_poly(lambda n: 16 * n * (32 * n * n - 8 * n + 5))),
    _entry("Cor4.4.i", D, "commuting", "order", "n odd", _odd, _d_order_odd_claims, _d_order_odd_poly),
    _entry("Cor4.4.ii", D, "commuting", "order", "n even", _even, _complete(2)),
    _entry("Cor4.5.i", Q, "commuting", "order", "n odd", _odd, _q_odd_claims, _q_odd_poly),
    _entry("Cor4.5.ii", Q, "commuting", "order", "n even", _even, _complete(4)),
    _entry("Cor4.6", SD, "commuting", "order", "n >= 2", _any, _complete(8)),
    _entry("Cor4.7.i", SD, "commuting", "conjugacy", "n odd", _odd,
           lambda c: [(-(8 * c.n - 1) * R2, 3), (-(4 * c.n - 1) * R2, 4 * c.n - 5),
                      (-(4 * c.n + 3) * R2, 4 * c.n - 1)], _cor47i_poly),
    _entry("Cor4.7.ii", SD, "commuting", "conjugacy", "n even", _even,
           lambda c: [(-(2 * c.n + 1) * R2, 4 * c.n - 2), (-(4 * c.n - 1) * R2, 4 * c.n - 3),
                      (-(8 * c.n - 1) * R2, 1)], _cor47ii_poly),
    _entry("Cor4.8.i", Q, "commuting", "conjugacy", "n odd", _odd, _q_odd_claims, _q_odd_poly),
    _entry("Cor4.8.ii", Q, "commuting", "conjugacy", "n even", _even,
           lambda c: [(-(4 * c.n - 1) * R2, 1), (-(2 * c.n - 1) * R2, 2 * c.n - 3),
                      (-(c.n + 1) * R2, 2 * c.n - 2)], _cor48ii_poly),
    _entry("Cor4.9.i", D, "commuting", "conjugacy", "n odd", _odd, _d_order_odd_claims, _d_order_odd_poly),
    _entry("Cor4.9.ii", D, "commuting", "conjugacy", "n even, n/2 odd", _even_half_odd,
           lambda c: [(-(c.n + 1) * R2, c.n - 1), (-(c.n - 1) * R2, c.n - 3), (-(2 * c.n - 1) * R2, 1)],
           _cor49ii_poly),
    _entry("Cor4.9.iii", D, "commuting", "conjugacy", "n even, n/2 even", _even_half_even,
           lambda c: [(-(c.n // 2 + 1) * R2, c.n - 2), (-(c.n - 1) * R2, c.n - 3), (-(2 * c.n - 1) * R2, 1)],
           _cor49iii_poly),
    # enhanced power graph
    _entry("Cor5.1", D, "enhanced", "equality", "n >= 3", _any,
           lambda c: [(-(c.n - 1) * R2, c.n - 2), (0.0, c.n - 1)], _cor51_poly),
    _entry("Cor5.2", Q, "enhanced", "equality", "n >= 2", _any, _cor42_claims, _cor42_poly),
    _entry("Thm5.4", SD, "enhanced", "equality", "n >= 2", _any,
           lambda c: [(-(4 * c.n - 1) * R2, 4 * c.n - 3), (0.0, 2 * c.n - 1), (-3 * R2, c.n)],
           _thm54_quotient),
    _entry("Rem5(Cor4.4.i)", D, "enhanced", "order", "n odd", _odd, _d_order_odd_claims, _d_order_odd_poly),
    _entry("Rem5(Cor4.4.ii)", D, "enhanced", "order", "n even", _even, _complete(2)),
    _entry("Rem5(Cor4.5.i)", Q, "enhanced", "order", "n odd", _odd, _q_odd_claims, _q_odd_poly),
    _entry("Rem5(Cor4.5.ii)", Q, "enhanced", "order", "n even", _even, _complete(4)),
    _entry("Rem5(Cor4.6)", SD, "enhanced", "order", "n >= 2", _any, _complete(8)),
    _entry("Cor5.5.i", D, "enhanced", "conjugacy", "n odd", _odd, _d_order_odd_claims, _d_order_odd_poly),
    _entry("Cor5.5.ii", D, "enhanced", "conjugacy", "n even", _even,
           lambda c: [(-(c.n / 2) * R2, c.n - 2), (-(c.n - 1) * R2, c.n - 2), (c.n * (c.n - 2) / 4, 1)],
           _cor55ii_poly, "third eigenvalue n(n-2)/4 carries no sqrt(2) factor"),
    _entry("Cor5.6.i", Q, "enhanced", "conjugacy", "n odd", _odd, _q_odd_claims, _q_odd_poly),
    _entry("Cor5.6.ii", Q, "enhanced", "conjugacy", "n even", _even,
           lambda c: [(-(4 * c.n - 1) * R2, 1), (-(2 * c.n - 1) * R2, 2 * c.n - 3),
                      (-(c.n + 1) * R2, 2 * c.n - 2), ((c.n * c.n - 1) * R2, 1)], _cor56ii_poly),
    _entry("Thm5.8.i", SD, "enhanced", "conjugacy", "n odd", _odd,
           lambda c: [(-(2 * c.n + 1) * R2, 2 * c.n - 1), (-(4 * c.n - 1) * R2, 4 * c.n - 3),
                      (-c.n * R2, 2 * c.n - 2)], _thm58_quotient),
    _entry("Thm5.8.i-proof", SD, "enhanced", "conjugacy", "n odd", _odd,
           lambda c: [(-(4 * c.n - 1) * R2, 4 * c.n - 3), (-(2 * c.n + 1) * R2, 2 * c.n - 1),
                      (-2 * c.n * R2, 2 * c.n - 1)], _thm58_quotient,
           "multiplicities and the value -2n sqrt(2) as named in the argument"),
    _entry("Thm5.8.ii", SD, "enhanced", "conjugacy", "n even", _even,
           lambda c: [(-(4 * c.n - 1) * R2, 4 * c.n - 3), (-(2 * c.n + 1) * R2, 2 * c.n - 1),
                      (-2 * c.n * R2, 2 * c.n - 1)], _thm58_quotient),
    # power graph
    _entry("Thm6.2", D, "power", "equality", "n >= 3", _any,
           _power_d_claims("independent"), _power_d_quotient("independent")),
    _entry("Thm6.3", Q, "power", "equality", "n >= 2", _any,
           lambda c: [(-3 * R2, c.n, AT_LEAST)]),
    _entry("Thm6.4", SD, "power", "equality", "n >= 2", _any,
           lambda c: [(0.0, 2 * c.n - 1, AT_LEAST), (-3 * R2, 2 * c.n - 1, AT_LEAST)],
           suspect="both bounds 2n-1; the pairing with 'respectively' is ambiguous"),
    _entry("Thm6.4-stated", SD, "power", "equality", "n >= 2", _any,
           lambda c: [(0.0, c.n, AT_LEAST), (-3 * R2, 2 * c.n - 1, AT_LEAST)],
           suspect="0 paired with n and -3 sqrt(2) with 2n-1 in the order written"),
    _entry("Thm6.4-swapped", SD, "power", "equality", "n >= 2", _any,
           lambda c: [(0.0, 2 * c.n - 1, AT_LEAST), (-3 * R2, c.n, AT_LEAST)]),
    _entry("Thm6.5.i", D, "power", "order", "n odd", _odd,
           _power_d_claims("clique"), _power_d_quotient("clique")),
    _entry("Thm6.5.ii", D, "power", "order", "n even", _even, _thm65ii_claims, _thm65ii_quotient),
    _entry("Thm6.6.i", Q, "power", "order", "n even", _even, _thm66i_claims(False),
           suspect="rotation set C read literally, so it overlaps the order-4 clique"),
    _entry("Thm6.6.i-disjoint", Q, "power", "order", "n even", _even, _thm66i_claims(True)),
    _entry("Thm6.6.ii", Q, "power", "order", "n odd", _odd,
           lambda c: [(-(2 * c.n + 1) * R2, 2 * c.n - 1, AT_LEAST)]),
    _entry("Thm6.7", SD, "power", "order", "n >= 2", _any, _thm67_claims(False),
           suspect="rotation set C limited to exponents below 2n as written"),
    _entry("Thm6.7-fullrange", SD, "power", "order", "n >= 2", _any, _thm67_claims(True)),
    _entry("Thm6.8.i", D, "power", "conjugacy", "n odd", _odd,
           _power_d_claims("clique"), _power_d_quotient("clique")),
    _entry("Thm6.8.ii", D, "power", "conjugacy", "n even", _even,
           _power_d_claims("split"), _power_d_quotient("split")),
    _entry("Thm6.9.i", Q, "power", "conjugacy", "n even", _even,
           lambda c: [(-(c.n + 1) * R2, 2 * c.n - 2, AT_LEAST)]),
    _entry("Thm6.9.ii", Q, "power", "conjugacy", "n odd", _odd,
           lambda c: [(-(2 * c.n + 1) * R2, 2 * c.n - 1, AT_LEAST)]),
    _entry("Thm6.10.i", SD, "power", "conjugacy", "n odd", _odd,
           lambda c: [(-(2 * c.n + 1) * R2, 2 * c.n - 1, AT_LEAST), (-c.n * R2, 2 * c.n - 2, AT_LEAST)]),
    _entry("Thm6.10.ii", SD, "power", "conjugacy", "n even", _even,
           lambda c: [(-2 * c.n * R2, 2 * c.n - 1, AT_LEAST), (-(2 * c.n + 1) * R2, 2 * c.n - 1, AT_LEAST)]),
)

_BY_ID = {e.source_id: e for e in CATALOG}
assert len(_BY_ID) == len(CATALOG), "duplicate catalog identifiers"


def covered_cells() -> list[tuple[str, str, str]]:
    seen = []
    for e in CATALOG:
        key = (e.family.value, e.kind, e.relation)
        if key not in seen:
            seen.append(key)
    return seen


def _normalize(family, kind: str, relation: str) -> tuple[Family, str, str]:
    fam = parse_family(family)
    if kind not in KINDS:
        raise ValueError(f"unknown graph kind {kind!r}; expected one of {list(KINDS)}")
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}; expected one of {list(RELATIONS)}")
    return fam, kind, relation


def _matching(family, kind, relation, n) -> list[CatalogEntry]:
    fam, kind, relation = _normalize(family, kind, relation)
    GroupSpec(fam, n)  # range check
    hits = [e for e in CATALOG if e.cell == (fam, kind, relation) and e.applies(n)]
    if not hits:
        cells = ", ".join("/".join(c) for c in covered_cells())
        raise CatalogMiss(f"no catalog entry for {fam.value}/{kind}/{relation} at n={n}; covered cells: {cells}")
    return hits


def predict_all(family, kind: str, relation: str, n: int) -> list[ClosedFormPrediction]:
    """Every reading the catalog holds for this cell and ``n``."""
    hits = _matching(family, kind, relation, n)
    ctx = FormulaContext(hits[0].family, kind, relation, n)
    return [e.evaluate(n, ctx) for e in hits]


def predict(family, kind: str, relation: str, n: int) -> ClosedFormPrediction:
    """The first (headline) reading for this cell."""
    hits = _matching(family, kind, relation, n)
    return hits[0].evaluate(n)


def quotient_spec(source_id: str, n: int) -> np.ndarray:
    try:
        entry = _BY_ID[source_id]
    except KeyError:
        raise CatalogMiss(f"unknown source id {source_id!r}") from None
    GroupSpec(entry.family, n)
    if not entry.applies(n):
        raise CatalogMiss(f"{source_id} does not apply at n={n} ({entry.applicability})")
    res = entry.evaluate(n).residual
    if not isinstance(res, QuotientSpec):
        raise CatalogMiss(f"{source_id} carries no quotient matrix")
    return res.matrix


def entry(source_id: str) -> CatalogEntry:
    try:
        return _BY_ID[source_id]
    except KeyError:
        raise CatalogMiss(f"unknown source id {source_id!r}") from None


# ---------------------------------------------------------------- star-shaped joins of cliques


def join_root_pair(l: int, m: int, k: int) -> tuple[float, float]:
    """Closed-form roots y1 >= y2 for K_{1,k-1}[K_l, K_m, ..., K_m]."""
    n = l + (k - 1) * m
    d1, d2 = n - 1, l + m - 1
    s = (l - 1) * d1 * R2 + (m - 1) * d2 * R2
    diff = (l - 1) * d1 * R2 - (m - 1) * d2 * R2
    root = math.sqrt(diff * diff + 4 * l * m * (k - 1) * (d1 * d1 + d2 * d2))
    return (s + root) / 2, (s - root) / 2


def join_quotient(l: int, m: int, k: int) -> np.ndarray:
    """2x2 quotient over the center clique and the union of the leaf cliques."""
    n = l + (k - 1) * m
    d1, d2 = n - 1, l + m - 1
    w = math.hypot(d1, d2)
    return np.array([
        [(l - 1) * d1 * R2, (k - 1) * m * w],
        [l * w, (m - 1) * d2 * R2],
    ])


def join_spectrum_claims(l: int, m: int, k: int) -> list[SpectralClaim]:
    n = l + (k - 1) * m
    d2 = l + m - 1
    y1, y2 = join_root_pair(l, m, k)
    raw = [
        (-(n - 1) * R2, l - 1),
        (-d2 * R2, m * k - k - m + 1),
        ((m - 1) * d2 * R2, k - 2),
        (y1, 1),
        (y2, 1),
    ]
    return [SpectralClaim(v, c) for v, c in raw if c > 0]


# ---------------------------------------------------------------- export


def export_catalog(n: int | None = None) -> list[dict]:
    """Structured dump of the catalog, instantiated at ``n`` where applicable."""
    out = []
    for e in CATALOG:
        item = {
            "sourceId": e.source_id,
            "family": e.family.value,
            "kind": e.kind,
            "relation": e.relation,
            "applicability": e.applicability,
            "suspect": bool(e.suspect),
            "note": e.suspect,
        }
        if n is not None:
            if n >= e.family.min_n and e.applies(n):
                pred = e.evaluate(n)
                item["instance"] = pred.to_dict()
            else:
                item["instance"] = None
        out.append(item)
    return out


def audit_catalog(n_values: Sequence[int] = range(2, 9)) -> list[dict]:
    """Count and trace checks for every entry, without building any spectrum."""
    findings = []
    for e in CATALOG:
        for n in n_values:
            if n < e.family.min_n or not e.applies(n):
                continue
            problems = e.evaluate(n).self_consistency(e.family.order(n))
            if problems:
                findings.append({"sourceId": e.source_id, "n": n, "problems": problems})
    return findings
