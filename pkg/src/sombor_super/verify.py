"""Compare catalog predictions with numerically computed Sombor spectra."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import closedform as cf
from .graphs import (
    Complete,
    JoinSkeleton,
    SimpleGraph,
    base_graph,
    compressed_graph,
    generalized_join,
    super_graph,
)
from .groups import Family, GroupSpec, ParameterRangeError, make_group, parse_family
from .isomorphism import MAX_ISO_VERTICES, is_isomorphic
from .spectral import (
    DEFAULT_EIGEN_TOL,
    SpectrumSummary,
    char_poly,
    cluster_spectrum,
    default_cluster_tol,
    eigen_sym,
    eval_poly,
    poly_scale,
    sombor_matrix,
    spectral_radius,
)

__all__ = [
    "PASS",
    "FLAGGED",
    "NOT_COVERED",
    "VerificationTask",
    "VerificationReport",
    "run_task",
    "run_cell",
    "run_suite",
    "flagged_keys",
    "structural_suite",
    "dumps",
    "round_sig",
    "smallest_singular_value",
    "DEFAULT_FAMILIES",
]

PASS, FLAGGED, NOT_COVERED = "Pass", "Flagged", "NotCovered"
MATCHED, SHORT, EXCESS, MISSING = "Matched", "MultiplicityShort", "MultiplicityExcess", "ValueMissing"
DEFAULT_FAMILIES = ("D", "Q", "SD")
SIG_DIGITS = 12


@dataclass(frozen=True)
class VerificationTask:
    family: Family
    kind: str
    relation: str
    n: int
    eigen_tol: float = DEFAULT_EIGEN_TOL
    cluster_tol: float | None = None
    match_tol: float | None = None
    poly_tol: float = 1e-6
    quotient_tol: float = 1e-7

    def __init__(self, family, kind, relation, n, eigen_tol=DEFAULT_EIGEN_TOL, cluster_tol=None,
                 match_tol=None, poly_tol=1e-6, quotient_tol=1e-7):
        fam = parse_family(family)
        GroupSpec(fam, n)
        if kind not in cf.KINDS:
            raise ValueError(f"unknown graph kind {kind!r}; expected one of {list(cf.KINDS)}")
        if relation not in cf.RELATIONS:
            raise ValueError(f"unknown relation {relation!r}; expected one of {list(cf.RELATIONS)}")
        for name, val in (("eigen_tol", eigen_tol), ("cluster_tol", cluster_tol), ("match_tol", match_tol),
                          ("poly_tol", poly_tol), ("quotient_tol", quotient_tol)):
            if val is not None and not val > 0:
                raise ValueError(f"{name} must be positive")
        for name, val in (("family", fam), ("kind", kind), ("relation", relation), ("n", n),
                          ("eigen_tol", eigen_tol), ("cluster_tol", cluster_tol), ("match_tol", match_tol),
                          ("poly_tol", poly_tol), ("quotient_tol", quotient_tol)):
            object.__setattr__(self, name, val)

    @property
    def key(self) -> tuple:
        return (self.family.value, self.kind, self.relation, self.n)

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "kind": self.kind,
            "relation": self.relation,
            "n": self.n,
            "tolerances": {
                "eigen": self.eigen_tol,
                "cluster": self.cluster_tol,
                "match": self.match_tol,
                "polynomial": self.poly_tol,
                "quotient": self.quotient_tol,
            },
        }


@dataclass
class VerificationReport:
    task: VerificationTask
    graph_stats: dict
    spectrum: SpectrumSummary
    source_id: str | None
    claim_verdicts: list[dict] = field(default_factory=list)
    residual_verdict: dict | None = None
    status: str = NOT_COVERED
    suspect: bool = False
    note: str = ""
    diagnostics: dict = field(default_factory=dict)

    @property
    def flag_key(self) -> tuple:
        return (self.source_id,) + self.task.key

    def to_dict(self) -> dict:
        return {
            "task": self.task.to_dict(),
            "graphStats": self.graph_stats,
            "spectrum": self.spectrum.to_dict(),
            "sourceId": self.source_id,
            "suspect": self.suspect,
            "note": self.note,
            "claimVerdicts": self.claim_verdicts,
            "residualVerdict": self.residual_verdict,
            "diagnostics": self.diagnostics,
            "status": self.status,
        }


# ---------------------------------------------------------------- serialization


def round_sig(obj, digits: int = SIG_DIGITS):
    """Recursively round floats to ``digits`` significant digits."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return obj
        r = float(f"{obj:.{digits}g}")
        return 0.0 if r == 0 else r
    if isinstance(obj, dict):
        return {k: round_sig(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_sig(v, digits) for v in obj]
    if isinstance(obj, (np.floating,)):
        return round_sig(float(obj), digits)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    if isinstance(obj, VerificationReport):
        obj = obj.to_dict()
    return json.dumps(round_sig(obj), indent=2, sort_keys=False)


# ---------------------------------------------------------------- oracle


@lru_cache(maxsize=256)
def _oracle(family: Family, kind: str, relation: str, n: int, eigen_tol: float):
    g = make_group(GroupSpec(family, n))
    graph = super_graph(base_graph(g, kind), cf.relation_partition(g, relation))
    s = sombor_matrix(graph)
    eigs = tuple(eigen_sym(s, eigen_tol))
    return graph, s, eigs


def _graph_stats(graph: SimpleGraph) -> dict:
    return {
        "order": graph.vertex_count,
        "size": graph.edge_count,
        "degreeSequence": sorted(graph.degrees().tolist(), reverse=True),
    }


def smallest_singular_value(a: np.ndarray) -> float:
    """sigma_min(a) from the symmetric embedding [[0, a], [a^T, 0]]."""
    a = np.asarray(a, dtype=float)
    k = a.shape[0]
    big = np.zeros((2 * k, 2 * k))
    big[:k, k:] = a
    big[k:, :k] = a.T
    vals = eigen_sym(big, 1e-15)
    return min(abs(v) for v in vals)


# ---------------------------------------------------------------- claim matching


def _merge_claims(claims: Sequence[cf.SpectralClaim], tol: float) -> list[cf.SpectralClaim]:
    merged: list[cf.SpectralClaim] = []
    for c in sorted(claims, key=lambda c: (c.kind, c.value)):
        if merged and merged[-1].kind == c.kind and abs(merged[-1].value - c.value) <= tol:
            last = merged.pop()
            merged.append(cf.SpectralClaim(last.value, last.multiplicity + c.multiplicity, c.kind))
        else:
            merged.append(c)
    return sorted(merged, key=lambda c: (c.value, c.kind))


def _match_claims(pairs: list[tuple[float, int]], claims, match_tol: float):
    """Greedy nearest-value matching; returns verdicts and the leftover multiset."""
    remaining = [k for _, k in pairs]
    used = [False] * len(pairs)
    verdicts = []
    for c in claims:
        best, best_dist = None, None
        for i, (v, _) in enumerate(pairs):
            if used[i]:
                continue
            dist = abs(v - c.value)
            if dist <= match_tol and (best_dist is None or dist < best_dist):
                best, best_dist = i, dist
        row = {"value": c.value, "multiplicity": c.multiplicity, "kind": c.kind,
               "measuredValue": None, "measuredMultiplicity": 0}
        if best is None:
            row["verdict"] = MISSING
            verdicts.append(row)
            continue
        used[best] = True
        measured = pairs[best][1]
        row["measuredValue"] = pairs[best][0]
        row["measuredMultiplicity"] = measured
        if c.kind == cf.AT_LEAST:
            row["verdict"] = MATCHED if measured >= c.multiplicity else SHORT
            remaining[best] = 0
        elif measured == c.multiplicity:
            row["verdict"] = MATCHED
            remaining[best] = 0
        elif measured < c.multiplicity:
            row["verdict"] = SHORT
            remaining[best] = 0
        else:
            row["verdict"] = EXCESS
            remaining[best] = measured - c.multiplicity
        verdicts.append(row)
    leftover: list[float] = []
    for (v, _), k in zip(pairs, remaining):
        leftover.extend([v] * k)
    return verdicts, leftover


def _product_coeffs(roots: Sequence[float]) -> np.ndarray:
    out = np.array([1.0])
    for r in roots:
        out = np.convolve(out, [1.0, -r])
    return out


def _coefficient_gap(coeffs: Sequence[float], roots: Sequence[float], scale: float) -> float:
    """max_k |c_k - e_k| / (binom(d,k) scale^k), comparing against prod(x - root)."""
    target = _product_coeffs(roots)
    c = np.asarray(coeffs, dtype=float)
    if len(c) != len(target):
        return math.inf
    d = len(c) - 1
    s = max(scale, 1.0)
    return max(
        (abs(c[k] - target[k]) / (math.comb(d, k) * s**k) for k in range(d + 1)),
        default=0.0,
    )


def _check_polynomial(res: cf.PolynomialCoeffs, leftover: list[float], task: VerificationTask, scale: float) -> dict:
    coeffs = list(res.coeffs)
    out = {"type": "PolynomialCoeffs", "degree": res.degree, "leftoverCount": len(leftover)}
    if res.degree != len(leftover):
        out.update(ok=False, reason="residual degree differs from the number of unexplained eigenvalues")
        return out
    residuals = [abs(eval_poly(coeffs, x)) / poly_scale(coeffs, x) for x in leftover]
    worst = max(residuals, default=0.0)
    gap = _coefficient_gap(coeffs, leftover, scale)
    out.update(
        leftover=leftover,
        residuals=residuals,
        maxResidual=worst,
        coefficientGap=gap,
        ok=worst < task.poly_tol and gap < task.poly_tol,
    )
    if not out["ok"]:
        out["reason"] = "leftover eigenvalues do not annihilate the residual polynomial"
    return out


def _check_quotient(res: cf.QuotientSpec, leftover: list[float], task: VerificationTask, scale: float) -> dict:
    q = res.matrix
    out = {"type": "QuotientSpec", "dim": res.dim, "leftoverCount": len(leftover)}
    if res.dim != len(leftover):
        out.update(ok=False, reason="quotient dimension differs from the number of unexplained eigenvalues")
        return out
    eye = np.eye(res.dim)
    sigmas = [smallest_singular_value(q - lam * eye) for lam in leftover]
    worst = max(sigmas, default=0.0)
    tol = task.quotient_tol * max(scale, 1.0)
    gap = _coefficient_gap(char_poly(q), leftover, scale)
    out.update(
        leftover=leftover,
        backwardErrors=sigmas,
        maxBackwardError=worst,
        coefficientGap=gap,
        ok=worst <= tol and gap <= task.quotient_tol,
    )
    if not out["ok"]:
        out["reason"] = "leftover eigenvalues are not the quotient's eigenvalues"
    return out


def _min_gap(values: Sequence[float]) -> float:
    return min((b - a for a, b in zip(values, values[1:])), default=math.inf)


def _verify_prediction(task, graph, eigs, summary, pred: cf.ClosedFormPrediction, scale, match_tol):
    report = VerificationReport(task, _graph_stats(graph), summary, pred.source_id,
                                suspect=pred.suspect, note=pred.note)
    claims = _merge_claims(pred.claims, match_tol)
    verdicts, leftover = _match_claims(list(summary.pairs), claims, match_tol)
    report.claim_verdicts = verdicts
    if pred.residual is None:
        report.residual_verdict = {"type": None, "leftoverCount": len(leftover),
                                   "ok": not leftover or any(c.kind == cf.AT_LEAST for c in claims)}
        if any(c.kind == cf.AT_LEAST for c in claims):
            report.residual_verdict["note"] = "lower-bound claims leave the rest of the spectrum unconstrained"
        elif leftover:
            report.residual_verdict["reason"] = "eigenvalues remain that no claim accounts for"
    elif isinstance(pred.residual, cf.PolynomialCoeffs):
        report.residual_verdict = _check_polynomial(pred.residual, leftover, task, scale)
    else:
        report.residual_verdict = _check_quotient(pred.residual, leftover, task, scale)
    residual_ok = bool(report.residual_verdict["ok"])
    explained_excess = residual_ok and pred.residual is not None
    claims_ok = all(
        v["verdict"] == MATCHED or (v["verdict"] == EXCESS and explained_excess)
        for v in verdicts
    )
    report.status = PASS if claims_ok and residual_ok else FLAGGED
    gap = _min_gap(summary.values)
    report.diagnostics = {
        "scale": scale,
        "matchTol": match_tol,
        "minClusterGap": gap if math.isfinite(gap) else None,
        "gapsExceedTwiceMatchTol": gap > 2 * match_tol,
        "traceResidual": float(sum(eigs)),
        "selfConsistency": pred.self_consistency(graph.vertex_count),
    }
    return report


def run_cell(task: VerificationTask) -> list[VerificationReport]:
    """One report per catalog reading that applies to the task's cell."""
    graph, _, eigs = _oracle(task.family, task.kind, task.relation, task.n, task.eigen_tol)
    scale = max(spectral_radius(eigs), 1.0)
    cluster_tol = task.cluster_tol if task.cluster_tol is not None else default_cluster_tol(eigs)
    match_tol = task.match_tol if task.match_tol is not None else 1e-6 * scale
    summary = cluster_spectrum(eigs, cluster_tol)
    try:
        preds = cf.predict_all(task.family, task.kind, task.relation, task.n)
    except cf.CatalogMiss as exc:
        report = VerificationReport(task, _graph_stats(graph), summary, None, status=NOT_COVERED, note=str(exc))
        return [report]
    return [_verify_prediction(task, graph, eigs, summary, p, scale, match_tol) for p in preds]


def run_task(task: VerificationTask) -> VerificationReport:
    """The report for the cell's headline reading."""
    return run_cell(task)[0]


def run_suite(families: Iterable = DEFAULT_FAMILIES, n_range: Iterable[int] = range(2, 7),
              kinds: Iterable[str] = cf.KINDS, relations: Iterable[str] = cf.RELATIONS,
              **tolerances) -> tuple[list[VerificationReport], dict]:
    reports: list[VerificationReport] = []
    ns = list(n_range)
    for fam in families:
        fam = parse_family(fam)
        for n in ns:
            if n < fam.min_n:
                continue
            for kind in kinds:
                for rel in relations:
                    reports.extend(run_cell(VerificationTask(fam, kind, rel, n, **tolerances)))
    summary = {
        "pass": sum(r.status == PASS for r in reports),
        "flagged": sum(r.status == FLAGGED for r in reports),
        "notCovered": sum(r.status == NOT_COVERED for r in reports),
    }
    return reports, summary


def flagged_keys(reports: Iterable[VerificationReport]) -> list[list]:
    return sorted([list(r.flag_key) for r in reports if r.status == FLAGGED])


# ---------------------------------------------------------------- structural checks


@dataclass
class StructuralCheck:
    name: str
    family: str
    n: int
    ok: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"check": self.name, "family": self.family, "n": self.n, "ok": self.ok, "detail": self.detail}


def _conj_listing(g) -> list[frozenset[str]] | None:
    """Conjugacy classes as listed in the proofs, by element name."""
    fam, n = g.spec.family, g.spec.n
    name = lambda i, refl=False: g.element(i, refl).name()
    classes: list[set[str]] = [{"e"}]
    if fam is Family.DIHEDRAL:
        if n % 2:
            classes += [{name(i), name(-i)} for i in range(1, (n - 1) // 2 + 1)]
            classes.append({name(i, True) for i in range(n)})
        else:
            classes.append({name(n // 2)})
            classes += [{name(i), name(n - i)} for i in range(1, n // 2)]
            classes.append({name(2 * i, True) for i in range(n // 2)})
            classes.append({name(2 * i + 1, True) for i in range(n // 2)})
    elif fam is Family.QUATERNION:
        classes.append({name(n)})
        classes += [{name(i), name(-i)} for i in range(1, n)]
        classes.append({name(2 * i, True) for i in range(n)})
        classes.append({name(2 * i + 1, True) for i in range(n)})
    elif fam is Family.SEMIDIHEDRAL:
        m = 4 * n
        seen: set[int] = set()
        for i in range(m):
            if i in seen:
                continue
            partner = (-i) % m if i % 2 == 0 else (2 * n - i) % m
            seen |= {i, partner}
            classes.append({name(i), name(partner)})
        classes.remove({"e"})
        if n % 2:
            classes += [{name(4 * k + r, True) for k in range(n)} for r in range(4)]
        else:
            classes += [{name(2 * k + r, True) for k in range(2 * n)} for r in range(2)]
    else:
        return None
    return sorted((frozenset(c) for c in classes), key=sorted)


def _sd_enhanced_neighbourhoods(g, pe: SimpleGraph) -> list[str]:
    """Closed neighbourhoods in the enhanced power graph of SD."""
    n = g.spec.n
    m = 4 * n
    idx = lambda i, refl=False: g.index(g.element(i, refl))
    everything = set(range(g.order))
    rotations = {idx(i) for i in range(m)}
    odd_refl = {idx(2 * i + 1, True) for i in range(2 * n)}
    problems = []
    nb = pe.closed_neighborhood
    if nb(idx(0)) != everything:
        problems.append("N[e] is not the whole group")
    if nb(idx(2 * n)) != rotations | odd_refl:
        problems.append("N[a^2n] differs from <a> with the odd reflections")
    for i in range(1, m):
        if i != 2 * n and nb(idx(i)) != rotations:
            problems.append(f"N[a^{i}] differs from <a>")
    for i in range(2 * n):
        j = 2 * i + 1
        want = {idx(0), idx(2 * n), idx(j, True), idx(j + 2 * n, True)}
        if nb(idx(j, True)) != want:
            problems.append(f"N[a^{j}b] differs from {{e, a^2n, a^{j}b, a^{j + 2 * n}b}}")
    for i in range(2 * n):
        if nb(idx(2 * i, True)) != {idx(0), idx(2 * i, True)}:
            problems.append(f"N[a^{2 * i}b] differs from {{e, a^{2 * i}b}}")
    return problems


def _star_join(parts: Sequence) -> SimpleGraph:
    from .graphs import star_graph

    return generalized_join(JoinSkeleton(star_graph(len(parts) - 1), parts))


def _quoted_structures(fam: Family, n: int) -> list[tuple[str, str, str, SimpleGraph]]:
    """Generalized-join descriptions quoted in the arguments: (label, kind, relation, graph)."""
    from .graphs import Empty

    out = []
    if fam is Family.DIHEDRAL:
        if n % 2:
            out.append(("commuting = K_{1,2}[K1,K_{n-1},empty_n]", "commuting", "equality",
                        _star_join([Complete(1), Complete(n - 1), Empty(n)])))
        else:
            out.append(("commuting = K_{1,n/2+1}[K2,K_{n-2},K2...]", "commuting", "equality",
                        _star_join([Complete(2), Complete(n - 2)] + [Complete(2)] * (n // 2))))
        out.append(("enhanced = K_{1,2}[K1,K_{n-1},K1...]", "enhanced", "equality",
                    _star_join([Complete(1), Complete(n - 1)] + [Complete(1)] * n)))
    elif fam is Family.QUATERNION:
        parts = [Complete(2), Complete(2 * n - 2)] + [Complete(2)] * n
        out.append(("commuting = K_{1,n+1}[K2,K_{2n-2},K2...]", "commuting", "equality", _star_join(parts)))
        out.append(("enhanced = K_{1,n+1}[K2,K_{2n-2},K2...]", "enhanced", "equality", _star_join(parts)))
    return out


def _power_d_decomposition(n: int) -> SimpleGraph:
    """K1 v (K_phi(n) v divisor-join  U  empty_n) on the dihedral power graph."""
    ds = cf.divisor_structure(n)
    t = len(ds.divisors)
    k = 3 + t
    edges = [(0, i) for i in range(1, k)]
    edges += [(1, 2 + i) for i in range(t)]
    edges += [(2 + i, 2 + j) for i, j in ds.skeleton.edges()]
    from .graphs import Empty

    parts = [Complete(1), Complete(cf.euler_phi(n))] + [Complete(p) for p in ds.phi] + [Empty(n)]
    return generalized_join(JoinSkeleton(SimpleGraph.from_edges(k, edges), parts))


def _equal_degree_within(graph: SimpleGraph, classes) -> bool:
    deg = graph.degrees()
    return all(len({int(deg[v]) for v in c}) == 1 for c in classes)


def structural_suite(families: Iterable = DEFAULT_FAMILIES, n_range: Iterable[int] = range(2, 9)) -> dict:
    checks: list[StructuralCheck] = []

    def record(name, fam, n, ok, detail=""):
        checks.append(StructuralCheck(name, fam, n, bool(ok), detail))

    ns = list(n_range)
    for fam in families:
        fam = parse_family(fam)
        for n in ns:
            if n < fam.min_n:
                continue
            g = make_group(GroupSpec(fam, n))
            tag = fam.value
            if g.order <= 64:
                record("group axioms", tag, n, all(g.audit_axioms().values()))
            bases = {k: base_graph(g, k) for k in cf.KINDS}
            record("spanning chain power <= enhanced <= commuting", tag, n,
                   bases["power"].is_subgraph_of(bases["enhanced"])
                   and bases["enhanced"].is_subgraph_of(bases["commuting"]))
            partitions = {r: cf.relation_partition(g, r) for r in cf.RELATIONS}
            record("conjugacy refines order", tag, n, partitions["conjugacy"].refines(partitions["order"]))
            center = g.center()
            singles = {c[0] for c in partitions["conjugacy"] if len(c) == 1}
            record("singleton conjugacy classes are the center", tag, n, singles == set(center))
            listing = _conj_listing(g)
            if listing is not None:
                names = g.labels()
                got = sorted((frozenset(names[v] for v in c) for c in partitions["conjugacy"]), key=sorted)
                record("conjugacy classes match the listing", tag, n, got == listing)
            for kind, base in bases.items():
                record(f"{kind}: singleton super graph is the base", tag, n,
                       super_graph(base, partitions["equality"]) == base)
                for rel in ("order", "conjugacy"):
                    p = partitions[rel]
                    sup = super_graph(base, p)
                    label = f"{kind}/{rel}"
                    record(f"{label}: classes induce cliques", tag, n, all(sup.is_clique(c) for c in p))
                    record(f"{label}: equal degree within classes", tag, n, _equal_degree_within(sup, p))
                    comp = compressed_graph(base, p)
                    record(f"{label}: connected base gives connected compression", tag, n,
                           (not base.is_connected()) or comp.is_connected())
                    record(f"{label}: super graph contains the base", tag, n, base.is_subgraph_of(sup))
                    if g.order <= MAX_ISO_VERTICES:
                        join = generalized_join(JoinSkeleton(comp, [Complete(len(c)) for c in p]))
                        record(f"{label}: super graph is the clique join of its compression", tag, n,
                               is_isomorphic(sup, join))
                sub = super_graph(base, partitions["conjugacy"])
                record(f"{kind}: conjugacy super graph inside order super graph", tag, n,
                       sub.is_subgraph_of(super_graph(base, partitions["order"])))
            if fam is Family.SEMIDIHEDRAL:
                problems = _sd_enhanced_neighbourhoods(g, bases["enhanced"])
                record("enhanced neighbourhoods in SD", tag, n, not problems, "; ".join(problems[:3]))
            for label, kind, rel, expected in _quoted_structures(fam, n):
                if g.order <= MAX_ISO_VERTICES:
                    actual = super_graph(bases[kind], partitions[rel])
                    record(label, tag, n, is_isomorphic(actual, expected))
            if fam is Family.DIHEDRAL and g.order <= MAX_ISO_VERTICES:
                record("dihedral power graph divisor decomposition", tag, n,
                       is_isomorphic(bases["power"], _power_d_decomposition(n)))
    failures = [c for c in checks if not c.ok]
    return {
        "checks": [c.to_dict() for c in checks],
        "summary": {"total": len(checks), "passed": len(checks) - len(failures), "failed": len(failures)},
    }
