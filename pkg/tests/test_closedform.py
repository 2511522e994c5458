import math

import numpy as np
import pytest

from sombor_super import (
    CatalogMiss,
    Complete,
    JoinSkeleton,
    cluster_spectrum,
    divisor_structure,
    eigen_sym,
    euler_phi,
    generalized_join,
    is_isomorphic,
    make_group,
    power_graph,
    predict,
    predict_all,
    quotient_spec,
    sombor_matrix,
)
from sombor_super import closedform as cf
from sombor_super.graphs import star_graph
from sombor_super.verify import _power_d_decomposition
from conftest import R2

QUOTIENT_IDS = ["Thm5.4", "Thm5.8.i", "Thm5.8.ii", "Thm6.2", "Thm6.5.i", "Thm6.5.ii", "Thm6.8.i", "Thm6.8.ii"]


@pytest.mark.parametrize("n,phi", [(1, 1), (6, 2), (12, 4), (13, 12), (36, 12)])
def test_euler_phi(n, phi):
    assert euler_phi(n) == phi


def test_euler_phi_matches_count():
    for n in range(1, 60):
        assert euler_phi(n) == sum(math.gcd(n, k) == 1 for k in range(1, n + 1))
    with pytest.raises(ValueError):
        euler_phi(0)


def test_divisor_structure():
    six = divisor_structure(6)
    assert six.divisors == (2, 3) and six.phi == (1, 2) and six.skeleton.edge_count == 0
    twelve = divisor_structure(12)
    assert twelve.divisors == (2, 3, 4, 6)
    edges = {(twelve.divisors[i], twelve.divisors[j]) for i, j in twelve.skeleton.edges()}
    assert edges == {(2, 4), (2, 6), (3, 6)}
    prime = divisor_structure(7)
    assert prime.divisors == () and prime.skeleton.vertex_count == 0


@pytest.mark.parametrize("n", range(3, 11))
def test_dihedral_power_decomposition(n):
    assert is_isomorphic(_power_d_decomposition(n), power_graph(make_group(("D", n))))


@pytest.mark.parametrize("n", [2, 3, 5])
def test_semidihedral_commuting_order_prediction(n):
    p = predict("SD", "commuting", "order", n)
    m = 8 * n - 1
    assert p.residual is None
    got = {(round(c.value, 9), c.multiplicity, c.kind) for c in p.claims}
    assert got == {(round(-m * R2, 9), m, cf.EXACT), (round(m * m * R2, 9), 1, cf.EXACT)}
    assert p.self_consistency(8 * n) == []


def test_dihedral_commuting_equality_n3():
    p = predict("D", "commuting", "equality", 3)
    assert p.source_id == "Cor4.1.i"
    claims = sorted((c.value, c.multiplicity) for c in p.claims)
    assert claims == [(pytest.approx(-2 * R2), 1), (0.0, 2)]
    assert np.allclose(p.residual.coeffs, [1, -2 * R2, -136, 156 * R2])
    assert p.self_consistency(6) == []


@pytest.mark.parametrize("n", [3, 5, 7])
def test_cubic_moments_match_matrix(n):
    p = predict("D", "commuting", "equality", n)
    c = p.residual.coeffs
    exact_trace = sum(x.value * x.multiplicity for x in p.claims)
    exact_square = sum(x.value ** 2 * x.multiplicity for x in p.claims)
    g = make_group(("D", n))
    s = sombor_matrix(cf.build_super_graph(g, "commuting", "equality"))
    # Newton identities: the cubic's roots carry the remaining trace and Frobenius mass
    assert -c[1] == pytest.approx(-exact_trace, abs=1e-9)
    assert c[1] ** 2 - 2 * c[2] == pytest.approx(float(np.sum(s * s)) - exact_square, rel=1e-12)


@pytest.mark.parametrize("n", [2, 3, 6])
def test_quaternion_power_is_lower_bound_only(n):
    p = predict("Q", "power", "equality", n)
    assert p.residual is None
    assert [(c.multiplicity, c.kind) for c in p.claims] == [(n, cf.AT_LEAST)]
    assert p.claims[0].value == pytest.approx(-3 * R2)


def test_quotient_spec_examples():
    q = quotient_spec("Thm5.4", 2)
    assert q[0, 0] == 0 and q[1, 1] == 0
    assert q[0, 1] == pytest.approx(math.hypot(15, 11))
    assert quotient_spec("Thm5.8.ii", 2)[-1, -1] == pytest.approx(12 * R2)


@pytest.mark.parametrize("sid", QUOTIENT_IDS)
def test_quotient_dimensions(sid):
    e = cf.entry(sid)
    n = next(k for k in range(e.family.min_n, 12) if e.applies(k))
    pred = e.evaluate(n)
    q = quotient_spec(sid, n)
    assert q.shape == (pred.residual.dim, pred.residual.dim) == (len(pred.residual.rows),) * 2


def test_quotient_spec_errors():
    with pytest.raises(CatalogMiss):
        quotient_spec("Thm9.9", 3)
    with pytest.raises(CatalogMiss):
        quotient_spec("Cor4.6", 3)
    with pytest.raises(CatalogMiss):
        quotient_spec("Thm5.8.ii", 3)


def test_catalog_miss_and_range():
    with pytest.raises(CatalogMiss):
        predict("Z", "power", "order", 5)
    with pytest.raises(ValueError):
        predict("D", "power", "order", 2)
    with pytest.raises(ValueError):
        predict("D", "cayley", "order", 4)


def test_every_cell_covered_for_headline_families():
    cells = set(cf.covered_cells())
    for fam in ("D", "Q", "SD"):
        for kind in cf.KINDS:
            for rel in cf.RELATIONS:
                assert (fam, kind, rel) in cells


def test_every_entry_applies_somewhere():
    for e in cf.CATALOG:
        assert any(e.applies(n) for n in range(e.family.min_n, e.family.min_n + 8)), e.source_id


def test_catalog_audit_flags_only_the_overcounted_reading():
    findings = cf.audit_catalog(range(2, 9))
    assert {f["sourceId"] for f in findings} == {"Thm5.8.i-proof"}
    for f in findings:
        assert f"graph order {8 * f['n']}" in f["problems"][0]


def test_predictions_are_consistent_or_suspect():
    for e in cf.CATALOG:
        for n in range(e.family.min_n, 9):
            if not e.applies(n):
                continue
            pred = e.evaluate(n)
            if pred.self_consistency(e.family.order(n)):
                assert pred.suspect, (e.source_id, n)


def test_predict_all_lists_alternative_readings():
    ids = [p.source_id for p in predict_all("SD", "power", "equality", 2)]
    assert ids == ["Thm6.4", "Thm6.4-stated", "Thm6.4-swapped"]
    assert predict("SD", "power", "equality", 2).source_id == ids[0]


@pytest.mark.parametrize("l,m,k", [(1, 2, 3), (2, 2, 4), (3, 1, 5)])
def test_join_root_pair(l, m, k):
    y1, y2 = cf.join_root_pair(l, m, k)
    q = np.linalg.eigvals(cf.join_quotient(l, m, k)).real
    scale = max(1.0, abs(y1), abs(y2))
    assert sorted(q) == [pytest.approx(y2, abs=1e-8 * scale), pytest.approx(y1, abs=1e-8 * scale)]


@pytest.mark.parametrize("l,m,k", [(1, 2, 3), (2, 2, 4), (3, 1, 5), (2, 3, 3)])
def test_join_spectrum_matches_oracle(l, m, k):
    join = generalized_join(JoinSkeleton(star_graph(k - 1), [Complete(l)] + [Complete(m)] * (k - 1)))
    eigs = eigen_sym(sombor_matrix(join))
    claims = cf.join_spectrum_claims(l, m, k)
    assert sum(c.multiplicity for c in claims) == join.vertex_count
    got = sorted(x for c in claims for x in [c.value] * c.multiplicity)
    assert np.allclose(got, eigs, atol=1e-8 * max(1.0, max(map(abs, eigs))))


def test_export_catalog_shape():
    items = cf.export_catalog(4)
    assert len(items) == len(cf.CATALOG)
    for item in items:
        assert set(item) == {"sourceId", "family", "kind", "relation", "applicability", "suspect", "note", "instance"}
        if item["instance"] is not None:
            assert item["instance"]["n"] == 4
    assert "instance" not in cf.export_catalog()[0]
