import pytest
from hypothesis import given, settings, strategies as st

from sombor_super import (
    Family,
    GroupElement,
    GroupSpec,
    ParameterRangeError,
    VertexPartition,
    make_group,
    parse_family,
)
from conftest import index_of, names

SMALL = [("D", n) for n in range(3, 9)] + [("Q", n) for n in range(2, 9)] + \
        [("SD", n) for n in range(2, 9)] + [("Z", n) for n in range(1, 13)]


@pytest.mark.parametrize("fam,n,order", [("D", 3, 6), ("Q", 2, 8), ("SD", 2, 16), ("Z", 7, 7), ("D", 10, 20)])
def test_order(group, fam, n, order):
    g = group(fam, n)
    assert g.order == order == len(g.elements)


@pytest.mark.parametrize("fam,n", [("D", 2), ("D", 0), ("Q", 1), ("SD", 1), ("Z", 0)])
def test_rejects_small_parameters(fam, n):
    with pytest.raises(ParameterRangeError):
        GroupSpec(parse_family(fam), n)


def test_rejects_huge_groups():
    with pytest.raises(ParameterRangeError):
        GroupSpec(Family.SEMIDIHEDRAL, 513)
    assert GroupSpec(Family.SEMIDIHEDRAL, 512).order == 4096


def test_unknown_family():
    with pytest.raises(ValueError):
        parse_family("S")


def test_canonical_ordering(group):
    g = group("Q", 3)
    assert [str(x) for x in g.elements[:3]] == ["e", "a", "a^2"]
    assert g.elements[6] == GroupElement(0, True)
    assert g.identity_index == 0
    assert all(not x.refl for x in g.elements[:6]) and all(x.refl for x in g.elements[6:])


def test_dihedral_relation(group):
    g = group("D", 3)
    a, b = g.element(1), g.element(0, True)
    assert g.multiply(b, a) == g.element(2, True)


def test_quaternion_relations(group):
    g = group("Q", 2)
    a, b = g.element(1), g.element(0, True)
    ab = g.multiply(a, b)
    assert g.power(b, 2) == g.element(2)
    assert g.multiply(ab, ab) == g.element(2)


def test_semidihedral_relation(group):
    g = group("SD", 2)
    a, b = g.element(1), g.element(0, True)
    assert g.multiply(b, a) == g.element(3, True)
    assert g.power(b, 2) == g.identity


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_semidihedral_rewrite_rule(group, n):
    g = group("SD", n)
    b = g.element(0, True)
    for i in range(4 * n):
        want = (4 * n - i) % (4 * n) if i % 2 == 0 else (2 * n - i) % (4 * n)
        assert g.multiply(b, g.element(i)) == g.element(want, True)


@pytest.mark.parametrize("fam,n", [c for c in SMALL if make_group(c).order <= 64])
def test_axioms(group, fam, n):
    assert all(group(fam, n).audit_axioms().values())


@pytest.mark.parametrize("fam,n", SMALL)
def test_identity_is_neutral(group, fam, n):
    g = group(fam, n)
    e = g.identity
    for x in g.elements:
        assert g.multiply(e, x) == x == g.multiply(x, e)
        assert g.multiply(x, g.inverse(x)) == e


@pytest.mark.parametrize("n", range(2, 7))
def test_quaternion_reflections_have_order_four(group, n):
    g = group("Q", n)
    assert {g.element_order(x) for x in g.elements if x.refl} == {4}


@pytest.mark.parametrize("n", range(2, 7))
def test_semidihedral_reflection_orders(group, n):
    g = group("SD", n)
    for x in g.elements:
        if x.refl:
            assert g.element_order(x) == (2 if x.rot % 2 == 0 else 4)


def test_identity_order(group):
    assert group("SD", 3).element_order(group("SD", 3).identity) == 1


@pytest.mark.parametrize("n", [3, 4, 7])
def test_dihedral_reflection_subgroups(group, n):
    g = group("D", n)
    for i in range(n):
        assert names(g, g.cyclic_subgroup(g.element(i, True))) == {"e", g.element(i, True).name()}


@pytest.mark.parametrize("n", [2, 3])
def test_semidihedral_odd_reflection_subgroup(group, n):
    g = group("SD", n)
    for j in range(2 * n):
        x = g.element(2 * j + 1, True)
        want = {"e", g.element(2 * n).name(), x.name(), g.element(2 * n + 2 * j + 1, True).name()}
        assert names(g, g.cyclic_subgroup(x)) == want


def test_trivial_subgroup(group):
    g = group("D", 5)
    assert g.cyclic_subgroup(g.identity) == frozenset({0})


def _class_names(g, partition):
    labels = g.labels()
    return {frozenset(labels[i] for i in c) for c in partition.classes}


def test_conjugacy_d6(group):
    g = group("D", 3)
    assert _class_names(g, g.conjugacy_partition()) == {
        frozenset({"e"}), frozenset({"a", "a^2"}), frozenset({"b", "ab", "a^2b"})}


def test_conjugacy_q8(group):
    g = group("Q", 2)
    assert _class_names(g, g.conjugacy_partition()) == {
        frozenset({"e"}), frozenset({"a^2"}), frozenset({"a", "a^3"}),
        frozenset({"b", "a^2b"}), frozenset({"ab", "a^3b"})}


def test_cyclic_conjugacy_is_discrete(group):
    assert group("Z", 9).conjugacy_partition().sizes() == [1] * 9


def test_order_partition_d6(group):
    g = group("D", 3)
    assert _class_names(g, g.order_partition()) == {
        frozenset({"e"}), frozenset({"a", "a^2"}), frozenset({"b", "ab", "a^2b"})}


def test_order_partition_z2(group):
    assert group("Z", 2).order_partition().sizes() == [1, 1]


def test_sd16_involutions(group):
    g = group("SD", 2)
    cls = next(c for c in g.order_partition().classes if g.orders[c[0]] == 2)
    assert names(g, cls) == {"a^4", "b", "a^2b", "a^4b", "a^6b"}


@pytest.mark.parametrize("n", [2, 4, 6])
def test_semidihedral_center_even(group, n):
    g = group("SD", n)
    assert names(g, g.center()) == {"e", f"a^{2 * n}"}


@pytest.mark.parametrize("n", [3, 5])
def test_semidihedral_center_odd(group, n):
    g = group("SD", n)
    assert names(g, g.center()) == {"e", f"a^{2 * n}", f"a^{n}", f"a^{3 * n}"}


def test_cyclic_center(group):
    assert len(group("Z", 6).center()) == 6


@pytest.mark.parametrize("fam,n", SMALL)
def test_conjugacy_invariants(group, fam, n):
    g = group(fam, n)
    p = g.conjugacy_partition()
    assert sum(p.sizes()) == g.order
    assert all(g.order % s == 0 for s in p.sizes())
    assert {c[0] for c in p.classes if len(c) == 1} == set(g.center())
    assert p.refines(g.order_partition())


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_dihedral_odd_class_counts(group, n):
    sizes = sorted(group("D", n).conjugacy_partition().sizes())
    assert sizes == [1] + [2] * ((n - 1) // 2) + [n]


def test_partition_validation():
    with pytest.raises(ValueError):
        VertexPartition([[0, 1], [1, 2]])
    with pytest.raises(ValueError):
        VertexPartition([[0], [2]])
    with pytest.raises(ValueError):
        VertexPartition([[0], []])
    p = VertexPartition([[3, 1], [0, 2]])
    assert p.classes == ((0, 2), (1, 3))


families = st.sampled_from([("D", 3), ("Q", 2), ("SD", 2), ("Z", 1)]).flatmap(
    lambda base: st.integers(base[1], base[1] + 5).map(lambda n: (base[0], n)))


@settings(max_examples=60, deadline=None)
@given(families, st.data())
def test_random_triples_associate(cell, data):
    g = make_group(cell)
    pick = st.sampled_from(g.elements)
    x, y, z = data.draw(pick), data.draw(pick), data.draw(pick)
    assert g.multiply(g.multiply(x, y), z) == g.multiply(x, g.multiply(y, z))


@settings(max_examples=60, deadline=None)
@given(families, st.data())
def test_conjugates_share_order(cell, data):
    g = make_group(cell)
    pick = st.sampled_from(g.elements)
    x, y = data.draw(pick), data.draw(pick)
    conj = g.multiply(g.multiply(y, x), g.inverse(y))
    assert g.element_order(conj) == g.element_order(x)
    assert len(g.cyclic_subgroup(x)) == g.element_order(x)
