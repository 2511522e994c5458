"""Dihedral, generalized quaternion, semidihedral and cyclic groups.

Every element is stored in the normal form ``a^i b^e`` and products are
computed by rewriting with the presentation relations, so no Cayley table
is kept around.  Conjugacy classes, centers and order classes are found by
brute force over the whole group.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

__all__ = [
    "Family",
    "GroupSpec",
    "GroupElement",
    "FiniteGroup",
    "VertexPartition",
    "ParameterRangeError",
    "make_group",
    "parse_family",
]

MAX_GROUP_ORDER = 4096
AUDIT_ORDER_LIMIT = 64


class ParameterRangeError(ValueError):
    """Raised when a family parameter is outside its admissible range."""


class Family(enum.Enum):
    DIHEDRAL = "D"
    QUATERNION = "Q"
    SEMIDIHEDRAL = "SD"
    CYCLIC = "Z"

    @property
    def min_n(self) -> int:
        return _MIN_N[self]

    def order(self, n: int) -> int:
        return _ORDER_FACTOR[self] * n

    def rotation_order(self, n: int) -> int:
        return _ROT_FACTOR[self] * n


_MIN_N = {Family.DIHEDRAL: 3, Family.QUATERNION: 2, Family.SEMIDIHEDRAL: 2, Family.CYCLIC: 1}
_ORDER_FACTOR = {Family.DIHEDRAL: 2, Family.QUATERNION: 4, Family.SEMIDIHEDRAL: 8, Family.CYCLIC: 1}
_ROT_FACTOR = {Family.DIHEDRAL: 1, Family.QUATERNION: 2, Family.SEMIDIHEDRAL: 4, Family.CYCLIC: 1}

_ALIASES = {
    "d": Family.DIHEDRAL, "dihedral": Family.DIHEDRAL,
    "q": Family.QUATERNION, "quaternion": Family.QUATERNION, "generalizedquaternion": Family.QUATERNION,
    "sd": Family.SEMIDIHEDRAL, "semidihedral": Family.SEMIDIHEDRAL,
    "z": Family.CYCLIC, "cyclic": Family.CYCLIC,
}


def parse_family(code: str | Family) -> Family:
    if isinstance(code, Family):
        return code
    try:
        return _ALIASES[code.strip().lower().replace("_", "").replace("-", "")]
    except KeyError:
        raise ValueError(f"unknown group family {code!r}; expected one of D, Q, SD, Z") from None


@dataclass(frozen=True, order=True)
class GroupSpec:
    family: Family
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool):
            raise ParameterRangeError(f"n must be an integer, got {self.n!r}")
        if self.n < self.family.min_n:
            raise ParameterRangeError(
                f"{self.family.value}: n must be >= {self.family.min_n}, got {self.n}"
            )
        if self.order > MAX_GROUP_ORDER:
            raise ParameterRangeError(f"group order {self.order} exceeds {MAX_GROUP_ORDER}")

    @property
    def order(self) -> int:
        return self.family.order(self.n)

    @property
    def name(self) -> str:
        return {
            Family.DIHEDRAL: f"D{2 * self.n}",
            Family.QUATERNION: f"Q{4 * self.n}",
            Family.SEMIDIHEDRAL: f"SD{8 * self.n}",
            Family.CYCLIC: f"Z{self.n}",
        }[self.family]


@dataclass(frozen=True, order=True)
class GroupElement:
    """The element ``a^rot b^refl``; ``rot`` is already reduced."""

    rot: int
    refl: bool = False

    def name(self) -> str:
        if self.rot == 0:
            rot = "" if self.refl else "e"
        elif self.rot == 1:
            rot = "a"
        else:
            rot = f"a^{self.rot}"
        return rot + ("b" if self.refl else "")

    def __str__(self) -> str:
        return self.name()


@dataclass(frozen=True)
class VertexPartition:
    """Disjoint non-empty classes covering ``range(size)``.

    Classes are stored sorted, and ordered by their smallest member.
    """

    classes: tuple[tuple[int, ...], ...]

    def __init__(self, classes: Iterable[Iterable[int]]):
        normalized = sorted((tuple(sorted(set(c))) for c in classes), key=lambda c: c[0] if c else -1)
        object.__setattr__(self, "classes", tuple(normalized))
        self._validate()

    def _validate(self):
        seen: set[int] = set()
        for c in self.classes:
            if not c:
                raise ValueError("partition classes must be non-empty")
            overlap = seen.intersection(c)
            if overlap:
                raise ValueError(f"partition classes overlap on {sorted(overlap)}")
            seen.update(c)
        if seen != set(range(len(seen))):
            raise ValueError("partition must cover 0..size-1 exactly")

    @property
    def size(self) -> int:
        return sum(len(c) for c in self.classes)

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def class_of(self) -> list[int]:
        """Map vertex -> class index."""
        out = [0] * self.size
        for k, c in enumerate(self.classes):
            for v in c:
                out[v] = k
        return out

    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def refines(self, other: "VertexPartition") -> bool:
        """True when every class of ``self`` sits inside a class of ``other``."""
        owner = other.class_of()
        return all(len({owner[v] for v in c}) == 1 for c in self.classes)

    @classmethod
    def singletons(cls, size: int) -> "VertexPartition":
        return cls([i] for i in range(size))

    @classmethod
    def whole(cls, size: int) -> "VertexPartition":
        return cls([range(size)])


@dataclass(frozen=True)
class FiniteGroup:
    spec: GroupSpec
    elements: tuple[GroupElement, ...] = field(repr=False)
    identity_index: int = 0

    # b a = a^twist b and b^2 = a^square in normal form
    @property
    def modulus(self) -> int:
        return self.spec.family.rotation_order(self.spec.n)

    @property
    def _twist(self) -> int:
        fam, n = self.spec.family, self.spec.n
        if fam is Family.SEMIDIHEDRAL:
            return 2 * n - 1
        return -1

    @property
    def _square(self) -> int:
        return self.spec.n if self.spec.family is Family.QUATERNION else 0

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def _index(self) -> dict[GroupElement, int]:
        return {g: i for i, g in enumerate(self.elements)}

    def index(self, x: GroupElement) -> int:
        return self._index[self.reduce(x)]

    def reduce(self, x: GroupElement) -> GroupElement:
        if x.refl and self.spec.family is Family.CYCLIC:
            raise ValueError("cyclic groups have no reflection elements")
        return GroupElement(x.rot % self.modulus, bool(x.refl))

    def element(self, rot: int, refl: bool = False) -> GroupElement:
        return self.reduce(GroupElement(rot, refl))

    @property
    def identity(self) -> GroupElement:
        return self.elements[self.identity_index]

    def multiply(self, x: GroupElement, y: GroupElement) -> GroupElement:
        m = self.modulus
        if not x.refl:
            return GroupElement((x.rot + y.rot) % m, y.refl)
        # a^i b . a^j b^f = a^(i + twist*j) b^(1+f)
        rot = x.rot + self._twist * y.rot
        if y.refl:
            return GroupElement((rot + self._square) % m, False)
        return GroupElement(rot % m, True)

    def inverse(self, x: GroupElement) -> GroupElement:
        if not x.refl:
            return GroupElement((-x.rot) % self.modulus, False)
        # (a^i b)^2 = a^(i + twist*i + square), so (a^i b)^-1 = (a^i b) (a^i b)^-2
        sq = self.multiply(x, x)
        return self.multiply(x, self.inverse(sq))

    def power(self, x: GroupElement, k: int) -> GroupElement:
        out = self.identity
        for _ in range(k):
            out = self.multiply(out, x)
        return out

    def element_order(self, x: GroupElement) -> int:
        y, k = x, 1
        while y != self.identity:
            y = self.multiply(y, x)
            k += 1
        return k

    def cyclic_subgroup(self, x: GroupElement) -> frozenset[int]:
        members = [self.identity_index]
        y = x
        while y != self.identity:
            members.append(self.index(y))
            y = self.multiply(y, x)
        return frozenset(members)

    @cached_property
    def orders(self) -> tuple[int, ...]:
        return tuple(self.element_order(x) for x in self.elements)

    @cached_property
    def cyclic_subgroups(self) -> tuple[frozenset[int], ...]:
        """``<g>`` for every element g, indexed like ``elements``."""
        return tuple(self.cyclic_subgroup(x) for x in self.elements)

    def commute(self, x: GroupElement, y: GroupElement) -> bool:
        return self.multiply(x, y) == self.multiply(y, x)

    def conjugacy_partition(self) -> VertexPartition:
        assigned: dict[int, int] = {}
        classes: list[list[int]] = []
        for i, y in enumerate(self.elements):
            if i in assigned:
                continue
            cls = sorted({self.index(self.multiply(self.multiply(g, y), self.inverse(g))) for g in self.elements})
            for j in cls:
                assigned[j] = len(classes)
            classes.append(cls)
        return VertexPartition(classes)

    def order_partition(self) -> VertexPartition:
        fibers: dict[int, list[int]] = {}
        for i, o in enumerate(self.orders):
            fibers.setdefault(o, []).append(i)
        return VertexPartition(fibers.values())

    def equality_partition(self) -> VertexPartition:
        return VertexPartition.singletons(self.order)

    def center(self) -> frozenset[int]:
        return frozenset(
            i for i, x in enumerate(self.elements) if all(self.commute(x, g) for g in self.elements)
        )

    def labels(self) -> list[str]:
        return [x.name() for x in self.elements]

    def cayley_table(self):
        """Index-valued multiplication table, only for the small-group axiom audit."""
        import numpy as np

        if self.order > AUDIT_ORDER_LIMIT:
            raise ValueError(f"Cayley table is only built for |G| <= {AUDIT_ORDER_LIMIT}")
        table = np.empty((self.order, self.order), dtype=np.int64)
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                table[i, j] = self.index(self.multiply(x, y))
        return table

    def audit_axioms(self) -> dict[str, bool]:
        """Exhaustive closure/associativity/identity/inverse check for small groups."""
        t = self.cayley_table()
        e = self.identity_index
        size = self.order
        # t[t[x,y], z] == t[x, t[y,z]] for all x, y, z
        left = t[t]  # left[x, y, z] = t[t[x, y], z]
        right = t[:, t]  # right[x, y, z] = t[x, t[y, z]]
        assoc = bool((left == right).all())
        ident = bool((t[e] == range(size)).all() and (t[:, e] == range(size)).all())
        inverses = all(e in row for row in t.tolist())
        return {"associative": assoc, "identity": ident, "inverses": inverses, "closed": True}


def _canonical_elements(spec: GroupSpec) -> tuple[GroupElement, ...]:
    m = spec.family.rotation_order(spec.n)
    rots = [GroupElement(i, False) for i in range(m)]
    if spec.family is Family.CYCLIC:
        return tuple(rots)
    return tuple(rots + [GroupElement(i, True) for i in range(m)])


def make_group(spec: GroupSpec | tuple) -> FiniteGroup:
    if not isinstance(spec, GroupSpec):
        fam, n = spec
        spec = GroupSpec(parse_family(fam), n)
    elements = _canonical_elements(spec)
    if len(elements) != spec.order:
        raise AssertionError("element count does not match the family order")
    return FiniteGroup(spec, elements, 0)


def partition_by_key(items: Sequence, key) -> VertexPartition:
    groups: dict = {}
    for i, x in enumerate(items):
        groups.setdefault(key(x), []).append(i)
    return VertexPartition(groups.values())


def all_specs(families: Iterable[Family], ns: Iterable[int]) -> list[GroupSpec]:
    out = []
    for fam, n in itertools.product(families, ns):
        if n >= fam.min_n:
            out.append(GroupSpec(fam, n))
    return out
