"""Finite abelian p-groups presented by invariant-factor exponent lists.

A group is a product of cyclic groups of orders ``p**e_1 >= p**e_2 >= ...``;
elements are coordinate vectors reduced componentwise.  Everything here is
exact integer arithmetic, written additively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .errors import (
    EmptyOrNonPositiveExponent,
    NonPrime,
    NotASubgroup,
    OrderBoundExceeded,
    ParentMismatch,
)
from .snf import smith_normal_form

DEFAULT_ORDER_BOUND = 1 << 20


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class AbelianPGroup:
    """Product of cyclic p-groups with non-increasing exponents."""

    p: int
    exponents: tuple

    @property
    def rank(self):
        return len(self.exponents)

    @property
    def moduli(self):
        return tuple(self.p ** e for e in self.exponents)

    @property
    def order(self):
        return self.p ** sum(self.exponents)

    @property
    def exponent(self):
        """Order of the largest cyclic factor (1 for the trivial group)."""
        return self.p ** self.exponents[0] if self.exponents else 1

    @property
    def is_trivial(self):
        return not self.exponents

    @property
    def is_cyclic(self):
        return len(self.exponents) <= 1

    def identity(self):
        return GroupElement(self, (0,) * self.rank)

    def element(self, coords):
        coords = tuple(int(c) % m for c, m in zip(coords, self.moduli))
        if len(coords) != self.rank:
            raise ParentMismatch(f"expected {self.rank} coordinates")
        return GroupElement(self, coords)

    def generators(self):
        r = self.rank
        return [
            GroupElement(self, tuple(1 if i == j else 0 for j in range(r)))
            for i in range(r)
        ]

    def elements(self):
        """All elements in canonical (lexicographic) order."""
        return [GroupElement(self, c) for c in element_coords(self)]

    def __str__(self):
        if not self.exponents:
            return "1"
        return " x ".join(f"C{self.p ** e}" for e in self.exponents)


@lru_cache(maxsize=None)
def element_coords(group):
    """Canonically ordered coordinate tuples of all elements."""
    return tuple(itertools.product(*[range(m) for m in group.moduli]))


@lru_cache(maxsize=None)
def coords_index(group):
    return {c: i for i, c in enumerate(element_coords(group))}


def make_group(p, exponents, bound=DEFAULT_ORDER_BOUND):
    """Build an AbelianPGroup, validating primality, exponents and size.

    The empty exponent list gives the trivial group.
    """
    p = int(p)
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    exps = tuple(sorted((int(e) for e in exponents), reverse=True))
    if any(e < 1 for e in exps):
        raise EmptyOrNonPositiveExponent("exponents must be >= 1")
    order = p ** sum(exps)
    if order > bound:
        raise OrderBoundExceeded(f"group order {order} exceeds bound {bound}")
    return AbelianPGroup(p, exps)


def trivial_group(p=2):
    return AbelianPGroup(int(p), ())


@dataclass(frozen=True)
class GroupElement:
    group: AbelianPGroup
    coords: tuple

    def __post_init__(self):
        reduced = tuple(
            int(c) % m for c, m in zip(self.coords, self.group.moduli)
        )
        if len(self.coords) != self.group.rank:
            raise ParentMismatch("coordinate length does not match group rank")
        object.__setattr__(self, "coords", reduced)

    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return neg(self)

    def __sub__(self, other):
        return add(self, neg(other))

    @property
    def sort_key(self):
        return self.coords

    def __str__(self):
        return "(" + ",".join(map(str, self.coords)) + ")"


def _same_parent(a, b):
    if a.group != b.group:
        raise ParentMismatch("elements live in different groups")


def add(a, b):
    _same_parent(a, b)
    return GroupElement(
        a.group, tuple(x + y for x, y in zip(a.coords, b.coords))
    )


def neg(a):
    return GroupElement(a.group, tuple(-x for x in a.coords))


def scale(n, a):
    return GroupElement(a.group, tuple(n * x for x in a.coords))


def element_order(a):
    """Least n >= 1 with n*a = 0."""
    out = 1
    for c, m in zip(a.coords, a.group.moduli):
        out = _lcm(out, m // gcd(c, m))
    return out


def _lcm(a, b):
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class SubgroupTable:
    """A subgroup listed explicitly, closed and canonically ordered."""

    parent: AbelianPGroup
    elements: tuple

    def __post_init__(self):
        coords = sorted({e.coords for e in self.elements})
        elems = tuple(GroupElement(self.parent, c) for c in coords)
        object.__setattr__(self, "elements", elems)
        if self.parent.order % len(elems):
            raise NotASubgroup("size does not divide the parent order")
        zero = (0,) * self.parent.rank
        members = {e.coords for e in elems}
        if zero not in members:
            raise NotASubgroup("missing identity")
        if len(members) <= 4096:
            moduli = self.parent.moduli
            for a in members:
                for b in members:
                    s = tuple((x + y) % m for x, y, m in zip(a, b, moduli))
                    if s not in members:
                        raise NotASubgroup("not closed under addition")

    @property
    def order(self):
        return len(self.elements)

    def __contains__(self, element):
        return (
            element.group == self.parent
            and element.coords in {e.coords for e in self.elements}
        )

    def __iter__(self):
        return iter(self.elements)

    def is_whole(self):
        return self.order == self.parent.order

    def coord_set(self):
        return frozenset(e.coords for e in self.elements)


def subgroup_generated(group, gens):
    """Closure of ``gens`` under the group operation, canonically ordered."""
    for g in gens:
        if g.group != group:
            raise ParentMismatch("generator outside the parent group")
    moduli = group.moduli
    zero = (0,) * group.rank
    seen = {zero}
    frontier = [zero]
    gcoords = [g.coords for g in gens]
    while frontier:
        x = frontier.pop()
        for g in gcoords:
            y = tuple((a + b) % m for a, b, m in zip(x, g, moduli))
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return SubgroupTable(group, tuple(GroupElement(group, c) for c in seen))


def trivial_subgroup(group):
    return SubgroupTable(group, (group.identity(),))


def whole_subgroup(group):
    return SubgroupTable(group, tuple(group.elements()))


def quotient_invariants(group, subgroup):
    """Invariant factors of P/S via Smith reduction of the relation matrix."""
    return quotient_with_projection(group, subgroup)[0]


def quotient_with_projection(group, subgroup):
    """Quotient P/S together with projection and section maps.

    Returns ``(Q, project, lift)`` where ``project`` sends a GroupElement of P
    to one of Q, and ``lift`` is a set-theoretic section Q -> P.
    """
    if subgroup.parent != group:
        raise NotASubgroup("subgroup has a different parent")
    r = group.rank
    if r == 0:
        q = AbelianPGroup(group.p, ())
        return q, (lambda x: q.identity()), (lambda y: group.identity())
    # relation columns: the p^{e_i} unit relations followed by subgroup members
    cols = [
        [group.moduli[i] if j == i else 0 for i in range(r)] for j in range(r)
    ]
    cols.extend(list(e.coords) for e in subgroup.elements)
    a = [[col[i] for col in cols] for i in range(r)]
    d, u, uinv, _ = smith_normal_form(a)
    diag = [d[i][i] for i in range(r)]
    keep = [i for i in range(r) if diag[i] > 1]
    # canonical form wants non-increasing exponents
    keep.sort(key=lambda i: diag[i], reverse=True)
    exps = []
    for i in keep:
        e = 0
        x = diag[i]
        while x % group.p == 0:
            x //= group.p
            e += 1
        if x != 1:
            raise NotASubgroup("quotient is not a p-group")
        exps.append(e)
    q = AbelianPGroup(group.p, tuple(exps))

    def project(x):
        if x.group != group:
            raise ParentMismatch("element outside the parent group")
        y = [sum(u[i][j] * x.coords[j] for j in range(r)) for i in range(r)]
        return q.element(tuple(y[i] % diag[i] for i in keep))

    def lift(qelem):
        if qelem.group != q:
            raise ParentMismatch("element outside the quotient group")
        y = [0] * r
        for pos, i in enumerate(keep):
            y[i] = qelem.coords[pos]
        x = [sum(uinv[i][j] * y[j] for j in range(r)) for i in range(r)]
        return group.element(tuple(x))

    return q, project, lift


def all_subgroups(group, cap=100000):
    """Every subgroup of a small group, as SubgroupTables with generators.

    Breadth-first closure over single-generator extensions; feasible for
    group orders up to a few hundred.
    """
    n = group.order
    if n > 1024:
        raise OrderBoundExceeded("subgroup enumeration is desk-scale only")
    coords = element_coords(group)
    index = coords_index(group)
    moduli = group.moduli
    table = [
        [
            index[tuple((a + b) % m for a, b, m in zip(x, y, moduli))]
            for y in coords
        ]
        for x in coords
    ]

    def extend(members, x):
        # members is a subgroup; <members, x> is the union of cosets S + k*x
        out = set(members)
        shift = x
        while shift not in members:
            out.update(table[s][shift] for s in members)
            shift = table[shift][x]
        return frozenset(out)

    found = {}
    root = frozenset([0])
    found[root] = ()
    queue = [(root, ())]
    while queue:
        cur, base_gens = queue.pop()
        for x in range(1, n):
            if x in cur:
                continue
            nxt = extend(cur, x)
            if nxt not in found:
                gens = base_gens + (x,)
                found[nxt] = gens
                queue.append((nxt, gens))
                if len(found) > cap:
                    raise OrderBoundExceeded("too many subgroups")
    out = []
    for members, gens in sorted(found.items(), key=lambda kv: sorted(kv[0])):
        elems = tuple(GroupElement(group, coords[i]) for i in sorted(members))
        table_obj = SubgroupTable(group, elems)
        out.append((table_obj, tuple(GroupElement(group, coords[g]) for g in gens)))
    return out
