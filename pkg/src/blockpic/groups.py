"""Generic finite groups as explicit element tables.

A :class:`FiniteGroup` stores a canonically ordered element tuple and a
composition callable.  Elements can be anything hashable and comparable
through :func:`sort_key` (integers, tuples, automorphisms, pairs).  On top of
this live closures, quotients by normal subgroups, semidirect products and
verified homomorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    ActionNotHomomorphism,
    InputError,
    NotASubgroup,
    NotComposable,
    NotNormal,
    ParentMismatch,
)


def sort_key(e):
    """Canonical comparison key: recursive over tuples, else a key attribute."""
    k = getattr(e, "sort_key", None)
    if k is not None:
        return sort_key(k)
    if isinstance(e, tuple):
        return tuple(sort_key(x) for x in e)
    return e


class FiniteGroup:
    """A finite group given by its element list and a composition function.

    ``op`` must be closed on ``elements``; this is trusted by default and can
    be verified with ``check=True`` (quadratic cost).
    """

    def __init__(self, elements, op, identity=None, name="", check=False):
        elems = sorted(set(elements), key=sort_key)
        self.elements = tuple(elems)
        self._op = op
        self._index = {e: i for i, e in enumerate(self.elements)}
        self.name = name
        self._identity = identity
        self._inverse = None
        self._abelian = None
        if self._identity is None:
            self._identity = self._find_identity()
        if check:
            self.check_table()

    # -- basics ----------------------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, e):
        return e in self._index

    @property
    def order(self):
        return len(self.elements)

    @property
    def identity(self):
        return self._identity

    def op(self, a, b):
        return self._op(a, b)

    def _find_identity(self):
        for e in self.elements:
            if all(self._op(e, x) == x for x in self.elements[: min(3, len(self.elements))]):
                if all(self._op(e, x) == x == self._op(x, e) for x in self.elements):
                    return e
        raise InputError("element list has no identity")

    def check_table(self):
        for a in self.elements:
            for b in self.elements:
                if self._op(a, b) not in self._index:
                    raise InputError("composition leaves the element list")

    def inverse(self, a):
        if self._inverse is None:
            inv = {}
            for x in self.elements:
                y = x
                while self._op(y, x) != self._identity:
                    y = self._op(y, x)
                inv[x] = y
            self._inverse = inv
        return self._inverse[a]

    def element_order(self, a):
        n = 1
        x = a
        while x != self._identity:
            x = self._op(x, a)
            n += 1
        return n

    def is_abelian(self):
        if self._abelian is None:
            self._abelian = all(
                self._op(a, b) == self._op(b, a)
                for i, a in enumerate(self.elements)
                for b in self.elements[i + 1:]
            )
        return self._abelian

    def is_cyclic(self):
        return any(self.element_order(a) == self.order for a in self.elements)

    def order_profile(self):
        """Sorted multiset of element orders (an isomorphism invariant)."""
        return tuple(sorted(self.element_order(a) for a in self.elements))

    # -- derived groups ----------------------------------------------------------

    def subgroup(self, elements, name=""):
        elems = set(elements)
        if not elems <= set(self.elements):
            raise NotASubgroup("elements outside the group")
        sub = FiniteGroup(elems, self._op, identity=self._identity, name=name)
        n = len(sub.elements)
        if n * n <= 1_000_000:
            pairs = ((a, b) for a in sub.elements for b in sub.elements)
        else:
            # closure of large subsets is spot-checked on a deterministic sample
            sample = sub.elements[:: max(1, n // 100)]
            pairs = ((a, b) for a in sample for b in sample)
        for a, b in pairs:
            if self._op(a, b) not in elems:
                raise NotASubgroup("set is not closed under composition")
        return sub

    def generated_subgroup(self, gens, name=""):
        return FiniteGroup(
            closure_elements(gens, self._op, self._identity),
            self._op,
            identity=self._identity,
            name=name,
        )

    def conjugate_set(self, g, elements):
        ginv = self.inverse(g)
        return frozenset(self._op(self._op(g, x), ginv) for x in elements)

    def same_universe(self, other):
        return self.elements == other.elements


def closure_elements(gens, op, identity):
    seen = {identity}
    out = [identity]
    frontier = [identity]
    gens = list(gens)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = op(g, x)
            if y not in seen:
                seen.add(y)
                out.append(y)
                frontier.append(y)
    return out


def cyclic_table(n, name=None):
    """The cyclic group Z/n with additive notation on 0..n-1."""
    return FiniteGroup(
        range(n), lambda a, b: (a + b) % n, identity=0,
        name=name or f"C{n}",
    )


def trivial_table():
    return cyclic_table(1, name="1")


def normalizer(group, sub):
    """Elements g with g S g^-1 = S, as a subgroup table."""
    sset = _subgroup_elements(group, sub)
    members = [
        g for g in group.elements if group.conjugate_set(g, sset) == sset
    ]
    return group.subgroup(members, name="N")


def centralizer(group, sub):
    sset = _subgroup_elements(group, sub)
    members = []
    for g in group.elements:
        ginv = group.inverse(g)
        if all(group.op(group.op(g, x), ginv) == x for x in sset):
            members.append(g)
    return group.subgroup(members, name="C")


def _subgroup_elements(group, sub):
    elems = frozenset(sub.elements if isinstance(sub, FiniteGroup) else sub)
    if not elems <= set(group.elements):
        raise NotASubgroup("not a subset of the group")
    return elems


def quotient_group(group, normal, with_projection=False):
    """Coset group G/N with minimal-element coset representatives."""
    nset = _subgroup_elements(group, normal)
    if len(nset) == 1:
        if with_projection:
            return group, identity_hom(group)
        return group
    for g in group.elements:
        if group.conjugate_set(g, nset) != nset:
            raise NotNormal("subgroup is not normal")
    rep_of = {}
    reps = []
    for g in group.elements:
        if g in rep_of:
            continue
        coset = sorted((group.op(g, n) for n in nset), key=sort_key)
        rep = coset[0]
        reps.append(rep)
        for x in coset:
            rep_of[x] = rep

    def op(a, b):
        return rep_of[group.op(a, b)]

    quotient = FiniteGroup(reps, op, identity=rep_of[group.identity], name="Q")
    if not with_projection:
        return quotient
    proj = HomomorphismData(group, quotient, {g: rep_of[g] for g in group.elements})
    return quotient, proj


@dataclass
class HomomorphismData:
    """A verified group homomorphism given on every element."""

    source: FiniteGroup
    target: FiniteGroup
    mapping: dict
    name: str = ""

    def __post_init__(self):
        if set(self.mapping) != set(self.source.elements):
            raise InputError("mapping must be defined on every source element")
        if not set(self.mapping.values()) <= set(self.target.elements):
            raise InputError("mapping leaves the target group")
        f = self.mapping
        op_s = self.source.op
        op_t = self.target.op
        for a in self.source.elements:
            for b in self.source.elements:
                if f[op_s(a, b)] != op_t(f[a], f[b]):
                    raise InputError(
                        f"not multiplicative at ({a!r}, {b!r})"
                    )

    def __call__(self, x):
        return self.mapping[x]

    def kernel(self):
        e = self.target.identity
        return self.source.subgroup(
            [x for x in self.source.elements if self.mapping[x] == e],
            name="ker",
        )

    def image_set(self):
        return frozenset(self.mapping.values())

    def image(self):
        return self.target.subgroup(self.image_set(), name="im")

    def is_injective(self):
        return len(self.image_set()) == self.source.order

    def is_surjective(self):
        return len(self.image_set()) == self.target.order

    def compose_with(self, inner):
        """self o inner."""
        if not inner.target.same_universe(self.source):
            raise NotComposable("maps are not composable")
        return HomomorphismData(
            inner.source,
            self.target,
            {x: self.mapping[inner.mapping[x]] for x in inner.source.elements},
        )


def identity_hom(group):
    return HomomorphismData(group, group, {g: g for g in group.elements})


def inclusion_hom(sub, group):
    return HomomorphismData(sub, group, {g: g for g in sub.elements})


@dataclass
class SemidirectProduct:
    """Pairs (a, h) with (a,h)(a',h') = (a + h.a', hh').

    Carries the embedded copies of both factors and the projection onto the
    acting factor, all as verified homomorphisms.
    """

    group: FiniteGroup
    left: FiniteGroup
    right: FiniteGroup
    embed_left: HomomorphismData = field(repr=False)
    embed_right: HomomorphismData = field(repr=False)
    projection: HomomorphismData = field(repr=False)


def semidirect_product(left, right, action, name=""):
    """Semidirect product of an abelian ``left`` by ``right`` acting on it.

    ``action(h)`` must return a callable mapping ``left`` to itself; the whole
    assignment is verified to be a homomorphism into Aut(left).
    """
    if not left.is_abelian():
        raise InputError("left factor must be abelian")
    act = {}
    for h in right.elements:
        f = action(h)
        table = {a: f(a) for a in left.elements}
        if set(table.values()) != set(left.elements):
            raise ActionNotHomomorphism(f"action of {h!r} is not a bijection")
        for a in left.elements:
            for b in left.elements:
                if table[left.op(a, b)] != left.op(table[a], table[b]):
                    raise ActionNotHomomorphism(
                        f"action of {h!r} is not an automorphism"
                    )
        act[h] = table
    for h1 in right.elements:
        for h2 in right.elements:
            t12 = act[right.op(h1, h2)]
            t1 = act[h1]
            t2 = act[h2]
            if any(t12[a] != t1[t2[a]] for a in left.elements):
                raise ActionNotHomomorphism(
                    "assignment into Aut(left) is not a homomorphism"
                )

    def op(x, y):
        return (left.op(x[0], act[x[1]][y[0]]), right.op(x[1], y[1]))

    elements = [(a, h) for a in left.elements for h in right.elements]
    group = FiniteGroup(
        elements, op, identity=(left.identity, right.identity), name=name
    )
    embed_left = HomomorphismData(
        left, group, {a: (a, right.identity) for a in left.elements}
    )
    embed_right = HomomorphismData(
        right, group, {h: (left.identity, h) for h in right.elements}
    )
    projection = HomomorphismData(
        group, right, {x: x[1] for x in group.elements}
    )
    return SemidirectProduct(
        group, left, right, embed_left, embed_right, projection
    )


def direct_product(left, right, name=""):
    return semidirect_product(left, right, lambda h: (lambda a: a), name=name)


def relabeled(group, rng):
    """The same group on shuffled opaque integer labels (for invariance tests)."""
    n = group.order
    perm = list(range(n))
    rng.shuffle(perm)
    to_label = {e: perm[i] for i, e in enumerate(group.elements)}
    from_label = {v: k for k, v in to_label.items()}

    def op(a, b):
        return to_label[group.op(from_label[a], from_label[b])]

    return FiniteGroup(range(n), op, identity=to_label[group.identity])
