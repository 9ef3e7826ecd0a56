"""Recognition of small abstract groups.

Abelian groups are identified by their invariant factors (with an explicit
basis as certificate).  Nonabelian groups of order up to the identification
bound are matched against a built-in catalog by exhaustive isomorphism
search, seeded with element-order fingerprints; the returned certificate is
a bijection that is re-verified multiplicatively.  Everything else falls back
to an opaque descriptor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .errors import InputError
from .groups import FiniteGroup, sort_key

IDENTIFICATION_BOUND = 63


# -- named catalog -------------------------------------------------------------


def symmetric_table(n):
    elems = list(itertools.permutations(range(n)))
    return FiniteGroup(
        elems, lambda a, b: tuple(a[x] for x in b), name=f"S{n}"
    )


def alternating_table(n):
    def sign(p):
        s = 1
        p = list(p)
        for i in range(len(p)):
            while p[i] != i:
                j = p[i]
                p[i], p[j] = p[j], p[i]
                s = -s
        return s

    elems = [p for p in itertools.permutations(range(n)) if sign(p) == 1]
    return FiniteGroup(
        elems, lambda a, b: tuple(a[x] for x in b), name=f"A{n}"
    )


def dihedral_table(n):
    """Dihedral group of order 2n, elements (rotation, flip)."""

    def op(x, y):
        i, s = x
        j, t = y
        return ((i + (j if s == 0 else -j)) % n, s ^ t)

    elems = [(i, s) for i in range(n) for s in (0, 1)]
    return FiniteGroup(elems, op, identity=(0, 0), name=f"D{n}")


def quaternion_table():
    """The quaternion group of order 8 on labels (sign, basis)."""
    basis_mul = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"),
        ("1", "k"): (1, "k"), ("i", "1"): (1, "i"), ("j", "1"): (1, "j"),
        ("k", "1"): (1, "k"), ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"),
        ("k", "k"): (-1, "1"), ("i", "j"): (1, "k"), ("j", "i"): (-1, "k"),
        ("j", "k"): (1, "i"), ("k", "j"): (-1, "i"), ("k", "i"): (1, "j"),
        ("i", "k"): (-1, "j"),
    }

    def op(x, y):
        s, b = basis_mul[(x[1], y[1])]
        return (x[0] * y[0] * s, b)

    elems = [(s, b) for s in (1, -1) for b in ("1", "i", "j", "k")]
    return FiniteGroup(elems, op, identity=(1, "1"), name="Q8")


@lru_cache(maxsize=None)
def named_catalog():
    """Reference tables for the nonabelian groups we can name."""
    groups = [
        symmetric_table(3),
        dihedral_table(4),
        quaternion_table(),
        dihedral_table(5),
        alternating_table(4),
        dihedral_table(6),
        symmetric_table(4),
    ]
    return tuple(groups)


# -- descriptors ---------------------------------------------------------------


@dataclass(frozen=True)
class AbstractGroupId:
    """Isomorphism-type answer with a checkable certificate.

    kind is one of ``cyclic``, ``abelian``, ``named``, ``opaque``.  For
    abelian kinds the invariants are the factors in a divisibility chain
    (largest first) and the certificate is a generating basis; for named
    kinds the certificate is a bijection onto the catalog table.
    """

    order: int
    kind: str
    invariants: tuple = ()
    name: str = ""
    certificate: tuple = ()
    fingerprint: tuple = ()

    def __post_init__(self):
        if self.kind in ("cyclic", "abelian"):
            prod = 1
            for d in self.invariants:
                prod *= d
            if prod != self.order:
                raise InputError("invariants inconsistent with order")

    def describe(self):
        if self.kind == "cyclic":
            return f"C{self.order}" if self.order > 1 else "1"
        if self.kind == "abelian":
            return " x ".join(f"C{d}" for d in self.invariants)
        if self.kind == "named":
            return self.name
        return f"opaque(order={self.order})"

    def same_type(self, other):
        if (self.order, self.kind) != (other.order, other.kind):
            return False
        if self.kind in ("cyclic", "abelian"):
            return self.invariants == other.invariants
        if self.kind == "named":
            return self.name == other.name
        return self.fingerprint == other.fingerprint


def abelian_basis(group):
    """Independent generators of an abelian group, largest order first.

    Peels off an element of maximal order, then lifts a basis of the quotient;
    the result is verified (orders form a divisibility chain and the product
    map is a bijection).
    """
    if not group.is_abelian():
        raise InputError("not abelian")
    basis = _abelian_basis_rec(group, frozenset([group.identity]))
    _verify_basis(group, basis)
    return basis


def _abelian_basis_rec(group, quotient_kernel):
    # work with cosets of the subgroup generated so far
    if len(quotient_kernel) == group.order:
        return []
    best = None
    best_order = 0
    for g in group.elements:
        o = _coset_order(group, g, quotient_kernel)
        if o > best_order or (o == best_order and sort_key(g) < sort_key(best)):
            best, best_order = g, o
    # adjust the lift so its true order equals its order modulo the kernel
    g = _adjust_lift(group, best, best_order, quotient_kernel)
    new_kernel = set(quotient_kernel)
    h = group.identity
    for _ in range(best_order):
        h = group.op(h, g)
        new_kernel.update(group.op(h, k) for k in quotient_kernel)
    return [g] + _abelian_basis_rec(group, frozenset(new_kernel))


def _coset_order(group, g, kernel):
    n = 1
    x = g
    while x not in kernel:
        x = group.op(x, g)
        n += 1
    return n


def _adjust_lift(group, g, coset_order, kernel):
    """Replace g by a lift whose order in the group equals its coset order."""
    x = group.identity
    for _ in range(coset_order):
        x = group.op(x, g)
    # x = g^m lies in the kernel subgroup; need k with k^m = x, then g*k^-1
    for k in kernel:
        y = group.identity
        for _ in range(coset_order):
            y = group.op(y, k)
        if y == x:
            return group.op(g, group.inverse(k))
    raise InputError("abelian basis lift failed")


def _verify_basis(group, basis):
    orders = [group.element_order(b) for b in basis]
    for a, b in zip(orders, orders[1:]):
        if a % b:
            raise InputError("basis orders do not form a divisibility chain")
    prod = 1
    for o in orders:
        prod *= o
    if prod != group.order:
        raise InputError("basis does not span")
    seen = set()
    for combo in itertools.product(*[range(o) for o in orders]):
        x = group.identity
        for b, k in zip(basis, combo):
            y = group.identity
            for _ in range(k):
                y = group.op(y, b)
            x = group.op(x, y)
        seen.add(x)
    if len(seen) != group.order:
        raise InputError("basis combinations are not distinct")


def abelian_invariants(group):
    """Invariant factors (largest first) of an abelian group table."""
    return tuple(group.element_order(b) for b in abelian_basis(group))


def identify(group, bound=IDENTIFICATION_BOUND):
    """Best-effort isomorphism-type identification with certificate."""
    n = group.order
    if group.is_abelian():
        basis = abelian_basis(group)
        invs = tuple(group.element_order(b) for b in basis)
        kind = "cyclic" if len(invs) <= 1 else "abelian"
        return AbstractGroupId(
            order=n,
            kind=kind,
            invariants=invs if invs else (1,),
            certificate=tuple(basis),
            fingerprint=group.order_profile(),
        )
    if n <= bound:
        for ref in named_catalog():
            if ref.order != n:
                continue
            iso = find_isomorphism(group, ref)
            if iso is not None:
                cert = tuple(sorted(iso.items(), key=lambda kv: sort_key(kv[0])))
                return AbstractGroupId(
                    order=n,
                    kind="named",
                    name=ref.name,
                    certificate=cert,
                    fingerprint=group.order_profile(),
                )
    return AbstractGroupId(
        order=n, kind="opaque", fingerprint=group.order_profile()
    )


def verify_identification(group, gid):
    """Re-check an identification certificate from scratch."""
    if gid.order != group.order:
        return False
    if gid.kind in ("cyclic", "abelian"):
        basis = list(gid.certificate)
        if gid.kind == "cyclic" and group.order == 1:
            return group.order == 1
        try:
            _verify_basis(group, basis)
        except InputError:
            return False
        orders = tuple(group.element_order(b) for b in basis)
        return orders == gid.invariants
    if gid.kind == "named":
        ref = next(
            (g for g in named_catalog() if g.name == gid.name), None
        )
        if ref is None or ref.order != group.order:
            return False
        mapping = dict(gid.certificate)
        if set(mapping) != set(group.elements):
            return False
        if sorted(mapping.values(), key=sort_key) != sorted(
            ref.elements, key=sort_key
        ):
            return False
        return all(
            mapping[group.op(a, b)] == ref.op(mapping[a], mapping[b])
            for a in group.elements
            for b in group.elements
        )
    return gid.fingerprint == group.order_profile()


# -- isomorphism search ---------------------------------------------------------


def _generating_sequence(group):
    gens = []
    span = {group.identity}
    for g in sorted(group.elements, key=lambda x: (-group.element_order(x), sort_key(x))):
        if g in span:
            continue
        gens.append(g)
        span = set(
            FiniteGroup(
                _span(group, gens), group.op, identity=group.identity
            ).elements
        )
        if len(span) == group.order:
            break
    return gens


def _span(group, gens):
    seen = {group.identity}
    frontier = [group.identity]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = group.op(g, x)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def find_isomorphism(a, b):
    """A bijective homomorphism a -> b as a dict, or None.

    Backtracking over images of a small generating sequence, pruned by
    element orders.  Intended for desk-scale orders (catalog sizes).
    """
    if a.order != b.order:
        return None
    if a.order_profile() != b.order_profile():
        return None
    gens = _generating_sequence(a)
    # express every element of a as word: BFS parent pointers
    parent = {a.identity: None}
    frontier = [a.identity]
    while frontier:
        x = frontier.pop(0)
        for gi, g in enumerate(gens):
            y = a.op(g, x)
            if y not in parent:
                parent[y] = (x, gi)
                frontier.append(y)
    order_of = {g: a.element_order(g) for g in gens}
    candidates = [
        [h for h in b.elements if b.element_order(h) == order_of[g]]
        for g in gens
    ]

    def build(images):
        f = {a.identity: b.identity}
        queue = [a.identity]
        while queue:
            x = queue.pop()
            for gi, g in enumerate(gens):
                y = a.op(g, x)
                fy = b.op(images[gi], f[x])
                if y in f:
                    if f[y] != fy:
                        return None
                else:
                    f[y] = fy
                    queue.append(y)
        if len(set(f.values())) != a.order:
            return None
        for x in a.elements:
            for y in gens:
                if f[a.op(x, y)] != b.op(f[x], f[y]):
                    return None
        # full multiplicativity check
        for x in a.elements:
            for y in a.elements:
                if f[a.op(x, y)] != b.op(f[x], f[y]):
                    return None
        return f

    for images in itertools.product(*candidates):
        f = build(list(images))
        if f is not None:
            return f
    return None


def isomorphic(a, b):
    return find_isomorphism(a, b) is not None
