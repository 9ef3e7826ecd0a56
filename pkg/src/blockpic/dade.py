"""The abstract calculus of pairs (v, phi) in D x| Out(P, F).

D is a user-presented finitely generated abelian group (free rank plus
torsion invariants) carrying a verified action of a finite group; pairs
compose by the semidirect law (v, phi)(w, psi) = (v + phi.w, phi psi), the
dual of a class is its negative, and fusion-stable linear characters embed
into a declared torsion summand.  No modules are materialised: contexts are
models supplied by the caller, not computed Dade groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    ActionNotHomomorphism,
    ContextMismatch,
    DivisibilityViolation,
    InputError,
    NoCharacterSummandDeclared,
    ParentMismatch,
)
from .groups import FiniteGroup, cyclic_table
from .pgroup import AbelianPGroup


def _vec_reduce(vec, moduli):
    return tuple(
        int(x) % m if m else int(x) for x, m in zip(vec, moduli)
    )


def _mat_apply(matrix, vec, moduli):
    n = len(moduli)
    return tuple(
        (sum(matrix[i][j] * vec[j] for j in range(n)) % moduli[i])
        if moduli[i]
        else sum(matrix[i][j] * vec[j] for j in range(n))
        for i in range(n)
    )


class DadeContext:
    """A presented group D = Z^f + sum Z/d_i with a verified outer action.

    ``action`` maps every element of ``out_group`` to an integer matrix; the
    assignment is checked to respect the torsion moduli and to be a
    homomorphism on the full table.  ``char_summand`` optionally marks a
    torsion slice as the image of Hom(P/foc, O^x) for character twists.
    """

    def __init__(self, free_rank, torsion, out_group, action,
                 char_summand=None, name=""):
        self.free_rank = int(free_rank)
        self.torsion = tuple(int(d) for d in torsion)
        if self.free_rank < 0 or any(d < 2 for d in self.torsion):
            raise InputError("free rank must be >= 0 and torsion moduli >= 2")
        self.out_group = out_group
        self.moduli = (0,) * self.free_rank + self.torsion
        self.name = name
        n = len(self.moduli)
        self.action = {}
        for g in out_group.elements:
            mat = action(g) if callable(action) else action[g]
            mat = tuple(tuple(int(x) for x in row) for row in mat)
            if len(mat) != n or any(len(row) != n for row in mat):
                raise InputError("action matrix has the wrong shape")
            self._check_torsion_discipline(mat)
            self.action[g] = mat
        self._check_homomorphism()
        self.char_summand = None
        if char_summand is not None:
            start, length = char_summand
            if start < self.free_rank or start + length > n:
                raise NoCharacterSummandDeclared(
                    "character summand must lie inside the torsion part"
                )
            self.char_summand = (int(start), int(length))

    def _check_torsion_discipline(self, mat):
        from math import gcd

        n = len(self.moduli)
        for j in range(n):
            mj = self.moduli[j]
            if mj == 0:
                continue
            for i in range(n):
                mi = self.moduli[i]
                if mi == 0:
                    if mat[i][j] != 0:
                        raise DivisibilityViolation(
                            "torsion generator cannot map to the free part"
                        )
                else:
                    need = mi // gcd(mi, mj)
                    if mat[i][j] % need:
                        raise DivisibilityViolation(
                            f"entry ({i},{j}) must be divisible by {need}"
                        )

    def _check_homomorphism(self):
        n = len(self.moduli)
        ident = self.action[self.out_group.identity]
        for i in range(n):
            for j in range(n):
                want = 1 if i == j else 0
                got = ident[i][j] % self.moduli[i] if self.moduli[i] else ident[i][j]
                if got != want:
                    raise ActionNotHomomorphism("identity must act trivially")
        for g in self.out_group.elements:
            for h in self.out_group.elements:
                gh = self.out_group.op(g, h)
                a, b, c = self.action[g], self.action[h], self.action[gh]
                for i in range(n):
                    mi = self.moduli[i]
                    for j in range(n):
                        prod = sum(a[i][k] * b[k][j] for k in range(n))
                        if mi:
                            if (prod - c[i][j]) % mi:
                                raise ActionNotHomomorphism(
                                    "action is not multiplicative"
                                )
                        elif prod != c[i][j]:
                            raise ActionNotHomomorphism(
                                "action is not multiplicative"
                            )

    # -- pairs ---------------------------------------------------------------

    def pair(self, vec, out_elem):
        if out_elem not in self.out_group:
            raise ContextMismatch("outer part not in the context's group")
        if len(vec) != len(self.moduli):
            raise ContextMismatch("coordinate vector has the wrong length")
        return DadePair(self, _vec_reduce(vec, self.moduli), out_elem)

    def identity_pair(self):
        return self.pair((0,) * len(self.moduli), self.out_group.identity)

    def act(self, out_elem, vec):
        return _mat_apply(self.action[out_elem], vec, self.moduli)

    def is_torsion_vector(self, vec):
        return all(vec[i] == 0 for i in range(self.free_rank))

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class DadePair:
    """Element (v, phi) of D x| Out(P, F)."""

    context: DadeContext
    vector: tuple
    outer: object = field(compare=True)

    @property
    def sort_key(self):
        from .groups import sort_key as _sk

        return (self.vector, _sk(self.outer))

    def __str__(self):
        return f"({self.vector}, {self.outer})"


def compose(a, b):
    """(v, phi)(w, psi) = (v + phi.w, phi psi)."""
    if a.context is not b.context:
        raise ContextMismatch("pairs from different contexts")
    ctx = a.context
    moved = ctx.act(a.outer, b.vector)
    vec = _vec_reduce(
        tuple(x + y for x, y in zip(a.vector, moved)), ctx.moduli
    )
    return DadePair(ctx, vec, ctx.out_group.op(a.outer, b.outer))


def inverse(a):
    """Dual class: (v, phi)^-1 = (-(phi^-1 . v), phi^-1)."""
    ctx = a.context
    phi_inv = ctx.out_group.inverse(a.outer)
    moved = ctx.act(phi_inv, a.vector)
    vec = _vec_reduce(tuple(-x for x in moved), ctx.moduli)
    return DadePair(ctx, vec, phi_inv)


def pair_order(a, cap=10_000):
    x = a
    ident = a.context.identity_pair()
    n = 1
    while x != ident:
        x = compose(x, a)
        n += 1
        if n > cap:
            raise InputError("pair order exceeds cap (free part nonzero?)")
    return n


@dataclass(frozen=True)
class LinearCharacter:
    """Element of Hom(P/foc, O^x), stored against the character moduli."""

    quotient: AbelianPGroup
    moduli: tuple
    values: tuple

    def __post_init__(self):
        vals = tuple(
            int(v) % m for v, m in zip(self.values, self.moduli)
        )
        if len(vals) != len(self.moduli):
            raise ParentMismatch("value vector length mismatch")
        object.__setattr__(self, "values", vals)


def twist_by_character(a, char):
    """Add the image of a fusion-stable linear character to the Dade class."""
    ctx = a.context
    if ctx.char_summand is None:
        raise NoCharacterSummandDeclared(
            "context does not declare a character summand"
        )
    start, length = ctx.char_summand
    if tuple(ctx.moduli[start:start + length]) != tuple(char.moduli):
        raise ContextMismatch("character moduli do not match the summand")
    vec = list(a.vector)
    for k, v in enumerate(char.values):
        vec[start + k] += v
    return DadePair(ctx, _vec_reduce(vec, ctx.moduli), a.outer)


def commutator_identity_check(context, vec, out_elem):
    """Verify [(v,1),(0,phi)] = (v - phi.v, 1) by direct evaluation."""
    v_pair = context.pair(vec, context.out_group.identity)
    phi_pair = context.pair((0,) * len(context.moduli), out_elem)
    comm = compose(
        compose(v_pair, phi_pair),
        compose(inverse(v_pair), inverse(phi_pair)),
    )
    moved = context.act(out_elem, v_pair.vector)
    expected = context.pair(
        tuple(x - y for x, y in zip(v_pair.vector, moved)),
        context.out_group.identity,
    )
    return comm == expected


def torsion_subgroup(context):
    """Drop the free part; the action restricts because torsion maps to torsion."""
    f = context.free_rank
    n = len(context.moduli)
    for g, mat in context.action.items():
        for i in range(f):
            for j in range(f, n):
                assert mat[i][j] == 0, "action does not preserve torsion"

    def restricted(g):
        mat = context.action[g]
        return tuple(
            tuple(mat[i][j] for j in range(f, n)) for i in range(f, n)
        )

    return DadeContext(
        0,
        context.torsion,
        context.out_group,
        restricted,
        char_summand=(
            None
            if context.char_summand is None
            else (context.char_summand[0] - f, context.char_summand[1])
        ),
        name=f"{context.name}.torsion" if context.name else "",
    )


# -- built-in example contexts -----------------------------------------------------


def trivial_context(out_group=None):
    """D = 0 with an arbitrary (default trivial) outer group."""
    out = out_group if out_group is not None else cyclic_table(1)
    return DadeContext(0, (), out, lambda g: (), name="trivial")


def sign_action_context():
    """D = Z/3 with C2 acting by negation."""
    c2 = cyclic_table(2)
    return DadeContext(
        0, (3,), c2,
        {0: ((1,),), 1: ((-1,),)},
        char_summand=None,
        name="Z/3 by sign",
    )


def rank_one_context():
    """D = Z + Z/2 with C2 negating the free part."""
    c2 = cyclic_table(2)
    return DadeContext(
        0 + 1, (2,), c2,
        {0: ((1, 0), (0, 1)), 1: ((-1, 0), (0, 1))},
        name="Z + Z/2",
    )


def character_context(pair, profile):
    """D = Hom(P/foc, O^x) with the natural Out(P, F)-action.

    Built from an inertial pair and a coefficient profile; the whole of D is
    the declared character summand, so twists are available.
    """
    from .picard import character_data_for_pair

    data = character_data_for_pair(pair, profile)
    out = pair.out_pf
    if not isinstance(out, FiniteGroup):
        raise ContextMismatch("outer group must be materialised")
    return DadeContext(
        0,
        tuple(m for m in data.moduli),
        out,
        {g: data.action_matrix(g) for g in out.elements},
        char_summand=(0, len(data.moduli)),
        name=f"Hom({pair.group}/foc, O^x)",
    ) if data.moduli else DadeContext(
        0, (), out, lambda g: (), char_summand=(0, 0),
        name=f"Hom({pair.group}/foc, O^x)",
    )
