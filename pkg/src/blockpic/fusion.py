"""Inertial pairs (P, E) and their fusion-theoretic invariants.

For abelian P, the fusion system of P x| E is determined by the subgroup
E <= Aut(P); the focal subgroup is generated by the displacements phi(x) - x
and the outer automorphism group of the pair is N_{Aut(P)}(E)/E.  The
complement survey lists the p'-subgroups acting freely on the nonzero
elements, up to Aut(P)-conjugacy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd

from .autgroup import (
    AutomorphismGroup,
    DEFAULT_ENUM_BOUND,
    automorphism_from_perm,
    automorphism_order,
    automorphism_to_perm,
    compose_automorphisms,
    enumerate_aut,
    identity_automorphism,
    normalizer_of_cyclic,
    aut_order_formula,
)
from .errors import OrderBoundExceeded, ParentMismatch
from .groups import FiniteGroup, normalizer, quotient_group
from .pgroup import SubgroupTable, subgroup_generated
from .perms import compose, invert, perm_order, perm_power

SURVEY_SEED = 94321


@dataclass
class InertialPair:
    """An abelian p-group with a subgroup of its automorphism group.

    Flags and the derived invariants (focal subgroup, outer automorphism
    group of the pair) are computed eagerly at construction.
    """

    group: object
    inertial: FiniteGroup
    gens: tuple
    is_p_prime: bool
    is_cyclic: bool
    acts_freely: bool
    is_frobenius: bool
    foc: SubgroupTable
    out_pf: FiniteGroup = field(repr=False)

    @property
    def order(self):
        return self.inertial.order


def build_inertial_pair(group, gens, bound=DEFAULT_ENUM_BOUND):
    """Assemble an InertialPair from automorphism generators of E."""
    gens = tuple(gens)
    for g in gens:
        if g.group != group:
            raise ParentMismatch("generator acts on a different group")
    ident = identity_automorphism(group)
    table = FiniteGroup(
        _closure_autos(group, gens), compose_automorphisms, identity=ident,
        name="E",
    )
    free = acts_freely(group, table)
    p_prime = gcd(table.order, group.p) == 1
    cyclic = table.is_cyclic()
    foc = focal_subgroup(group, gens if gens else ())
    out = out_pf(group, table, bound=bound)
    return InertialPair(
        group=group,
        inertial=table,
        gens=gens,
        is_p_prime=p_prime,
        is_cyclic=cyclic,
        acts_freely=free,
        is_frobenius=(table.order > 1 and cyclic and p_prime and free),
        foc=foc,
        out_pf=out,
    )


def _closure_autos(group, gens):
    ident = identity_automorphism(group)
    seen = {ident}
    out = [ident]
    frontier = [ident]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = compose_automorphisms(g, x)
            if y not in seen:
                seen.add(y)
                out.append(y)
                frontier.append(y)
    return out


def acts_freely(group, inertial):
    """True iff no nonidentity element of E fixes a nonzero point."""
    ident = identity_automorphism(group)
    elements = (
        inertial.elements if isinstance(inertial, FiniteGroup) else inertial
    )
    for phi in elements:
        if phi == ident:
            continue
        perm = automorphism_to_perm(phi)
        if any(perm[i] == i for i in range(1, len(perm))):
            return False
    return True


def focal_subgroup(group, inertial):
    """Subgroup generated by the displacements phi(x) - x.

    Generators of E suffice (displacements of a product split into translated
    displacements of the factors); the equality with the all-elements version
    is exercised in the tests.
    """
    gens = (
        inertial.elements if isinstance(inertial, FiniteGroup) else tuple(inertial)
    )
    displacements = []
    for phi in gens:
        for x in group.generators():
            displacements.append(phi(x) - x)
    return subgroup_generated(group, displacements)


_outpf_cache = {}


def out_pf(group, inertial, bound=DEFAULT_ENUM_BOUND):
    """Out(P, F) = N_{Aut(P)}(E)/E for the fusion system of P x| E.

    For trivial E this is Aut(P) itself; when that is too large to list, the
    generator-backed AutomorphismGroup is returned instead of a table (it
    carries the exact order).
    """
    aut = enumerate_aut(group)
    table = _as_table(group, inertial)
    key = (group, frozenset(e.matrix for e in table.elements), bound)
    if key in _outpf_cache:
        return _outpf_cache[key]
    if table.order == 1 and aut.order > bound:
        result = aut
    else:
        n = _normalizer_in_aut(group, aut, table, bound=bound)
        result = quotient_group(n, table)
    _outpf_cache[key] = result
    return result


def _as_table(group, inertial):
    if isinstance(inertial, FiniteGroup):
        return inertial
    return FiniteGroup(
        _closure_autos(group, tuple(inertial)),
        compose_automorphisms,
        identity=identity_automorphism(group),
    )


def _normalizer_in_aut(group, aut, inertial, bound=DEFAULT_ENUM_BOUND):
    table = _as_table(group, inertial)
    if aut.order <= bound:
        # permutation-space filter; equals the definitional brute force
        full = aut.table(bound=bound)
        eperms = frozenset(automorphism_to_perm(e) for e in table.elements)
        members = []
        for a in full.elements:
            pa = aut.perm_of(a)
            painv = invert(pa)
            if all(
                compose(compose(pa, x), painv) in eperms for x in eperms
            ):
                members.append(a)
        return full.subgroup(members, name="N")
    gen = _cyclic_generator(table)
    if gen is None:
        raise OrderBoundExceeded(
            "normalizer beyond the bound needs a cyclic inertial subgroup"
        )
    return normalizer_of_cyclic(group, gen)


def _cyclic_generator(table):
    for g in table.elements:
        if table.element_order(g) == table.order:
            return g
    return None


# -- survey of free complements ----------------------------------------------------


_survey_cache = {}


def frobenius_complement_survey(group, bound=DEFAULT_ENUM_BOUND):
    """All p'-subgroups of Aut(P) acting freely on P - {0}, up to conjugacy.

    A subgroup acting freely acts semiregularly on the |P| - 1 nonzero
    elements, so its order divides |P| - 1 (hence is coprime to p).  Within
    the materialisation bound the search is exhaustive by construction; for
    larger Aut(P) the group is handled through its Sylow structure, which at
    desk scale only has to cover prime |P| - 1.  Results are cached; treat
    the returned list as read-only.
    """
    key = (group, bound)
    if key in _survey_cache:
        return _survey_cache[key]
    _survey_cache[key] = _survey(group, bound)
    return _survey_cache[key]


def _survey(group, bound):
    pairs = [build_inertial_pair(group, ())]
    n = group.order
    if n <= 2:
        return pairs
    aut = enumerate_aut(group)
    if aut.order <= bound:
        reps = _survey_materialised(group, aut, bound)
    else:
        reps = _survey_generator_backed(group, aut)
    for gens in reps:
        pairs.append(build_inertial_pair(group, gens, bound=bound))
    pairs.sort(key=lambda pr: (pr.order, [g.matrix for g in pr.gens]))
    return pairs


def _survey_materialised(group, aut, bound):
    # everything runs on permutation tuples; matrices are recovered at the end
    table = aut.table(bound=bound)
    n = group.order
    all_perms = [aut.perm_of(a) for a in table.elements]
    gen_perms = [automorphism_to_perm(g) for g in aut.generators]
    ident = tuple(range(n))

    def fpf(perm):
        return all(perm[i] != i for i in range(1, n))

    def span_of(gens, cap=None):
        # cap lets extension attempts bail out as soon as the closure is
        # provably bigger than the target subgroup order
        seen = {ident}
        frontier = [ident]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = compose(g, x)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
                    if cap is not None and len(seen) > cap:
                        return seen
        return seen

    prime_divs = sorted(_prime_factors(n - 1))
    class_reps = []
    seen_keys = set()

    def mark_class(members, rep_gens):
        start = frozenset(members)
        orbit = {start}
        queue = [start]
        while queue:
            cur = queue.pop()
            for g in gen_perms:
                ginv = invert(g)
                conj = frozenset(
                    compose(compose(g, x), ginv) for x in cur
                )
                if conj not in orbit:
                    orbit.add(conj)
                    queue.append(conj)
        seen_keys.update(orbit)
        class_reps.append(rep_gens)

    # level 1: cyclic subgroups of prime order acting freely; for prime
    # order the whole subgroup is free as soon as one generator is
    for p in all_perms:
        if perm_order(p) in prime_divs and fpf(p):
            members = span_of([p])
            if frozenset(members) not in seen_keys:
                mark_class(members, (p,))

    # extend upward: every larger free subgroup has a normal subgroup of
    # prime index, so it appears inside the normalizer of a smaller class rep
    worklist = list(range(len(class_reps)))
    while worklist:
        idx = worklist.pop(0)
        gens = class_reps[idx]
        members = span_of(gens)
        mset = frozenset(members)
        m = len(members)
        if all((n - 1) % (m * q) for q in prime_divs):
            continue
        norm = []
        for p in all_perms:
            pinv = invert(p)
            if all(compose(compose(p, x), pinv) in mset for x in members):
                norm.append(p)
        for q in prime_divs:
            if (n - 1) % (m * q):
                continue
            for g in norm:
                if g in mset:
                    continue
                bigger = span_of(list(gens) + [g], cap=m * q)
                if len(bigger) != m * q:
                    continue
                if not all(fpf(x) for x in bigger if x != ident):
                    continue
                if frozenset(bigger) in seen_keys:
                    continue
                mark_class(bigger, tuple(gens) + (g,))
                worklist.append(len(class_reps) - 1)

    return [
        tuple(automorphism_from_perm(group, p) for p in gens)
        for gens in class_reps
    ]


def _survey_generator_backed(group, aut):
    """Free-complement classes when Aut(P) cannot be materialised.

    Requires |P| - 1 prime (all free subgroups then have prime order q and
    are Sylow q-subgroups of Aut(P), hence form a single conjugacy class);
    anything else is out of desk-scale reach and raises.
    """
    n = group.order
    m = n - 1
    if not _is_prime(m):
        raise OrderBoundExceeded(
            "survey beyond the materialisation bound needs |P| - 1 prime"
        )
    total = aut_order_formula(group)
    if total % m:
        return []
    if (total // m) % m == 0:
        raise OrderBoundExceeded(
            "cannot certify a single conjugacy class: Sylow subgroup too large"
        )
    rng = random.Random(SURVEY_SEED + n)
    for _ in range(5000):
        cand = aut.random_automorphism(rng)
        o = automorphism_order(cand)
        if o % m:
            continue
        perm = perm_power(automorphism_to_perm(cand), o // m)
        elem = automorphism_from_perm(group, perm)
        # prime order: the subgroup acts freely iff the generator does
        if any(perm[i] == i for i in range(1, n)):
            return []
        return [(elem,)]
    raise OrderBoundExceeded("random search for a free complement failed")


def _prime_factors(n):
    out = set()
    f = 2
    while f * f <= n:
        while n % f == 0:
            out.add(f)
            n //= f
        f += 1
    if n > 1:
        out.add(n)
    return out


def _is_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True
