"""Automorphisms of finite abelian p-groups.

An automorphism is an integer matrix acting on the generators: column j is
the image of generator g_j, and row i is read modulo p^{e_i}.  A matrix is a
well-defined endomorphism exactly when p^{max(e_i - e_j, 0)} divides entry
(i, j); bijectivity is checked by image generation.

``enumerate_aut`` returns a generator-backed group whose order comes from a
Schreier-Sims chain on the permutation action, so orders are exact even when
the element list is too large to materialise.  The closed-form order count
(``aut_order_formula``) is kept strictly independent as a cross-check oracle.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .errors import (
    DivisibilityViolation,
    NotBijective,
    OrderBoundExceeded,
    ParentMismatch,
)
from .groups import FiniteGroup
from .pgroup import AbelianPGroup, GroupElement, coords_index, element_coords
from .perms import PermGroup, compose, invert, perm_order
from .snf import solve_homogeneous_mod_p

DEFAULT_ENUM_BOUND = 200_000


@dataclass(frozen=True)
class Automorphism:
    """Invertible endomorphism of an abelian p-group, as a row-reduced matrix."""

    group: AbelianPGroup
    matrix: tuple

    @property
    def sort_key(self):
        return self.matrix

    def __call__(self, x):
        return apply_automorphism(self, x)

    def __mul__(self, other):
        return compose_automorphisms(self, other)

    def __str__(self):
        return "[" + "; ".join(" ".join(map(str, row)) for row in self.matrix) + "]"


def _reduce_rows(group, rows):
    moduli = group.moduli
    return tuple(
        tuple(int(x) % m for x in row) for row, m in zip(rows, moduli)
    )


def _check_divisibility(group, matrix):
    p = group.p
    exps = group.exponents
    r = group.rank
    for i in range(r):
        for j in range(r):
            need = p ** max(exps[i] - exps[j], 0)
            if matrix[i][j] % need:
                raise DivisibilityViolation(
                    f"entry ({i},{j}) must be divisible by {need}"
                )


def _images_generate(group, matrix):
    # surjective == bijective for an endomorphism of a finite group; by
    # Nakayama it is enough that the reduction mod p is invertible, but we
    # test surjectivity directly by generating from the columns.
    r = group.rank
    cols = [
        GroupElement(group, tuple(matrix[i][j] for i in range(r)))
        for j in range(r)
    ]
    from .pgroup import subgroup_generated

    return subgroup_generated(group, cols).order == group.order


def make_automorphism(group, images):
    """Automorphism sending generator g_j to ``images[j]``.

    Each image may be a GroupElement of the same group or a raw coordinate
    sequence.  Raises DivisibilityViolation if the assignment does not define
    an endomorphism, NotBijective if it is not invertible.
    """
    r = group.rank
    if len(images) != r:
        raise ParentMismatch(f"expected {r} generator images")
    cols = []
    for img in images:
        if isinstance(img, GroupElement):
            if img.group != group:
                raise ParentMismatch("image from a different group")
            cols.append(img.coords)
        else:
            if len(img) != r:
                raise ParentMismatch("image has wrong coordinate length")
            cols.append(tuple(int(x) for x in img))
    rows = [[cols[j][i] for j in range(r)] for i in range(r)]
    matrix = _reduce_rows(group, rows)
    _check_divisibility(group, matrix)
    if not _images_generate(group, matrix):
        raise NotBijective("generator images do not generate the group")
    return Automorphism(group, matrix)


def automorphism_from_rows(group, rows):
    matrix = _reduce_rows(group, rows)
    _check_divisibility(group, matrix)
    if not _images_generate(group, matrix):
        raise NotBijective("matrix is not invertible on the group")
    return Automorphism(group, matrix)


def identity_automorphism(group):
    r = group.rank
    return Automorphism(
        group,
        tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r)),
    )


def apply_automorphism(phi, x):
    if x.group != phi.group:
        raise ParentMismatch("element from a different group")
    r = phi.group.rank
    moduli = phi.group.moduli
    coords = tuple(
        sum(phi.matrix[i][j] * x.coords[j] for j in range(r)) % moduli[i]
        for i in range(r)
    )
    return GroupElement(phi.group, coords)


def compose_automorphisms(phi, psi):
    """phi o psi (apply psi first)."""
    if phi.group != psi.group:
        raise ParentMismatch("automorphisms of different groups")
    r = phi.group.rank
    moduli = phi.group.moduli
    a, b = phi.matrix, psi.matrix
    rows = tuple(
        tuple(
            sum(a[i][k] * b[k][j] for k in range(r)) % moduli[i]
            for j in range(r)
        )
        for i in range(r)
    )
    return Automorphism(phi.group, rows)


def automorphism_to_perm(phi):
    """Permutation of the parent's canonically ordered element list."""
    group = phi.group
    coords = element_coords(group)
    index = coords_index(group)
    r = group.rank
    moduli = group.moduli
    m = phi.matrix
    out = []
    for c in coords:
        img = tuple(
            sum(m[i][j] * c[j] for j in range(r)) % moduli[i]
            for i in range(r)
        )
        out.append(index[img])
    return tuple(out)


def automorphism_from_perm(group, perm):
    coords = element_coords(group)
    index = coords_index(group)
    r = group.rank
    cols = []
    for j in range(r):
        unit = tuple(1 if i == j else 0 for i in range(r))
        cols.append(coords[perm[index[unit]]])
    rows = [[cols[j][i] for j in range(r)] for i in range(r)]
    return Automorphism(group, _reduce_rows(group, rows))


def automorphism_order(phi):
    return perm_order(automorphism_to_perm(phi))


def inverse_automorphism(phi):
    n = automorphism_order(phi)
    out = identity_automorphism(phi.group)
    for _ in range(n - 1):
        out = compose_automorphisms(out, phi)
    return out


# -- generating strategy ---------------------------------------------------------


def _primitive_root(p, e):
    """A generator of the unit group of Z/p^e for odd p."""
    modulus = p ** e
    phi = (p - 1) * p ** (e - 1)
    factors = _prime_factors(phi)
    for g in range(2, modulus):
        if g % p == 0:
            continue
        if all(pow(g, phi // q, modulus) != 1 for q in factors):
            return g
    raise ValueError("no primitive root found")


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


def aut_generators(group):
    """A generating set of Aut(P): unit scalings, transvections and swaps."""
    p = group.p
    exps = group.exponents
    r = group.rank
    gens = []

    def diag_with(i, unit):
        rows = [[1 if a == b else 0 for b in range(r)] for a in range(r)]
        rows[i][i] = unit
        return automorphism_from_rows(group, rows)

    for i in range(r):
        e = exps[i]
        if p == 2:
            if e == 2:
                gens.append(diag_with(i, 3))
            elif e >= 3:
                gens.append(diag_with(i, 2 ** e - 1))
                gens.append(diag_with(i, 5))
        else:
            gens.append(diag_with(i, _primitive_root(p, e)))
    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            rows = [[1 if a == b else 0 for b in range(r)] for a in range(r)]
            rows[i][j] = p ** max(exps[i] - exps[j], 0)
            gens.append(automorphism_from_rows(group, rows))
    for i in range(r - 1):
        if exps[i] == exps[i + 1]:
            rows = [[1 if a == b else 0 for b in range(r)] for a in range(r)]
            rows[i][i] = rows[i + 1][i + 1] = 0
            rows[i][i + 1] = rows[i + 1][i] = 1
            gens.append(automorphism_from_rows(group, rows))
    # dedupe while keeping deterministic order
    seen = set()
    out = []
    ident = identity_automorphism(group)
    for g in gens:
        if g.matrix not in seen and g != ident:
            seen.add(g.matrix)
            out.append(g)
    return out


def aut_order_formula(group):
    """Closed-form order of Aut(P), the independent counting oracle.

    With exponents listed in non-decreasing order e_1 <= ... <= e_n, let
    d_k = max{l : e_l = e_k} and c_k = min{l : e_l = e_k}; the order is the
    product of (p^{d_k} - p^{k-1}) with the contributions of the Hom blocks
    below and above the diagonal.
    """
    p = group.p
    e = sorted(group.exponents)
    n = len(e)
    if n == 0:
        return 1
    d = [max(l for l in range(n) if e[l] == e[k]) + 1 for k in range(n)]
    c = [min(l for l in range(n) if e[l] == e[k]) + 1 for k in range(n)]
    out = 1
    for k in range(n):
        out *= p ** d[k] - p ** k
    for j in range(n):
        out *= (p ** e[j]) ** (n - d[j])
    for i in range(n):
        out *= (p ** (e[i] - 1)) ** (n - c[i] + 1)
    return out


# -- the automorphism group ------------------------------------------------------


class AutomorphismGroup:
    """Aut(P), generator-backed with lazy materialisation.

    The exact order is always available through the stabiliser chain of the
    permutation action on P; the full element table is built on demand and
    only below the materialisation bound.
    """

    def __init__(self, group, generators):
        self.group = group
        self.generators = list(generators)
        self._perm_group = None
        self._table = None
        self._perm_of = None

    @property
    def degree(self):
        return self.group.order

    @property
    def perm_group(self):
        if self._perm_group is None:
            self._perm_group = PermGroup(
                self.degree,
                [automorphism_to_perm(g) for g in self.generators],
            )
        return self._perm_group

    @property
    def order(self):
        return self.perm_group.order()

    def __len__(self):
        return self.order

    def contains(self, phi):
        return automorphism_to_perm(phi) in self.perm_group

    def random_automorphism(self, rng):
        perm = self.perm_group.random_element(rng)
        return automorphism_from_perm(self.group, perm)

    def table(self, bound=DEFAULT_ENUM_BOUND):
        """The fully materialised FiniteGroup of Automorphism elements."""
        if self._table is None:
            n = self.order
            if n > bound:
                raise OrderBoundExceeded(
                    f"|Aut| = {n} exceeds materialisation bound {bound}"
                )
            perms = _perm_closure(
                [automorphism_to_perm(g) for g in self.generators],
                self.degree,
            )
            autos = [automorphism_from_perm(self.group, p) for p in perms]
            self._table = FiniteGroup(
                autos,
                compose_automorphisms,
                identity=identity_automorphism(self.group),
                name=f"Aut({self.group})",
            )
            self._perm_of = {
                a: automorphism_to_perm(a) for a in self._table.elements
            }
        return self._table

    def perm_of(self, phi):
        if self._perm_of is not None and phi in self._perm_of:
            return self._perm_of[phi]
        return automorphism_to_perm(phi)


def _perm_closure(gens, degree):
    ident = tuple(range(degree))
    seen = {ident}
    out = [ident]
    frontier = [ident]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = compose(g, x)
            if y not in seen:
                seen.add(y)
                out.append(y)
                frontier.append(y)
    return out


@lru_cache(maxsize=None)
def enumerate_aut(group):
    """Aut(P) as an AutomorphismGroup (cached per group)."""
    return AutomorphismGroup(group, aut_generators(group))


def aut_table(group, bound=DEFAULT_ENUM_BOUND):
    return enumerate_aut(group).table(bound=bound)


def enumerate_aut_bruteforce(group, cap=2_000_000):
    """Oracle mode: filter every divisibility-compatible matrix.

    Intended for tiny groups; raises OrderBoundExceeded when the candidate
    count would exceed ``cap``.
    """
    p = group.p
    exps = group.exponents
    r = group.rank
    if r == 0:
        return [identity_automorphism(group)]
    choices = []
    count = 1
    for i in range(r):
        for j in range(r):
            step = p ** max(exps[i] - exps[j], 0)
            vals = list(range(0, p ** exps[i], step))
            choices.append(vals)
            count *= len(vals)
            if count > cap:
                raise OrderBoundExceeded(
                    f"brute-force candidate count exceeds {cap}"
                )
    coords = element_coords(group)
    index = coords_index(group)
    moduli = group.moduli
    out = []
    for flat in itertools.product(*choices):
        rows = tuple(
            tuple(flat[i * r + j] for j in range(r)) for i in range(r)
        )
        # bijective on the underlying set: all images distinct
        images = set()
        ok = True
        for c in coords:
            img = tuple(
                sum(rows[i][j] * c[j] for j in range(r)) % moduli[i]
                for i in range(r)
            )
            if img in images:
                ok = False
                break
            images.add(img)
        if ok:
            out.append(Automorphism(group, rows))
    return out


# -- normalizers beyond the materialisation bound ---------------------------------


def normalizer_of_cyclic(group, phi, aut=None, tries=5000, seed=1729):
    """Normalizer of <phi> inside Aut(P) without materialising Aut(P).

    Works for elementary abelian P by solving the twisted commutation
    equations X*M = M^k*X over Z/p; the union over units k of the invertible
    solutions is the normalizer.  For groups with an Aut small enough to
    materialise, use the generic filter instead.
    """
    if any(e != 1 for e in group.exponents):
        raise OrderBoundExceeded(
            "linear-algebra normalizer needs an elementary abelian group"
        )
    p = group.p
    r = group.rank
    m = automorphism_order(phi)
    powers = {1: phi.matrix}
    cur = phi
    for k in range(2, m + 1):
        cur = compose_automorphisms(cur, phi)
        powers[k % m if k % m else m] = cur.matrix
    members = []
    seen = set()
    for k in range(1, m):
        if gcd(k, m) != 1:
            continue
        a = phi.matrix
        b = powers[k]
        # unknowns x_{ij}; equations sum_l x_il a_lj - b_il x_lj = 0
        rows = []
        for i in range(r):
            for j in range(r):
                coeff = [0] * (r * r)
                for l in range(r):
                    coeff[i * r + l] += a[l][j]
                    coeff[l * r + j] -= b[i][l]
                rows.append(coeff)
        basis = solve_homogeneous_mod_p(rows, p)
        if len(basis) > 20:
            raise OrderBoundExceeded("solution space too large to enumerate")
        for combo in itertools.product(range(p), repeat=len(basis)):
            vec = [0] * (r * r)
            for c, bvec in zip(combo, basis):
                for idx in range(r * r):
                    vec[idx] = (vec[idx] + c * bvec[idx]) % p
            rows_m = tuple(
                tuple(vec[i * r + j] for j in range(r)) for i in range(r)
            )
            if rows_m in seen:
                continue
            seen.add(rows_m)
            try:
                auto = automorphism_from_rows(group, rows_m)
            except (DivisibilityViolation, NotBijective):
                continue
            members.append(auto)
    return FiniteGroup(
        members,
        compose_automorphisms,
        identity=identity_automorphism(group),
        name="N",
    )
