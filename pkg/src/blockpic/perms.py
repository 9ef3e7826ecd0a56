"""Permutation groups on {0..n-1} with a deterministic stabiliser chain.

Permutations are tuples; ``compose(a, b)`` means "apply b, then a", matching
composition of automorphisms.  The stabiliser chain gives exact group orders,
membership tests and uniform random sampling without listing elements.
"""

from __future__ import annotations

from math import gcd


def identity_perm(n):
    return tuple(range(n))


def compose(a, b):
    return tuple(a[x] for x in b)


def invert(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def perm_order(a):
    n = len(a)
    seen = [False] * n
    out = 1
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = a[j]
            length += 1
        out = out * length // gcd(out, length)
    return out


def perm_power(a, n):
    result = identity_perm(len(a))
    base = a
    if n < 0:
        base = invert(a)
        n = -n
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


class PermGroup:
    """Group generated by permutations, with a Schreier-Sims chain.

    The chain is built once, deterministically: candidate elements are sifted
    through the partial chain and surviving residues become strong generators
    at the level where sifting stopped.  Processing continues until every
    Schreier generator sifts to the identity, which certifies the chain.
    """

    def __init__(self, degree, generators):
        self.degree = degree
        ident = identity_perm(degree)
        gens = []
        for g in generators:
            g = tuple(g)
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise ValueError("not a permutation of the stated degree")
            if g != ident and g not in gens:
                gens.append(g)
        self.generators = gens
        self._bases = None
        self._transversals = None
        self._strong = None

    # -- chain construction --------------------------------------------------

    def _gens_at(self, k):
        return [g for g, tag in self._strong if tag >= k]

    def _extend_orbit(self, k):
        # extend only: existing coset representatives must never change,
        # otherwise already-processed Schreier generators would go stale
        ident = identity_perm(self.degree)
        trans = self._transversals[k]
        base = self._bases[k]
        if base not in trans:
            trans[base] = ident
        frontier = list(trans)
        gens = self._gens_at(k)
        while frontier:
            pt = frontier.pop()
            rep = trans[pt]
            for h in gens:
                img = h[pt]
                if img not in trans:
                    trans[img] = compose(h, rep)
                    frontier.append(img)

    def _sift(self, g):
        for k, base in enumerate(self._bases):
            img = g[base]
            rep = self._transversals[k].get(img)
            if rep is None:
                return g, k
            g = compose(invert(rep), g)
        return g, len(self._bases)

    def _build_chain(self):
        ident = identity_perm(self.degree)
        self._bases = []
        self._transversals = []
        self._strong = []
        processed = set()
        queue = list(reversed(self.generators))
        while queue:
            cand = queue.pop()
            residue, stop = self._sift(cand)
            if residue == ident:
                continue
            if stop == len(self._bases):
                moved = next(
                    i for i, x in enumerate(residue) if x != i
                )
                self._bases.append(moved)
                self._transversals.append({})
            self._strong.append((residue, stop))
            for k in range(stop + 1):
                self._extend_orbit(k)
                trans = self._transversals[k]
                gens = self._gens_at(k)
                for pt in sorted(trans):
                    rep = trans[pt]
                    for h in gens:
                        key = (k, pt, h)
                        if key in processed:
                            continue
                        processed.add(key)
                        schreier = compose(
                            invert(trans[h[pt]]), compose(h, rep)
                        )
                        if schreier != ident:
                            queue.append(schreier)

    def _ensure_chain(self):
        if self._strong is None:
            self._build_chain()

    # -- queries ---------------------------------------------------------------

    def order(self):
        self._ensure_chain()
        out = 1
        for trans in self._transversals:
            out *= len(trans)
        return out

    def __contains__(self, perm):
        self._ensure_chain()
        residue, _ = self._sift(tuple(perm))
        return residue == identity_perm(self.degree)

    def random_element(self, rng):
        """Uniformly random element, deterministic given the rng state."""
        self._ensure_chain()
        g = identity_perm(self.degree)
        for trans in self._transversals:
            pts = sorted(trans)
            rep = trans[pts[rng.randrange(len(pts))]]
            g = compose(g, rep)
        return g


def closure(generators, degree=None, cap=None):
    """All elements of the group generated by ``generators``, BFS order."""
    gens = [tuple(g) for g in generators]
    if degree is None:
        if not gens:
            raise ValueError("need a degree for the trivial group")
        degree = len(gens[0])
    ident = identity_perm(degree)
    seen = {ident}
    order_list = [ident]
    frontier = [ident]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = compose(g, x)
            if y not in seen:
                seen.add(y)
                order_list.append(y)
                frontier.append(y)
                if cap is not None and len(seen) > cap:
                    raise OverflowError("closure exceeded cap")
    return order_list
