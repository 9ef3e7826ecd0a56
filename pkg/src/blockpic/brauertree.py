"""Brauer-tree combinatorics for cyclic blocks.

A tree is given by its vertices, each carrying a cyclic ordering of the
incident edge labels, together with a two-colouring: every edge joins a
rho-vertex to a sigma-vertex.  The permutations rho and sigma are derived
from the orderings, the syzygy operator walks hook states U_i / V_i, and
the parity checker reproduces the congruence argument for self-equivalences
given by syzygy powers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    BadCyclicOrder,
    InputError,
    NoStabilizedVertex,
    NotATree,
    NotTransitive,
    OrderBoundExceeded,
)

RHO, SIGMA = "rho", "sigma"


@dataclass(frozen=True)
class HookState:
    """A uniserial hook: kind "U" or "V" plus an edge label."""

    kind: str
    edge: object

    def __post_init__(self):
        if self.kind not in ("U", "V"):
            raise InputError("hook kind must be 'U' or 'V'")

    def __str__(self):
        return f"{self.kind}_{self.edge}"


@dataclass(frozen=True)
class BrauerTree:
    """Edge labels with derived permutations rho and sigma.

    ``vertex_orders`` lists every vertex's incident edges in cyclic order;
    ``kinds`` assigns each vertex to the rho or sigma side.
    """

    edges: tuple
    vertex_orders: tuple
    kinds: tuple
    rho: dict
    sigma: dict

    @property
    def num_edges(self):
        return len(self.edges)

    def omega(self, state):
        """One syzygy step: U_i -> V_{rho(i)}, V_i -> U_{sigma(i)}."""
        if state.edge not in self.rho:
            raise InputError(f"unknown edge {state.edge!r}")
        if state.kind == "U":
            return HookState("V", self.rho[state.edge])
        return HookState("U", self.sigma[state.edge])

    def states(self):
        return [HookState(k, e) for k in ("U", "V") for e in self.edges]

    def vertex_of(self, edge, kind):
        for idx, (order, k) in enumerate(zip(self.vertex_orders, self.kinds)):
            if k == kind and edge in order:
                return idx
        raise InputError(f"edge {edge!r} has no {kind} vertex")


def build_tree(vertex_orders, rho_vertices=None):
    """Validate a tree spec and derive the permutations.

    ``vertex_orders`` is a list of cyclic edge sequences, one per vertex.
    The two-colouring defaults to "first vertex is a rho-vertex" and is
    propagated by adjacency; pass explicit rho vertex indices to override.
    """
    orders = tuple(tuple(v) for v in vertex_orders)
    if not orders:
        raise NotATree("no vertices")
    for order in orders:
        if len(set(order)) != len(order):
            raise NotATree("an edge meets a vertex twice (loop)")
    edges = sorted(
        {e for order in orders for e in order}, key=lambda e: (str(type(e)), str(e))
    )
    ends = {}
    for idx, order in enumerate(orders):
        for e in order:
            ends.setdefault(e, []).append(idx)
    for e, at in ends.items():
        if len(at) != 2:
            raise NotATree(f"edge {e!r} must have exactly two end vertices")
    nv = len(orders)
    if nv != len(edges) + 1:
        raise NotATree("vertex count must exceed edge count by one")
    # connectivity and the bipartition by breadth-first search
    adjacency = {i: set() for i in range(nv)}
    for e, (a, b) in ends.items():
        adjacency[a].add(b)
        adjacency[b].add(a)
    colour = {}
    if rho_vertices is not None:
        rho_set = set(rho_vertices)
        for i in range(nv):
            colour[i] = RHO if i in rho_set else SIGMA
    else:
        colour[0] = RHO
    frontier = [next(iter(colour))]
    seen = set(frontier)
    while frontier:
        v = frontier.pop()
        for w in adjacency[v]:
            want = SIGMA if colour[v] == RHO else RHO
            if w in colour:
                if colour[w] != want:
                    raise BadCyclicOrder(
                        "vertex colouring is not proper on an edge"
                    )
            else:
                colour[w] = want
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    if len(seen) != nv:
        raise NotATree("graph is not connected")
    kinds = tuple(colour[i] for i in range(nv))
    rho = {}
    sigma = {}
    for order, kind in zip(orders, kinds):
        target = rho if kind == RHO else sigma
        n = len(order)
        for i, e in enumerate(order):
            if e in target:
                raise BadCyclicOrder(
                    f"edge {e!r} meets two {kind} vertices"
                )
            target[e] = order[(i + 1) % n]
    # every edge must appear on both sides
    for e in edges:
        if e not in rho or e not in sigma:
            raise BadCyclicOrder(
                f"edge {e!r} is missing a rho or sigma end"
            )
    tree = BrauerTree(tuple(edges), orders, kinds, rho, sigma)
    _check_transitive(tree)
    return tree


def _check_transitive(tree):
    if not tree.edges:
        raise NotATree("a tree needs at least one edge")
    start = tree.edges[0]
    x = start
    count = 0
    while True:
        x = tree.rho[tree.sigma[x]]
        count += 1
        if x == start:
            break
        if count > len(tree.edges):
            raise NotTransitive("rho o sigma is not a single cycle")
    if count != len(tree.edges):
        raise NotTransitive("rho o sigma is not a single cycle")


def omega(state, tree):
    return tree.omega(state)


def period(state, tree):
    """Least n >= 1 with omega^n(state) = state; always 2 * edge count."""
    n = 1
    x = tree.omega(state)
    while x != state:
        x = tree.omega(x)
        n += 1
    assert n == 2 * tree.num_edges, "period must be twice the edge count"
    return n


def parity_classes(tree, n):
    """The map induced by omega^n on U-states.

    Even n permutes the U-states; odd n carries them to V-states.
    """
    out = {}
    for e in tree.edges:
        state = HookState("U", e)
        x = state
        for _ in range(n % (2 * tree.num_edges)):
            x = tree.omega(x)
        out[state] = x
    return out


@dataclass(frozen=True)
class TreeAutomorphism:
    """Edge and vertex maps of an order-preserving tree automorphism."""

    edge_map: tuple
    vertex_map: tuple
    stabilized_vertices: tuple

    def edge_image(self, e):
        return dict(self.edge_map)[e]

    @property
    def stabilizes_a_vertex(self):
        return bool(self.stabilized_vertices)


def tree_automorphisms(tree, bound=10):
    """All edge permutations extending to cyclic-order-preserving maps.

    Enumerates vertex bijections preserving adjacency, keeps those mapping
    every vertex's cyclic order to a rotation of the image's order, and
    dedupes by the induced edge permutation (distinct vertex maps can induce
    the same one, e.g. the flip of a single edge).  A vertex counts as
    stabilised when the edge permutation preserves its incident edges
    rotation-compatibly.
    """
    if tree.num_edges > bound:
        raise OrderBoundExceeded("tree automorphism search is desk-scale only")
    nv = len(tree.vertex_orders)
    ends = {}
    for idx, order in enumerate(tree.vertex_orders):
        for e in order:
            ends.setdefault(e, []).append(idx)
    adjacency = {i: set() for i in range(nv)}
    edge_between = {}
    for e, (a, b) in ends.items():
        adjacency[a].add(b)
        adjacency[b].add(a)
        edge_between[(a, b)] = e
        edge_between[(b, a)] = e
    degree = {i: len(tree.vertex_orders[i]) for i in range(nv)}
    by_edge_map = {}
    for perm in itertools.permutations(range(nv)):
        if any(degree[i] != degree[perm[i]] for i in range(nv)):
            continue
        if any(
            perm[b] not in adjacency[perm[a]]
            for a in range(nv)
            for b in adjacency[a]
        ):
            continue
        edge_map = {}
        ok = True
        for (a, b), e in edge_between.items():
            img = edge_between.get((perm[a], perm[b]))
            if img is None or edge_map.setdefault(e, img) != img:
                ok = False
                break
        if not ok:
            continue
        for v in range(nv):
            src = tuple(edge_map[e] for e in tree.vertex_orders[v])
            dst = tree.vertex_orders[perm[v]]
            if not _is_rotation(src, dst):
                ok = False
                break
        if not ok:
            continue
        key = tuple(sorted(edge_map.items(), key=lambda kv: str(kv[0])))
        by_edge_map.setdefault(key, tuple(perm))
    out = []
    for key in sorted(by_edge_map, key=str):
        edge_map = dict(key)
        stabilized = tuple(
            v
            for v in range(nv)
            if _is_rotation(
                tuple(edge_map[e] for e in tree.vertex_orders[v]),
                tree.vertex_orders[v],
            )
        )
        out.append(TreeAutomorphism(key, by_edge_map[key], stabilized))
    return out


def _is_rotation(a, b):
    if len(a) != len(b):
        return False
    if not a:
        return True
    n = len(a)
    return any(tuple(b[(i + k) % n] for i in range(n)) == a for k in range(n))


@dataclass
class ParityResult:
    admissible: bool
    residue: int
    modulus: int
    stabilized_vertex: int
    admissible_values_are_even: bool

    def __bool__(self):
        return self.admissible


def morita_parity_check(tree, auto, n):
    """Congruence test for syzygy powers inducing the edge permutation.

    Given a tree automorphism that stabilises a vertex (the imported
    hypothesis), pick an edge at that vertex; the walk distance from its
    hook to the image hook pins n modulo twice the edge count, and that
    residue is always even.
    """
    if isinstance(auto, TreeAutomorphism):
        candidates = [auto]
    else:
        mapping = dict(auto)
        candidates = [
            t for t in tree_automorphisms(tree)
            if dict(t.edge_map) == mapping
        ]
        if not candidates:
            raise InputError(
                "permutation is not an order-preserving tree automorphism"
            )
    auto = candidates[0]
    if not auto.stabilizes_a_vertex:
        raise NoStabilizedVertex(
            "the edge permutation stabilises no vertex; the congruence "
            "argument does not apply"
        )
    v = auto.stabilized_vertices[0]
    kind = tree.kinds[v]
    edge = next(e for e in tree.vertex_orders[v])
    image = auto.edge_image(edge)
    start = HookState("U" if kind == RHO else "V", edge)
    target = HookState("U" if kind == RHO else "V", image)
    x = start
    m = 0
    limit = 2 * tree.num_edges
    while x != target:
        x = tree.omega(x)
        m += 1
        if m > limit:
            raise InputError("walk failed to reach the image hook")
    return ParityResult(
        admissible=(n - m) % limit == 0,
        residue=m % limit,
        modulus=limit,
        stabilized_vertex=v,
        admissible_values_are_even=(m % 2 == 0),
    )


# -- shape families and rendering -----------------------------------------------------


def star_tree(leaves):
    """Star with the given number of edges, centre as the rho-vertex."""
    edges = list(range(1, leaves + 1))
    return build_tree([tuple(edges)] + [(e,) for e in edges])


def path_tree(length):
    """Path with edges 1..length."""
    orders = [(1,)]
    for i in range(1, length):
        orders.append((i, i + 1))
    orders.append((length,))
    return build_tree(orders)


def caterpillar_tree(leg_counts):
    """Spine path with extra leaf edges hanging off each spine vertex.

    ``leg_counts[i]`` legs are attached to spine vertex i; spine edges are
    labelled first, then legs.
    """
    spine = len(leg_counts) - 1
    if spine < 1:
        raise InputError("need at least two spine vertices")
    next_label = spine + 1
    orders = []
    leaf_orders = []
    for v, legs in enumerate(leg_counts):
        order = []
        if v > 0:
            order.append(v)
        for _ in range(legs):
            order.append(next_label)
            leaf_orders.append((next_label,))
            next_label += 1
        if v < spine:
            order.append(v + 1)
        if not order:
            raise InputError("isolated spine vertex")
        orders.append(tuple(order))
    return build_tree(orders + leaf_orders)


def render_tree(tree):
    """Plain-text description of the tree and its permutations."""
    lines = []
    for idx, (order, kind) in enumerate(zip(tree.vertex_orders, tree.kinds)):
        lines.append(
            f"vertex {idx} [{kind}]: ({' '.join(map(str, order))})"
        )
    lines.append("rho:   " + _cycle_string(tree.rho, tree.edges))
    lines.append("sigma: " + _cycle_string(tree.sigma, tree.edges))
    return "\n".join(lines)


def render_walk(tree, state, steps=None):
    """The omega-orbit of a hook state as an arrow-separated trace."""
    if steps is None:
        steps = 2 * tree.num_edges
    out = [str(state)]
    x = state
    for _ in range(steps):
        x = tree.omega(x)
        out.append(str(x))
    return " -> ".join(out)


def _cycle_string(perm, edges):
    seen = set()
    cycles = []
    for e in edges:
        if e in seen:
            continue
        cycle = [e]
        seen.add(e)
        x = perm[e]
        while x != e:
            cycle.append(x)
            seen.add(x)
            x = perm[x]
        if len(cycle) > 1:
            cycles.append("(" + " ".join(map(str, cycle)) + ")")
    return "".join(cycles) if cycles else "id"
