"""Assembly of Picard-group answers from fusion data, plus diagram checkers.

Each ``pic_*`` operation builds an explicit finite group out of a character
group and an outer automorphism quotient, identifies its isomorphism type
with a certificate, and wraps everything in a report that records the
assumptions in force (characteristic zero, residue field large enough) and
whether the answer is exact or only an upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .autgroup import (
    compose_automorphisms,
    automorphism_to_perm,
    identity_automorphism,
    inverse_automorphism,
)
from .errors import (
    BadDivisor,
    ENotAbelian,
    EnotPPrime,
    FocalNotWhole,
    HypothesisError,
    InputError,
    NotComposable,
    NotCyclicDefect,
    NotFrobenius,
    ShapeMismatch,
    TrivialGroup,
)
from .groups import (
    FiniteGroup,
    HomomorphismData,
    cyclic_table,
    semidirect_product,
    sort_key,
)
from .identify import AbstractGroupId, abelian_basis, identify, verify_identification
from .pgroup import AbelianPGroup, quotient_with_projection

CHAR_ZERO = "char(O) = 0"
K_LARGE = "k large enough for all subgroups"


@dataclass(frozen=True)
class CoefficientProfile:
    """Largest t with a primitive p^t-th root of unity in O^x.

    ``m=None`` is the symbolic marker "large enough": every p-power root
    that could matter is available.
    """

    m: object = None

    def __post_init__(self):
        if self.m is not None and (not isinstance(self.m, int) or self.m < 0):
            raise InputError("profile must be a nonnegative integer or None")

    def cap(self, e):
        return e if self.m is None else min(e, self.m)

    def describe(self):
        return "m = inf" if self.m is None else f"m = {self.m}"


@dataclass
class PicardReport:
    """Assembled group with identification, constituents and provenance."""

    inputs: dict
    group: FiniteGroup
    identification: AbstractGroupId
    constituents: dict
    assumptions: tuple
    method: str
    upper_bound_only: bool = False
    notes: tuple = ()
    sequence: tuple = field(default=(), repr=False)

    def __post_init__(self):
        prod = 1
        for g in self.constituents.values():
            prod *= g.order
        if prod != self.group.order:
            raise InputError(
                "assembled order does not match the constituent product"
            )
        if not verify_identification(self.group, self.identification):
            raise InputError("identification certificate failed verification")


# -- character groups ------------------------------------------------------------


@dataclass
class DualAbelianGroup:
    """Hom(A, k^x) for an abelian table A, as value tuples on a basis."""

    source: FiniteGroup
    basis: tuple
    orders: tuple
    coords_of: dict

    def table(self):
        moduli = self.orders

        def op(a, b):
            return tuple((x + y) % m for x, y, m in zip(a, b, moduli))

        elements = _all_tuples(moduli)
        return FiniteGroup(
            elements, op, identity=(0,) * len(moduli), name="Hom"
        )

    def precompose_action(self, conj):
        """The map chi -> chi o conj as a function on value tuples.

        ``conj`` must be an automorphism of the source given as a callable.
        """
        d = self.orders
        k = [
            self.coords_of[conj(b)] for b in self.basis
        ]

        def act(values):
            out = []
            for i in range(len(d)):
                total = 0
                for j in range(len(d)):
                    num = values[j] * k[i][j] * d[i]
                    if num % d[j]:
                        raise InputError("character action is not integral")
                    total += num // d[j]
                out.append(total % d[i])
            return tuple(out)

        return act


def _all_tuples(moduli):
    out = [()]
    for m in moduli:
        out = [t + (v,) for t in out for v in range(m)]
    return out


def dual_abelian_group(table):
    """Character data for an abelian table: basis, orders, coordinates."""
    basis = tuple(abelian_basis(table))
    orders = tuple(table.element_order(b) for b in basis)
    coords_of = {}
    for combo in _all_tuples(orders):
        x = table.identity
        for b, k in zip(basis, combo):
            y = table.identity
            for _ in range(k):
                y = table.op(y, b)
            x = table.op(x, y)
        coords_of[x] = combo
    return DualAbelianGroup(table, basis, orders, coords_of)


@dataclass
class CharacterData:
    """Hom(P/foc, O^x) with the outer action, in coordinate form."""

    quotient: AbelianPGroup
    moduli: tuple
    kept: tuple
    project: object
    lift: object
    prime: int

    def group(self):
        moduli = self.moduli

        def op(a, b):
            return tuple((x + y) % m for x, y, m in zip(a, b, moduli))

        return FiniteGroup(
            _all_tuples(moduli), op, identity=(0,) * len(moduli), name="Hom"
        )

    def induced_matrix(self, phi):
        """Matrix of the map induced on P/foc by an automorphism of P."""
        q = self.quotient
        r = q.rank
        cols = []
        for k in range(r):
            unit = q.element(tuple(1 if i == k else 0 for i in range(r)))
            cols.append(self.project(phi(self.lift(unit))).coords)
        return tuple(
            tuple(cols[k][j] for k in range(r)) for j in range(r)
        )

    def _inverse_induced(self, phi):
        mat = self.induced_matrix(phi)
        q = self.quotient
        moduli = q.moduli
        r = q.rank
        ident = tuple(
            tuple(1 if i == j else 0 for j in range(r)) for i in range(r)
        )

        def mul(a, b):
            return tuple(
                tuple(
                    sum(a[i][k] * b[k][j] for k in range(r)) % moduli[i]
                    for j in range(r)
                )
                for i in range(r)
            )

        power = mat
        prev = ident
        while power != ident:
            prev = power
            power = mul(mat, power)
        return prev

    def action_matrix(self, phi):
        """Matrix on character coordinates of chi -> chi o (induced phi)^-1."""
        inv = self._inverse_induced(phi)
        q = self.quotient
        p = self.prime
        caps = [self.moduli[a] for a in range(len(self.kept))]
        rows = []
        for a, i in enumerate(self.kept):
            row = []
            for b, j in enumerate(self.kept):
                num = inv[j][i] * caps[a]
                den = caps[b]
                if num % den:
                    raise InputError("character action is not integral")
                row.append(num // den)
            rows.append(tuple(row))
        return tuple(rows)

    def action(self, phi):
        mat = self.action_matrix(phi)
        moduli = self.moduli
        n = len(moduli)

        def act(values):
            return tuple(
                sum(mat[i][j] * values[j] for j in range(n)) % moduli[i]
                for i in range(n)
            )

        return act


def character_data_for_pair(pair, profile):
    """Character group of P/foc for an inertial pair, profile-capped."""
    q, project, lift = quotient_with_projection(pair.group, pair.foc)
    p = pair.group.p
    kept = tuple(
        i for i, e in enumerate(q.exponents) if profile.cap(e) > 0
    )
    moduli = tuple(p ** profile.cap(q.exponents[i]) for i in kept)
    return CharacterData(
        quotient=q,
        moduli=moduli,
        kept=kept,
        project=project,
        lift=lift,
        prime=p,
    )


# -- the pic_* assemblies -----------------------------------------------------------


def _require_table(out):
    if not isinstance(out, FiniteGroup):
        raise InputError(
            "outer automorphism group is not materialised at this size"
        )
    return out


def pic_local(pair, profile=None):
    """Picard group of the local block of P x| E: Hom(E, k^x) x| N/E.

    Hypotheses: E abelian of p'-order with focal subgroup all of P.  The
    assembled group is exact for the local block (not just a bound).
    """
    profile = profile or CoefficientProfile()
    e_table = pair.inertial
    if not e_table.is_abelian():
        raise ENotAbelian("inertial subgroup must be abelian")
    if gcd(e_table.order, pair.group.p) != 1:
        raise EnotPPrime("inertial subgroup must have p'-order")
    if not pair.foc.is_whole():
        raise FocalNotWhole("the focal subgroup must be all of P")
    group, dual, out = _hom_semidirect(pair)
    ident = identify(group.group)
    report = PicardReport(
        inputs={
            "defect_group": str(pair.group),
            "inertial_order": str(e_table.order),
            "profile": profile.describe(),
        },
        group=group.group,
        identification=ident,
        constituents={"character_group": group.left, "outer_quotient": group.right},
        assumptions=(CHAR_ZERO, K_LARGE),
        method="local-block-semidirect-assembly",
        notes=(
            "outer quotient acts on characters by conjugation precomposed "
            "with the inverse",
        ),
    )
    report.sequence = (group.embed_left, group.projection)
    return report


def _hom_semidirect(pair):
    """Hom(E, k^x) x| (N/E) with the contragredient conjugation action."""
    e_table = pair.inertial
    out = _require_table(pair.out_pf)
    dual = dual_abelian_group(e_table)
    hom_table = dual.table()

    def action(rep):
        rep_inv = inverse_automorphism(rep)

        def conj(e):
            return compose_automorphisms(
                compose_automorphisms(rep_inv, e), rep
            )

        return dual.precompose_action(conj)

    product = semidirect_product(hom_table, out, action, name="Pic")
    return product, dual, out


def pic_frobenius_bound(pair, profile=None):
    """The injective upper bound Hom(E, k^x) x| N_E for a Frobenius pair.

    Every Morita self-equivalence class has endopermutation source here, and
    the Picard group embeds into this bound; the bottom-row exact sequence
    is packaged with the report.
    """
    profile = profile or CoefficientProfile()
    if not pair.is_frobenius:
        raise NotFrobenius(
            "need a nontrivial cyclic inertial subgroup acting freely"
        )
    group, dual, out = _hom_semidirect(pair)
    ident = identify(group.group)
    report = PicardReport(
        inputs={
            "defect_group": str(pair.group),
            "inertial_order": str(pair.inertial.order),
            "profile": profile.describe(),
        },
        group=group.group,
        identification=ident,
        constituents={"character_group": group.left, "outer_quotient": group.right},
        assumptions=(CHAR_ZERO, K_LARGE),
        method="frobenius-inertial-upper-bound",
        upper_bound_only=True,
        notes=(
            "the Picard group embeds into this bound; every self-equivalence "
            "has endopermutation source",
        ),
        sequence=(group.embed_left, group.projection),
    )
    return report


def pic_cyclic(pair, d=None):
    """Picard group for a cyclic defect group: C_d x Aut(P)/E.

    ``d`` is the order of the source-algebra contribution, a divisor of |E|
    fixed by the block; the default models the local block where it equals
    |E|.  Aut(P) is abelian, so the product is direct.
    """
    group = pair.group
    if group.rank != 1 or group.order < 3:
        raise NotCyclicDefect("need a cyclic defect group of order >= 3")
    e_table = pair.inertial
    if e_table.order == 1:
        raise HypothesisError("inertial subgroup must be nontrivial")
    if d is None:
        d = e_table.order
    if d < 1 or e_table.order % d:
        raise BadDivisor(f"{d} does not divide |E| = {e_table.order}")
    out = _require_table(pair.out_pf)
    left = cyclic_table(d)
    product = semidirect_product(left, out, lambda h: (lambda a: a), name="Pic")
    ident = identify(product.group)
    return PicardReport(
        inputs={
            "defect_group": str(group),
            "inertial_order": str(e_table.order),
            "source_term_order": str(d),
        },
        group=product.group,
        identification=ident,
        constituents={"source_term": left, "outer_quotient": out},
        assumptions=(CHAR_ZERO, K_LARGE),
        method="cyclic-defect-direct-product",
        notes=(
            "every self-equivalence has trivial source; the automorphism "
            "group of a cyclic group is abelian, so the product is direct",
        ),
    )


def pic_kleinfour(case, profile=None):
    """Picard groups of the three Morita classes with Klein four defect."""
    from .autgroup import make_automorphism
    from .fusion import build_inertial_pair
    from .pgroup import make_group

    profile = profile or CoefficientProfile()
    klein = make_group(2, [1, 1])
    if case == "A4":
        rho = make_automorphism(klein, [[0, 1], [1, 1]])
        pair = build_inertial_pair(klein, [rho])
        report = pic_local(pair, profile)
        report.inputs["case"] = "A4"
        report.method = "kleinfour-morita-class"
        return report
    if case == "A5_principal":
        group = cyclic_table(2, name="Pic")
        ident = identify(group)
        return PicardReport(
            inputs={"case": "A5_principal", "defect_group": str(klein)},
            group=group,
            identification=ident,
            constituents={"outer_quotient": group},
            assumptions=(CHAR_ZERO, K_LARGE),
            method="kleinfour-morita-class",
            notes=(
                "the source-algebra term is trivial for this class; the "
                "nontrivial element comes from an outer involution",
            ),
        )
    if case == "nilpotent":
        report = pic_nilpotent(klein, profile)
        report.inputs["case"] = "nilpotent"
        return report
    raise InputError(f"unknown Klein-four case {case!r}")


def pic_nilpotent(group, profile=None):
    """Picard group of a nilpotent block: Hom(P, O^x) x| Aut(P)."""
    from .fusion import build_inertial_pair

    profile = profile or CoefficientProfile()
    if group.is_trivial:
        raise TrivialGroup("the defect group must be nontrivial")
    pair = build_inertial_pair(group, ())
    data = character_data_for_pair(pair, profile)
    hom_table = data.group()
    out = _require_table(pair.out_pf)

    def action(phi):
        return data.action(phi)

    product = semidirect_product(hom_table, out, action, name="Pic")
    ident = identify(product.group)
    return PicardReport(
        inputs={"defect_group": str(group), "profile": profile.describe()},
        group=product.group,
        identification=ident,
        constituents={"character_group": hom_table, "outer_quotient": out},
        assumptions=(
            CHAR_ZERO,
            K_LARGE,
            f"p-power roots of unity per profile ({profile.describe()})",
        ),
        method="nilpotent-block-character-assembly",
        notes=("for abelian P the outer automorphism group is all of Aut(P)",),
        sequence=(product.embed_left, product.projection),
    )


# -- exactness checkers --------------------------------------------------------------


@dataclass
class NodeDiagnostic:
    position: int
    kind: str
    ok: bool
    detail: str = ""


@dataclass
class SequenceReport:
    ok: bool
    nodes: tuple

    def __bool__(self):
        return self.ok


def verify_exact_sequence(maps, head=True, tail=True):
    """Check exactness of 1 -> A -> ... -> Z -> 1 given the inner maps.

    ``maps`` are composable HomomorphismData; exactness means image equals
    kernel at every interior group, injectivity at the head (the implicit
    "1 ->") and surjectivity at the tail ("-> 1") unless disabled.
    """
    maps = list(maps)
    if not maps:
        raise NotComposable("empty sequence")
    for left, right in zip(maps, maps[1:]):
        if not left.target.same_universe(right.source):
            raise NotComposable("adjacent maps do not share a group")
        for a in left.target.elements:
            for b in left.target.elements:
                if left.target.op(a, b) != right.source.op(a, b):
                    raise NotComposable(
                        "adjacent groups share elements but not composition"
                    )
    nodes = []
    ok = True
    if head:
        inj = maps[0].is_injective()
        ok &= inj
        nodes.append(
            NodeDiagnostic(0, "head-injective", inj,
                           "" if inj else "first map has a kernel")
        )
    for i, (left, right) in enumerate(zip(maps, maps[1:]), start=1):
        image = left.image_set()
        kernel = set(right.kernel().elements)
        good = image == kernel
        ok &= good
        detail = ""
        if not good:
            detail = (
                f"image size {len(image)} vs kernel size {len(kernel)}"
            )
        nodes.append(NodeDiagnostic(i, "image-equals-kernel", good, detail))
    if tail:
        surj = maps[-1].is_surjective()
        ok &= surj
        nodes.append(
            NodeDiagnostic(len(maps), "tail-surjective", surj,
                           "" if surj else "last map is not onto")
        )
    return SequenceReport(bool(ok), tuple(nodes))


@dataclass
class DiagramReport:
    ok: bool
    failures: tuple
    degenerate: bool = False

    def __bool__(self):
        return self.ok


def verify_thm11_diagram(rows, mid_inclusions, right_inclusions):
    """Check the three-row inclusion diagram of source-term assemblies.

    ``rows`` are three (inclusion, projection) pairs sharing their left
    term, ordered smallest to largest; ``mid_inclusions`` and
    ``right_inclusions`` are the upward maps between the middle and right
    columns.  Each row must be exact at its first two nodes, every square
    must commute, and all vertical maps must be injective.
    """
    if len(rows) != 3 or len(mid_inclusions) != 2 or len(right_inclusions) != 2:
        raise ShapeMismatch("need three rows and two levels of inclusions")
    for incl, proj in rows:
        if not incl.target.same_universe(proj.source):
            raise ShapeMismatch("row maps are not composable")
    left = rows[0][0].source
    for incl, _ in rows[1:]:
        if not incl.source.same_universe(left):
            raise ShapeMismatch("rows do not share their left term")
    if all(
        incl.source.order == 1
        and incl.target.order == 1
        and proj.target.order == 1
        for incl, proj in rows
    ):
        return DiagramReport(True, (), degenerate=True)
    failures = []
    for i, (incl, proj) in enumerate(rows):
        row_ok = verify_exact_sequence([incl, proj], head=True, tail=False)
        if not row_ok:
            failures.append(f"row {i} is not exact")
    for i, vert in enumerate(mid_inclusions):
        if not vert.source.same_universe(rows[i][0].target):
            raise ShapeMismatch(f"middle inclusion {i} has the wrong source")
        if not vert.target.same_universe(rows[i + 1][0].target):
            raise ShapeMismatch(f"middle inclusion {i} has the wrong target")
        if not vert.is_injective():
            failures.append(f"middle inclusion {i} is not injective")
        for x in rows[i][0].source.elements:
            if vert(rows[i][0](x)) != rows[i + 1][0](x):
                failures.append(f"left square {i} does not commute")
                break
    for i, vert in enumerate(right_inclusions):
        if not vert.source.same_universe(rows[i][1].target):
            raise ShapeMismatch(f"right inclusion {i} has the wrong source")
        if not vert.target.same_universe(rows[i + 1][1].target):
            raise ShapeMismatch(f"right inclusion {i} has the wrong target")
        if not vert.is_injective():
            failures.append(f"right inclusion {i} is not injective")
        mid = mid_inclusions[i]
        for x in rows[i][1].source.elements:
            if vert(rows[i][1](x)) != rows[i + 1][1](mid(x)):
                failures.append(f"right square {i} does not commute")
                break
    return DiagramReport(not failures, tuple(failures))
