"""Switching surgeries: local edits of a point set that preserve quasi-polarity.

Every operation returns (result, record).  The record names the geometric
inputs it committed to (hyperplane, vertex, carrier flats, replaced pieces)
so a run can be audited or replayed.  Deterministic tie-breaks everywhere:
scans go in index order and take the first admissible object.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .forms import (
    IncompatibleKind,
    PolarKind,
    card_pm,
    cone,
)
from .pg import (
    Flat,
    PointSet,
    ProjSpace,
    bits_to_indices,
    flat_from_mask,
    flat_from_points,
    hyperplane_flat,
    hyperplanes_containing,
    line_through,
    null_space,
    subgeometry,
)
from .spectra import classify, find_line_nucleus, profile


class RemovedNotInSet(ValueError):
    """Removed points must lie in the set."""


class SetsNotInHyperplane(ValueError):
    """Removed and added points must lie in the switching hyperplane."""


class NotSingular(ValueError):
    """Hyperplane section does not have the singular size."""


class NoConeDecomposition(ValueError):
    """Section is not a cone over a base in a hyperplane avoiding the vertex."""


class BaseWrongType(ValueError):
    """Replacement base fails the same-type classification."""


class NotEvenQ(ValueError):
    """Operation requires even field order."""


class NoDisjointFlat(ValueError):
    """No admissible flat disjoint from the truncated cone was found."""


class NotCollinear(ValueError):
    """The two pivot points must span a line inside the set."""


class ConstraintViolated(ValueError):
    """A replacement base breaks the shared-section constraint at a point."""

    def __init__(self, point: int):
        super().__init__(f"constraint violated at point {point}")
        self.point = point


class NotQ2Hyperbolic(ValueError):
    """Operation requires a hyperbolic-kind set over GF(2)."""


class NotQ2(ValueError):
    """Operation requires field order 2."""


class SingularHyperplane(ValueError):
    """Operation requires a non-singular hyperplane."""


class SectionWrongType(ValueError):
    """Replacement section fails the same-type classification."""


class NotQ3(ValueError):
    """Operation requires field order 3."""


class BadHyperplanes(ValueError):
    """Supplied hyperplane pair does not match the required configuration."""


class NotOval(ValueError):
    """Operation requires an oval in a plane of even order."""


class NotTangent(ValueError):
    """Line is not tangent to the set."""


def _pt_coords(space: ProjSpace, i: int) -> list[int]:
    return list(space.points[i])


def _pts_coords(space: ProjSpace, indices) -> list[list[int]]:
    return [list(space.points[i]) for i in indices]


def _basis_coords(flat: Flat) -> list[list[int]]:
    return [list(row) for row in flat.basis]


@dataclass
class SurgeryRecord:
    kind: str
    hyperplane: int | None
    vertex: int | None
    removed: PointSet
    added: PointSet
    details: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        """JSON form: points as coordinate rows, flats as coordinate lists.

        Hyperplanes appear as their dual coordinate vector; details entries
        are stored serialization-ready by each operation.
        """
        space = self.removed.space
        return {
            "construction": self.kind,
            "hyperplane": (
                None
                if self.hyperplane is None
                else _pt_coords(space, self.hyperplane)
            ),
            "vertex": None if self.vertex is None else _pt_coords(space, self.vertex),
            "removed": _pts_coords(space, self.removed.indices()),
            "added": _pts_coords(space, self.added.indices()),
            "details": self.details,
        }


def _point_flat(space: ProjSpace, p: int) -> Flat:
    return flat_from_points(space, [p])


def switch(
    s: PointSet, pi: int, removed: PointSet, added: PointSet
) -> tuple[PointSet, SurgeryRecord]:
    """Replace removed by added inside hyperplane pi."""
    space = s.space
    hmask = space.incidence[pi]
    if removed.bits & ~s.bits:
        raise RemovedNotInSet("removed points must lie in the set")
    if removed.bits & ~hmask or added.bits & ~hmask:
        raise SetsNotInHyperplane("removed and added must lie in the hyperplane")
    if removed.bits & added.bits:
        raise ValueError("added points overlap removed points")
    result = PointSet(space, (s.bits & ~removed.bits) | added.bits)
    rec = SurgeryRecord(
        kind="switch", hyperplane=pi, vertex=None, removed=removed, added=added
    )
    return result, rec


def _cone_decomposition(
    s: PointSet, pi: int
) -> tuple[int, Flat, PointSet]:
    """Vertex, carrier hyperplane flat of pi, and base of the section cone."""
    space = s.space
    section = PointSet(space, s.bits & space.incidence[pi])
    geom = subgeometry(space, hyperplane_flat(space, pi))
    sec_sub = geom.mask_from_ambient(section.bits)
    for v_sub in range(geom.sub.n_points):
        v = geom.to_ambient[v_sub]
        if not section.contains(v):
            continue
        vbit = 1 << v_sub
        rest = ~vbit
        ok = True
        for line in geom.sub.lines_through(v_sub):
            t = line & sec_sub & rest
            if t and t != line & rest:
                ok = False
                break
        if not ok:
            continue
        for h_sub in range(geom.sub.n_points):
            hmask = geom.sub.incidence[h_sub]
            if hmask >> v_sub & 1:
                continue
            base_bits = geom.mask_to_ambient(hmask & sec_sub)
            base = PointSet(space, base_bits)
            if cone(_point_flat(space, v), base).bits == section.bits:
                mu_amb = flat_from_points(
                    space, [geom.to_ambient[i] for i in bits_to_indices(hmask)]
                )
                return v, mu_amb, base
            break
    raise NoConeDecomposition("section is not a cone over a hyperplane base")


def _validate_base(
    space: ProjSpace, kind: PolarKind, carrier: Flat, base: PointSet
) -> None:
    try:
        base_kind = PolarKind(kind.family, kind.m - 2, kind.q)
    except IncompatibleKind as e:
        raise BaseWrongType(str(e)) from e
    geom = subgeometry(space, carrier)
    sub_bits = geom.mask_from_ambient(base.bits)
    if geom.mask_to_ambient(sub_bits) != base.bits:
        raise BaseWrongType("base is not contained in its carrier flat")
    cls = classify(PointSet(geom.sub, sub_bits), base_kind)
    if not cls.quasi_polar:
        raise BaseWrongType("base is not quasi-polar of the required kind")
    if kind.family == "parabolic" and not cls.classical_size:
        raise BaseWrongType("parabolic base must have the classical cardinality")


def _find_carrier(
    s: PointSet, pi: int, vertex: int, base: PointSet
) -> Flat:
    """First hyperplane flat of pi avoiding the vertex and containing base."""
    space = s.space
    geom = subgeometry(space, hyperplane_flat(space, pi))
    base_sub = geom.mask_from_ambient(base.bits)
    if geom.mask_to_ambient(base_sub) != base.bits:
        raise BaseWrongType("base is not contained in the hyperplane")
    v_sub = geom.from_ambient.get(vertex)
    for h_sub in range(geom.sub.n_points):
        hmask = geom.sub.incidence[h_sub]
        if v_sub is not None and hmask >> v_sub & 1:
            continue
        if base_sub & ~hmask:
            continue
        return flat_from_points(
            space, [geom.to_ambient[i] for i in bits_to_indices(hmask)]
        )
    raise BaseWrongType("no carrier hyperplane avoids the vertex")


def pivot(
    s: PointSet, kind: PolarKind, pi: int, new_base: PointSet
) -> tuple[PointSet, SurgeryRecord]:
    """Replace the cone section in a singular hyperplane by a cone over a new base."""
    space = s.space
    prof = profile(kind)
    section = PointSet(space, s.bits & space.incidence[pi])
    if section.size != prof.singular_size:
        raise NotSingular("hyperplane section does not have the singular size")
    vertex, mu, _base = _cone_decomposition(s, pi)
    carrier = _find_carrier(s, pi, vertex, new_base)
    _validate_base(space, kind, carrier, new_base)
    added = cone(_point_flat(space, vertex), new_base)
    result = PointSet(space, (s.bits & ~section.bits) | added.bits)
    rec = SurgeryRecord(
        kind="pivot",
        hyperplane=pi,
        vertex=vertex,
        removed=section,
        added=added,
        details={
            "mu": _basis_coords(mu),
            "carrier": _basis_coords(carrier),
        },
    )
    return result, rec


def cone_swap(s: PointSet, pi: int) -> tuple[PointSet, SurgeryRecord]:
    """Swap a sub-cone through the section vertex for one through the nucleus."""
    space = s.space
    if space.f.p != 2:
        raise NotEvenQ("cone swap requires even field order")
    if space.m % 2 != 0 or space.m < 4:
        raise IncompatibleKind("cone swap needs even ambient dimension >= 4")
    kind = PolarKind("parabolic", space.m, space.q)
    prof = profile(kind)
    section = PointSet(space, s.bits & space.incidence[pi])
    if section.size != prof.singular_size:
        raise NotSingular("hyperplane section does not have the singular size")
    nucleus = find_line_nucleus(s)
    if nucleus is None:
        raise ValueError("set has no nucleus-like point")
    vertex, mu, base = _cone_decomposition(s, pi)
    if not (space.incidence[pi] >> nucleus & 1):
        raise ValueError("nucleus does not lie in the hyperplane")

    geom_mu = subgeometry(space, mu)
    base_sub = PointSet(geom_mu.sub, geom_mu.mask_from_ambient(base.bits))
    base_nucleus = find_line_nucleus(base_sub)
    if base_nucleus is None:
        raise ValueError("base has no nucleus-like point")

    gen = _greedy_generator(base_sub, space.m // 2 - 2)
    nu_p_amb = [geom_mu.to_ambient[i] for i in bits_to_indices(gen.mask())]
    tangent_flat = Flat(
        geom_mu.sub,
        _span_basis(geom_mu.sub, gen, base_nucleus),
    )
    # P dot nu_P is the flat spanned by the vertex and nu_P
    cone_p_bits = flat_from_points(space, nu_p_amb + [vertex]).mask()
    trunc = section.bits & ~cone_p_bits

    for cand in _flat_hyperplanes(geom_mu.sub, tangent_flat):
        cand_amb = [geom_mu.to_ambient[i] for i in bits_to_indices(cand)]
        if set(cand_amb) == set(nu_p_amb):
            continue
        # the span with the nucleus must gain a dimension
        if nucleus in cand_amb:
            continue
        added_bits = flat_from_points(space, cand_amb + [nucleus]).mask()
        if added_bits & trunc:
            continue
        added = PointSet(space, added_bits)
        removed = PointSet(space, cone_p_bits)
        result = PointSet(space, (s.bits & ~removed.bits) | added.bits)
        rec = SurgeryRecord(
            kind="cone-swap",
            hyperplane=pi,
            vertex=vertex,
            removed=removed,
            added=added,
            details={
                "nucleus": _pt_coords(space, nucleus),
                "base_nucleus": _pt_coords(space, geom_mu.to_ambient[base_nucleus]),
                "mu": _basis_coords(mu),
                "nu_p": _basis_coords(flat_from_points(space, sorted(nu_p_amb))),
                "nu_n": _basis_coords(flat_from_points(space, sorted(cand_amb))),
            },
        )
        return result, rec
    raise NoDisjointFlat("no nucleus-cone flat avoids the truncated cone")


def _indices_to_bits(indices) -> int:
    bits = 0
    for i in indices:
        bits |= 1 << i
    return bits


def _span_basis(space: ProjSpace, flat: Flat, extra_point: int):
    from .pg import rref

    return rref(space.f, list(flat.basis) + [space.points[extra_point]])


def _flat_hyperplanes(space: ProjSpace, flat: Flat):
    """Masks (in space indices) of the hyperplanes of a flat, fixed order."""
    geom = subgeometry(space, flat)
    for h_sub in range(geom.sub.n_points):
        yield geom.mask_to_ambient(geom.sub.incidence[h_sub])


def _greedy_generator(s: PointSet, target_dim: int) -> Flat:
    """Lex-first maximal flat inside s, extended greedily to target_dim."""
    space = s.space
    idx = s.indices()
    if not idx:
        raise ValueError("empty set has no generator")
    cur = flat_from_points(space, [idx[0]])
    while cur.dim < target_dim:
        extended = False
        for x in idx:
            if cur.contains_point(x):
                continue
            cand = flat_from_points(
                space, bits_to_indices(cur.mask()) + [x]
            )
            if cand.mask() & ~s.bits:
                continue
            cur = cand
            extended = True
            break
        if not extended:
            raise ValueError("no generator of the required dimension inside the set")
    return cur


def repeated_pivot(
    s: PointSet,
    kind: PolarKind,
    p: int,
    r: int,
    base_choices: dict[int, PointSet] | None = None,
) -> tuple[PointSet, SurgeryRecord]:
    """Pivot simultaneously in the tangent hyperplanes of all points of a line."""
    space = s.space
    base_choices = base_choices or {}
    line = line_through(space, p, r)
    if line.bits & ~s.bits:
        raise NotCollinear("the line through p and r must lie inside the set")
    prof = profile(kind)
    per_sizes = [
        (s.bits & space.incidence[h]).bit_count() for h in range(space.n_points)
    ]

    xi_basis = null_space(
        space.f,
        [
            space.points[_tangent_hyperplane(s, per_sizes, prof.singular_size, p)],
            space.points[_tangent_hyperplane(s, per_sizes, prof.singular_size, r)],
        ],
    )
    xi_mask = Flat(space, xi_basis).mask()

    result_bits = 0
    tangents = {}
    for R in line.indices():
        hR = _tangent_hyperplane(s, per_sizes, prof.singular_size, R)
        tangents[R] = hR
        section = PointSet(space, s.bits & space.incidence[hR])
        geom = subgeometry(space, hyperplane_flat(space, hR))
        r_sub = geom.from_ambient[R]
        sigma_sub = next(
            h
            for h in range(geom.sub.n_points)
            if not geom.sub.incidence[h] >> r_sub & 1
        )
        sigma_amb = flat_from_points(
            space,
            [geom.to_ambient[i] for i in bits_to_indices(geom.sub.incidence[sigma_sub])],
        )
        base = PointSet(space, sigma_amb.mask() & section.bits)
        if cone(_point_flat(space, R), base).bits != section.bits:
            raise NoConeDecomposition(f"tangent section at {R} is not a cone")
        new_base = base_choices.get(R, base)
        if new_base.bits != base.bits:
            if new_base.bits & ~sigma_amb.mask():
                raise BaseWrongType("replacement base must lie in the carrier flat")
            _validate_base(space, kind, sigma_amb, new_base)
        new_cone = cone(_point_flat(space, R), new_base)
        if new_cone.bits & xi_mask != section.bits & xi_mask:
            raise ConstraintViolated(R)
        result_bits |= new_cone.bits

    result = PointSet(space, result_bits)
    removed = PointSet(space, s.bits & ~result_bits)
    added = PointSet(space, result_bits & ~s.bits)
    rec = SurgeryRecord(
        kind="repeated-pivot",
        hyperplane=None,
        vertex=None,
        removed=removed,
        added=added,
        details={
            "line": _pts_coords(space, line.indices()),
            "tangent_hyperplanes": {
                ",".join(str(c) for c in space.points[k]): _pt_coords(space, v)
                for k, v in sorted(tangents.items())
            },
            "xi": _basis_coords(flat_from_mask(space, xi_mask)),
        },
    )
    return result, rec


def _tangent_hyperplane(
    s: PointSet, per_sizes: list[int], singular_size: int, p: int
) -> int:
    """The unique singular-size hyperplane whose section is a cone with vertex p."""
    space = s.space
    for h in range(space.n_points):
        if per_sizes[h] != singular_size:
            continue
        if not space.incidence[h] >> p & 1:
            continue
        sec = s.bits & space.incidence[h]
        rest = ~(1 << p)
        ok = True
        for line in space.lines_through(p):
            if line & ~space.incidence[h]:
                continue
            t = line & sec & rest
            if t and t != line & rest:
                ok = False
                break
        if ok:
            return h
    raise NoConeDecomposition(f"no tangent hyperplane found at point {p}")


def affine_switch(s: PointSet) -> tuple[PointSet, SurgeryRecord]:
    """Remove the symmetric difference of two generators through a common wall."""
    space = s.space
    if space.q != 2 or space.m % 2 != 1:
        raise NotQ2Hyperbolic("operation requires hyperbolic kind over GF(2)")
    kind = PolarKind("hyperbolic", space.m, 2)
    cls = classify(s, kind)
    if not cls.quasi_polar or not cls.classical_size:
        raise NotQ2Hyperbolic("set is not a classical-size hyperbolic quasi-polar set")
    n = kind.n
    g1 = _greedy_generator(s, n)
    geom = subgeometry(space, g1)
    nu_mask_amb = geom.mask_to_ambient(geom.sub.incidence[0])
    nu_flat = flat_from_points(space, bits_to_indices(nu_mask_amb))
    g2 = None
    for x in s.indices():
        if g1.contains_point(x):
            continue
        cand = flat_from_points(space, bits_to_indices(nu_mask_amb) + [x])
        if cand.mask() & ~s.bits:
            continue
        g2 = cand
        break
    if g2 is None:
        raise ValueError("no second generator through the wall")
    removed_bits = g1.mask() ^ g2.mask()
    span = flat_from_points(
        space, bits_to_indices(g1.mask() | g2.mask())
    )
    pi = hyperplanes_containing(space, span)[0]
    removed = PointSet(space, removed_bits)
    added = PointSet(space, 0)
    result = PointSet(space, s.bits & ~removed_bits)
    rec = SurgeryRecord(
        kind="affine-switch",
        hyperplane=pi,
        vertex=None,
        removed=removed,
        added=added,
        details={
            "generator_1": _basis_coords(g1),
            "generator_2": _basis_coords(g2),
            "wall": _basis_coords(nu_flat),
        },
    )
    return result, rec


def nonsingular_switch_q2(
    s: PointSet, pi: int, new_section: PointSet
) -> tuple[PointSet, SurgeryRecord]:
    """Replace a non-singular section over GF(2) by a same-type classical-size set."""
    space = s.space
    if space.q != 2:
        raise NotQ2("operation requires field order 2")
    if space.m % 2 != 0:
        raise IncompatibleKind("ambient dimension must be even")
    kind = PolarKind("parabolic", space.m, 2)
    prof = profile(kind)
    ell, cone_size, hyp = prof.sizes
    section = PointSet(space, s.bits & space.incidence[pi])
    if section.size == cone_size:
        raise SingularHyperplane("hyperplane is singular for the set")
    if section.size == ell:
        family = "elliptic"
    elif section.size == hyp:
        family = "hyperbolic"
    else:
        raise SingularHyperplane("section size matches no admissible size")
    if new_section.bits & ~space.incidence[pi]:
        raise SectionWrongType("replacement section must lie in the hyperplane")
    geom = subgeometry(space, hyperplane_flat(space, pi))
    sub_set = PointSet(geom.sub, geom.mask_from_ambient(new_section.bits))
    cls = classify(sub_set, PolarKind(family, space.m - 1, 2))
    # the replacement must carry the classical cardinality, otherwise the
    # section size at pi itself leaves the admissible range
    if not cls.quasi_polar or not cls.classical_size:
        raise SectionWrongType("replacement section is not quasi-polar of the type")
    result = PointSet(space, (s.bits & ~section.bits) | new_section.bits)
    rec = SurgeryRecord(
        kind="q2-switch",
        hyperplane=pi,
        vertex=None,
        removed=section,
        added=new_section,
        details={"section_type": family},
    )
    return result, rec


def internal_switch_q3(
    s: PointSet, xi: int, pi_sub: Flat
) -> tuple[PointSet, SurgeryRecord]:
    """Swap the affine part of a non-singular section for same-class points (q=3).

    The points of the set in xi outside pi_sub are replaced by the off points
    whose tangent-line count matches the section type: internal points when
    the section is elliptic, external points when it is hyperbolic.
    """
    space = s.space
    if space.q != 3:
        raise NotQ3("operation requires field order 3")
    if space.m % 2 != 0:
        raise IncompatibleKind("ambient dimension must be even")
    kind = PolarKind("parabolic", space.m, 3)
    prof = profile(kind)
    ell, cone_size, hyp = prof.sizes
    xi_mask = space.incidence[xi]
    section = PointSet(space, s.bits & xi_mask)
    if section.size == ell:
        family = "elliptic"
    elif section.size == hyp:
        family = "hyperbolic"
    else:
        raise BadHyperplanes("xi must be non-singular for the set")
    if pi_sub.dim != space.m - 2 or pi_sub.mask() & ~xi_mask:
        raise BadHyperplanes("pi_sub must be a hyperplane of xi")
    sec_kind = PolarKind(family, space.m - 1, 3)
    sub_prof = profile(sec_kind)
    if (pi_sub.mask() & section.bits).bit_count() != sub_prof.singular_size:
        raise BadHyperplanes("pi_sub must be singular for the section")

    zone = xi_mask & ~pi_sub.mask()
    removed_bits = s.bits & zone
    # replacement points share the class of the pole of xi: internal points
    # (elliptic perp section) for an elliptic section, external (hyperbolic
    # perp section) for a hyperbolic one
    eps = -1 if family == "elliptic" else 1
    tangent_count = card_pm(kind.n - 1, 3, eps)
    added_bits = 0
    for p_ in bits_to_indices(zone & ~s.bits):
        t = 0
        for line in space.lines_through(p_):
            if (line & s.bits).bit_count() == 1:
                t += 1
        if t == tangent_count:
            added_bits |= 1 << p_
    result = PointSet(space, (s.bits & ~removed_bits) | added_bits)
    rec = SurgeryRecord(
        kind="q3-switch",
        hyperplane=xi,
        vertex=None,
        removed=PointSet(space, removed_bits),
        added=PointSet(space, added_bits),
        details={
            "pi_sub": _basis_coords(pi_sub),
            "section_type": family,
        },
    )
    return result, rec


def oval_nucleus_swap(s: PointSet, tangent: int) -> tuple[PointSet, SurgeryRecord]:
    """Trade the tangency point of an even-order oval for the oval's nucleus."""
    space = s.space
    if space.m != 2 or space.f.p != 2:
        raise NotOval("operation requires a plane of even order")
    kind = PolarKind("parabolic", 2, space.q)
    cls = classify(s, kind)
    if not cls.quasi_polar or s.size != space.q + 1:
        raise NotOval("set is not an oval")
    sec = s.bits & space.incidence[tangent]
    if sec.bit_count() != 1:
        raise NotTangent("line is not tangent to the oval")
    nucleus = find_line_nucleus(s)
    if nucleus is None:
        raise NotOval("oval has no nucleus-like point")
    removed = PointSet(space, sec)
    added = PointSet(space, 1 << nucleus)
    result = PointSet(space, (s.bits & ~sec) | added.bits)
    rec = SurgeryRecord(
        kind="oval-swap",
        hyperplane=tangent,
        vertex=None,
        removed=removed,
        added=added,
        details={"nucleus": _pt_coords(space, nucleus)},
    )
    return result, rec


def shifted_nucleus_pivot(s: PointSet, pi: int) -> tuple[PointSet, SurgeryRecord]:
    """Pivot onto a collineation image of the base that moves the base nucleus."""
    space = s.space
    if space.f.p != 2:
        raise NotEvenQ("operation requires even field order")
    if space.m % 2 != 0 or space.m < 4:
        raise IncompatibleKind("operation needs even ambient dimension >= 4")
    kind = PolarKind("parabolic", space.m, space.q)
    prof = profile(kind)
    section = PointSet(space, s.bits & space.incidence[pi])
    if section.size != prof.singular_size:
        raise NotSingular("hyperplane section does not have the singular size")
    nucleus = find_line_nucleus(s)
    if nucleus is None:
        raise ValueError("set has no nucleus-like point")
    if not space.incidence[pi] >> nucleus & 1:
        raise ValueError("nucleus does not lie in the hyperplane")
    vertex, _mu0, _base0 = _cone_decomposition(s, pi)

    geom = subgeometry(space, hyperplane_flat(space, pi))
    v_sub = geom.from_ambient[vertex]
    n_sub = geom.from_ambient[nucleus]
    mu_sub_idx = next(
        h
        for h in range(geom.sub.n_points)
        if geom.sub.incidence[h] >> n_sub & 1 and not geom.sub.incidence[h] >> v_sub & 1
    )
    mu_amb = flat_from_points(
        space,
        [geom.to_ambient[i] for i in bits_to_indices(geom.sub.incidence[mu_sub_idx])],
    )
    base = PointSet(space, mu_amb.mask() & section.bits)
    if cone(_point_flat(space, vertex), base).bits != section.bits:
        raise NoConeDecomposition("section is not a cone over the chosen base")

    geom_mu = subgeometry(space, mu_amb)
    base_sub = PointSet(geom_mu.sub, geom_mu.mask_from_ambient(base.bits))
    n_mu = geom_mu.from_ambient[nucleus]
    if find_line_nucleus(base_sub) != n_mu:
        raise ValueError("base nucleus does not match the set nucleus")

    new_base_sub = _shift_by_elation(base_sub, n_mu)
    new_base = PointSet(space, geom_mu.mask_to_ambient(new_base_sub.bits))
    result, rec = pivot(s, kind, pi, new_base)
    rec.kind = "shifted-nucleus-pivot"
    rec.details.update(
        {
            "nucleus": _pt_coords(space, nucleus),
            "base_nucleus_before": _pt_coords(space, nucleus),
            "base_nucleus_after": _pt_coords(
                space, geom_mu.to_ambient[find_line_nucleus(new_base_sub)]
            ),
        }
    )
    return result, rec


def _shift_by_elation(base: PointSet, moved_point: int) -> PointSet:
    """Image of base under x -> x + phi(x) c, phi(moved_point) != 0, phi(c) = 0."""
    space = base.space
    f = space.f
    from .pg import normalize_vec, scale, vadd

    phi = next(
        h for h in range(space.n_points) if not space.incidence[h] >> moved_point & 1
    )
    phi_vec = space.points[phi]
    c_idx = bits_to_indices(space.incidence[phi])[0]
    c_vec = space.points[c_idx]
    bits = 0
    for i in base.indices():
        x = space.points[i]
        t = 0
        for a, b in zip(phi_vec, x):
            t = f.add[t][f.mul[a][b]]
        y = vadd(f, x, scale(f, t, c_vec)) if t else x
        bits |= 1 << space.point_index[normalize_vec(f, y)]
    return PointSet(space, bits)
