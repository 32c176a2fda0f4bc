"""Projective spaces PG(m, q): points, hyperplanes, flats, incidence bitmasks.

Points are normalized homogeneous coordinate tuples (first nonzero entry 1,
entries encoded as field integers) listed in lexicographic order; a point's
index is its position in that list.  Hyperplanes use dual coordinates under
the same normalization, so hyperplane index h corresponds to the dual vector
points[h].  Point sets are plain int bitmasks: bit i set means point i is in
the set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .gf import FieldTable, build_field


class SpaceTooLarge(ValueError):
    """Point count would exceed the 10**6 guard."""


class ZeroVector(ValueError):
    """The zero vector does not define a projective point."""


class SamePoint(ValueError):
    """Two distinct points are required."""


MAX_POINTS = 10**6


def dot(f: FieldTable, u: tuple[int, ...], v: tuple[int, ...]) -> int:
    add = f.add
    mul = f.mul
    s = 0
    for a, b in zip(u, v):
        s = add[s][mul[a][b]]
    return s


def scale(f: FieldTable, c: int, v: tuple[int, ...]) -> tuple[int, ...]:
    row = f.mul[c]
    return tuple(row[x] for x in v)


def vadd(f: FieldTable, u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    add = f.add
    return tuple(add[a][b] for a, b in zip(u, v))


def normalize_vec(f: FieldTable, v: tuple[int, ...]) -> tuple[int, ...]:
    for x in v:
        if x != 0:
            if x == 1:
                return tuple(v)
            return scale(f, f.inv[x], v)
    raise ZeroVector("zero vector has no projective point")


def rref(f: FieldTable, rows: list[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form over GF(q); zero rows dropped."""
    mat = [list(r) for r in rows]
    ncols = len(mat[0]) if mat else 0
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        ic = f.inv[mat[r][c]]
        mat[r] = [f.mul[ic][x] for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                coef = mat[i][c]
                mat[i] = [
                    f.add[x][f.neg[f.mul[coef][y]]] for x, y in zip(mat[i], mat[r])
                ]
        pivots.append((r, c))
        r += 1
    return tuple(tuple(row) for row in mat[:r])


def null_space(f: FieldTable, rows: list[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    """RREF basis of {x : rows @ x = 0}."""
    red = rref(f, rows)
    ncols = len(rows[0])
    pivot_cols = []
    for row in red:
        for c in range(ncols):
            if row[c] != 0:
                pivot_cols.append(c)
                break
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        vec = [0] * ncols
        vec[fc] = 1
        for row, pc in zip(red, pivot_cols):
            vec[pc] = f.neg[row[fc]]
        basis.append(tuple(vec))
    return rref(f, basis) if basis else ()


class ProjSpace:
    """PG(m, q) with cached point list and lazy incidence structure."""

    def __init__(self, m: int, f: FieldTable):
        if m < 1:
            raise ValueError("projective dimension must be at least 1")
        q = f.q
        n_points = (q ** (m + 1) - 1) // (q - 1)
        if n_points > MAX_POINTS:
            raise SpaceTooLarge(f"PG({m},{q}) has {n_points} points")
        self.m = m
        self.f = f
        self.q = q
        self.n_points = n_points
        pts: list[tuple[int, ...]] = []
        for lead in range(m, -1, -1):
            zeros = (0,) * lead
            for tail in itertools.product(range(q), repeat=m - lead):
                pts.append(zeros + (1,) + tail)
        self.points: tuple[tuple[int, ...], ...] = tuple(pts)
        self.point_index: dict[tuple[int, ...], int] = {
            v: i for i, v in enumerate(pts)
        }
        self.all_mask = (1 << n_points) - 1
        self._incidence: tuple[int, ...] | None = None
        self._lines_through: dict[int, tuple[int, ...]] = {}
        self._all_lines: tuple[int, ...] | None = None
        self._codim2: tuple[Flat, ...] | None = None
        self._flat_masks: dict[tuple, int] = {}
        self._subgeoms: dict[tuple, SubGeometry] = {}

    def __repr__(self) -> str:
        return f"ProjSpace(m={self.m}, q={self.q})"

    @property
    def incidence(self) -> tuple[int, ...]:
        """incidence[h] = bitmask of points on hyperplane h."""
        if self._incidence is None:
            f = self.f
            pts = self.points
            masks = []
            for hvec in pts:
                mask = 0
                bit = 1
                for pvec in pts:
                    if dot(f, hvec, pvec) == 0:
                        mask |= bit
                    bit <<= 1
                masks.append(mask)
            self._incidence = tuple(masks)
        return self._incidence

    def lines_through(self, p: int) -> tuple[int, ...]:
        """Bitmasks of the (n-1)/q lines through point p."""
        if p not in self._lines_through:
            f = self.f
            seen = 1 << p
            out = []
            for r in range(self.n_points):
                if seen >> r & 1 or r == p:
                    continue
                mask = self._line_mask(p, r)
                seen |= mask
                out.append(mask)
            self._lines_through[p] = tuple(out)
        return self._lines_through[p]

    def _line_mask(self, p: int, r: int) -> int:
        f = self.f
        u = self.points[p]
        v = self.points[r]
        mask = (1 << p) | (1 << r)
        for c in range(1, f.q):
            w = normalize_vec(f, vadd(f, u, scale(f, c, v)))
            mask |= 1 << self.point_index[w]
        return mask

    def all_lines(self) -> tuple[int, ...]:
        if self._all_lines is None:
            seen: set[int] = set()
            out = []
            for p in range(self.n_points):
                for mask in self.lines_through(p):
                    if mask not in seen:
                        seen.add(mask)
                        out.append(mask)
            self._all_lines = tuple(out)
        return self._all_lines


_SPACES: dict[tuple[int, int], ProjSpace] = {}


def build_space(m: int, f: FieldTable) -> ProjSpace:
    key = (m, f.q)
    if key not in _SPACES:
        _SPACES[key] = ProjSpace(m, f)
    return _SPACES[key]


def space_for(m: int, q: int) -> ProjSpace:
    return build_space(m, build_field(q))


def normalize_point(space: ProjSpace, v: tuple[int, ...]) -> int:
    """Index of the projective point spanned by v."""
    return space.point_index[normalize_vec(space.f, tuple(v))]


def incident(space: ProjSpace, h: int, p: int) -> bool:
    return dot(space.f, space.points[h], space.points[p]) == 0


@dataclass(frozen=True)
class Flat:
    """Projective flat given by an RREF basis of its underlying subspace."""

    space: ProjSpace
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    def mask(self) -> int:
        key = self.basis
        cached = self.space._flat_masks.get(key)
        if cached is not None:
            return cached
        f = self.space.f
        k = len(self.basis)
        mask = 0
        for lead in range(k - 1, -1, -1):
            for tail in itertools.product(range(f.q), repeat=k - 1 - lead):
                coef = (0,) * lead + (1,) + tail
                vec = (0,) * (self.space.m + 1)
                for c, b in zip(coef, self.basis):
                    if c:
                        vec = vadd(f, vec, scale(f, c, b))
                mask |= 1 << self.space.point_index[normalize_vec(f, vec)]
        self.space._flat_masks[key] = mask
        return mask

    def contains_point(self, p: int) -> bool:
        return bool(self.mask() >> p & 1)


def flat_from_points(space: ProjSpace, indices) -> Flat:
    rows = [space.points[i] for i in indices]
    if not rows:
        raise ValueError("a flat needs at least one point")
    return Flat(space, rref(space.f, rows))


def flat_from_mask(space: ProjSpace, mask: int) -> Flat:
    return flat_from_points(space, bits_to_indices(mask))


def span_flats(space: ProjSpace, a: Flat, b: Flat) -> Flat:
    return Flat(space, rref(space.f, list(a.basis) + list(b.basis)))


def hyperplane_flat(space: ProjSpace, h: int) -> Flat:
    basis = null_space(space.f, [space.points[h]])
    return Flat(space, basis)


def hyperplanes_containing(space: ProjSpace, flat: Flat) -> list[int]:
    """Indices of hyperplanes through the flat, ascending."""
    dual_basis = null_space(space.f, list(flat.basis))
    if not dual_basis:
        return []
    f = space.f
    out = []
    k = len(dual_basis)
    for lead in range(k - 1, -1, -1):
        for tail in itertools.product(range(f.q), repeat=k - 1 - lead):
            coef = (0,) * lead + (1,) + tail
            vec = (0,) * (space.m + 1)
            for c, b in zip(coef, dual_basis):
                if c:
                    vec = vadd(f, vec, scale(f, c, b))
            out.append(space.point_index[normalize_vec(f, vec)])
    out.sort()
    return out


def flats_of_codim(space: ProjSpace, c: int) -> tuple[Flat, ...]:
    """All flats of codimension c (supported: 1 and 2), fixed order."""
    if c == 1:
        return tuple(hyperplane_flat(space, h) for h in range(space.n_points))
    if c != 2:
        raise ValueError("only codimension 1 and 2 are supported")
    if space._codim2 is None:
        f = space.f
        seen: dict[tuple, None] = {}
        for h1 in range(space.n_points):
            for h2 in range(h1 + 1, space.n_points):
                basis = null_space(f, [space.points[h1], space.points[h2]])
                if basis not in seen:
                    seen[basis] = None
        flats = [Flat(space, b) for b in sorted(seen)]
        space._codim2 = tuple(flats)
    return space._codim2


def line_through(space: ProjSpace, p: int, r: int) -> "PointSet":
    if p == r:
        raise SamePoint("line needs two distinct points")
    return PointSet(space, space._line_mask(p, r))


def bits_to_indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class PointSet:
    """A set of points of one space, stored as an int bitmask."""

    space: ProjSpace
    bits: int

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def indices(self) -> list[int]:
        return bits_to_indices(self.bits)

    def vectors(self) -> list[tuple[int, ...]]:
        return [self.space.points[i] for i in self.indices()]

    def contains(self, p: int) -> bool:
        return bool(self.bits >> p & 1)

    def union(self, other: "PointSet") -> "PointSet":
        return PointSet(self.space, self.bits | other.bits)

    def intersect(self, other: "PointSet") -> "PointSet":
        return PointSet(self.space, self.bits & other.bits)

    def minus(self, other: "PointSet") -> "PointSet":
        return PointSet(self.space, self.bits & ~other.bits)

    def __le__(self, other: "PointSet") -> bool:
        return self.bits & ~other.bits == 0


def point_set_from_indices(space: ProjSpace, indices) -> PointSet:
    bits = 0
    for i in indices:
        bits |= 1 << i
    return PointSet(space, bits)


@dataclass
class SubGeometry:
    """A flat viewed as its own PG(k, q), with index maps to the ambient."""

    flat: Flat
    sub: ProjSpace
    to_ambient: tuple[int, ...]
    from_ambient: dict[int, int]

    def mask_to_ambient(self, bits: int) -> int:
        out = 0
        for i in bits_to_indices(bits):
            out |= 1 << self.to_ambient[i]
        return out

    def mask_from_ambient(self, bits: int) -> int:
        out = 0
        for a, s in self.from_ambient.items():
            if bits >> a & 1:
                out |= 1 << s
        return out


def subgeometry(space: ProjSpace, flat: Flat) -> SubGeometry:
    key = flat.basis
    cached = space._subgeoms.get(key)
    if cached is not None:
        return cached
    k = flat.dim
    if k < 1:
        raise ValueError("subgeometry needs projective dimension >= 1")
    sub = build_space(k, space.f)
    f = space.f
    to_amb = []
    for coef in sub.points:
        vec = (0,) * (space.m + 1)
        for c, b in zip(coef, flat.basis):
            if c:
                vec = vadd(f, vec, scale(f, c, b))
        to_amb.append(space.point_index[normalize_vec(f, vec)])
    geom = SubGeometry(
        flat=flat,
        sub=sub,
        to_ambient=tuple(to_amb),
        from_ambient={a: s for s, a in enumerate(to_amb)},
    )
    space._subgeoms[key] = geom
    return geom
