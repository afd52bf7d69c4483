"""Parametric generators: solid tori, linked-ring chains, cell towers.

All generators share one pipeline: ideal geometry is laid out in floating
point, rounded once onto the integer lattice (at the declared scale), and from
then on every claim — disjointness, containment, linking — is established by
exact integer predicates.  Nothing downstream trusts the float layout.

The chain generator places each level's rings on a small circle inside a
meridional cross-section of the parent tube (a compact chain), with ring
planes rotating around the chain so that consecutive rings form Hopf links
and non-consecutive rings clear each other.  Ring sizes and clearances come
from a precomputed per-n design table; every instance is still re-verified
exactly after rounding, so the table is an optimization, not an assumption.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

from wildtower.predicates import (
    BoxGrid,
    aabb,
    orient3d,
    point_in_tet,
    point_on_triangle,
    segments_disjoint,
    tri_tet_disjoint,
)
from wildtower.simplicial import SimplicialComplex3, pairwise_disjoint
from wildtower.tower import Component, SubstitutionRule, Tower
from wildtower.units import default_scale

DEFAULT_BUDGET = 500_000

_COORD_LIMIT = 1 << 62  # lattice coordinates must stay in int64 storage
_FRAME_DENOM = 1 << 20


# ---------------------------------------------------------------------------
# small vector helpers (floats for layout only)
# ---------------------------------------------------------------------------


def _unit(v):
    n = math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
    if n == 0:
        raise ValueError("zero direction vector")
    return (v[0] / n, v[1] / n, v[2] / n)


def _fcross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _idot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _round_point(p, scale: int):
    out = tuple(round(c * scale) for c in p)
    if any(abs(c) >= _COORD_LIMIT for c in out):
        raise ValueError(
            f"coordinate overflow at scale {scale}: point {p} leaves the "
            "representable lattice"
        )
    return out


def integer_frame(f1, f2, denom: int = _FRAME_DENOM):
    """Integer frame approximating two (roughly orthogonal) float directions,
    with *exact* integer orthogonality.

    The first vector is rounded; the second is the rounded candidate projected
    off the first in integer arithmetic, then both are reduced by their gcd.
    Directions move by O(1/denom); orthogonality is exact by construction.
    """
    u = tuple(round(c * denom) for c in f1)
    if u == (0, 0, 0):
        raise ValueError("first frame direction rounds to zero")
    m = tuple(round(c * denom) for c in f2)
    uu = _idot(u, u)
    mu = _idot(m, u)
    v = tuple(m[i] * uu - mu * u[i] for i in range(3))
    if v == (0, 0, 0):
        raise ValueError("frame directions are parallel")

    def _reduce(w):
        g = math.gcd(math.gcd(abs(w[0]), abs(w[1])), abs(w[2]))
        return tuple(c // g for c in w)

    u, v = _reduce(u), _reduce(v)
    assert _idot(u, v) == 0
    return u, v


# ---------------------------------------------------------------------------
# torus specs and meshes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusSpec:
    """A solid torus: core circle of core_radius about center in the plane
    spanned by the integer frame, tube of minor_radius, meshed at n_u
    stations around the core and n_v sectors around the tube."""

    center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    frame: tuple = ((1, 0, 0), (0, 1, 0))
    core_radius: float = 1.0
    minor_radius: float = 0.45
    n_u: int = 20
    n_v: int = 12

    def __post_init__(self):
        f1, f2 = self.frame
        f1 = tuple(int(c) for c in f1)
        f2 = tuple(int(c) for c in f2)
        object.__setattr__(self, "frame", (f1, f2))
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if f1 == (0, 0, 0) or f2 == (0, 0, 0):
            raise ValueError("frame vectors must be nonzero")
        if _idot(f1, f2) != 0:
            raise ValueError("frame vectors must be exactly orthogonal")
        if not 0 < self.minor_radius < self.core_radius:
            raise ValueError("need 0 < minor_radius < core_radius")
        if self.n_u < 3 or self.n_v < 3:
            raise ValueError("angular resolutions must be at least 3")

    def basis(self):
        u = _unit(self.frame[0])
        v = _unit(self.frame[1])
        return u, v, _fcross(u, v)

    def to_json_dict(self) -> dict:
        return {
            "center": list(self.center),
            "frame": [list(self.frame[0]), list(self.frame[1])],
            "core_radius": self.core_radius,
            "minor_radius": self.minor_radius,
            "n_u": self.n_u,
            "n_v": self.n_v,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "TorusSpec":
        return cls(
            center=tuple(d["center"]),
            frame=(tuple(d["frame"][0]), tuple(d["frame"][1])),
            core_radius=d["core_radius"],
            minor_radius=d["minor_radius"],
            n_u=d["n_u"],
            n_v=d["n_v"],
        )


def _torus_vertex_layout(spec: TorusSpec, scale: int):
    """Lattice vertices, grouped per station: [center, B_0..B_{nv-1},
    M_0..M_{nv-1}], where B_j sit on the tube circle and M_j inscribe the
    polygon edge midpoints (so the mesh is contained in the ideal tube)."""
    u, v, w = spec.basis()
    R, rho = spec.core_radius, spec.minor_radius
    n_u, n_v = spec.n_u, spec.n_v
    rho_mid = rho * math.cos(math.pi / n_v)
    verts = []
    for i in range(n_u):
        theta = 2.0 * math.pi * i / n_u
        radial = tuple(
            math.cos(theta) * u[k] + math.sin(theta) * v[k] for k in range(3)
        )

        def at(r_off, z_off):
            return _round_point(
                tuple(
                    spec.center[k] + (R + r_off) * radial[k] + z_off * w[k]
                    for k in range(3)
                ),
                scale,
            )

        verts.append(at(0.0, 0.0))
        for j in range(n_v):
            phi = 2.0 * math.pi * j / n_v
            verts.append(at(rho * math.cos(phi), rho * math.sin(phi)))
        for j in range(n_v):
            phi = 2.0 * math.pi * (j + 0.5) / n_v
            verts.append(at(rho_mid * math.cos(phi), rho_mid * math.sin(phi)))
    return verts


def _hex_tets(c0, m0, b0, m1, c1, m0p, b1, m1p):
    """Six tetrahedra filling the hexahedron between two kite quads
    (c, m_prev, b, m_next), split around the main diagonal c0-b1.  Shared
    faces in a swept grid receive matching diagonals from both sides."""
    return [
        (c0, b1, m0, b0),
        (c0, b1, b0, m1),
        (c0, b1, m0, m0p),
        (c0, b1, m1, m1p),
        (c0, b1, c1, m0p),
        (c0, b1, c1, m1p),
    ]


def build_solid_torus(spec: TorusSpec, scale: int | None = None) -> SimplicialComplex3:
    """Tetrahedralized solid torus: n_u * n_v hexahedral cells, six tets each.

    Every tet is checked for nonzero orientation after lattice rounding;
    a degenerate cell (resolution too coarse for the scale) fails loudly.
    """
    scale = default_scale() if scale is None else scale
    verts = _torus_vertex_layout(spec, scale)
    n_u, n_v = spec.n_u, spec.n_v
    block = 2 * n_v + 1

    def c_idx(i):
        return (i % n_u) * block

    def b_idx(i, j):
        return (i % n_u) * block + 1 + (j % n_v)

    def m_idx(i, j):
        return (i % n_u) * block + 1 + n_v + (j % n_v)

    tets = []
    for i in range(n_u):
        for j in range(n_v):
            tets.extend(
                _hex_tets(
                    c_idx(i),
                    m_idx(i, j - 1),
                    b_idx(i, j),
                    m_idx(i, j),
                    c_idx(i + 1),
                    m_idx(i + 1, j - 1),
                    b_idx(i + 1, j),
                    m_idx(i + 1, j),
                )
            )
    for t in tets:
        if orient3d(verts[t[0]], verts[t[1]], verts[t[2]], verts[t[3]]) == 0:
            raise ValueError(
                f"degenerate tetrahedron {t} after rounding; increase the "
                "scale or lower the resolution"
            )
    return SimplicialComplex3(verts, tets=tets, scale=scale)


def core_polygon(spec: TorusSpec, scale: int | None = None) -> "PolyCurve":
    """The discrete core circle (an n_u-gon on the lattice)."""
    scale = default_scale() if scale is None else scale
    u, v, _ = spec.basis()
    R = spec.core_radius
    pts = []
    for i in range(spec.n_u):
        theta = 2.0 * math.pi * i / spec.n_u
        pts.append(
            _round_point(
                tuple(
                    spec.center[k]
                    + R * (math.cos(theta) * u[k] + math.sin(theta) * v[k])
                    for k in range(3)
                ),
                scale,
            )
        )
    return PolyCurve(pts)


# ---------------------------------------------------------------------------
# closed polygonal curves and linking numbers
# ---------------------------------------------------------------------------


class PolyCurve:
    """Simple closed polygonal curve on the integer lattice."""

    __slots__ = ("points",)

    def __init__(self, points: Sequence):
        pts = tuple(tuple(int(c) for c in p) for p in points)
        if len(pts) < 3:
            raise ValueError("a closed curve needs at least 3 vertices")
        if any(len(p) != 3 for p in pts):
            raise ValueError("curve points must be 3-tuples")
        n = len(pts)
        for i in range(n):
            if pts[i] == pts[(i + 1) % n]:
                raise ValueError(f"consecutive points {i} and {(i + 1) % n} coincide")
        # adjacent segments may not fold back onto each other
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            ab = tuple(b[k] - a[k] for k in range(3))
            bc = tuple(c[k] - b[k] for k in range(3))
            if _fcross(ab, bc) == (0, 0, 0) and _idot(ab, bc) < 0:
                raise ValueError(f"curve folds back on itself at vertex {i}")
        # non-adjacent segments must be disjoint (exact)
        for i in range(n):
            p1, q1 = pts[i], pts[(i + 1) % n]
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                p2, q2 = pts[j], pts[(j + 1) % n]
                if not segments_disjoint(p1, q1, p2, q2):
                    raise ValueError(
                        f"curve is not simple: segments {i} and {j} intersect"
                    )
        self.points = pts

    def __len__(self):
        return len(self.points)

    def segments(self):
        n = len(self.points)
        return [(self.points[i], self.points[(i + 1) % n]) for i in range(n)]

    def reversed(self) -> "PolyCurve":
        return PolyCurve(self.points[::-1])

    def translated(self, offset) -> "PolyCurve":
        dx, dy, dz = offset
        return PolyCurve([(x + dx, y + dy, z + dz) for x, y, z in self.points])


_PROJECTION_DIRECTIONS = (
    (0, 0, 1),
    (0, 1, 0),
    (1, 0, 0),
    (1, 1, 1),
    (1, 2, 3),
    (2, 1, 5),
    (3, 1, 2),
    (1, 3, 2),
    (5, 2, 1),
    (2, 5, 3),
    (1, 1, 2),
    (2, 1, 1),
    (1, 5, 7),
    (7, 3, 1),
)


def _projection_frame(d):
    for u in ((-d[1], d[0], 0), (-d[2], 0, d[0]), (0, -d[2], d[1])):
        if u != (0, 0, 0):
            v = _fcross(d, u)  # integer cross; (u, v, d) right-handed scaled
            return u, v
    raise ValueError("projection direction must be nonzero")


class _Degenerate(Exception):
    pass


def _crossing_sum(a: PolyCurve, b: PolyCurve, d) -> int:
    """Sum of crossing signs between the two curves in the projection along
    d.  Raises _Degenerate when the direction is not generic for this pair."""
    u, v = _projection_frame(d)

    def project(curve):
        pts2 = [( _idot(p, u), _idot(p, v)) for p in curve.points]
        heights = [_idot(p, d) for p in curve.points]
        return pts2, heights

    pa, ha = project(a)
    pb, hb = project(b)
    for pts2 in (pa, pb):
        n = len(pts2)
        for i in range(n):
            if pts2[i] == pts2[(i + 1) % n]:
                raise _Degenerate("segment projects to a point")

    def det(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    total = 0
    na, nb = len(pa), len(pb)
    for i in range(na):
        P, Q = pa[i], pa[(i + 1) % na]
        hp, hq = ha[i], ha[(i + 1) % na]
        lox, hix = min(P[0], Q[0]), max(P[0], Q[0])
        loy, hiy = min(P[1], Q[1]), max(P[1], Q[1])
        for j in range(nb):
            R, S = pb[j], pb[(j + 1) % nb]
            if max(R[0], S[0]) < lox or min(R[0], S[0]) > hix:
                continue
            if max(R[1], S[1]) < loy or min(R[1], S[1]) > hiy:
                continue
            d1 = det(P, Q, R)
            d2 = det(P, Q, S)
            d3 = det(R, S, P)
            d4 = det(R, S, Q)
            if d1 == 0 or d2 == 0 or d3 == 0 or d4 == 0:
                raise _Degenerate("projected segments touch non-transversally")
            if (d1 > 0) == (d2 > 0) or (d3 > 0) == (d4 > 0):
                continue
            # transverse crossing: exact heights at the common point
            ta = Fraction(d3, d3 - d4)
            tb = Fraction(d1, d1 - d2)
            height_a = hp + ta * (hq - hp)
            height_b = hb[j] + tb * (hb[(j + 1) % nb] - hb[j])
            if height_a == height_b:
                raise AssertionError(
                    "equal heights at a crossing despite disjoint curves"
                )
            seg_a = tuple(a.points[(i + 1) % na][k] - a.points[i][k] for k in range(3))
            seg_b = tuple(b.points[(j + 1) % nb][k] - b.points[j][k] for k in range(3))
            writhe = _idot(_fcross(seg_a, seg_b), d)
            if writhe == 0:
                raise _Degenerate("crossing with degenerate frame")
            sign = (1 if writhe > 0 else -1) * (1 if height_a > height_b else -1)
            total += sign
    return total


def linking_number(a: PolyCurve, b: PolyCurve, directions=None) -> int:
    """Linking number of two disjoint simple closed lattice curves.

    Signed crossings in a generic projection; the projection direction is the
    first of a fixed list of primitive integer vectors that avoids all
    degeneracies for this pair (every candidate either fails loudly or yields
    the same integer, so the choice does not matter).  An explicit candidate
    list can be supplied to force a particular projection.
    """
    for sa, pa in enumerate(a.segments()):
        for sb, pb in enumerate(b.segments()):
            if not segments_disjoint(pa[0], pa[1], pb[0], pb[1]):
                raise ValueError(
                    f"curves intersect: segment {sa} of the first meets "
                    f"segment {sb} of the second"
                )
    for d in _PROJECTION_DIRECTIONS if directions is None else directions:
        try:
            total = _crossing_sum(a, b, tuple(int(c) for c in d))
        except _Degenerate:
            continue
        if total % 2 != 0:
            raise AssertionError("odd crossing sum for closed curves")
        return total // 2
    raise ValueError(
        "no generic projection direction found (exhausted the candidate list)"
    )


# ---------------------------------------------------------------------------
# chain layout (necklace children)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainShrink:
    """Size ratios for one chain generation.

    chain_ratio: chain-circle radius d as a fraction of the parent tube radius;
    ring_ratio: child core radius / d;  tube_ratio: child tube radius / d;
    wobble_ratio: out-of-plane station offset amplitude / d.
    """

    chain_ratio: float
    ring_ratio: float
    tube_ratio: float
    wobble_ratio: float = 0.0

    def __post_init__(self):
        if not (0 < self.chain_ratio < 1):
            raise ValueError("chain_ratio must lie in (0, 1)")
        if self.ring_ratio <= 0 or self.tube_ratio <= 0:
            raise ValueError("ring_ratio and tube_ratio must be positive")
        if self.tube_ratio >= self.ring_ratio:
            raise ValueError("child tube must be thinner than its core radius")
        if self.wobble_ratio < 0:
            raise ValueError("wobble_ratio must be nonnegative")

    def to_json_dict(self) -> dict:
        return {
            "chain_ratio": self.chain_ratio,
            "ring_ratio": self.ring_ratio,
            "tube_ratio": self.tube_ratio,
            "wobble_ratio": self.wobble_ratio,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ChainShrink":
        return cls(**d)


# per-n layout constants found by a clearance-maximizing parameter scan:
# (ring_ratio, wobble_ratio, clearance/d, cluster_radius/d)
_CHAIN_DESIGNS = {
    3: (2.47, 0.0, 0.263, 3.373),
    4: (2.14, 1.0, 0.763, 3.295),
    5: (1.15, 0.0, 0.417, 2.124),
    6: (0.75, 0.0, 0.232, 1.750),
    7: (0.69, 0.0, 0.297, 1.680),
    8: (0.71, 0.25, 0.410, 1.728),
    9: (0.52, 0.0, 0.252, 1.515),
    10: (0.47, 0.0, 0.236, 1.470),
}


def default_shrink(n: int) -> ChainShrink:
    """Validated chain ratios for n rings (3 <= n <= 10)."""
    if n not in _CHAIN_DESIGNS:
        raise ValueError(
            f"no default chain layout for n={n}; supply explicit shrink ratios"
        )
    ring, wobble, clearance, cluster = _CHAIN_DESIGNS[n]
    return ChainShrink(
        chain_ratio=0.78 / cluster,
        ring_ratio=ring,
        tube_ratio=clearance / 2.5,
        wobble_ratio=wobble,
    )


def antoine_children(
    parent: TorusSpec,
    n: int,
    shrink: ChainShrink | None = None,
    n_u: int | None = None,
    n_v: int | None = None,
    scale: int | None = None,
    validate: bool = True,
) -> list[TorusSpec]:
    """Child torus specs forming a closed chain inside the parent tube.

    Station j sits at angle 2*pi*j/n on a circle of radius d inside the
    parent's meridional cross-section; ring planes rotate with the station
    (alternating for even n) so consecutive rings interlock.  With
    validate=True the children are meshed and checked exactly: consecutive
    cores Hopf-linked, others unlinked, all meshes pairwise disjoint and
    strictly inside the parent mesh — violations raise with a witness.
    """
    if n < 3:
        raise ValueError("a chain needs at least 3 rings")
    shrink = default_shrink(n) if shrink is None else shrink
    n_u = parent.n_u if n_u is None else n_u
    n_v = parent.n_v if n_v is None else n_v

    u, v, w = parent.basis()
    R = parent.core_radius
    d = shrink.chain_ratio * parent.minor_radius
    a = shrink.ring_ratio * d
    b = shrink.tube_ratio * d
    h = shrink.wobble_ratio * d
    twist = math.pi * math.ceil(n / 2) / n

    def to_world(p):
        # chain x -> parent radial (at station angle 0), y -> core-plane
        # normal, z -> core tangent
        return tuple(p[0] * u[k] + p[1] * w[k] + p[2] * v[k] for k in range(3))

    children = []
    for j in range(n):
        psi = 2.0 * math.pi * j / n
        phi = twist * j
        normal_j = (math.cos(psi), math.sin(psi), 0.0)
        tau_j = (-math.sin(psi), math.cos(psi), 0.0)
        v_j = (
            math.sin(phi) * normal_j[0],
            math.sin(phi) * normal_j[1],
            math.cos(phi),
        )
        station = (
            d * normal_j[0],
            d * normal_j[1],
            h * math.sin(phi),
        )
        offset = to_world(station)
        center = tuple(
            parent.center[k] + R * u[k] + offset[k] for k in range(3)
        )
        frame = integer_frame(to_world(tau_j), to_world(v_j))
        children.append(
            TorusSpec(
                center=center,
                frame=frame,
                core_radius=a,
                minor_radius=b,
                n_u=n_u,
                n_v=n_v,
            )
        )

    if validate:
        scale = default_scale() if scale is None else scale
        parent_mesh = build_solid_torus(parent, scale)
        meshes = [build_solid_torus(c, scale) for c in children]
        cores = [core_polygon(c, scale) for c in children]
        validate_chain_stage(parent_mesh, meshes, cores)
    return children


def validate_chain_stage(parent_mesh, child_meshes, child_cores) -> None:
    """Exact post-construction checks for one chain generation; raises
    ValueError with a witness on the first violation."""
    n = len(child_meshes)
    for i in range(n):
        for j in range(i + 1, n):
            lk = linking_number(child_cores[i], child_cores[j])
            consecutive = (j - i) % n in (1, n - 1)
            if consecutive and abs(lk) != 1:
                raise ValueError(
                    f"chain validation failed: cores {i},{j} should form a "
                    f"Hopf link but have linking number {lk}"
                )
            if not consecutive and lk != 0:
                raise ValueError(
                    f"chain validation failed: non-consecutive cores {i},{j} "
                    f"are linked (linking number {lk})"
                )
    ok, witness = pairwise_disjoint(child_meshes)
    if not ok:
        (pi, ti), (pj, tj) = witness
        raise ValueError(
            f"chain validation failed: children {pi} and {pj} intersect "
            f"(tets {ti}, {tj})"
        )
    for idx, child in enumerate(child_meshes):
        ok, reason = strictly_contains(parent_mesh, child)
        if not ok:
            raise ValueError(
                f"chain validation failed: child {idx} is not strictly "
                f"inside the parent ({reason})"
            )


# ---------------------------------------------------------------------------
# exact containment
# ---------------------------------------------------------------------------


class SolidLocator:
    """Grid-accelerated exact point/boundary queries against a tet mesh."""

    def __init__(self, solid: SimplicialComplex3):
        self.solid = solid
        self.tets = [solid.tet_points(i) for i in range(len(solid.tets))]
        boxes = [aabb(t) for t in self.tets]
        extent = max(
            (max(hi[k] - lo[k] for k in range(3)) for lo, hi in boxes),
            default=1,
        )
        self._tet_grid = BoxGrid(cell=max(extent, 1))
        for i, box in enumerate(boxes):
            self._tet_grid.insert(i, box)
        tris = solid.triangles[solid.boundary_triangle_rows()]
        self.boundary = [
            tuple(tuple(map(int, solid.vertices[v])) for v in tri) for tri in tris
        ]
        self._tri_grid = BoxGrid(cell=max(extent, 1))
        for i, tri in enumerate(self.boundary):
            self._tri_grid.insert(i, aabb(tri))

    def contains_point_strictly(self, p) -> bool:
        box = (p, p)
        inside = any(
            point_in_tet(p, self.tets[i]) for i in self._tet_grid.candidates(box)
        )
        if not inside:
            return False
        return not any(
            point_on_triangle(p, self.boundary[i])
            for i in self._tri_grid.candidates(box)
        )

    def tet_meets_boundary(self, tet_pts) -> int | None:
        """Index of a boundary triangle meeting the tet, or None."""
        for i in self._tri_grid.candidates(aabb(tet_pts)):
            if not tri_tet_disjoint(self.boundary[i], tet_pts):
                return i
        return None


def strictly_contains(
    parent: SimplicialComplex3, child: SimplicialComplex3
) -> tuple[bool, str | None]:
    """Exact test that the child solid lies in the parent's interior.

    Sufficient for connected children: every child vertex strictly inside,
    and no child tet meets any parent boundary triangle (leaving the solid
    would require crossing its boundary surface).
    """
    locator = SolidLocator(parent)
    for vi in range(child.n_vertices):
        p = tuple(int(c) for c in child.vertices[vi])
        if not locator.contains_point_strictly(p):
            return False, f"child vertex {vi} at {p} is not strictly inside"
    for ti in range(len(child.tets)):
        hit = locator.tet_meets_boundary(child.tet_points(ti))
        if hit is not None:
            return False, f"child tet {ti} meets parent boundary triangle {hit}"
    return True, None


# ---------------------------------------------------------------------------
# necklace towers
# ---------------------------------------------------------------------------


def default_resolutions(depth: int) -> tuple:
    """Mesh resolutions per level: generous at the root, fine enough on
    interior levels that their faceted tubes still contain the next chain,
    and cheap at the leaves (which contain nothing)."""
    if depth == 0:
        return ((20, 12),)
    return ((20, 12),) + ((28, 12),) * (depth - 1) + ((12, 8),)


@dataclass(frozen=True)
class NecklaceSpec:
    n: int = 4
    depth: int = 1
    shrink: ChainShrink | None = None
    resolutions: tuple | None = None
    root: TorusSpec | None = None

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("n must be at least 3")
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")
        if self.resolutions is not None:
            res = tuple((int(a), int(b)) for a, b in self.resolutions)
            if len(res) != self.depth + 1:
                raise ValueError(
                    f"need {self.depth + 1} resolution pairs, got {len(res)}"
                )
            object.__setattr__(self, "resolutions", res)

    def effective_resolutions(self) -> tuple:
        return (
            self.resolutions
            if self.resolutions is not None
            else default_resolutions(self.depth)
        )

    def effective_root(self) -> TorusSpec:
        root = self.root if self.root is not None else TorusSpec()
        n_u, n_v = self.effective_resolutions()[0]
        return replace(root, n_u=n_u, n_v=n_v)

    def total_tets(self) -> int:
        return sum(
            (self.n**k) * 6 * n_u * n_v
            for k, (n_u, n_v) in enumerate(self.effective_resolutions())
        )

    def to_json_dict(self) -> dict:
        return {
            "kind": "necklace",
            "n": self.n,
            "depth": self.depth,
            "shrink": self.shrink.to_json_dict() if self.shrink else None,
            "resolutions": [list(r) for r in self.resolutions]
            if self.resolutions
            else None,
            "root": self.root.to_json_dict() if self.root else None,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "NecklaceSpec":
        return cls(
            n=d.get("n", 4),
            depth=d.get("depth", 1),
            shrink=ChainShrink.from_json_dict(d["shrink"]) if d.get("shrink") else None,
            resolutions=tuple(tuple(r) for r in d["resolutions"])
            if d.get("resolutions")
            else None,
            root=TorusSpec.from_json_dict(d["root"]) if d.get("root") else None,
        )


def _bbox_diag_sq(mesh: SimplicialComplex3) -> int:
    lo = mesh.vertices.min(axis=0)
    hi = mesh.vertices.max(axis=0)
    return int(sum((int(h) - int(l)) ** 2 for l, h in zip(lo, hi)))


def build_necklace_tower(
    spec: NecklaceSpec,
    scale: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> Tower:
    """Recursive chain tower: level k holds n^k solid tori, each child chain
    exactly validated (linking, disjointness, strict containment) and each
    component annotated with its computed first Betti number."""
    scale = default_scale() if scale is None else scale
    total = spec.total_tets()
    if total > budget:
        raise ValueError(
            f"budget exceeded: spec needs {total} tetrahedra, budget is {budget}"
        )
    resolutions = spec.effective_resolutions()
    root_spec = spec.effective_root()

    def annotated(mesh: SimplicialComplex3, parent: int | None) -> Component:
        betti = mesh.betti()
        if tuple(betti) != (1, 1, 0, 0):
            raise RuntimeError(
                f"generated torus has Betti numbers {tuple(betti)}, "
                "expected (1, 1, 0, 0) — generator bug"
            )
        return Component(rank=betti.b1, is_cell=False, parent=parent, mesh=mesh)

    root_mesh = build_solid_torus(root_spec, scale)
    levels = [[annotated(root_mesh, None)]]
    spec_levels = [[root_spec]]
    mesh_levels = [[root_mesh]]

    for k in range(spec.depth):
        n_u, n_v = resolutions[k + 1]
        next_specs, next_meshes, next_comps = [], [], []
        for parent_idx, parent_spec in enumerate(spec_levels[k]):
            kids = antoine_children(
                parent_spec,
                spec.n,
                shrink=spec.shrink,
                n_u=n_u,
                n_v=n_v,
                validate=False,
            )
            kid_meshes = [build_solid_torus(c, scale) for c in kids]
            kid_cores = [core_polygon(c, scale) for c in kids]
            parent_mesh = mesh_levels[k][parent_idx]
            validate_chain_stage(parent_mesh, kid_meshes, kid_cores)
            parent_diag = _bbox_diag_sq(parent_mesh)
            for child_mesh in kid_meshes:
                if _bbox_diag_sq(child_mesh) >= parent_diag:
                    raise ValueError(
                        "child component does not shrink: bounding box "
                        "diagonal must strictly decrease with level"
                    )
                next_comps.append(annotated(child_mesh, parent_idx))
            next_specs.extend(kids)
            next_meshes.extend(kid_meshes)
        levels.append(next_comps)
        spec_levels.append(next_specs)
        mesh_levels.append(next_meshes)

    rule = SubstitutionRule({"torus": ["torus"] * spec.n}, {"torus": 1})
    return Tower(levels, rule=rule)


# ---------------------------------------------------------------------------
# cell towers
# ---------------------------------------------------------------------------


def _box_corners(lo, hi):
    (x0, y0, z0), (x1, y1, z1) = lo, hi
    return [
        (x0, y0, z0),
        (x1, y0, z0),
        (x1, y1, z0),
        (x0, y1, z0),
        (x0, y0, z1),
        (x1, y0, z1),
        (x1, y1, z1),
        (x0, y1, z1),
    ]


def _box_complex(lo, hi, scale: int) -> SimplicialComplex3:
    corners = _box_corners(lo, hi)
    tets = _hex_tets(0, 1, 2, 3, 4, 5, 6, 7)
    return SimplicialComplex3(corners, tets=tets, scale=scale)


def build_cell_tower(
    points: Sequence,
    depth: int,
    scale: int | None = None,
) -> Tower:
    """Nested boxes around collinear lattice points.

    Level 0 is one box around all points; each level splits every multi-point
    group at its widest gap and shrinks the margins, so components refine
    toward the points while staying pairwise disjoint and strictly nested.
    Every component is a 3-cell (rank 0) — this generator models exactly the
    rectifiable situation.
    """
    scale = default_scale() if scale is None else scale
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    pts = [tuple(int(c) for c in p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    if len(set(pts)) != len(pts):
        raise ValueError("points must be pairwise distinct")
    if len(pts) > 1:
        base = pts[0]
        direction = tuple(pts[1][k] - base[k] for k in range(3))
        for p in pts[2:]:
            if _fcross(direction, tuple(p[k] - base[k] for k in range(3))) != (
                0,
                0,
                0,
            ):
                raise ValueError(f"points are not collinear: {p} is off the line")
        axis = max(range(3), key=lambda k: abs(direction[k]))
        pts.sort(key=lambda p: p[axis])
        gaps = [pts[i + 1][axis] - pts[i][axis] for i in range(len(pts) - 1)]
        margin0 = (min(gaps) - 1) // 2
    else:
        axis = 0
        margin0 = scale // 4
    if margin0 >> depth < 1:
        raise ValueError(
            "points are too close together for this depth: integer margins "
            "would collapse before the deepest level"
        )

    def box_for(group, margin):
        lo = tuple(min(p[k] for p in group) - margin for k in range(3))
        hi = tuple(max(p[k] for p in group) + margin for k in range(3))
        return lo, hi

    def split(group):
        if len(group) == 1:
            return [group]
        gaps = [
            (group[i + 1][axis] - group[i][axis], i) for i in range(len(group) - 1)
        ]
        best = max(gaps, key=lambda t: (t[0], -t[1]))[1]
        return [group[: best + 1], group[best + 1 :]]

    groups = [list(pts)]
    levels = []
    for k in range(depth + 1):
        margin = margin0 >> k
        comps = []
        for gi, group in enumerate(groups):
            mesh = _box_complex(*box_for(group, margin), scale)
            betti = mesh.betti()
            if tuple(betti) != (1, 0, 0, 0):
                raise RuntimeError(
                    f"generated box has Betti numbers {tuple(betti)} — generator bug"
                )
            parent = None if k == 0 else _parent_of[gi]
            comps.append(Component(rank=0, is_cell=True, parent=parent, mesh=mesh))
        levels.append(comps)
        if k == depth:
            break
        next_groups, _parent_of = [], []
        for gi, group in enumerate(groups):
            for part in split(group):
                next_groups.append(part)
                _parent_of.append(gi)
        groups = next_groups

    tower = Tower(levels, declared_r=0)
    _assert_cell_tower_geometry(tower)
    return tower


def _assert_cell_tower_geometry(t: Tower) -> None:
    for k, level in enumerate(t.levels):
        ok, witness = pairwise_disjoint([c.mesh for c in level])
        if not ok:
            raise RuntimeError(f"cell tower level {k} overlaps itself: {witness}")
        if k > 0:
            for i, c in enumerate(level):
                ok, reason = strictly_contains(t.levels[k - 1][c.parent].mesh, c.mesh)
                if not ok:
                    raise RuntimeError(
                        f"cell tower nesting broken at level {k}, component {i}: "
                        f"{reason}"
                    )


# ---------------------------------------------------------------------------
# plane splits
# ---------------------------------------------------------------------------

_AXES = {"x": 0, "y": 1, "z": 2}


def plane_split(t: Tower, plane) -> tuple[Tower, Tower]:
    """Partition a geometric tower by an axis-aligned lattice plane.

    plane is (axis, coordinate) with axis in {0,1,2} (or "x"/"y"/"z") and the
    coordinate in lattice units.  Every component's mesh must lie strictly on
    one side; a component meeting the plane raises ValueError naming it.
    Returns the (below, above) towers, keeping level alignment (levels may be
    empty on one side).
    """
    axis, coord = plane
    if isinstance(axis, str):
        axis = _AXES.get(axis.lower())
    if axis not in (0, 1, 2):
        raise ValueError(f"plane axis must be one of x, y, z (got {plane[0]!r})")
    coord = int(coord)

    sides: list[list[int]] = []
    for k, level in enumerate(t.levels):
        level_sides = []
        for i, c in enumerate(level):
            if c.mesh is None:
                raise ValueError(
                    f"plane_split needs geometry: level {k} component {i} "
                    "has no mesh"
                )
            coords = c.mesh.vertices[:, axis]
            lo, hi = int(coords.min()), int(coords.max())
            if hi < coord:
                level_sides.append(0)
            elif lo > coord:
                level_sides.append(1)
            else:
                raise ValueError(
                    f"component straddles the plane: level {k} component {i} "
                    f"spans [{lo}, {hi}] across {'xyz'[axis]}={coord}"
                )
        sides.append(level_sides)

    # children must sit on their parent's side (guaranteed by containment)
    for k in range(1, t.n_levels):
        for i, c in enumerate(t.levels[k]):
            if sides[k][i] != sides[k - 1][c.parent]:
                raise RuntimeError(
                    f"nesting violates the split: level {k} component {i} "
                    "is on the other side of its parent"
                )

    def take(side: int) -> Tower:
        new_levels = []
        remap: dict[int, int] = {}
        for k, level in enumerate(t.levels):
            prev_remap = remap
            remap = {}
            comps = []
            for i, c in enumerate(level):
                if sides[k][i] != side:
                    continue
                remap[i] = len(comps)
                parent = None if k == 0 else prev_remap[c.parent]
                comps.append(
                    Component(
                        rank=c.rank,
                        is_cell=c.is_cell,
                        parent=parent,
                        mesh=c.mesh,
                        mesh_ref=c.mesh_ref,
                    )
                )
            new_levels.append(comps)
        return Tower(new_levels)

    return take(0), take(1)
