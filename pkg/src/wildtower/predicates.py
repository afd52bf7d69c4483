"""Exact geometric predicates on integer coordinates.

Every predicate here works on integer lattice points (arbitrary-precision
Python ints), so results are exact: no epsilons, no configuration-dependent
failures.  Floating point appears only in mesh *generation*, upstream of the
rounding step; everything downstream of rounding is decided here.

Conventions:
  * points are 3-tuples of ints (2-tuples for the planar predicates);
  * "disjoint" always means the *closed* sets do not meet — touching at a
    single point counts as intersecting;
  * a tetrahedron is a 4-tuple of points with nonzero orientation.
"""
from __future__ import annotations

from itertools import combinations

Point = tuple[int, int, int]


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def orient2d(a, b, c) -> int:
    """Sign of the signed area of triangle (a, b, c) in the plane."""
    return _sign((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def orient3d(a: Point, b: Point, c: Point, d: Point) -> int:
    """Sign of det(b-a, c-a, d-a): +1 if d lies on the positive side of the
    oriented plane through (a, b, c), -1 on the negative side, 0 if coplanar."""
    ux, uy, uz = b[0] - a[0], b[1] - a[1], b[2] - a[2]
    vx, vy, vz = c[0] - a[0], c[1] - a[1], c[2] - a[2]
    wx, wy, wz = d[0] - a[0], d[1] - a[1], d[2] - a[2]
    return _sign(
        ux * (vy * wz - vz * wy)
        - uy * (vx * wz - vz * wx)
        + uz * (vx * wy - vy * wx)
    )


def _sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


def _cross(u: Point, v: Point) -> Point:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _dot(u: Point, v: Point) -> int:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


# ---------------------------------------------------------------------------
# separating-axis disjointness for small convex hulls
# ---------------------------------------------------------------------------


def _axes_for(pts: tuple[Point, ...]) -> list[Point]:
    """Candidate face/side normals contributed by one simplex."""
    axes: list[Point] = []
    if len(pts) >= 3:
        for tri in combinations(range(len(pts)), 3):
            a, b, c = (pts[i] for i in tri)
            n = _cross(_sub(b, a), _sub(c, a))
            if n != (0, 0, 0):
                axes.append(n)
                if len(pts) == 3:
                    # flat simplex: in-plane edge normals cover coplanar cases
                    for u, v in ((a, b), (b, c), (c, a)):
                        e = _cross(_sub(v, u), n)
                        if e != (0, 0, 0):
                            axes.append(e)
    return axes


def _edges_of(pts: tuple[Point, ...]) -> list[Point]:
    return [
        _sub(pts[j], pts[i])
        for i, j in combinations(range(len(pts)), 2)
    ]


def _strictly_separates(axis: Point, pa: tuple[Point, ...], pb: tuple[Point, ...]) -> bool:
    da = [_dot(axis, p) for p in pa]
    db = [_dot(axis, p) for p in pb]
    return max(da) < min(db) or max(db) < min(da)


def convex_disjoint(pa: tuple[Point, ...], pb: tuple[Point, ...]) -> bool:
    """True iff the convex hulls of the two point sets (each a segment,
    triangle, or tetrahedron) are disjoint as closed sets.

    Uses the separating-axis theorem with face normals, edge-pair cross
    products, and (for flat simplices) in-plane edge normals.
    """
    for axis in _axes_for(pa):
        if _strictly_separates(axis, pa, pb):
            return True
    for axis in _axes_for(pb):
        if _strictly_separates(axis, pa, pb):
            return True
    for ea in _edges_of(pa):
        for eb in _edges_of(pb):
            axis = _cross(ea, eb)
            if axis != (0, 0, 0) and _strictly_separates(axis, pa, pb):
                return True
    # degenerate hulls (segments, collinear/parallel configurations) get no
    # axis from parallel edge pairs; edge directions and edge-perpendicular
    # difference components fill the gap
    if len(pa) == 2 or len(pb) == 2:
        for e in _edges_of(pa) + _edges_of(pb):
            if e != (0, 0, 0) and _strictly_separates(e, pa, pb):
                return True
        for ea in _edges_of(pa):
            for q in pb:
                axis = _cross(ea, _cross(ea, _sub(q, pa[0])))
                if axis != (0, 0, 0) and _strictly_separates(axis, pa, pb):
                    return True
        for eb in _edges_of(pb):
            for q in pa:
                axis = _cross(eb, _cross(eb, _sub(q, pb[0])))
                if axis != (0, 0, 0) and _strictly_separates(axis, pa, pb):
                    return True
    return False


def tets_disjoint(t1, t2) -> bool:
    return convex_disjoint(tuple(t1), tuple(t2))


def tri_tet_disjoint(tri, tet) -> bool:
    return convex_disjoint(tuple(tri), tuple(tet))


def tris_disjoint(t1, t2) -> bool:
    return convex_disjoint(tuple(t1), tuple(t2))


# ---------------------------------------------------------------------------
# point membership
# ---------------------------------------------------------------------------


def point_in_tet(p: Point, tet) -> bool:
    """True iff p lies in the *closed* tetrahedron."""
    a, b, c, d = tet
    faces = ((b, c, d, a), (a, c, d, b), (a, b, d, c), (a, b, c, d))
    for f0, f1, f2, opp in faces:
        s_opp = orient3d(f0, f1, f2, opp)
        if s_opp == 0:
            raise ValueError("degenerate tetrahedron")
        s_p = orient3d(f0, f1, f2, p)
        if s_p != 0 and s_p != s_opp:
            return False
    return True


def point_on_triangle(p: Point, tri) -> bool:
    """True iff p lies on the closed triangle (coplanar and within edges)."""
    a, b, c = tri
    n = _cross(_sub(b, a), _sub(c, a))
    if n == (0, 0, 0):
        raise ValueError("degenerate triangle")
    if _dot(n, _sub(p, a)) != 0:
        return False
    pos = neg = False
    for u, v in ((a, b), (b, c), (c, a)):
        s = _sign(_dot(_cross(_sub(v, u), _sub(p, u)), n))
        pos |= s > 0
        neg |= s < 0
    return not (pos and neg)


def point_on_segment(p: Point, a: Point, b: Point) -> bool:
    if _cross(_sub(b, a), _sub(p, a)) != (0, 0, 0):
        return False
    t = _dot(_sub(p, a), _sub(b, a))
    return 0 <= t <= _dot(_sub(b, a), _sub(b, a))


def segments_disjoint(p1: Point, q1: Point, p2: Point, q2: Point) -> bool:
    """True iff the closed segments [p1,q1] and [p2,q2] do not meet."""
    return convex_disjoint((p1, q1), (p2, q2))


# ---------------------------------------------------------------------------
# axis-aligned boxes and a uniform grid for candidate pruning
# ---------------------------------------------------------------------------


def aabb(points) -> tuple[Point, Point]:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    zs = [p[2] for p in points]
    return (min(xs), min(ys), min(zs)), (max(xs), max(ys), max(zs))


def boxes_disjoint(b1, b2) -> bool:
    (lo1, hi1), (lo2, hi2) = b1, b2
    for k in range(3):
        if hi1[k] < lo2[k] or hi2[k] < lo1[k]:
            return True
    return False


class BoxGrid:
    """Uniform spatial hash over axis-aligned integer boxes.

    Insert boxes once, then query candidate overlaps for other boxes; only
    candidates need the exact (expensive) test.
    """

    def __init__(self, cell: int):
        if cell <= 0:
            raise ValueError("cell size must be positive")
        self.cell = cell
        self._cells: dict[tuple[int, int, int], list[int]] = {}
        self._boxes: list[tuple[Point, Point]] = []

    def _span(self, box):
        (lo, hi) = box
        c = self.cell
        return (
            range(lo[0] // c, hi[0] // c + 1),
            range(lo[1] // c, hi[1] // c + 1),
            range(lo[2] // c, hi[2] // c + 1),
        )

    def insert(self, idx: int, box) -> None:
        while len(self._boxes) <= idx:
            self._boxes.append(None)  # type: ignore[arg-type]
        self._boxes[idx] = box
        xs, ys, zs = self._span(box)
        for x in xs:
            for y in ys:
                for z in zs:
                    self._cells.setdefault((x, y, z), []).append(idx)

    def candidates(self, box) -> list[int]:
        """Indices of inserted boxes whose cells overlap this box's cells,
        filtered by an exact box-overlap check; deduplicated, unordered."""
        seen: set[int] = set()
        out: list[int] = []
        xs, ys, zs = self._span(box)
        for x in xs:
            for y in ys:
                for z in zs:
                    for idx in self._cells.get((x, y, z), ()):
                        if idx not in seen:
                            seen.add(idx)
                            if not boxes_disjoint(self._boxes[idx], box):
                                out.append(idx)
        return out
