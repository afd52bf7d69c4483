"""Tetrahedral complexes on the integer lattice, with homology over GF(2).

A complex is given by its vertices (integer coordinates), its tetrahedra, and
optionally explicit triangles and edges (for complexes that are not unions of
solid pieces, e.g. a hollow sphere).  Face tables are derived eagerly and kept
in lexicographic order, so boundary matrices — and everything computed from
them — are reproducible bit for bit.
"""
from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

import numpy as np

from wildtower.gf2 import BitMatrix
from wildtower.predicates import BoxGrid, aabb, tets_disjoint
from wildtower.units import default_scale

# above this many simplices, betti() decomposes into connected components
# (homology is additive over components) instead of eliminating one giant matrix
_SPLIT_THRESHOLD = 6000

MESH_SCHEMA = "mesh/1"


class BettiVector(NamedTuple):
    b0: int
    b1: int
    b2: int
    b3: int


def _index_array(rows: Iterable, width: int, name: str) -> np.ndarray:
    data = [tuple(r) for r in rows]
    arr = np.array(data, dtype=np.int64) if data else np.empty((0, width), np.int64)
    if arr.ndim != 2 or arr.shape[1] != width:
        raise ValueError(f"{name} must be {width}-tuples of vertex indices")
    return arr


class SimplicialComplex3:
    """Immutable simplicial complex in R^3 with integer vertex coordinates."""

    def __init__(
        self,
        vertices: Sequence,
        tets: Iterable = (),
        triangles: Iterable = (),
        edges: Iterable = (),
        scale: int | None = None,
    ):
        self.scale = default_scale() if scale is None else int(scale)
        if self.scale <= 0:
            raise ValueError("scale must be a positive integer")

        pts = [tuple(int(c) for c in p) for p in vertices]
        if any(len(p) != 3 for p in pts):
            raise ValueError("vertices must be 3-tuples of integers")
        self.vertices = np.array(pts, dtype=np.int64) if pts else np.empty((0, 3), np.int64)
        n = len(pts)
        if len(set(pts)) != n:
            seen: dict[tuple, int] = {}
            for i, p in enumerate(pts):
                if p in seen:
                    raise ValueError(
                        f"vertices {seen[p]} and {i} share coordinates {p}"
                    )
                seen[p] = i

        self.tets = self._validated(_index_array(tets, 4, "tets"), n, "tet")
        self._explicit_tris = self._validated(
            _index_array(triangles, 3, "triangles"), n, "triangle"
        )
        self._explicit_edges = self._validated(
            _index_array(edges, 2, "edges"), n, "edge"
        )

        # face closure: triangles from tets, edges from triangles
        t = self.tets
        tet_faces = (
            t[:, [1, 2, 3, 0, 2, 3, 0, 1, 3, 0, 1, 2]].reshape(-1, 3)
            if len(t)
            else np.empty((0, 3), np.int64)
        )
        all_tris = np.vstack([np.sort(tet_faces, axis=1), self._explicit_tris])
        self.triangles, self._tet_face_rows = _unique_rows(all_tris)
        self._tet_face_rows = self._tet_face_rows[: 4 * len(t)].reshape(-1, 4)

        f = self.triangles
        tri_edges = (
            f[:, [0, 1, 0, 2, 1, 2]].reshape(-1, 2)
            if len(f)
            else np.empty((0, 2), np.int64)
        )
        all_edges = np.vstack([tri_edges, self._explicit_edges])
        self.edges, self._tri_edge_rows = _unique_rows(all_edges)
        self._tri_edge_rows = self._tri_edge_rows[: 3 * len(f)].reshape(-1, 3)

    @staticmethod
    def _validated(arr: np.ndarray, n_vertices: int, kind: str) -> np.ndarray:
        if len(arr) == 0:
            return arr
        if arr.min() < 0 or arr.max() >= n_vertices:
            raise ValueError(f"{kind} refers to a vertex index out of range")
        s = np.sort(arr, axis=1)
        if np.any(s[:, 1:] == s[:, :-1]):
            raise ValueError(f"{kind} with repeated vertex index")
        uniq = np.unique(s, axis=0)
        if len(uniq) != len(s):
            raise ValueError(f"duplicate {kind} in input")
        return np.sort(s[np.lexsort(s.T[::-1])], axis=1)

    # -- counts --------------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def counts(self) -> tuple[int, int, int, int]:
        """(V, E, F, T)."""
        return (
            len(self.vertices),
            len(self.edges),
            len(self.triangles),
            len(self.tets),
        )

    def euler_characteristic(self) -> int:
        v, e, f, t = self.counts()
        return v - e + f - t

    # -- boundary operators and homology --------------------------------------

    def boundary_matrix(self, d: int) -> BitMatrix:
        """Matrix of the boundary map from d-simplices (columns, in table
        order) to (d-1)-simplices (rows), over GF(2)."""
        if d == 1:
            rows, incidence = len(self.vertices), self.edges
        elif d == 2:
            rows, incidence = len(self.edges), self._tri_edge_rows
        elif d == 3:
            rows, incidence = len(self.triangles), self._tet_face_rows
        else:
            raise ValueError(f"boundary dimension must be 1, 2 or 3, got {d}")
        cols = len(incidence)
        m = BitMatrix(rows, cols)
        if rows and cols:
            k = incidence.shape[1]
            col_idx = np.repeat(np.arange(cols, dtype=np.int64), k)
            row_idx = incidence.reshape(-1)
            bits = np.uint64(1) << (col_idx & 63).astype(np.uint64)
            np.bitwise_or.at(m.data, (row_idx, col_idx >> 6), bits)
        return m

    def _component_labels(self) -> np.ndarray:
        parent = np.arange(len(self.vertices))

        def find(i: int) -> int:
            root = i
            while parent[root] != root:
                root = parent[root]
            while parent[i] != root:
                parent[i], i = root, parent[i]
            return root

        for a, b in self.edges:
            ra, rb = find(int(a)), find(int(b))
            if ra != rb:
                parent[rb] = ra
        return np.array([find(i) for i in range(len(parent))])

    def betti(self, split_components: bool | None = None) -> BettiVector:
        """Z2 Betti numbers (b0, b1, b2, b3).

        b0 is computed twice — from the rank of the boundary operator and from
        union-find on the edge graph — and the two must agree.
        """
        v, e, f, t = self.counts()
        if v == 0:
            return BettiVector(0, 0, 0, 0)

        labels = self._component_labels()
        n_components = len(np.unique(labels))
        if split_components is None:
            split_components = n_components > 1 and (e + f + t) > _SPLIT_THRESHOLD

        if split_components and n_components > 1:
            total = np.zeros(4, dtype=np.int64)
            for sub in self._components(labels):
                total += np.array(sub.betti(split_components=False))
            return BettiVector(*map(int, total))

        r1 = self.boundary_matrix(1).rank()
        r2 = self.boundary_matrix(2).rank()
        r3 = self.boundary_matrix(3).rank()
        b0 = v - r1
        if b0 != n_components:
            raise RuntimeError(
                f"homology disagrees with union-find: b0={b0}, components={n_components}"
            )
        return BettiVector(b0, (e - r1) - r2, (f - r2) - r3, t - r3)

    def _components(self, labels: np.ndarray) -> list["SimplicialComplex3"]:
        out = []
        for root in np.unique(labels):
            mask = labels == root
            ids = np.nonzero(mask)[0]
            remap = -np.ones(len(labels), dtype=np.int64)
            remap[ids] = np.arange(len(ids))
            sub_tets = self.tets[mask[self.tets[:, 0]]] if len(self.tets) else self.tets
            sub_tris = (
                self.triangles[mask[self.triangles[:, 0]]]
                if len(self.triangles)
                else self.triangles
            )
            sub_edges = (
                self.edges[mask[self.edges[:, 0]]] if len(self.edges) else self.edges
            )
            out.append(
                SimplicialComplex3(
                    [tuple(map(int, p)) for p in self.vertices[ids]],
                    tets=remap[sub_tets],
                    triangles=remap[sub_tris],
                    edges=remap[sub_edges],
                    scale=self.scale,
                )
            )
        return out

    # -- geometry --------------------------------------------------------------

    def tet_points(self, i: int) -> tuple:
        return tuple(tuple(map(int, self.vertices[v])) for v in self.tets[i])

    def boundary_triangle_rows(self) -> np.ndarray:
        """Indices (into the triangle table) of faces lying on the boundary:
        faces of exactly one tetrahedron."""
        if len(self.tets) == 0:
            return np.arange(len(self.triangles))
        counts = np.bincount(
            self._tet_face_rows.reshape(-1), minlength=len(self.triangles)
        )
        return np.nonzero(counts == 1)[0]

    # -- export / import --------------------------------------------------------

    def to_off(self) -> str:
        """OFF text: boundary faces of the solid (all triangles if no tets).

        Line 1: "OFF"; line 2: "<n_vertices> <n_faces> 0"; then one vertex per
        line as "x y z" (lattice integers), then one face per line as
        "3 a b c" with ascending vertex indices.
        """
        rows = self.boundary_triangle_rows()
        lines = ["OFF", f"{len(self.vertices)} {len(rows)} 0"]
        lines += [f"{x} {y} {z}" for x, y, z in self.vertices]
        lines += [f"3 {a} {b} {c}" for a, b, c in self.triangles[rows]]
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "schema": MESH_SCHEMA,
            "scale": self.scale,
            "vertices": [[int(c) for c in p] for p in self.vertices],
            "tets": [[int(i) for i in t] for t in self.tets],
            "triangles": [[int(i) for i in t] for t in self._explicit_tris],
            "edges": [[int(i) for i in e] for e in self._explicit_edges],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SimplicialComplex3":
        if data.get("schema") != MESH_SCHEMA:
            raise ValueError(f"unsupported mesh schema: {data.get('schema')!r}")
        return cls(
            data["vertices"],
            tets=data.get("tets", ()),
            triangles=data.get("triangles", ()),
            edges=data.get("edges", ()),
            scale=data["scale"],
        )

    def __repr__(self) -> str:
        v, e, f, t = self.counts()
        return f"SimplicialComplex3(V={v}, E={e}, F={f}, T={t})"


def _unique_rows(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if len(arr) == 0:
        return arr, np.empty(0, dtype=np.int64)
    uniq, inverse = np.unique(arr, axis=0, return_inverse=True)
    return uniq, inverse.reshape(-1)


# ---------------------------------------------------------------------------
# disjointness and unions
# ---------------------------------------------------------------------------


def pairwise_disjoint(parts: Sequence[SimplicialComplex3]):
    """Check that no tetrahedron of one part meets a tetrahedron of another.

    Returns (True, None) or (False, ((i, tet_i), (j, tet_j))) with the first
    offending pair.  Bounding boxes are hashed into a uniform grid first; only
    box-overlapping pairs reach the exact separating-axis test.
    """
    boxes = []
    for pi, part in enumerate(parts):
        for ti in range(len(part.tets)):
            boxes.append((pi, ti, aabb(part.tet_points(ti))))
    if not boxes:
        return True, None
    cell = max(
        max(hi[k] - lo[k] for k in range(3)) for _, _, (lo, hi) in boxes
    )
    grid = BoxGrid(cell=max(cell, 1))
    inserted: list[tuple[int, int]] = []
    for pi, ti, box in boxes:
        for idx in grid.candidates(box):
            pj, tj = inserted[idx]
            if pj == pi:
                continue
            if not tets_disjoint(parts[pj].tet_points(tj), parts[pi].tet_points(ti)):
                return False, ((pj, tj), (pi, ti))
        grid.insert(len(inserted), box)
        inserted.append((pi, ti))
    return True, None


def disjoint_union(parts: Sequence[SimplicialComplex3]) -> SimplicialComplex3:
    """Concatenate pairwise-disjoint complexes into one, reindexing vertices.

    Raises ValueError (naming an offending pair) if any two parts intersect
    or if scales disagree.
    """
    parts = list(parts)
    if not parts:
        return SimplicialComplex3([], scale=default_scale())
    scales = {p.scale for p in parts}
    if len(scales) != 1:
        raise ValueError(f"parts use different scale values: {sorted(scales)}")
    ok, witness = pairwise_disjoint(parts)
    if not ok:
        (pi, ti), (pj, tj) = witness
        raise ValueError(
            f"parts {pi} and {pj} are not disjoint (tet {ti} meets tet {tj})"
        )
    vertices: list[tuple[int, int, int]] = []
    tets, tris, edges = [], [], []
    offset = 0
    for p in parts:
        vertices.extend(tuple(map(int, v)) for v in p.vertices)
        tets.extend((p.tets + offset).tolist())
        tris.extend((p._explicit_tris + offset).tolist())
        edges.extend((p._explicit_edges + offset).tolist())
        offset += p.n_vertices
    return SimplicialComplex3(
        vertices, tets=tets, triangles=tris, edges=edges, scale=parts[0].scale
    )
