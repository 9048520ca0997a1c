"""Worsey-Farin refinement: incenter insertion, face split points, and the
12-way subdivision of every tetrahedron.

Each tetrahedron gains its incenter as a new vertex; each face gains a split
point (the intersection of the two adjacent incenters' segment with the face
for interior faces, the barycenter for boundary faces).  Connecting the split
point to the face corners and the incenter yields three children per face, so
twelve per parent, and both sides of an interior face induce the same
3-triangle split of it.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from . import geometry
from .errors import SplitPointOutsideFace
from .mesh import FaceTable, TetMesh, build_face_table

# Barycentric slack allowed for split points before declaring them outside
# their face; in exact arithmetic they are strictly interior.
SPLIT_BARY_TOL = 1e-12

# For local face f = FACE_LOCAL[f] (outward corner order), the three child
# base edges in inward-cycle order, so children [u, v, m_F, z_T] come out
# positively oriented without reordering.
_CHILD_EDGE_LOCAL = np.array(
    [
        [[1, 3], [3, 2], [2, 1]],
        [[0, 2], [2, 3], [3, 0]],
        [[0, 3], [3, 1], [1, 0]],
        [[0, 1], [1, 2], [2, 0]],
    ]
)


@dataclass(frozen=True)
class SplitPointInfo:
    """Split point of one face.

    ``t`` parameterizes interior points along the incenter segment
    ``z_first + t * (z_second - z_first)`` (tets ordered by index); it is None
    for boundary faces.  ``barycentric`` holds the coordinates of the point in
    the face's sorted-triple corner order, clamped at 0.
    """

    face: tuple
    point: np.ndarray
    kind: str                      # "interior" | "boundary"
    t: Optional[float]
    barycentric: np.ndarray


class SplitPoints(Mapping):
    """Mapping from face triples to :class:`SplitPointInfo`, array-backed.

    ``points`` (nf, 3), ``barycentric`` (nf, 3), ``t`` (nf,), and
    ``is_boundary`` (nf,) expose the underlying arrays in face-table row
    order for vectorized consumers.
    """

    __slots__ = ("face_table", "points", "barycentric", "t", "is_boundary")

    def __init__(self, face_table, points, barycentric, t, is_boundary):
        for a in (points, barycentric, t):
            a.flags.writeable = False
        self.face_table = face_table
        self.points = points
        self.barycentric = barycentric
        self.t = t
        self.is_boundary = is_boundary

    def __len__(self):
        return self.points.shape[0]

    def __iter__(self):
        return iter(self.face_table)

    def __getitem__(self, key) -> SplitPointInfo:
        r = self.face_table.row(key)
        return self.record(r)

    def record(self, r: int) -> SplitPointInfo:
        boundary = bool(self.is_boundary[r])
        return SplitPointInfo(
            face=tuple(int(v) for v in self.face_table.triples[r]),
            point=self.points[r],
            kind="boundary" if boundary else "interior",
            t=None if boundary else float(self.t[r]),
            barycentric=self.barycentric[r],
        )


def compute_split_points(
    m: TetMesh,
    ft: Optional[FaceTable] = None,
    quantities: Optional[geometry.TetQuantities] = None,
) -> SplitPoints:
    """Split point of every face: incenter-segment crossing or barycenter.

    Raises SplitPointOutsideFace if floating-point evaluation puts a point
    outside its face beyond SPLIT_BARY_TOL, or if the incenter segment fails
    to straddle the face plane; neither can occur for a conforming mesh of
    non-degenerate tets in exact arithmetic.
    """
    if ft is None:
        ft = build_face_table(m)
    if quantities is None:
        quantities = geometry.tet_quantities(m.tet_vertex_array())

    nf = len(ft)
    points = np.empty((nf, 3))
    bary = np.empty((nf, 3))
    t = np.full(nf, np.nan)

    corners = m.vertices[ft.triples]                 # (nf, 3, 3)

    boundary = ft.is_boundary
    if boundary.any():
        points[boundary] = corners[boundary].mean(axis=1)
        bary[boundary] = 1.0 / 3.0

    interior = ~boundary
    if interior.any():
        rows = np.flatnonzero(interior)
        tri = corners[rows]
        normal = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
        normal /= np.linalg.norm(normal, axis=1)[:, None]
        offset = np.einsum("ik,ik->i", normal, tri[:, 0])

        z1 = quantities.incenter[ft.tet0[rows]]
        z2 = quantities.incenter[ft.tet1[rows]]
        d1 = np.einsum("ik,ik->i", normal, z1) - offset
        d2 = np.einsum("ik,ik->i", normal, z2) - offset
        straddle = ((d1 > 0) & (d2 < 0)) | ((d1 < 0) & (d2 > 0))
        if not straddle.all():
            r = int(rows[np.flatnonzero(~straddle)[0]])
            raise SplitPointOutsideFace(
                f"incenter segment does not straddle face "
                f"{tuple(int(v) for v in ft.triples[r])} "
                f"(signed distances {d1[~straddle][0]:.3e}, {d2[~straddle][0]:.3e})"
            )
        ti = d1 / (d1 - d2)
        pts = z1 + ti[:, None] * (z2 - z1)
        lam = geometry._bary_coords(pts, tri)
        worst = lam.min(axis=1)
        if (worst < -SPLIT_BARY_TOL).any():
            j = int(np.argmin(worst))
            r = int(rows[j])
            raise SplitPointOutsideFace(
                f"split point of face {tuple(int(v) for v in ft.triples[r])} "
                f"has barycentric coordinates {lam[j].tolist()}"
            )
        points[rows] = pts
        bary[rows] = np.clip(lam, 0.0, None)
        t[rows] = ti

    return SplitPoints(ft, points, bary, t, boundary)


class ParentInfo(NamedTuple):
    parent: int
    face: tuple
    edge: tuple


class ChildProvenance:
    """Per-child provenance: parent tet, parent face triple, parent edge."""

    __slots__ = ("parent", "face_row", "edge", "_triples")

    def __init__(self, parent, face_row, edge, triples):
        for a in (parent, face_row, edge):
            a.flags.writeable = False
        self.parent = parent          # (nc,) parent tet index
        self.face_row = face_row      # (nc,) face-table row of the parent face
        self.edge = edge              # (nc, 2) global vertex ids of the parent edge
        self._triples = triples

    def __len__(self):
        return self.parent.shape[0]

    def __getitem__(self, child: int) -> ParentInfo:
        return ParentInfo(
            parent=int(self.parent[child]),
            face=tuple(int(v) for v in self._triples[self.face_row[child]]),
            edge=tuple(int(v) for v in self.edge[child]),
        )


class IncenterMap(Mapping):
    """Mapping from parent tet index to its incenter's vertex id."""

    __slots__ = ("_base", "_count")

    def __init__(self, base, count):
        self._base = base
        self._count = count

    def __len__(self):
        return self._count

    def __iter__(self):
        return iter(range(self._count))

    def __getitem__(self, parent: int) -> int:
        parent = int(parent)
        if not 0 <= parent < self._count:
            raise KeyError(parent)
        return self._base + parent


@dataclass(frozen=True)
class RefinementOutput:
    """Result of one (or, via ``refine_k``, several) refinement passes.

    ``refined`` has 12 children per parent, ordered by (parent, local face,
    local edge), and vertex layout [parent vertices | incenters in parent
    order | split points in face-table row order].  ``parent_of`` refers to
    the immediate parent mesh of the last pass; ``root_parent`` maps each
    child to its ancestor in the original input mesh.
    """

    refined: TetMesh
    split_points: SplitPoints
    incenters: IncenterMap
    parent_of: ChildProvenance
    root_parent: np.ndarray


def worsey_farin(
    m: TetMesh,
    ft: Optional[FaceTable] = None,
    quantities: Optional[geometry.TetQuantities] = None,
    splits: Optional[SplitPoints] = None,
) -> RefinementOutput:
    """Refine every tetrahedron into 12 via incenter and face split points.

    The refined mesh has V + T + F vertices (parents' V vertices, one
    incenter per tet, one split point per face) and is conforming; children
    partition their parent's volume exactly in exact arithmetic.  Face table,
    per-tet quantities, and split points may be passed in when already
    computed.
    """
    if ft is None:
        ft = build_face_table(m)
    q = quantities if quantities is not None else geometry.tet_quantities(
        m.tet_vertex_array()
    )
    sp = splits if splits is not None else compute_split_points(m, ft, q)

    nv, nt, nf = m.num_vertices, m.num_tets, len(ft)
    new_vertices = np.concatenate([m.vertices, q.incenter, sp.points])

    incenter_id = nv + np.arange(nt, dtype=np.int64)
    split_id = nv + nt + ft.tet_face_rows            # (nt, 4)

    children = np.empty((nt, 4, 3, 4), dtype=np.int64)
    parent_face_row = np.empty((nt, 4, 3), dtype=np.int64)
    parent_edge = np.empty((nt, 4, 3, 2), dtype=np.int64)
    for f in range(4):
        for e in range(3):
            u, v = _CHILD_EDGE_LOCAL[f, e]
            children[:, f, e, 0] = m.tets[:, u]
            children[:, f, e, 1] = m.tets[:, v]
            children[:, f, e, 2] = split_id[:, f]
            children[:, f, e, 3] = incenter_id
            parent_face_row[:, f, e] = ft.tet_face_rows[:, f]
            parent_edge[:, f, e, 0] = m.tets[:, u]
            parent_edge[:, f, e, 1] = m.tets[:, v]

    refined = TetMesh(new_vertices, children.reshape(-1, 4))
    parent = np.repeat(np.arange(nt, dtype=np.int64), 12)
    provenance = ChildProvenance(
        parent,
        parent_face_row.reshape(-1),
        parent_edge.reshape(-1, 2),
        ft.triples,
    )
    root = parent.copy()
    root.flags.writeable = False
    return RefinementOutput(
        refined=refined,
        split_points=sp,
        incenters=IncenterMap(nv, nt),
        parent_of=provenance,
        root_parent=root,
    )


def refine_k(m: TetMesh, k: int) -> RefinementOutput:
    """Apply the refinement k times, recomputing incenters at every level.

    ``split_points``/``incenters``/``parent_of`` describe the final pass;
    ``root_parent`` is composed across passes and indexes the original mesh.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    out = worsey_farin(m)
    root = out.root_parent
    for _ in range(k - 1):
        out = worsey_farin(out.refined)
        root = root[out.parent_of.parent]
    if root is not out.root_parent:
        root = root.copy()
        root.flags.writeable = False
        out = replace(out, root_parent=root)
    return out
