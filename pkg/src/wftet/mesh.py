"""Tetrahedral mesh container, face-adjacency table, and validation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import geometry
from .errors import IndexOutOfRange, InvalidMesh, NonManifold


class TetMesh:
    """Immutable tetrahedral mesh: vertex coordinates plus 4-index connectivity.

    Tetrahedra are canonicalized to positive orientation on construction by
    swapping the last two indices of any inverted tet; the indices of repaired
    tets are kept in ``orientation_fixes`` so validation can report them.
    """

    __slots__ = ("vertices", "tets", "orientation_fixes")

    def __init__(self, vertices, tets, canonicalize=True):
        # private copies so freezing never touches caller-owned arrays
        vertices = np.array(vertices, dtype=float, order="C").reshape(-1, 3)
        tets = np.array(tets, dtype=np.int64, order="C").reshape(-1, 4)
        if not np.isfinite(vertices).all():
            raise InvalidMesh("non-finite vertex coordinates")
        if tets.size:
            lo, hi = int(tets.min()), int(tets.max())
            if lo < 0 or hi >= len(vertices):
                raise IndexOutOfRange(
                    f"tet index range [{lo}, {hi}] outside vertex table of size "
                    f"{len(vertices)}"
                )
            srt = np.sort(tets, axis=1)
            dup = (np.diff(srt, axis=1) == 0).any(axis=1)
            if dup.any():
                i = int(np.flatnonzero(dup)[0])
                raise InvalidMesh(f"tet {i} repeats a vertex: {tets[i].tolist()}")

        fixes = ()
        if canonicalize and tets.size:
            vols = geometry.signed_volumes(vertices[tets])
            flip = vols < 0.0
            if flip.any():
                tets = tets.copy()
                tets[flip] = tets[flip][:, [0, 1, 3, 2]]
                fixes = tuple(int(i) for i in np.flatnonzero(flip))

        vertices.flags.writeable = False
        tets.flags.writeable = False
        self.vertices = vertices
        self.tets = tets
        self.orientation_fixes = fixes

    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def num_tets(self) -> int:
        return self.tets.shape[0]

    def tet_vertex_array(self) -> np.ndarray:
        """Vertex coordinates gathered per tet, shape (num_tets, 4, 3)."""
        return self.vertices[self.tets]

    def __eq__(self, other):
        if not isinstance(other, TetMesh):
            return NotImplemented
        return np.array_equal(self.vertices, other.vertices) and np.array_equal(
            self.tets, other.tets
        )

    def __hash__(self):
        return hash((self.vertices.tobytes(), self.tets.tobytes()))

    def __repr__(self):
        return f"TetMesh({self.num_vertices} vertices, {self.num_tets} tets)"


class FaceRecord(NamedTuple):
    tets: tuple
    boundary: bool
    local_faces: tuple


class FaceTable:
    """Unique faces of a mesh with their incident tets.

    Faces are stored as lexicographically sorted vertex triples, ordered
    lexicographically, so face row numbering is deterministic for a given
    mesh.  Interior faces carry two incident tets (``tet0 < tet1``), boundary
    faces one (``tet1 == -1``).  ``tet_face_rows[t, f]`` is the face row of
    tet t's local face f.
    """

    __slots__ = (
        "triples",
        "tet0",
        "tet1",
        "local0",
        "local1",
        "is_boundary",
        "tet_face_rows",
        "_index",
    )

    def __init__(self, triples, tet0, tet1, local0, local1, is_boundary, tet_face_rows):
        for a in (triples, tet0, tet1, local0, local1, is_boundary, tet_face_rows):
            a.flags.writeable = False
        self.triples = triples
        self.tet0 = tet0
        self.tet1 = tet1
        self.local0 = local0
        self.local1 = local1
        self.is_boundary = is_boundary
        self.tet_face_rows = tet_face_rows
        self._index = None

    def __len__(self):
        return self.triples.shape[0]

    @property
    def num_boundary(self) -> int:
        return int(self.is_boundary.sum())

    @property
    def num_interior(self) -> int:
        return len(self) - self.num_boundary

    def _key_index(self):
        if self._index is None:
            self._index = {
                tuple(tri): i for i, tri in enumerate(self.triples.tolist())
            }
        return self._index

    def row(self, key) -> int:
        """Face row of a vertex triple (any order)."""
        return self._key_index()[tuple(sorted(int(v) for v in key))]

    def __contains__(self, key):
        try:
            self.row(key)
        except KeyError:
            return False
        return True

    def __getitem__(self, key) -> FaceRecord:
        r = self.row(key)
        return self.record(r)

    def record(self, r: int) -> FaceRecord:
        if self.is_boundary[r]:
            return FaceRecord(
                tets=(int(self.tet0[r]),),
                boundary=True,
                local_faces=(int(self.local0[r]),),
            )
        return FaceRecord(
            tets=(int(self.tet0[r]), int(self.tet1[r])),
            boundary=False,
            local_faces=(int(self.local0[r]), int(self.local1[r])),
        )

    def __iter__(self):
        return (tuple(tri) for tri in self.triples.tolist())


def build_face_table(m: TetMesh) -> FaceTable:
    """Group the 4 * num_tets face slots into unique faces.

    Raises NonManifold if any vertex triple occurs in three or more tets.
    """
    nt = m.num_tets
    if nt == 0:
        empty_i = np.empty(0, dtype=np.int64)
        return FaceTable(
            np.empty((0, 3), dtype=np.int64),
            empty_i,
            empty_i.copy(),
            empty_i.copy(),
            empty_i.copy(),
            np.empty(0, dtype=bool),
            np.empty((0, 4), dtype=np.int64),
        )

    slots = np.sort(m.tets[:, geometry.FACE_LOCAL], axis=2).reshape(-1, 3)
    order = np.lexsort((slots[:, 2], slots[:, 1], slots[:, 0]))
    s = slots[order]
    new_group = np.empty(len(s), dtype=bool)
    new_group[0] = True
    new_group[1:] = (s[1:] != s[:-1]).any(axis=1)
    group_id_sorted = np.cumsum(new_group) - 1
    starts = np.flatnonzero(new_group)
    counts = np.diff(np.append(starts, len(s)))

    if (counts > 2).any():
        g = int(np.flatnonzero(counts > 2)[0])
        triple = tuple(int(v) for v in s[starts[g]])
        raise NonManifold(f"face {triple} occurs in {int(counts[g])} tets")

    triples = np.ascontiguousarray(s[starts])
    nf = len(triples)

    inv = np.empty(len(slots), dtype=np.int64)
    inv[order] = group_id_sorted
    tet_face_rows = inv.reshape(nt, 4)

    slot_tet = order // 4
    slot_local = order % 4

    tet0 = np.empty(nf, dtype=np.int64)
    local0 = np.empty(nf, dtype=np.int64)
    tet1 = np.full(nf, -1, dtype=np.int64)
    local1 = np.full(nf, -1, dtype=np.int64)
    is_boundary = counts == 1

    tet0[:] = slot_tet[starts]
    local0[:] = slot_local[starts]
    second = ~is_boundary
    tet1[second] = slot_tet[starts[second] + 1]
    local1[second] = slot_local[starts[second] + 1]

    swap = second & (tet1 < tet0)
    if swap.any():
        tet0[swap], tet1[swap] = tet1[swap], tet0[swap].copy()
        local0[swap], local1[swap] = local1[swap], local0[swap].copy()

    return FaceTable(triples, tet0, tet1, local0, local1, is_boundary, tet_face_rows)


@dataclass(frozen=True)
class ValidationReport:
    """Structural findings for a mesh; ``clean`` means nothing to report."""

    num_vertices: int
    num_tets: int
    orientation_fixes: tuple
    degenerate_tets: tuple
    nonmanifold_faces: tuple
    hanging_vertices: tuple

    @property
    def conforming(self) -> bool:
        return not self.nonmanifold_faces and not self.hanging_vertices

    @property
    def ok(self) -> bool:
        """Mesh is usable after canonicalization (orientation fixes allowed)."""
        return self.conforming and not self.degenerate_tets

    @property
    def clean(self) -> bool:
        """Mesh was already valid as given (no repairs were needed)."""
        return self.ok and not self.orientation_fixes

    def summary(self) -> str:
        lines = [f"vertices: {self.num_vertices}", f"tets: {self.num_tets}"]
        lines.append(f"orientation fixes: {len(self.orientation_fixes)}")
        lines.append(f"degenerate tets: {len(self.degenerate_tets)}")
        if self.nonmanifold_faces:
            lines.append(f"non-manifold faces: {list(self.nonmanifold_faces)}")
        if self.hanging_vertices:
            lines.append(f"hanging vertices: {list(self.hanging_vertices)}")
        lines.append(f"conforming: {'yes' if self.conforming else 'NO'}")
        return "\n".join(lines)


def _find_hanging_vertices(m: TetMesh, ft: FaceTable) -> tuple:
    """Vertices lying on a boundary face they are not a corner of.

    Count-based conformity cannot see a face that is refined on one side
    only; geometrically such a configuration puts the extra vertices on the
    coarse side's boundary face, which is what this scan detects.
    """
    rows = np.flatnonzero(ft.is_boundary)
    if rows.size == 0 or m.num_vertices == 0:
        return ()
    from scipy.spatial import cKDTree

    corners = m.vertices[ft.triples[rows]]          # (nb, 3, 3)
    centroids = corners.mean(axis=1)
    radii = np.linalg.norm(corners - centroids[:, None, :], axis=2).max(axis=1)
    diams = np.linalg.norm(
        corners - corners[:, [1, 2, 0], :], axis=2
    ).max(axis=1)

    tree = cKDTree(m.vertices)
    candidate_lists = tree.query_ball_point(centroids, radii * (1.0 + 1e-9))

    hanging = set()
    for i, cands in enumerate(candidate_lists):
        tri = ft.triples[rows[i]]
        extra = [v for v in cands if v not in tri]
        if not extra:
            continue
        pts = m.vertices[extra]
        tri_corners = corners[i]
        n = np.cross(tri_corners[1] - tri_corners[0], tri_corners[2] - tri_corners[0])
        n = n / np.linalg.norm(n)
        sd = (pts - tri_corners[0]) @ n
        in_plane = np.abs(sd) <= geometry.IN_PLANE_FACTOR * diams[i]
        if not in_plane.any():
            continue
        proj = pts[in_plane] - sd[in_plane, None] * n
        lam = geometry._bary_coords(proj, tri_corners)
        inside = lam.min(axis=1) >= -geometry.BARY_TOL
        for v, hit in zip(np.asarray(extra)[in_plane], inside):
            if hit:
                hanging.add(int(v))
    return tuple(sorted(hanging))


def validate(m: TetMesh) -> ValidationReport:
    """Report orientation fixes, degenerate tets, and conformity status.

    Never raises: non-manifold connectivity and hanging nodes are returned in
    the report rather than thrown.
    """
    degenerate = ()
    if m.num_tets:
        verts = m.tet_vertex_array()
        vols = geometry.signed_volumes(verts)
        h = geometry.tet_diameters(verts)
        bad = np.abs(vols) <= geometry.DEGENERACY_FACTOR * h**3
        degenerate = tuple(int(i) for i in np.flatnonzero(bad))

    nonmanifold = ()
    hanging = ()
    try:
        ft = build_face_table(m)
    except NonManifold:
        nonmanifold = _nonmanifold_triples(m)
    else:
        hanging = _find_hanging_vertices(m, ft)

    return ValidationReport(
        num_vertices=m.num_vertices,
        num_tets=m.num_tets,
        orientation_fixes=m.orientation_fixes,
        degenerate_tets=degenerate,
        nonmanifold_faces=nonmanifold,
        hanging_vertices=hanging,
    )


def _nonmanifold_triples(m: TetMesh) -> tuple:
    slots = np.sort(m.tets[:, geometry.FACE_LOCAL], axis=2).reshape(-1, 3)
    uniq, counts = np.unique(slots, axis=0, return_counts=True)
    bad = uniq[counts > 2]
    return tuple(tuple(int(v) for v in tri) for tri in bad)
