"""Tetrahedron and triangle primitives: volumes, areas, incenters, projections,
dihedral angles, and boundary distances.

Points are numpy arrays of shape (3,); any sequence of three finite reals is
accepted and converted. The scalar operations below are thin wrappers around
the same vectorized kernels used for whole-mesh work via ``tet_quantities``,
which evaluates an ``(n, 4, 3)`` vertex array in one pass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateTet,
    DegenerateTriangle,
    NoCrossing,
    NotInPlane,
    OutsideTriangle,
)

# Local face i is opposite vertex i; the corner order yields outward normals
# on positively oriented tetrahedra.
FACE_LOCAL = np.array([[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]])

# The six edges of a tetrahedron, and for each the two local faces meeting
# along it (the faces opposite the two vertices not on the edge).
EDGE_LOCAL = np.array([[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]])
EDGE_FACES = np.array([[2, 3], [1, 3], [1, 2], [0, 3], [0, 2], [0, 1]])

# Tets with |volume| <= DEGENERACY_FACTOR * h^3 are rejected as degenerate.
DEGENERACY_FACTOR = 1e-14
# Off-plane tolerance, relative to the triangle diameter.
IN_PLANE_FACTOR = 1e-9
# Barycentric slack below which a point counts as outside its triangle.
BARY_TOL = 1e-12


def point3(x, y, z) -> np.ndarray:
    """Build a 3-vector, rejecting non-finite coordinates."""
    p = np.array([x, y, z], dtype=float)
    if not np.isfinite(p).all():
        raise ValueError(f"non-finite coordinates: {p}")
    return p


def _as_point(p) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    return a


def signed_volume(a, b, c, d) -> float:
    """One sixth of the scalar triple product det(b-a, c-a, d-a).

    Positive for a positively oriented tetrahedron, zero for coplanar input;
    swapping two vertices negates the sign.
    """
    a, b, c, d = (np.asarray(p, dtype=float) for p in (a, b, c, d))
    return float(np.dot(np.cross(b - a, c - a), d - a)) / 6.0


def triangle_area(a, b, c) -> float:
    """Half the cross-product norm of two edge vectors; 0 for collinear input."""
    a, b, c = (np.asarray(p, dtype=float) for p in (a, b, c))
    return float(np.linalg.norm(np.cross(b - a, c - a))) / 2.0


@dataclass(frozen=True)
class Plane:
    """Plane ``{x : normal . x = offset}`` with unit ``normal``.

    ``offset`` is the signed distance from the origin to the plane along the
    normal direction.
    """

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = _as_point(self.normal)
        if abs(np.linalg.norm(n) - 1.0) > 1e-12:
            raise ValueError("plane normal must be unit length (within 1e-12)")
        n = n.copy()
        n.flags.writeable = False
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def from_points(cls, a, b, c) -> "Plane":
        """Supporting plane of the triangle (a, b, c), normal along (b-a)x(c-a)."""
        a, b, c = (_as_point(p) for p in (a, b, c))
        n = np.cross(b - a, c - a)
        norm = np.linalg.norm(n)
        if norm == 0.0:
            raise DegenerateTriangle("collinear points do not define a plane")
        n = n / norm
        # subnormal cross products normalize imprecisely; that is a degeneracy
        if abs(np.linalg.norm(n) - 1.0) > 1e-12:
            raise DegenerateTriangle("triangle too flat to define a plane normal")
        return cls(n, float(np.dot(n, a)))

    def signed_distance(self, p) -> float:
        return float(np.dot(self.normal, _as_point(p))) - self.offset

    def project(self, p) -> np.ndarray:
        p = _as_point(p)
        return p - self.signed_distance(p) * self.normal


class Triangle3:
    """Non-degenerate triangle in 3-space, stored as a (3, 3) corner array."""

    __slots__ = ("corners",)

    def __init__(self, a, b, c):
        corners = np.stack([_as_point(a), _as_point(b), _as_point(c)])
        if not np.isfinite(corners).all():
            raise ValueError("non-finite triangle corners")
        if triangle_area(*corners) <= 0.0:
            raise DegenerateTriangle(f"zero-area triangle: {corners.tolist()}")
        corners.flags.writeable = False
        self.corners = corners

    @property
    def area(self) -> float:
        return triangle_area(*self.corners)

    @property
    def plane(self) -> Plane:
        return Plane.from_points(*self.corners)

    @property
    def centroid(self) -> np.ndarray:
        return self.corners.mean(axis=0)

    @property
    def diameter(self) -> float:
        a, b, c = self.corners
        return max(
            float(np.linalg.norm(b - a)),
            float(np.linalg.norm(c - b)),
            float(np.linalg.norm(a - c)),
        )

    def __repr__(self):
        return f"Triangle3({self.corners.tolist()})"


@dataclass(frozen=True)
class TetGeometry:
    """Derived quantities of a single positively oriented tetrahedron.

    ``rho`` is the insphere *diameter* (6 * volume / total face area), so the
    incenter sits at distance ``rho / 2`` from every face plane.  Face i is
    opposite vertex i; ``dihedral_angles[k]`` is the interior angle at edge
    ``EDGE_LOCAL[k]``, in (0, pi).
    """

    vertices: np.ndarray        # (4, 3)
    volume: float
    face_areas: np.ndarray      # (4,)
    h: float                    # diameter = longest edge
    rho: float                  # insphere diameter
    incenter: np.ndarray        # (3,)
    touch_points: np.ndarray    # (4, 3) projections of the incenter onto faces
    dihedral_angles: np.ndarray  # (6,)
    face_normals: np.ndarray    # (4, 3) outward unit normals
    face_offsets: np.ndarray    # (4,)
    edge_lengths: np.ndarray    # (6,)

    def face_corners(self, i) -> np.ndarray:
        """Corners of face i in outward orientation, shape (3, 3)."""
        return self.vertices[FACE_LOCAL[i]]


@dataclass(frozen=True)
class TetQuantities:
    """Struct-of-arrays version of :class:`TetGeometry` for n tetrahedra."""

    volume: np.ndarray          # (n,)
    face_areas: np.ndarray      # (n, 4)
    h: np.ndarray               # (n,)
    rho: np.ndarray             # (n,)
    incenter: np.ndarray        # (n, 3)
    touch_points: np.ndarray    # (n, 4, 3)
    dihedral_cos: np.ndarray    # (n, 6)
    dihedral_angles: np.ndarray  # (n, 6)
    face_normals: np.ndarray    # (n, 4, 3)
    face_offsets: np.ndarray    # (n, 4)
    edge_lengths: np.ndarray    # (n, 6)

    def __len__(self):
        return self.volume.shape[0]


def tet_quantities(verts: np.ndarray) -> TetQuantities:
    """Evaluate all per-tet quantities for an (n, 4, 3) vertex array.

    Raises DegenerateTet if any tetrahedron is inverted or has
    |volume| <= DEGENERACY_FACTOR * h^3.
    """
    verts = np.asarray(verts, dtype=float)
    if verts.ndim != 3 or verts.shape[1:] != (4, 3):
        raise ValueError(f"expected (n, 4, 3) vertex array, got {verts.shape}")

    e1 = verts[:, 1] - verts[:, 0]
    e2 = verts[:, 2] - verts[:, 0]
    e3 = verts[:, 3] - verts[:, 0]
    volume = np.einsum("ij,ij->i", np.cross(e1, e2), e3) / 6.0

    edge_vec = verts[:, EDGE_LOCAL[:, 1]] - verts[:, EDGE_LOCAL[:, 0]]
    edge_lengths = np.linalg.norm(edge_vec, axis=2)
    h = edge_lengths.max(axis=1)

    bad = volume <= DEGENERACY_FACTOR * h**3
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise DegenerateTet(
            f"tet {i}: signed volume {volume[i]:.3e} below threshold "
            f"{DEGENERACY_FACTOR * h[i] ** 3:.3e} (h = {h[i]:.3e})"
        )

    faces = verts[:, FACE_LOCAL]                      # (n, 4, 3, 3)
    cross = np.cross(
        faces[:, :, 1] - faces[:, :, 0], faces[:, :, 2] - faces[:, :, 0]
    )                                                 # (n, 4, 3)
    two_areas = np.linalg.norm(cross, axis=2)
    face_areas = two_areas / 2.0
    face_normals = cross / two_areas[:, :, None]
    face_offsets = np.einsum("nfk,nfk->nf", face_normals, faces[:, :, 0])

    total_area = face_areas.sum(axis=1)
    rho = 6.0 * volume / total_area
    incenter = (
        np.einsum("nf,nfk->nk", face_areas, verts) / total_area[:, None]
    )

    # signed distances relative to a face corner: stays accurate when the
    # mesh sits far from the origin
    sd = np.einsum(
        "nfk,nfk->nf", face_normals, incenter[:, None, :] - faces[:, :, 0]
    )
    touch_points = incenter[:, None, :] - sd[:, :, None] * face_normals

    n1 = face_normals[:, EDGE_FACES[:, 0]]
    n2 = face_normals[:, EDGE_FACES[:, 1]]
    dihedral_cos = np.clip(-np.einsum("nek,nek->ne", n1, n2), -1.0, 1.0)
    dihedral_angles = np.arccos(dihedral_cos)

    return TetQuantities(
        volume=volume,
        face_areas=face_areas,
        h=h,
        rho=rho,
        incenter=incenter,
        touch_points=touch_points,
        dihedral_cos=dihedral_cos,
        dihedral_angles=dihedral_angles,
        face_normals=face_normals,
        face_offsets=face_offsets,
        edge_lengths=edge_lengths,
    )


def tet_geometry(a, b, c, d) -> TetGeometry:
    """Full geometry of the tetrahedron (a, b, c, d).

    The input must be positively oriented and non-degenerate
    (signed_volume > DEGENERACY_FACTOR * h^3), else DegenerateTet is raised.
    The incenter is the face-area-weighted vertex average, which lies at
    distance rho/2 from all four face planes.
    """
    verts = np.stack([_as_point(p) for p in (a, b, c, d)])[None]
    q = tet_quantities(verts)
    v = verts[0].copy()
    v.flags.writeable = False
    return TetGeometry(
        vertices=v,
        volume=float(q.volume[0]),
        face_areas=q.face_areas[0],
        h=float(q.h[0]),
        rho=float(q.rho[0]),
        incenter=q.incenter[0],
        touch_points=q.touch_points[0],
        dihedral_angles=q.dihedral_angles[0],
        face_normals=q.face_normals[0],
        face_offsets=q.face_offsets[0],
        edge_lengths=q.edge_lengths[0],
    )


def signed_volumes(verts: np.ndarray) -> np.ndarray:
    """Signed volumes for an (n, 4, 3) vertex array (no degeneracy check)."""
    verts = np.asarray(verts, dtype=float)
    e1 = verts[:, 1] - verts[:, 0]
    e2 = verts[:, 2] - verts[:, 0]
    e3 = verts[:, 3] - verts[:, 0]
    return np.einsum("ij,ij->i", np.cross(e1, e2), e3) / 6.0


def tet_diameters(verts: np.ndarray) -> np.ndarray:
    """Longest edge per tetrahedron for an (n, 4, 3) vertex array."""
    verts = np.asarray(verts, dtype=float)
    edge_vec = verts[:, EDGE_LOCAL[:, 1]] - verts[:, EDGE_LOCAL[:, 0]]
    return np.linalg.norm(edge_vec, axis=2).max(axis=1)


def project_to_plane(p, pl: Plane) -> np.ndarray:
    """Orthogonal projection of p onto the plane."""
    return pl.project(p)


def segment_plane_intersection(p1, p2, pl: Plane):
    """Intersection of the open segment (p1, p2) with a plane it straddles.

    Returns ``(point, t)`` with ``point = p1 + t * (p2 - p1)`` and
    ``t = d1 / (d1 + d2)`` in (0, 1), where d1, d2 are the unsigned endpoint
    distances to the plane.  Raises NoCrossing when the endpoints are on the
    same side or either lies on the plane (within 1e-13 of segment length).
    """
    p1, p2 = _as_point(p1), _as_point(p2)
    d1 = pl.signed_distance(p1)
    d2 = pl.signed_distance(p2)
    length = float(np.linalg.norm(p2 - p1))
    tol = 1e-13 * length
    if length == 0.0 or abs(d1) <= tol or abs(d2) <= tol:
        raise NoCrossing(f"segment endpoint on the plane (d1={d1:.3e}, d2={d2:.3e})")
    if (d1 > 0) == (d2 > 0):
        raise NoCrossing(f"segment does not straddle plane (d1={d1:.3e}, d2={d2:.3e})")
    t = d1 / (d1 - d2)
    return p1 + t * (p2 - p1), float(t)


def _bary_coords(p: np.ndarray, corners: np.ndarray) -> np.ndarray:
    """Barycentric coordinates via the edge-vector Gram system.

    Broadcasts over leading axes: p is (..., 3), corners is (..., 3, 3).
    """
    v0 = corners[..., 1, :] - corners[..., 0, :]
    v1 = corners[..., 2, :] - corners[..., 0, :]
    v2 = p - corners[..., 0, :]
    d00 = np.einsum("...k,...k->...", v0, v0)
    d01 = np.einsum("...k,...k->...", v0, v1)
    d11 = np.einsum("...k,...k->...", v1, v1)
    d20 = np.einsum("...k,...k->...", v2, v0)
    d21 = np.einsum("...k,...k->...", v2, v1)
    denom = d00 * d11 - d01 * d01
    with np.errstate(divide="ignore", invalid="ignore"):
        l2 = (d11 * d20 - d01 * d21) / denom
        l3 = (d00 * d21 - d01 * d20) / denom
    return np.stack([1.0 - l2 - l3, l2, l3], axis=-1)


def _line_distances(p: np.ndarray, corners: np.ndarray) -> np.ndarray:
    """Distances from p to the three edge-supporting lines of a triangle.

    Broadcasts: p is (..., 3), corners is (..., 3, 3); result is (..., 3) in
    edge order (c0 c1), (c1 c2), (c2 c0).
    """
    starts = corners
    ends = corners[..., [1, 2, 0], :]
    edge = ends - starts
    rel = p[..., None, :] - starts
    num = np.linalg.norm(np.cross(rel, edge), axis=-1)
    den = np.linalg.norm(edge, axis=-1)
    return num / den


def barycentric_in_triangle(p, t: Triangle3) -> np.ndarray:
    """Barycentric coordinates of p with respect to t's corners.

    p must lie in the plane of t within IN_PLANE_FACTOR * diameter; it is
    projected onto the plane before solving, so the three coordinates sum to 1
    and reproduce the projected point.
    """
    p = _as_point(p)
    diam = t.diameter
    pl = t.plane
    if abs(pl.signed_distance(p)) > IN_PLANE_FACTOR * diam:
        raise NotInPlane(f"point {p.tolist()} is off the triangle plane")
    q = pl.project(p)
    lam = _bary_coords(q, t.corners)
    if not np.isfinite(lam).all():
        raise DegenerateTriangle("triangle too close to degenerate for barycentric solve")
    return lam


def dist_to_triangle_boundary(p, t: Triangle3) -> float:
    """Distance from an interior point to the triangle boundary.

    Computed as the minimum distance to the three edge-supporting lines,
    which equals the boundary distance for points inside the triangle.
    Raises NotInPlane / OutsideTriangle when the preconditions fail.
    """
    p = _as_point(p)
    pl = t.plane
    if abs(pl.signed_distance(p)) > IN_PLANE_FACTOR * t.diameter:
        raise NotInPlane(f"point {p.tolist()} is off the triangle plane")
    q = pl.project(p)
    lam = _bary_coords(q, t.corners)
    if lam.min() < -BARY_TOL:
        raise OutsideTriangle(
            f"point {p.tolist()} outside triangle (barycentric {lam.tolist()})"
        )
    return float(_line_distances(q, t.corners).min())


def rho_over_two_cot_half(rho, cos_angles) -> np.ndarray:
    """Elementwise (rho/2) * sqrt((1 + cos a) / (1 - cos a)).

    This is (rho/2) / tan(a/2): the distance from a face touch point to the
    edge line when the incenter sits at height rho/2 over both faces meeting
    at that edge with interior angle a.
    """
    rho = np.asarray(rho, dtype=float)
    cos_angles = np.asarray(cos_angles, dtype=float)
    num = np.clip(1.0 + cos_angles, 0.0, None)
    den = np.clip(1.0 - cos_angles, 1e-300, None)
    if rho.ndim and rho.ndim < cos_angles.ndim:
        rho = rho[..., None]
    return rho / 2.0 * np.sqrt(num / den)


def regular_tet_vertices(edge: float = 1.0) -> np.ndarray:
    """Vertices of a regular tetrahedron with the given edge length."""
    v = np.array(
        [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.5, math.sqrt(3.0) / 2.0, 0.0],
            [0.5, math.sqrt(3.0) / 6.0, math.sqrt(2.0 / 3.0)],
        ]
    )
    return v * edge
