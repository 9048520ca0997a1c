"""Deterministic mesh generators for tests and parameter sweeps."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import DegenerateTet
from .mesh import TetMesh, build_face_table

FAMILIES = (
    "cube_kuhn",
    "perturbed_cube",
    "sliver",
    "two_tet_mirror",
    "two_tet_skew",
    "regular_tet",
)


@dataclass(frozen=True)
class GenSpec:
    """Parameters selecting one generator family.

    ``eps`` is the family parameter: apex height for ``sliver``, tangential
    apex offset for ``two_tet_skew``.  ``n``/``sigma``/``seed`` drive the cube
    families.
    """

    family: str
    n: int = 1
    sigma: float = 0.0
    eps: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, expected one of {FAMILIES}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0.0 <= self.sigma < 0.5:
            raise ValueError(f"sigma must be in [0, 0.5), got {self.sigma}")
        if not self.eps > 0.0:
            raise ValueError(f"eps must be > 0, got {self.eps}")


def generate(spec: GenSpec) -> TetMesh:
    """Dispatch to the generator selected by ``spec.family``."""
    if spec.family == "cube_kuhn":
        return gen_cube_kuhn(spec.n)
    if spec.family == "perturbed_cube":
        return perturb(gen_cube_kuhn(spec.n), spec.sigma, spec.seed)
    if spec.family == "sliver":
        return gen_sliver(spec.eps)
    if spec.family == "two_tet_mirror":
        return gen_two_tet_mirror()
    if spec.family == "two_tet_skew":
        return gen_two_tet_skew(spec.eps)
    return gen_regular_tet()


# Permutations of the three axis steps, listed lexicographically.  Each one
# walks from a cell's low corner to its high corner and yields one Kuhn tet;
# odd permutations need their last two vertices swapped to orient positively.
_KUHN_PERMS = tuple(itertools.permutations(range(3)))
_PERM_PARITY = (1, -1, -1, 1, 1, -1)


def gen_cube_kuhn(n: int) -> TetMesh:
    """Unit cube as an n^3 grid of cells, each split into 6 Kuhn tets.

    All cells use the same main diagonal direction, so the mesh is conforming
    with (n+1)^3 vertices and 6 n^3 tets, each similar to the reference Kuhn
    tetrahedron.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    side = n + 1
    axis = np.arange(side) / n
    grid = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1)
    vertices = grid.reshape(-1, 3)

    def vid(i, j, k):
        return (i * side + j) * side + k

    base = np.arange(n)
    ci, cj, ck = np.meshgrid(base, base, base, indexing="ij")
    ci, cj, ck = ci.ravel(), cj.ravel(), ck.ravel()
    ncells = ci.size

    corner = np.stack([ci, cj, ck], axis=1)
    tets = np.empty((ncells, 6, 4), dtype=np.int64)
    eye = np.eye(3, dtype=np.int64)
    for p, perm in enumerate(_KUHN_PERMS):
        v0 = corner
        v1 = v0 + eye[perm[0]]
        v2 = v1 + eye[perm[1]]
        v3 = v2 + eye[perm[2]]
        quad = [vid(*v.T) for v in (v0, v1, v2, v3)]
        if _PERM_PARITY[p] < 0:
            quad[2], quad[3] = quad[3], quad[2]
        tets[:, p, :] = np.stack(quad, axis=1)

    return TetMesh(vertices, tets.reshape(-1, 4))


def perturb(m: TetMesh, sigma: float, seed: int) -> TetMesh:
    """Displace interior vertices by a seeded uniform offset.

    Each interior vertex moves by a draw from [-sigma*l, sigma*l]^3 where l is
    its minimum incident edge length in the input mesh; boundary vertices stay
    fixed.  A displacement that would invert or degenerate an incident tet is
    resampled (up to 100 attempts, then the vertex is left in place), so the
    output is always positively oriented.  Pure function of (m, sigma, seed).
    """
    if not 0.0 <= sigma < 0.5:
        raise ValueError(f"sigma must be in [0, 0.5), got {sigma}")
    if sigma == 0.0 or m.num_tets == 0:
        return TetMesh(m.vertices, m.tets, canonicalize=False)

    ft = build_face_table(m)
    boundary_verts = np.zeros(m.num_vertices, dtype=bool)
    if ft.is_boundary.any():
        boundary_verts[np.unique(ft.triples[ft.is_boundary])] = True

    ends = m.tets[:, geometry.EDGE_LOCAL]            # (nt, 6, 2)
    lengths = np.linalg.norm(
        m.vertices[ends[:, :, 1]] - m.vertices[ends[:, :, 0]], axis=2
    )
    min_edge = np.full(m.num_vertices, np.inf)
    flat_ends = ends.reshape(-1, 2)
    flat_len = lengths.ravel()
    np.minimum.at(min_edge, flat_ends[:, 0], flat_len)
    np.minimum.at(min_edge, flat_ends[:, 1], flat_len)

    order = np.argsort(m.tets.ravel(), kind="stable")
    incident_tet = order // 4
    counts = np.bincount(m.tets.ravel(), minlength=m.num_vertices)
    offsets = np.concatenate([[0], np.cumsum(counts)])

    verts = m.vertices.copy()
    rng = np.random.default_rng(seed)
    for v in range(m.num_vertices):
        if boundary_verts[v] or counts[v] == 0:
            continue
        tids = incident_tet[offsets[v] : offsets[v + 1]]
        conn = m.tets[tids]
        original = verts[v].copy()
        scale = sigma * min_edge[v]
        for _ in range(100):
            verts[v] = original + rng.uniform(-scale, scale, 3)
            local = verts[conn]
            vols = geometry.signed_volumes(local)
            hs = geometry.tet_diameters(local)
            if (vols > geometry.DEGENERACY_FACTOR * hs**3).all():
                break
        else:
            verts[v] = original
    return TetMesh(verts, m.tets, canonicalize=False)


def gen_sliver(eps: float) -> TetMesh:
    """Single tet over a unit right-triangle base with apex height eps.

    The apex sits over the base centroid, so shrinking eps flattens the tet in
    place and drives h/rho to infinity monotonically.
    """
    if not eps > 0.0:
        raise ValueError(f"eps must be > 0, got {eps}")
    verts = np.array(
        [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [1.0 / 3.0, 1.0 / 3.0, eps],
        ]
    )
    geometry.tet_quantities(verts[None])  # raises DegenerateTet below threshold
    return TetMesh(verts, [[0, 1, 2, 3]])


def gen_regular_tet() -> TetMesh:
    """Single regular tetrahedron with unit edge length."""
    return TetMesh(geometry.regular_tet_vertices(), [[0, 1, 2, 3]])


def _mirror_pair(apex_shift: float) -> TetMesh:
    s3 = math.sqrt(3.0)
    height = math.sqrt(2.0 / 3.0)
    verts = np.array(
        [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.5, s3 / 2.0, 0.0],
            [0.5, s3 / 6.0, height],
            [0.5 + apex_shift, s3 / 6.0, -height],
        ]
    )
    tets = np.array([[0, 1, 2, 3], [0, 2, 1, 4]], dtype=np.int64)
    m = TetMesh(verts, tets)
    geometry.tet_quantities(m.tet_vertex_array())  # raises if degenerate
    return m


def gen_two_tet_mirror() -> TetMesh:
    """Two congruent regular tets glued on an equilateral face (z = 0 plane)."""
    return _mirror_pair(0.0)


def gen_two_tet_skew(offset: float) -> TetMesh:
    """Mirror pair with the lower apex shifted tangentially by ``offset``.

    The shift is parallel to the shared face, so both tets keep their volume;
    it merely breaks the reflection symmetry of the incenters.
    """
    return _mirror_pair(float(offset))
