"""Shared helpers and strategies for the test suite."""
import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import assume, strategies as st

from wftet.geometry import signed_volume, tet_diameters


def brute_force_face_counts(tets) -> Counter:
    """Count occurrences of every sorted vertex triple, one tet at a time.

    Intentionally naive: serves as the independent oracle for the vectorized
    face table.
    """
    counts = Counter()
    for tet in np.asarray(tets).tolist():
        for tri in itertools.combinations(sorted(tet), 3):
            counts[tri] += 1
    return counts


def random_rotation(seed: int) -> np.ndarray:
    """Uniform-ish random rotation matrix from a seeded QR decomposition."""
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q *= np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_valid_tets(n: int, seed: int, lo=-1.0, hi=1.0, quality=1e-14) -> np.ndarray:
    """(n, 4, 3) array of positively oriented tets rejection-sampled so that
    volume > quality * h^3.

    The default floor is the library's degeneracy threshold; verification
    suites that assert margins near 1e-10 should raise it (binary64 evaluation
    noise of the identity checks grows like machine-eps * h/rho).
    """
    rng = np.random.default_rng(seed)
    out = np.empty((0, 4, 3))
    while len(out) < n:
        verts = rng.uniform(lo, hi, size=(n, 4, 3))
        vols = np.array([signed_volume(*v) for v in verts])
        flip = vols < 0
        verts[flip] = verts[flip][:, [0, 1, 3, 2]]
        h = tet_diameters(verts)
        keep = np.abs(vols) > quality * h**3
        out = np.concatenate([out, verts[keep]])
    return out[:n]


@st.composite
def seeded_tet(draw, quality=1e-4):
    """One positively oriented random tet, rejection-sampled for quality.

    ``quality`` bounds volume / h^3 from below so margins stay clear of
    floating-point noise in the tightest checks.
    """
    seed = draw(st.integers(0, 2**31 - 1))
    rng = np.random.default_rng(seed)
    verts = rng.uniform(-2.0, 2.0, size=(4, 3))
    vol = signed_volume(*verts)
    if vol < 0:
        verts = verts[[0, 1, 3, 2]]
        vol = -vol
    h = float(tet_diameters(verts[None])[0])
    assume(vol > quality * h**3)
    return verts


@pytest.fixture(scope="session")
def regular_tet_geometry():
    from wftet import regular_tet_vertices, tet_geometry

    return tet_geometry(*regular_tet_vertices())


@pytest.fixture(scope="session")
def kuhn_tet_geometry():
    from wftet import tet_geometry

    return tet_geometry([0, 0, 0], [1, 0, 0], [1, 1, 0], [1, 1, 1])
