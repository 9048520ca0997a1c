"""Shape-regularity metrics and executable verification of the geometric
inequalities that bound the quality of a Worsey-Farin refinement.

The central quantity is ``c0 = max h_T / rho_T`` over a mesh (diameter over
insphere diameter).  From c0 alone, ``theoretical_constants`` produces an
explicit bound c1 on the same ratio for every refined child, along with the
face-split margin constant c2 it rests on.  The ``verify_*`` operations
evaluate each supporting inequality numerically and return signed margins
(>= 0 means the inequality holds with room to spare); ``verify_mesh`` bundles
all of them into a :class:`VerificationReport`.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import geometry
from .errors import DegenerateTet, InvalidC0, SplitPointOutsideFace
from .generators import GenSpec, generate
from .geometry import TetGeometry, TetQuantities, tet_quantities
from .mesh import FaceTable, TetMesh, build_face_table
from .refine import RefinementOutput, SplitPoints, compute_split_points, worsey_farin

REGULAR_TET_C0 = math.sqrt(6.0)

# Check ids in report order with default pass tolerances (margin >= -tol);
# strict checks require margin > 0.
CHECK_IDS = (
    "prop21",
    "prop22",
    "lemma_dist_face",
    "lemma_cos",
    "prop32",
    "lemma33",
    "thm31",
    "volK",
    "areaF",
)
DEFAULT_TOLERANCES = {
    "prop21": 1e-10,
    "prop22": 0.0,
    "lemma_dist_face": 1e-12,
    "lemma_cos": 1e-12,
    "prop32": 1e-10,
    "lemma33": 1e-10,
    "thm31": 0.0,
    "volK": 1e-10,
    "areaF": 1e-10,
}
STRICT_CHECKS = frozenset({"prop22"})

_DEFAULT_CHUNK = 1 << 18


@dataclass(frozen=True)
class TheoreticalConstants:
    """Explicit constants tying refined-mesh regularity to the parent's c0.

    ``frak_c2 = (2 c0)^-1 sqrt(-1 + 2 / (1 + sqrt(1 - c0^-2)))`` controls
    interior faces, ``(3 c0)^-1`` boundary faces; ``c2`` is their minimum and
    ``c1 = 2 pi c0^3 / c2`` bounds max h_K / rho_K over the refinement.
    """

    c0: float
    frak_c2: float
    c2: float
    c1: float


def theoretical_constants(c0: float) -> TheoreticalConstants:
    """Evaluate the refinement-regularity constants for a given c0 > 1.

    Raises InvalidC0 for c0 <= 1 (the square roots leave the reals).  Values
    below sqrt(6), the ratio of the regular tetrahedron, are geometrically
    unattainable and trigger a warning since they indicate an upstream bug.
    """
    c0 = float(c0)
    if not c0 > 1.0:
        raise InvalidC0(f"c0 must be > 1, got {c0}")
    if c0 < REGULAR_TET_C0 - 1e-9:
        warnings.warn(
            f"c0 = {c0} is below the regular-tet minimum sqrt(6) ~ 2.449; "
            "no tetrahedron attains this"
        )
    root = math.sqrt(1.0 - c0**-2)
    # algebraically (2 c0)^-1 sqrt(-1 + 2/(1 + root)); this form avoids the
    # catastrophic cancellation that zeroes the radicand for c0 >~ 1e8
    frak_c2 = 1.0 / (2.0 * c0**2 * (1.0 + root))
    c2 = min(frak_c2, 1.0 / (3.0 * c0))
    c1 = 2.0 * math.pi * c0**3 / c2
    return TheoreticalConstants(c0=c0, frak_c2=frak_c2, c2=c2, c1=c1)


def shape_constant(m: TetMesh, quantities: Optional[TetQuantities] = None) -> float:
    """max over tets of diameter / insphere diameter (h_T / rho_T)."""
    if m.num_tets == 0:
        raise ValueError("no tetrahedra")
    q = quantities if quantities is not None else tet_quantities(m.tet_vertex_array())
    return float((q.h / q.rho).max())


# ---------------------------------------------------------------------------
# Per-tet margin kernels (vectorized; scalar verify_* ops wrap batch size 1).
# ---------------------------------------------------------------------------


def _margins_from_quantities(q: TetQuantities, verts: np.ndarray) -> dict:
    corners = verts[:, geometry.FACE_LOCAL]
    # distances measured relative to a face corner to stay translation-robust
    sd = np.einsum(
        "nfk,nfk->nf", q.face_normals, q.incenter[:, None, :] - corners[:, :, 0]
    )
    dist_faces = np.abs(sd)
    prop21_dev = np.abs(2.0 * dist_faces - q.rho[:, None]).max(axis=1) / q.rho

    vert_dist = np.abs(
        np.einsum("nfk,nfk->nf", q.face_normals, verts - corners[:, :, 0])
    )
    prop22 = (vert_dist - q.rho[:, None]).min(axis=1) / q.rho
    touch_bd = geometry._line_distances(q.touch_points, corners).min(axis=2)
    lhs = touch_bd.min(axis=1)
    rhs = geometry.rho_over_two_cot_half(q.rho, q.dihedral_cos).min(axis=1)
    lemma_dist = (lhs - rhs) / q.h

    sin = np.sqrt(np.clip(1.0 - q.dihedral_cos**2, 0.0, None))
    lemma_cos = (sin - (q.rho / q.h)[:, None]).min(axis=1)

    return {
        "prop21_dev": prop21_dev,
        "prop22": prop22,
        "lemma_dist_face": lemma_dist,
        "lemma_cos": lemma_cos,
        "touch_bd": touch_bd,
        "hrho": q.h / q.rho,
    }


def _geometry_to_quantities(g: TetGeometry):
    return tet_quantities(g.vertices[None]), g.vertices[None]


def verify_prop21(g: TetGeometry) -> float:
    """Deviation max_F |2 dist(incenter, face plane) - rho| / rho.

    The incenter is equidistant from all four face planes at rho/2, so the
    value is pure rounding error; below 1e-10 counts as a pass.
    """
    q, verts = _geometry_to_quantities(g)
    return float(_margins_from_quantities(q, verts)["prop21_dev"][0])


def verify_prop22(g: TetGeometry, interior_samples: int = 0, seed: int = 0) -> float:
    """Margin min_x (dist(x, P_x) - rho) / rho over the four vertices.

    P_x is the plane of the face opposite x; the vertex is strictly farther
    from it than the insphere diameter, so a pass requires margin > 0.  With
    ``interior_samples`` > 0, seeded interior points a are also required to
    satisfy dist(x, P_x) > dist(a, P_x), folded into the same margin.
    """
    q, verts = _geometry_to_quantities(g)
    margin = float(_margins_from_quantities(q, verts)["prop22"][0])
    if interior_samples:
        rng = np.random.default_rng(seed)
        lam = rng.dirichlet(np.ones(4), size=interior_samples)
        pts = lam @ g.vertices
        a_dist = np.abs(pts @ g.face_normals.T - g.face_offsets)   # (s, 4)
        x_dist = np.abs(
            np.einsum("fk,fk->f", g.face_normals, g.vertices) - g.face_offsets
        )
        margin = min(margin, float((x_dist - a_dist).min() / g.rho))
    return margin


def verify_lemma_dist_face(g: TetGeometry) -> float:
    """Margin of the touch-point boundary bound, normalized by h.

    min_F dist(z_F, boundary of F) >= min_e (rho/2) sqrt((1+cos a)/(1-cos a)),
    with z_F the incenter's projection onto face F and a the interior
    dihedral angles.  The regular tetrahedron attains equality.
    """
    q, verts = _geometry_to_quantities(g)
    return float(_margins_from_quantities(q, verts)["lemma_dist_face"][0])


def verify_lemma_cos(g: TetGeometry) -> float:
    """Margin min_e (sin a_e - rho / h): every dihedral sine beats rho/h."""
    q, verts = _geometry_to_quantities(g)
    return float(_margins_from_quantities(q, verts)["lemma_cos"][0])


# ---------------------------------------------------------------------------
# Face checks: split-point position (interior faces) and the c2 bound.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FaceCheckResult:
    """Margins of the split-point checks, with worst faces identified.

    ``prop32_margin`` folds, per interior face: collinearity of m_F with the
    two incenter projections (as -residual/h), the convex coefficient's
    distance from [0, 1], both projections' interiority, and
    dist(m_F, bd F) >= min_i dist(z_i, bd F).  ``lemma33_margin`` is
    (dist(m_F, bd F) - c2 * min incident h) / min incident h over all faces.
    """

    prop32_margin: Optional[float]
    prop32_worst_face: Optional[tuple]
    lemma33_margin: float
    lemma33_worst_face: tuple
    min_split_dist: float
    num_interior: int
    num_boundary: int


def verify_prop32_lemma33(
    m: TetMesh,
    ft: Optional[FaceTable] = None,
    splits: Optional[SplitPoints] = None,
    constants: Optional[TheoreticalConstants] = None,
    quantities: Optional[TetQuantities] = None,
) -> FaceCheckResult:
    """Check split-point betweenness and the c2 face-margin bound."""
    if m.num_tets == 0:
        raise ValueError("no tetrahedra")
    if ft is None:
        ft = build_face_table(m)
    if quantities is None:
        quantities = tet_quantities(m.tet_vertex_array())
    if splits is None:
        splits = compute_split_points(m, ft, quantities)
    if constants is None:
        constants = theoretical_constants(shape_constant(m, quantities))

    verts = m.tet_vertex_array()
    corners_tet = verts[:, geometry.FACE_LOCAL]       # (n, 4, 3, 3)
    touch_bd = geometry._line_distances(
        quantities.touch_points, corners_tet
    ).min(axis=2)                                     # (n, 4)
    touch_bary = geometry._bary_coords(quantities.touch_points, corners_tet)

    face_corners = m.vertices[ft.triples]             # (nf, 3, 3)
    dist_m = geometry._line_distances(splits.points, face_corners).min(axis=1)

    h = quantities.h
    minh = np.where(ft.is_boundary, h[ft.tet0], np.minimum(h[ft.tet0], h[np.maximum(ft.tet1, 0)]))
    lemma33 = (dist_m - constants.c2 * minh) / minh
    worst33 = int(np.argmin(lemma33))

    prop32_margin = None
    prop32_worst = None
    rows = np.flatnonzero(~ft.is_boundary)
    if rows.size:
        t0, l0 = ft.tet0[rows], ft.local0[rows]
        t1, l1 = ft.tet1[rows], ft.local1[rows]
        z1 = quantities.touch_points[t0, l0]
        z2 = quantities.touch_points[t1, l1]
        mp = splits.points[rows]
        hmax = np.maximum(h[t0], h[t1])

        seg = z1 - z2
        seg_len2 = np.einsum("ik,ik->i", seg, seg)
        tiny = (1e-14 * hmax) ** 2
        safe = seg_len2 > tiny
        theta = np.full(rows.size, 0.5)
        np.divide(
            np.einsum("ik,ik->i", mp - z2, seg),
            seg_len2,
            out=theta,
            where=safe,
        )
        recon = z2 + theta[:, None] * seg
        resid = np.linalg.norm(mp - recon, axis=1)

        collin = -resid / hmax
        theta_margin = np.minimum(theta, 1.0 - theta)
        dist_margin = (dist_m[rows] - np.minimum(touch_bd[t0, l0], touch_bd[t1, l1])) / hmax
        interior_z = np.minimum(
            touch_bary[t0, l0].min(axis=1), touch_bary[t1, l1].min(axis=1)
        )
        per_face = np.min(
            np.stack([collin, theta_margin, dist_margin, interior_z]), axis=0
        )
        j = int(np.argmin(per_face))
        prop32_margin = float(per_face[j])
        prop32_worst = tuple(int(v) for v in ft.triples[rows[j]])

    return FaceCheckResult(
        prop32_margin=prop32_margin,
        prop32_worst_face=prop32_worst,
        lemma33_margin=float(lemma33[worst33]),
        lemma33_worst_face=tuple(int(v) for v in ft.triples[worst33]),
        min_split_dist=float(dist_m.min()),
        num_interior=int(rows.size),
        num_boundary=int(ft.is_boundary.sum()),
    )


# ---------------------------------------------------------------------------
# The refinement bound, end to end.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Theorem31Result:
    """Observed refined shape ratio against the theoretical bound.

    ``volK_margin`` is min over children of (|K| - (c2/12) rho_T^3) / rho_T^3
    with T the parent; ``areaF_margin`` is min over children of
    (pi h_K^2 - sum of face areas) / h_K^2.
    """

    observed: float
    bound: float
    slack: float
    c0: float
    constants: TheoreticalConstants
    volK_margin: float
    areaF_margin: float
    worst_child: int
    num_children: int

    @property
    def passed(self) -> bool:
        return self.observed <= self.bound


def verify_theorem31(
    m: TetMesh,
    output: Optional[RefinementOutput] = None,
    parent_quantities: Optional[TetQuantities] = None,
    chunk: int = _DEFAULT_CHUNK,
) -> Theorem31Result:
    """Refine the mesh and compare max h_K / rho_K to the c1 bound.

    Also checks the two per-child inequalities the bound rests on: the child
    volume floor (c2/12) rho_T^3 and the face-area ceiling pi h_K^2.
    """
    if m.num_tets == 0:
        raise ValueError("no tetrahedra")
    if parent_quantities is None:
        parent_quantities = tet_quantities(m.tet_vertex_array())
    c0 = shape_constant(m, parent_quantities)
    constants = theoretical_constants(c0)
    if output is None:
        output = worsey_farin(m)

    refined = output.refined
    parent_rho = parent_quantities.rho[output.parent_of.parent]

    observed = -math.inf
    worst_child = -1
    volk = math.inf
    areaf = math.inf
    floor = constants.c2 / 12.0 * parent_rho**3
    for lo in range(0, refined.num_tets, chunk):
        hi = min(lo + chunk, refined.num_tets)
        qc = tet_quantities(refined.vertices[refined.tets[lo:hi]])
        ratios = qc.h / qc.rho
        j = int(np.argmax(ratios))
        if ratios[j] > observed:
            observed = float(ratios[j])
            worst_child = lo + j
        volk = min(volk, float(((qc.volume - floor[lo:hi]) / parent_rho[lo:hi] ** 3).min()))
        areaf = min(
            areaf,
            float(((math.pi * qc.h**2 - qc.face_areas.sum(axis=1)) / qc.h**2).min()),
        )

    return Theorem31Result(
        observed=observed,
        bound=constants.c1,
        slack=constants.c1 / observed,
        c0=c0,
        constants=constants,
        volK_margin=volk,
        areaF_margin=areaf,
        worst_child=worst_child,
        num_children=refined.num_tets,
    )


# ---------------------------------------------------------------------------
# Whole-mesh report.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    check: str
    passed: bool
    margin: Optional[float]     # None when the check is vacuous
    worst: str
    tolerance: float

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


@dataclass(frozen=True)
class VerificationReport:
    """All check margins for a mesh plus summary statistics.

    Mesh statistics describe the input mesh; ``observed_wf_ratio``,
    ``c1_bound`` and ``slack`` describe its refinement.
    """

    checks: tuple
    num_vertices: int
    num_tets: int
    c0: float
    dihedral_min: float
    dihedral_max: float
    min_touch_dist: float
    min_split_dist: float
    observed_wf_ratio: float
    c1_bound: float
    slack: float

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, check_id: str) -> CheckResult:
        for c in self.checks:
            if c.check == check_id:
                return c
        raise KeyError(check_id)

    def to_json(self) -> str:
        obj = {
            "mesh": {
                "num_vertices": self.num_vertices,
                "num_tets": self.num_tets,
                "c0": _r9(self.c0),
                "dihedral_min": _r9(self.dihedral_min),
                "dihedral_max": _r9(self.dihedral_max),
                "min_touch_dist": _r9(self.min_touch_dist),
                "min_split_dist": _r9(self.min_split_dist),
            },
            "checks": [
                {
                    "check": c.check,
                    "status": c.status,
                    "margin": _r9(c.margin) if c.margin is not None else None,
                    "worst": c.worst,
                }
                for c in self.checks
            ],
            "refined": {
                "observed_wf_ratio": _r9(self.observed_wf_ratio),
                "c1_bound": _r9(self.c1_bound),
                "slack": _r9(self.slack),
            },
            "all_passed": self.all_passed,
        }
        return json.dumps(obj, indent=2)

    def to_csv(self) -> str:
        rows = [
            ("num_vertices", str(self.num_vertices)),
            ("num_tets", str(self.num_tets)),
            ("c0", _f9(self.c0)),
            ("dihedral_min", _f9(self.dihedral_min)),
            ("dihedral_max", _f9(self.dihedral_max)),
            ("min_touch_dist", _f9(self.min_touch_dist)),
            ("min_split_dist", _f9(self.min_split_dist)),
            ("observed_wf_ratio", _f9(self.observed_wf_ratio)),
            ("c1_bound", _f9(self.c1_bound)),
            ("slack", _f9(self.slack)),
        ]
        for c in self.checks:
            rows.append((f"{c.check}_status", c.status))
            rows.append(
                (f"{c.check}_margin", _f9(c.margin) if c.margin is not None else "n/a")
            )
        rows.append(("all_passed", str(self.all_passed).lower()))
        return "field,value\n" + "\n".join(f"{k},{v}" for k, v in rows) + "\n"

    def __str__(self):
        lines = []
        for c in self.checks:
            margin = _f9(c.margin) if c.margin is not None else "n/a (vacuous)"
            lines.append(f"{c.check:<16} {c.status:<4} margin={margin} worst={c.worst}")
        lines.append(f"c0={_f9(self.c0)}")
        lines.append(f"observed_wf_ratio={_f9(self.observed_wf_ratio)}")
        lines.append(f"c1_bound={_f9(self.c1_bound)}")
        lines.append(f"slack={_f9(self.slack)}")
        lines.append(f"RESULT {'pass' if self.all_passed else 'FAIL'}")
        return "\n".join(lines)


def _f9(x) -> str:
    return format(float(x), ".9g")


def _r9(x):
    return float(_f9(x))


class _Worst:
    """Running minimum with a label for the element that attains it."""

    __slots__ = ("value", "label")

    def __init__(self):
        self.value = math.inf
        self.label = "n/a"

    def update(self, values: np.ndarray, labeler):
        if values.size == 0:
            return
        j = int(np.argmin(values))
        if values[j] < self.value:
            self.value = float(values[j])
            self.label = labeler(j)


def verify_mesh(
    m: TetMesh, tolerance: Optional[float] = None, chunk: int = _DEFAULT_CHUNK
) -> VerificationReport:
    """Run every check on a mesh and its Worsey-Farin refinement.

    The per-tet inequality checks run over parents and children alike; the
    face checks run on the parent mesh's split points; the refinement bound
    compares children against the c1 of the parent's c0.  ``tolerance``, if
    given, replaces every check's default pass tolerance.  The mesh is
    expected to be conforming (run ``validate`` first; NonManifold propagates).
    """
    if m.num_tets == 0:
        raise ValueError("no tetrahedra")
    tol = dict(DEFAULT_TOLERANCES)
    if tolerance is not None:
        tol = {k: float(tolerance) for k in tol}

    ft = build_face_table(m)
    verts = m.tet_vertex_array()
    q = tet_quantities(verts)
    c0 = shape_constant(m, quantities=q)
    constants = theoretical_constants(c0)

    worst = {k: _Worst() for k in ("prop21", "prop22", "lemma_dist_face", "lemma_cos")}
    parent_margins = _margins_from_quantities(q, verts)
    for key in worst:
        vals = -parent_margins["prop21_dev"] if key == "prop21" else parent_margins[key]
        worst[key].update(vals, lambda j: f"tet {j}")
    min_touch = float(parent_margins["touch_bd"].min())

    # Global dihedral corollary: |cos a| <= sqrt(1 - c0^-2) with the mesh c0.
    cos_bound = math.sqrt(1.0 - c0**-2)
    global_cos = cos_bound - np.abs(q.dihedral_cos).max(axis=1)
    worst["lemma_cos"].update(global_cos, lambda j: f"tet {j} (global form)")

    splits = compute_split_points(m, ft, q)
    faces = verify_prop32_lemma33(m, ft, splits, constants, q)

    output = worsey_farin(m, ft=ft, quantities=q, splits=splits)
    refined = output.refined
    parent_rho = q.rho[output.parent_of.parent]
    floor = constants.c2 / 12.0 * parent_rho**3

    observed = -math.inf
    observed_child = -1
    volk = _Worst()
    areaf = _Worst()
    for lo in range(0, refined.num_tets, chunk):
        hi = min(lo + chunk, refined.num_tets)
        cverts = refined.vertices[refined.tets[lo:hi]]
        qc = tet_quantities(cverts)
        cm = _margins_from_quantities(qc, cverts)

        def child_label(j, lo=lo):
            c = lo + j
            return f"child {c} (parent {int(output.parent_of.parent[c])})"

        for key in worst:
            vals = -cm["prop21_dev"] if key == "prop21" else cm[key]
            worst[key].update(vals, child_label)
        ratios = cm["hrho"]
        j = int(np.argmax(ratios))
        if ratios[j] > observed:
            observed = float(ratios[j])
            observed_child = lo + j
        volk.update((qc.volume - floor[lo:hi]) / parent_rho[lo:hi] ** 3, child_label)
        areaf.update(
            (math.pi * qc.h**2 - qc.face_areas.sum(axis=1)) / qc.h**2, child_label
        )

    def result(check, margin, worst_label):
        if margin is None:
            return CheckResult(check, True, None, worst_label, tol[check])
        if check in STRICT_CHECKS:
            passed = margin > tol[check]
        else:
            passed = margin >= -tol[check]
        return CheckResult(check, passed, float(margin), worst_label, tol[check])

    thm31_margin = (constants.c1 - observed) / constants.c1
    checks = (
        result("prop21", worst["prop21"].value, worst["prop21"].label),
        result("prop22", worst["prop22"].value, worst["prop22"].label),
        result(
            "lemma_dist_face",
            worst["lemma_dist_face"].value,
            worst["lemma_dist_face"].label,
        ),
        result("lemma_cos", worst["lemma_cos"].value, worst["lemma_cos"].label),
        result(
            "prop32",
            faces.prop32_margin,
            f"face {faces.prop32_worst_face}" if faces.prop32_worst_face else "no interior faces",
        ),
        result("lemma33", faces.lemma33_margin, f"face {faces.lemma33_worst_face}"),
        result("thm31", thm31_margin, f"child {observed_child}"),
        result("volK", volk.value, volk.label),
        result("areaF", areaf.value, areaf.label),
    )

    return VerificationReport(
        checks=checks,
        num_vertices=m.num_vertices,
        num_tets=m.num_tets,
        c0=c0,
        dihedral_min=float(q.dihedral_angles.min()),
        dihedral_max=float(q.dihedral_angles.max()),
        min_touch_dist=min_touch,
        min_split_dist=faces.min_split_dist,
        observed_wf_ratio=observed,
        c1_bound=constants.c1,
        slack=constants.c1 / observed,
    )


# ---------------------------------------------------------------------------
# Mesh statistics without refinement (the `analyze` surface).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MeshStats:
    num_vertices: int
    num_tets: int
    c0: float
    h_rho_min: float
    h_rho_max: float
    dihedral_min: float
    dihedral_max: float
    min_touch_dist: float
    min_split_dist: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "num_vertices": self.num_vertices,
                "num_tets": self.num_tets,
                "c0": _r9(self.c0),
                "h_rho_min": _r9(self.h_rho_min),
                "h_rho_max": _r9(self.h_rho_max),
                "dihedral_min": _r9(self.dihedral_min),
                "dihedral_max": _r9(self.dihedral_max),
                "min_touch_dist": _r9(self.min_touch_dist),
                "min_split_dist": _r9(self.min_split_dist),
            },
            indent=2,
        )

    def to_csv(self) -> str:
        fields = (
            ("num_vertices", str(self.num_vertices)),
            ("num_tets", str(self.num_tets)),
            ("c0", _f9(self.c0)),
            ("h_rho_min", _f9(self.h_rho_min)),
            ("h_rho_max", _f9(self.h_rho_max)),
            ("dihedral_min", _f9(self.dihedral_min)),
            ("dihedral_max", _f9(self.dihedral_max)),
            ("min_touch_dist", _f9(self.min_touch_dist)),
            ("min_split_dist", _f9(self.min_split_dist)),
        )
        header = ",".join(k for k, _ in fields)
        values = ",".join(v for _, v in fields)
        return f"{header}\n{values}\n"


def analyze_mesh(m: TetMesh) -> MeshStats:
    """Per-mesh quality statistics (no refinement involved)."""
    if m.num_tets == 0:
        raise ValueError("no tetrahedra")
    ft = build_face_table(m)
    verts = m.tet_vertex_array()
    q = tet_quantities(verts)
    touch_bd = geometry._line_distances(
        q.touch_points, verts[:, geometry.FACE_LOCAL]
    ).min(axis=2)
    splits = compute_split_points(m, ft, q)
    dist_m = geometry._line_distances(
        splits.points, m.vertices[ft.triples]
    ).min(axis=1)
    hrho = q.h / q.rho
    return MeshStats(
        num_vertices=m.num_vertices,
        num_tets=m.num_tets,
        c0=float(hrho.max()),
        h_rho_min=float(hrho.min()),
        h_rho_max=float(hrho.max()),
        dihedral_min=float(q.dihedral_angles.min()),
        dihedral_max=float(q.dihedral_angles.max()),
        min_touch_dist=float(touch_bd.min()),
        min_split_dist=float(dist_m.min()),
    )


# ---------------------------------------------------------------------------
# Sharpness sweep.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    param: float
    c0: float
    observed: float
    c1: float
    slack: float


def sweep_sharpness(family: str, params, n: int = 2, seed: int = 0) -> list:
    """One refinement-bound evaluation per family parameter.

    ``params`` feeds ``eps`` for the sliver and skew families and ``sigma``
    for perturbed cubes.  Parameters whose mesh is degenerate are skipped
    with a warning.  Along a sliver sweep with decreasing eps, c0 increases
    monotonically.
    """
    records = []
    for p in params:
        p = float(p)
        try:
            if family == "perturbed_cube":
                mesh = generate(GenSpec(family, n=n, sigma=p, seed=seed))
            else:
                mesh = generate(GenSpec(family, n=n, eps=p, seed=seed))
            r = verify_theorem31(mesh)
        except (DegenerateTet, SplitPointOutsideFace, ValueError) as e:
            warnings.warn(f"skipping {family} param {p:g}: {e}")
            continue
        records.append(
            SweepRecord(param=p, c0=r.c0, observed=r.observed, c1=r.bound, slack=r.slack)
        )
    return records


def sweep_to_csv(records, param_name: str = "eps") -> str:
    """CSV serialization with header ``eps,c0,observed,c1,slack``."""
    lines = [f"{param_name},c0,observed,c1,slack"]
    for r in records:
        lines.append(
            ",".join(_f9(v) for v in (r.param, r.c0, r.observed, r.c1, r.slack))
        )
    return "\n".join(lines) + "\n"
