"""wftet: Worsey-Farin refinement of tetrahedral meshes with per-element
shape-regularity certification."""

from .errors import (
    DegenerateTet,
    DegenerateTriangle,
    IndexOutOfRange,
    InvalidC0,
    InvalidMesh,
    NoCrossing,
    NonManifold,
    NotInPlane,
    OutsideTriangle,
    ParseError,
    SplitPointOutsideFace,
    UnsupportedVersion,
    WftetError,
)
from .geometry import (
    Plane,
    TetGeometry,
    TetQuantities,
    Triangle3,
    barycentric_in_triangle,
    dist_to_triangle_boundary,
    point3,
    project_to_plane,
    regular_tet_vertices,
    segment_plane_intersection,
    signed_volume,
    tet_geometry,
    tet_quantities,
    triangle_area,
)
from .mesh import FaceTable, TetMesh, ValidationReport, build_face_table, validate
from .meshio import (
    load_tmesh,
    read_msh_ascii,
    read_tmesh,
    save_tmesh,
    write_tmesh,
    write_vtk_legacy,
)
from .generators import (
    FAMILIES,
    GenSpec,
    gen_cube_kuhn,
    gen_regular_tet,
    gen_sliver,
    gen_two_tet_mirror,
    gen_two_tet_skew,
    generate,
    perturb,
)
from .refine import (
    RefinementOutput,
    SplitPointInfo,
    SplitPoints,
    compute_split_points,
    refine_k,
    worsey_farin,
)
from .regularity import (
    MeshStats,
    SweepRecord,
    TheoreticalConstants,
    Theorem31Result,
    VerificationReport,
    analyze_mesh,
    shape_constant,
    sweep_sharpness,
    sweep_to_csv,
    theoretical_constants,
    verify_lemma_cos,
    verify_lemma_dist_face,
    verify_mesh,
    verify_prop21,
    verify_prop22,
    verify_prop32_lemma33,
    verify_theorem31,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateTet",
    "DegenerateTriangle",
    "IndexOutOfRange",
    "InvalidC0",
    "InvalidMesh",
    "NoCrossing",
    "NonManifold",
    "NotInPlane",
    "OutsideTriangle",
    "ParseError",
    "SplitPointOutsideFace",
    "UnsupportedVersion",
    "WftetError",
    "Plane",
    "TetGeometry",
    "TetQuantities",
    "Triangle3",
    "barycentric_in_triangle",
    "dist_to_triangle_boundary",
    "point3",
    "project_to_plane",
    "regular_tet_vertices",
    "segment_plane_intersection",
    "signed_volume",
    "tet_geometry",
    "tet_quantities",
    "triangle_area",
    "FaceTable",
    "TetMesh",
    "ValidationReport",
    "build_face_table",
    "validate",
    "load_tmesh",
    "read_msh_ascii",
    "read_tmesh",
    "save_tmesh",
    "write_tmesh",
    "write_vtk_legacy",
    "FAMILIES",
    "GenSpec",
    "gen_cube_kuhn",
    "gen_regular_tet",
    "gen_sliver",
    "gen_two_tet_mirror",
    "gen_two_tet_skew",
    "generate",
    "perturb",
    "RefinementOutput",
    "SplitPointInfo",
    "SplitPoints",
    "compute_split_points",
    "refine_k",
    "worsey_farin",
    "MeshStats",
    "SweepRecord",
    "TheoreticalConstants",
    "Theorem31Result",
    "VerificationReport",
    "analyze_mesh",
    "shape_constant",
    "sweep_sharpness",
    "sweep_to_csv",
    "theoretical_constants",
    "verify_lemma_cos",
    "verify_lemma_dist_face",
    "verify_mesh",
    "verify_prop21",
    "verify_prop22",
    "verify_prop32_lemma33",
    "verify_theorem31",
    "__version__",
]
