"""Exception types raised by the mesh and geometry layers."""


class WftetError(Exception):
    """Base class for all library-specific errors."""


class DegenerateTet(WftetError):
    """Tetrahedron volume is below the degeneracy threshold (or inverted)."""


class DegenerateTriangle(WftetError):
    """Triangle with (near-)zero area where a proper triangle is required."""


class NotInPlane(WftetError):
    """Point lies off the supporting plane beyond tolerance."""


class OutsideTriangle(WftetError):
    """Point lies outside the closed triangle beyond tolerance."""


class NoCrossing(WftetError):
    """Segment endpoints do not straddle the plane strictly."""


class InvalidMesh(WftetError):
    """Mesh construction input violates a structural invariant."""


class IndexOutOfRange(InvalidMesh):
    """Connectivity refers to a vertex index outside the vertex table."""


class NonManifold(WftetError):
    """A face (vertex triple) is shared by three or more tetrahedra."""


class ParseError(WftetError):
    """Malformed mesh file; carries a 1-based line number."""

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class UnsupportedVersion(WftetError):
    """Mesh file format/version the reader does not handle."""


class SplitPointOutsideFace(WftetError):
    """Computed face split point landed outside its face beyond tolerance.

    For a conforming mesh of non-degenerate tetrahedra this cannot happen in
    exact arithmetic; seeing it signals degenerate input or a numerical
    pathology.
    """


class InvalidC0(WftetError):
    """Shape-regularity constant outside the admissible range (must be > 1)."""
