"""Mesh file I/O.

Native ``.tmesh`` format: line 1 holds ``nv nt``; then nv lines of ``x y z``
(shortest round-trip decimals, so coordinates survive a write/read cycle
bitwise); then nt lines of four 0-based vertex indices.
"""
from __future__ import annotations

import warnings

import numpy as np

from .errors import ParseError, UnsupportedVersion
from .mesh import TetMesh


def write_tmesh(m: TetMesh) -> str:
    """Serialize a mesh to .tmesh text."""
    parts = [f"{m.num_vertices} {m.num_tets}"]
    parts.extend(f"{x!r} {y!r} {z!r}" for x, y, z in m.vertices.tolist())
    parts.extend(f"{a} {b} {c} {d}" for a, b, c, d in m.tets.tolist())
    parts.append("")
    return "\n".join(parts)


def _parse_floats(lines, first_lineno):
    parts = [ln.split() for ln in lines]
    for i, p in enumerate(parts):
        if len(p) != 3:
            raise ParseError(first_lineno + i, f"expected 3 coordinates, got {len(p)}")
    try:
        arr = np.array(parts, dtype=float)
    except ValueError:
        for i, p in enumerate(parts):
            for tok in p:
                try:
                    float(tok)
                except ValueError:
                    raise ParseError(first_lineno + i, f"bad coordinate {tok!r}") from None
        raise
    if arr.size and not np.isfinite(arr).all():
        i = int(np.flatnonzero(~np.isfinite(arr).all(axis=1))[0])
        raise ParseError(first_lineno + i, "non-finite coordinate")
    return arr.reshape(-1, 3)


def _parse_ints(lines, first_lineno, width):
    parts = [ln.split() for ln in lines]
    for i, p in enumerate(parts):
        if len(p) != width:
            raise ParseError(first_lineno + i, f"expected {width} indices, got {len(p)}")
    try:
        return np.array(parts, dtype=np.int64).reshape(-1, width)
    except ValueError:
        for i, p in enumerate(parts):
            for tok in p:
                try:
                    int(tok)
                except ValueError:
                    raise ParseError(first_lineno + i, f"bad index {tok!r}") from None
        raise


def read_tmesh(text: str) -> TetMesh:
    """Parse .tmesh text; raises ParseError with a 1-based line number."""
    lines = text.splitlines()
    if not lines:
        raise ParseError(1, "empty input, expected 'nv nt' header")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(1, f"expected 'nv nt' header, got {lines[0]!r}")
    try:
        nv, nt = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(1, f"expected integer counts, got {lines[0]!r}") from None
    if nv < 0 or nt < 0:
        raise ParseError(1, "negative count")

    while lines and lines[-1].strip() == "":
        lines.pop()
    needed = 1 + nv + nt
    if len(lines) < needed:
        raise ParseError(len(lines) + 1, f"unexpected end of input, need {needed} lines")
    if len(lines) > needed:
        raise ParseError(needed + 1, "trailing content after last tet")

    vertices = _parse_floats(lines[1 : 1 + nv], 2)
    tets = _parse_ints(lines[1 + nv : needed], 2 + nv, 4)
    if vertices.size == 0:
        vertices = np.empty((0, 3))
    if tets.size == 0:
        tets = np.empty((0, 4), dtype=np.int64)
    return TetMesh(vertices, tets)


def load_tmesh(path) -> TetMesh:
    with open(path, "r") as f:
        return read_tmesh(f.read())


def save_tmesh(m: TetMesh, path) -> None:
    with open(path, "w") as f:
        f.write(write_tmesh(m))


def write_vtk_legacy(m: TetMesh, path) -> None:
    """Write an ASCII legacy VTK unstructured grid (cell type 10)."""
    nt = m.num_tets
    parts = [
        "# vtk DataFile Version 2.0",
        "wftet tetrahedral mesh",
        "ASCII",
        "DATASET UNSTRUCTURED_GRID",
        f"POINTS {m.num_vertices} double",
    ]
    parts.extend(f"{x!r} {y!r} {z!r}" for x, y, z in m.vertices.tolist())
    parts.append(f"CELLS {nt} {5 * nt}")
    parts.extend(f"4 {a} {b} {c} {d}" for a, b, c, d in m.tets.tolist())
    parts.append(f"CELL_TYPES {nt}")
    parts.extend("10" for _ in range(nt))
    parts.append("")
    with open(path, "w") as f:
        f.write("\n".join(parts))


def read_msh_ascii(text: str) -> TetMesh:
    """Read a Gmsh MSH 2.2 ASCII file, keeping only tetrahedral elements.

    Non-tet elements are skipped (with a warning if no tets remain); node ids
    may be sparse and are re-indexed densely in increasing id order over the
    nodes actually referenced.
    """
    lines = text.splitlines()
    i = 0
    n = len(lines)

    def expect(tag):
        nonlocal i
        while i < n and lines[i].strip() == "":
            i += 1
        if i >= n or lines[i].strip() != tag:
            raise ParseError(i + 1, f"expected {tag}")
        i += 1

    expect("$MeshFormat")
    fmt = lines[i].split()
    if len(fmt) != 3:
        raise ParseError(i + 1, f"bad $MeshFormat line: {lines[i]!r}")
    version, file_type = fmt[0], fmt[1]
    if file_type != "0":
        raise UnsupportedVersion("binary MSH files are not supported")
    if version != "2.2":
        raise UnsupportedVersion(f"MSH version {version} not supported (need 2.2)")
    i += 1
    expect("$EndMeshFormat")

    expect("$Nodes")
    try:
        num_nodes = int(lines[i])
    except (ValueError, IndexError):
        raise ParseError(i + 1, "expected node count") from None
    i += 1
    coords = {}
    for k in range(num_nodes):
        toks = lines[i + k].split()
        if len(toks) != 4:
            raise ParseError(i + k + 1, f"expected 'id x y z', got {lines[i + k]!r}")
        try:
            coords[int(toks[0])] = (float(toks[1]), float(toks[2]), float(toks[3]))
        except ValueError:
            raise ParseError(i + k + 1, f"bad node line {lines[i + k]!r}") from None
    i += num_nodes
    expect("$EndNodes")

    expect("$Elements")
    try:
        num_elems = int(lines[i])
    except (ValueError, IndexError):
        raise ParseError(i + 1, "expected element count") from None
    i += 1
    tets = []
    for k in range(num_elems):
        toks = lines[i + k].split()
        if len(toks) < 3:
            raise ParseError(i + k + 1, f"bad element line {lines[i + k]!r}")
        etype = int(toks[1])
        ntags = int(toks[2])
        nodes = toks[3 + ntags :]
        if etype == 4:  # 4-node tetrahedron
            if len(nodes) != 4:
                raise ParseError(i + k + 1, "tetrahedron needs 4 nodes")
            tets.append([int(v) for v in nodes])
    i += num_elems
    expect("$EndElements")

    if not tets:
        warnings.warn("MSH file contains no tetrahedral elements")
        return TetMesh(np.empty((0, 3)), np.empty((0, 4), dtype=np.int64))

    used = sorted({v for tet in tets for v in tet})
    for v in used:
        if v not in coords:
            raise ParseError(1, f"element references unknown node id {v}")
    remap = {v: j for j, v in enumerate(used)}
    vertices = np.array([coords[v] for v in used])
    conn = np.array([[remap[v] for v in tet] for tet in tets], dtype=np.int64)
    return TetMesh(vertices, conn)
