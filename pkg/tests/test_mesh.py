"""Mesh container, face table, validation, and file I/O."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wftet import (
    IndexOutOfRange,
    InvalidMesh,
    NonManifold,
    ParseError,
    TetMesh,
    build_face_table,
    gen_cube_kuhn,
    gen_two_tet_mirror,
    read_tmesh,
    regular_tet_vertices,
    validate,
    write_tmesh,
    write_vtk_legacy,
)
from wftet.geometry import FACE_LOCAL

from conftest import brute_force_face_counts

SINGLE = TetMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 2, 3]])


def two_tet_mesh():
    return TetMesh(
        [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]],
        [[0, 1, 2, 3], [1, 2, 3, 4]],
    )


class TestTetMesh:
    def test_counts(self):
        assert SINGLE.num_vertices == 4 and SINGLE.num_tets == 1

    def test_bad_index(self):
        with pytest.raises(IndexOutOfRange):
            TetMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2, 3]])
        with pytest.raises(IndexOutOfRange):
            TetMesh(regular_tet_vertices(), [[0, 1, 2, -1]])

    def test_repeated_vertex(self):
        with pytest.raises(InvalidMesh):
            TetMesh(regular_tet_vertices(), [[0, 1, 2, 2]])

    def test_nonfinite_vertex(self):
        verts = regular_tet_vertices()
        verts[0, 0] = np.nan
        with pytest.raises(InvalidMesh):
            TetMesh(verts, [[0, 1, 2, 3]])

    def test_canonicalization_records_fix(self):
        m = TetMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 2, 1, 3]])
        assert m.orientation_fixes == (0,)
        assert m.tets.tolist() == [[0, 2, 3, 1]]

    def test_immutability(self):
        with pytest.raises(ValueError):
            SINGLE.vertices[0, 0] = 5.0

    def test_input_array_not_frozen(self):
        verts = np.array(regular_tet_vertices())
        TetMesh(verts, [[0, 1, 2, 3]])
        verts[0, 0] = 9.0  # caller's array stays writable

    def test_equality(self):
        assert SINGLE == TetMesh(SINGLE.vertices, SINGLE.tets)
        assert SINGLE != two_tet_mesh()


class TestFaceTable:
    def test_single_tet(self):
        ft = build_face_table(SINGLE)
        assert len(ft) == 4
        assert ft.num_boundary == 4 and ft.num_interior == 0

    def test_two_tets_share_one_face(self):
        ft = build_face_table(two_tet_mesh())
        assert len(ft) == 7
        assert ft.num_boundary == 6 and ft.num_interior == 1
        rec = ft[(1, 2, 3)]
        assert rec.tets == (0, 1) and not rec.boundary

    def test_kuhn_cube_against_brute_force(self):
        m = gen_cube_kuhn(1)
        ft = build_face_table(m)
        counts = brute_force_face_counts(m.tets)
        assert len(ft) == len(counts) == 18
        assert ft.num_boundary == sum(1 for c in counts.values() if c == 1) == 12
        assert ft.num_interior == sum(1 for c in counts.values() if c == 2) == 6
        for tri in ft:
            rec = ft[tri]
            assert counts[tri] == len(rec.tets)

    def test_face_count_identity(self):
        for m in (SINGLE, two_tet_mesh(), gen_cube_kuhn(2), gen_two_tet_mirror()):
            ft = build_face_table(m)
            assert 4 * m.num_tets == 2 * ft.num_interior + ft.num_boundary

    def test_tet_face_rows_consistent(self):
        m = gen_cube_kuhn(1)
        ft = build_face_table(m)
        for t in range(m.num_tets):
            for f in range(4):
                tri = sorted(m.tets[t][FACE_LOCAL[f]].tolist())
                assert ft.triples[ft.tet_face_rows[t, f]].tolist() == tri

    def test_nonmanifold_raises(self):
        m = TetMesh(
            [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, -1], [1, 1, 1]],
            [[0, 1, 2, 3], [0, 2, 1, 4], [0, 1, 2, 5]],
        )
        with pytest.raises(NonManifold):
            build_face_table(m)

    def test_empty_mesh(self):
        ft = build_face_table(TetMesh(np.empty((0, 3)), np.empty((0, 4), int)))
        assert len(ft) == 0


class TestValidate:
    def test_clean_generator_output(self):
        report = validate(gen_cube_kuhn(2))
        assert report.clean and report.conforming
        assert report.orientation_fixes == ()

    def test_inverted_tet_reported(self):
        m = TetMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 2, 1, 3]])
        report = validate(m)
        assert len(report.orientation_fixes) == 1
        assert report.ok and not report.clean

    def test_degenerate_tet_reported(self):
        m = TetMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]], [[0, 1, 2, 3]])
        report = validate(m)
        assert report.degenerate_tets == (0,)
        assert not report.ok

    def test_hanging_node_breaks_conformity(self):
        # face (1,2,3) of the top tet is covered from below by two tets that
        # split it through the midpoint of edge (1,2): vertex 4 hangs
        m = TetMesh(
            [
                [0, 0, 1],
                [0, 0, 0],
                [2, 0, 0],
                [0, 2, 0],
                [1, 0, 0],
                [0.5, 0.5, -1],
            ],
            [[0, 1, 2, 3], [1, 4, 3, 5], [4, 2, 3, 5]],
        )
        report = validate(m)
        assert report.hanging_vertices == (4,)
        assert not report.conforming and not report.ok

    def test_nonmanifold_reported_not_raised(self):
        m = TetMesh(
            [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, -1], [1, 1, 1]],
            [[0, 1, 2, 3], [0, 2, 1, 4], [0, 1, 2, 5]],
        )
        report = validate(m)
        assert report.nonmanifold_faces == ((0, 1, 2),)
        assert not report.conforming


class TestTmeshRoundTrip:
    def test_single_tet(self):
        text = write_tmesh(SINGLE)
        assert read_tmesh(text) == SINGLE

    def test_empty_mesh(self):
        empty = TetMesh(np.empty((0, 3)), np.empty((0, 4), int))
        assert read_tmesh(write_tmesh(empty)) == empty

    def test_awkward_coordinates_bitwise(self):
        verts = np.array(
            [
                [0.1 + 0.2, -1e-300, 1e300],
                [1 / 3, np.nextafter(1.0, 2.0), -0.0],
                [5e-324, 2**-1074, 1.7976931348623157e308],
                [np.pi, np.e, 2 / 3],
            ]
        )
        m = TetMesh(verts, [[0, 1, 2, 3]])
        m2 = read_tmesh(write_tmesh(m))
        assert m2.vertices.tobytes() == m.vertices.tobytes()
        assert np.array_equal(m2.tets, m.tets)

    @given(st.integers(0, 2**31 - 1))
    @settings(max_examples=25, deadline=None)
    def test_random_mesh_roundtrip(self, seed):
        rng = np.random.default_rng(seed)
        verts = rng.uniform(-1, 1, (4, 3)) * rng.choice([1e-9, 1.0, 1e9])
        from wftet.geometry import signed_volume

        if signed_volume(*verts) == 0:
            return
        m = TetMesh(verts, [[0, 1, 2, 3]])
        m2 = read_tmesh(write_tmesh(m))
        assert m2.vertices.tobytes() == m.vertices.tobytes()

    def test_malformed_header(self):
        with pytest.raises(ParseError) as e:
            read_tmesh("bogus\n")
        assert e.value.line == 1

    def test_bad_coordinate_line(self):
        with pytest.raises(ParseError) as e:
            read_tmesh("2 0\n0 0 0\n1 nope 0\n")
        assert e.value.line == 3

    def test_wrong_token_count(self):
        with pytest.raises(ParseError) as e:
            read_tmesh("1 0\n0 0\n")
        assert e.value.line == 2

    def test_truncated_file(self):
        with pytest.raises(ParseError):
            read_tmesh("4 1\n0 0 0\n1 0 0\n")

    def test_trailing_garbage(self):
        with pytest.raises(ParseError) as e:
            read_tmesh("1 0\n0 0 0\nextra\n")
        assert e.value.line == 2 or e.value.line == 3

    def test_index_out_of_range(self):
        text = "4 1\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n0 1 2 9\n"
        with pytest.raises(IndexOutOfRange):
            read_tmesh(text)

    def test_empty_input(self):
        with pytest.raises(ParseError):
            read_tmesh("")


class TestVtk:
    def test_single_tet_golden(self, tmp_path):
        path = tmp_path / "one.vtk"
        write_vtk_legacy(SINGLE, path)
        expected = (
            "# vtk DataFile Version 2.0\n"
            "wftet tetrahedral mesh\n"
            "ASCII\n"
            "DATASET UNSTRUCTURED_GRID\n"
            "POINTS 4 double\n"
            "0.0 0.0 0.0\n"
            "1.0 0.0 0.0\n"
            "0.0 1.0 0.0\n"
            "0.0 0.0 1.0\n"
            "CELLS 1 5\n"
            "4 0 1 2 3\n"
            "CELL_TYPES 1\n"
            "10\n"
        )
        assert path.read_text() == expected

    def test_empty_mesh(self, tmp_path):
        path = tmp_path / "empty.vtk"
        write_vtk_legacy(TetMesh(np.empty((0, 3)), np.empty((0, 4), int)), path)
        text = path.read_text()
        assert "POINTS 0 double" in text
        assert "CELLS 0 0" in text
        assert "CELL_TYPES 0" in text

    def test_refined_mesh_counts(self, tmp_path):
        from wftet import gen_regular_tet, worsey_farin

        out = worsey_farin(gen_regular_tet())
        path = tmp_path / "wf.vtk"
        write_vtk_legacy(out.refined, path)
        text = path.read_text()
        assert "POINTS 9 double" in text
        assert "CELLS 12 60" in text
        assert text.count("\n10") == 12


class TestMshReader:
    MINIMAL = (
        "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"
        "$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 0 1\n$EndNodes\n"
        "$Elements\n1\n1 4 2 0 1 1 2 3 4\n$EndElements\n"
    )

    def test_minimal_tet(self):
        from wftet import read_msh_ascii

        m = read_msh_ascii(self.MINIMAL)
        assert m.num_tets == 1 and m.num_vertices == 4

    def test_sparse_node_ids_densified(self):
        from wftet import read_msh_ascii

        text = self.MINIMAL.replace("2 1 0 0", "20 1 0 0").replace(
            "1 2 3 4\n", "1 20 3 4\n"
        )
        m = read_msh_ascii(text)
        assert m.num_vertices == 4
        assert sorted(m.tets[0].tolist()) == [0, 1, 2, 3]

    def test_triangles_only_warns(self):
        from wftet import read_msh_ascii

        text = self.MINIMAL.replace("1 4 2 0 1 1 2 3 4", "1 2 2 0 1 1 2 3")
        with pytest.warns(UserWarning):
            m = read_msh_ascii(text)
        assert m.num_tets == 0

    def test_binary_rejected(self):
        from wftet import UnsupportedVersion, read_msh_ascii

        with pytest.raises(UnsupportedVersion):
            read_msh_ascii(self.MINIMAL.replace("2.2 0 8", "2.2 1 8"))

    def test_version4_rejected(self):
        from wftet import UnsupportedVersion, read_msh_ascii

        with pytest.raises(UnsupportedVersion):
            read_msh_ascii(self.MINIMAL.replace("2.2 0 8", "4.1 0 8"))
