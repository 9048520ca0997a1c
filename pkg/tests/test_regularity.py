"""Shape constants, theoretical bounds, and the verification operations."""
import json
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings

import wftet
from wftet import (
    InvalidC0,
    TetMesh,
    gen_cube_kuhn,
    gen_regular_tet,
    gen_sliver,
    gen_two_tet_mirror,
    gen_two_tet_skew,
    perturb,
    refine_k,
    shape_constant,
    sweep_sharpness,
    sweep_to_csv,
    tet_geometry,
    theoretical_constants,
    verify_lemma_cos,
    verify_lemma_dist_face,
    verify_mesh,
    verify_prop21,
    verify_prop22,
    verify_prop32_lemma33,
    verify_theorem31,
)
from wftet.regularity import CHECK_IDS

from conftest import random_rotation, random_valid_tets, seeded_tet

SQRT6 = math.sqrt(6)


def mp_constants(c0_expr):
    """>= 80-bit oracle for the constants, via 50-digit mpmath."""
    import mpmath as mp

    mp.mp.dps = 50
    c0 = mp.mpf(c0_expr) if not isinstance(c0_expr, str) else mp.sqrt(6)
    root = mp.sqrt(1 - c0**-2)
    frak = mp.sqrt(-1 + 2 / (1 + root)) / (2 * c0)
    c2 = min(frak, 1 / (3 * c0))
    c1 = 2 * mp.pi * c0**3 / c2
    return float(frak), float(c2), float(c1)


class TestTheoreticalConstants:
    def test_at_regular_tet_c0_vs_oracle(self):
        frak, c2, c1 = mp_constants("sqrt6")
        tc = theoretical_constants(SQRT6)
        assert tc.frak_c2 == pytest.approx(frak, rel=1e-12)
        assert tc.c2 == pytest.approx(c2, rel=1e-12)
        assert tc.c1 == pytest.approx(c1, rel=1e-10)
        assert tc.c1 == pytest.approx(2.1197e3, rel=1e-4)
        assert tc.c2 == tc.frak_c2  # frak_c2 < (3 c0)^-1 here

    def test_at_two(self):
        with pytest.warns(UserWarning):
            tc = theoretical_constants(2.0)
        expected = 0.25 * math.sqrt(-1 + 2 / (1 + math.sqrt(3) / 2))
        assert tc.frak_c2 == pytest.approx(expected, rel=1e-13)
        assert tc.frak_c2 == pytest.approx(0.0670, abs=5e-5)

    def test_invalid_c0(self):
        for bad in (1.0, 0.5, 0.0, -2.0):
            with pytest.raises(InvalidC0):
                theoretical_constants(bad)

    def test_no_warning_at_regular_minimum(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            theoretical_constants(SQRT6)
            theoretical_constants(SQRT6 * (1 - 1e-14))

    def test_asymptote_eight_pi(self):
        tc = theoretical_constants(1e6)
        assert tc.c1 / 1e30 == pytest.approx(8 * math.pi, rel=0.01)

    def test_c1_strictly_increasing(self):
        grid = np.geomspace(2.5, 1e4, 200)
        vals = [theoretical_constants(c).c1 for c in grid]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_all_positive_finite(self):
        for c0 in (1.0001, 2.45, 10.0, 1e8):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                tc = theoretical_constants(c0)
            assert 0 < tc.frak_c2 < math.inf
            assert 0 < tc.c2 <= tc.frak_c2
            assert 0 < tc.c1 < math.inf


class TestShapeConstant:
    def test_regular(self):
        assert shape_constant(gen_regular_tet()) == pytest.approx(SQRT6, abs=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_cube_kuhn(self, n):
        expected = math.sqrt(3) * (1 + math.sqrt(2))
        assert shape_constant(gen_cube_kuhn(n)) == pytest.approx(expected, abs=1e-12)

    def test_disjoint_union_takes_max(self):
        reg = gen_regular_tet()
        kuhn = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [1, 1, 1]]) + 10.0
        verts = np.vstack([reg.vertices, kuhn])
        tets = np.vstack([reg.tets, [[4, 5, 6, 7]]])
        m = TetMesh(verts, tets)
        expected = math.sqrt(3) * (1 + math.sqrt(2))
        assert shape_constant(m) == pytest.approx(expected, abs=1e-12)

    def test_empty_raises(self):
        with pytest.raises(ValueError, match="no tetrahedra"):
            shape_constant(TetMesh(np.empty((0, 3)), np.empty((0, 4), int)))


class TestPerTetChecks:
    def test_prop21_examples(self, regular_tet_geometry, kuhn_tet_geometry):
        assert verify_prop21(regular_tet_geometry) < 1e-12
        assert verify_prop21(kuhn_tet_geometry) < 1e-12

    def test_prop22_regular_margin_is_one(self, regular_tet_geometry):
        # the vertex-to-opposite-plane distance of a regular tet is exactly
        # twice the insphere diameter
        assert verify_prop22(regular_tet_geometry) == pytest.approx(1.0, abs=1e-12)

    def test_prop22_kuhn_positive(self, kuhn_tet_geometry):
        assert verify_prop22(kuhn_tet_geometry) > 0

    def test_prop22_sliver_positive(self):
        g = tet_geometry(*gen_sliver(1e-3).tet_vertex_array()[0])
        assert verify_prop22(g) > 0

    def test_prop22_with_interior_samples(self, regular_tet_geometry):
        assert verify_prop22(regular_tet_geometry, interior_samples=200, seed=1) > 0

    def test_lemma_dist_face_equality_on_regular(self, regular_tet_geometry):
        # both sides evaluate to sqrt(3)/6 for the unit regular tet
        assert abs(verify_lemma_dist_face(regular_tet_geometry)) < 1e-10

    def test_lemma_dist_face_rhs_value(self, regular_tet_geometry):
        from wftet.geometry import rho_over_two_cot_half

        g = regular_tet_geometry
        rhs = rho_over_two_cot_half(g.rho, np.cos(g.dihedral_angles))
        assert np.allclose(rhs, math.sqrt(3) / 6, atol=1e-12)

    def test_lemma_dist_face_nonnegative(self, kuhn_tet_geometry):
        assert verify_lemma_dist_face(kuhn_tet_geometry) >= -1e-12
        g = tet_geometry(*gen_sliver(0.05).tet_vertex_array()[0])
        assert verify_lemma_dist_face(g) >= -1e-12

    def test_lemma_cos_regular_value(self, regular_tet_geometry):
        expected = math.sqrt(8) / 3 - 1 / SQRT6
        assert verify_lemma_cos(regular_tet_geometry) == pytest.approx(
            expected, rel=1e-9
        )

    def test_lemma_cos_unconditional(self, kuhn_tet_geometry):
        assert verify_lemma_cos(kuhn_tet_geometry) >= -1e-12
        g = tet_geometry(*gen_sliver(0.01).tet_vertex_array()[0])
        assert verify_lemma_cos(g) >= -1e-12

    @given(seeded_tet())
    @settings(max_examples=80, deadline=None)
    def test_unconditional_inequalities_random(self, verts):
        g = tet_geometry(*verts)
        assert verify_prop21(g) < 1e-10
        assert verify_prop22(g) > 0
        assert verify_lemma_dist_face(g) >= -1e-12
        assert verify_lemma_cos(g) >= -1e-12

    @given(seeded_tet())
    @settings(max_examples=40, deadline=None)
    def test_cos_bounded_by_per_tet_ratio(self, verts):
        g = tet_geometry(*verts)
        bound = math.sqrt(1 - (g.rho / g.h) ** 2)
        assert np.abs(np.cos(g.dihedral_angles)).max() <= bound + 1e-12

    @given(seeded_tet())
    @settings(max_examples=30, deadline=None)
    def test_margins_invariant_under_similarity(self, verts):
        g1 = tet_geometry(*verts)
        rot = random_rotation(17)
        moved = verts @ rot.T * 3.7 + np.array([4.0, -2.0, 0.5])
        g2 = tet_geometry(*moved)
        assert verify_prop22(g2) == pytest.approx(verify_prop22(g1), abs=1e-9)
        assert verify_lemma_dist_face(g2) == pytest.approx(
            verify_lemma_dist_face(g1), abs=1e-9
        )
        assert verify_lemma_cos(g2) == pytest.approx(verify_lemma_cos(g1), abs=1e-9)


class TestFaceChecks:
    def test_mirror_margins(self):
        r = verify_prop32_lemma33(gen_two_tet_mirror())
        assert r.prop32_margin >= -1e-12
        assert r.lemma33_margin > 0
        assert r.num_interior == 1 and r.num_boundary == 6

    def test_single_regular_tet_boundary_margin(self):
        r = verify_prop32_lemma33(gen_regular_tet())
        assert r.prop32_margin is None  # no interior faces
        c2 = theoretical_constants(SQRT6).c2
        expected = math.sqrt(3) / 6 - c2  # normalized by min h = 1
        assert r.lemma33_margin == pytest.approx(expected, abs=1e-9)
        assert r.lemma33_margin == pytest.approx(0.245, abs=5e-4)
        assert r.min_split_dist == pytest.approx(math.sqrt(3) / 6, rel=1e-12)

    def test_cube_all_faces_pass(self):
        r = verify_prop32_lemma33(gen_cube_kuhn(3))
        assert r.prop32_margin >= -1e-10
        assert r.lemma33_margin >= -1e-10

    def test_skew_pass(self):
        r = verify_prop32_lemma33(gen_two_tet_skew(0.2))
        assert r.prop32_margin >= -1e-10
        assert r.lemma33_margin > 0


class TestTheorem31:
    def test_regular_tet_observed_and_bound(self):
        r = verify_theorem31(gen_regular_tet())
        # all 12 children are congruent; the observed ratio is 5 + sqrt(6)
        assert r.observed == pytest.approx(5 + SQRT6, rel=1e-12)
        assert r.bound == pytest.approx(2119.6963745297152, rel=1e-10)
        assert r.observed <= 2119.7
        assert r.slack > 10
        assert r.passed

    def test_regular_tet_proof_inequalities(self):
        r = verify_theorem31(gen_regular_tet())
        assert r.volK_margin >= -1e-10
        assert r.areaF_margin >= -1e-10

    @pytest.mark.parametrize(
        "mesh_factory",
        [
            lambda: gen_cube_kuhn(2),
            lambda: perturb(gen_cube_kuhn(2), 0.3, seed=7),
            gen_two_tet_mirror,
            lambda: gen_two_tet_skew(0.1),
            lambda: gen_sliver(0.1),
        ],
    )
    def test_unconditional_meshes(self, mesh_factory):
        r = verify_theorem31(mesh_factory())
        assert r.passed
        assert r.volK_margin >= -1e-10
        assert r.areaF_margin >= -1e-10

    def test_holds_on_refined_mesh_with_its_own_c0(self):
        refined = refine_k(gen_cube_kuhn(1), 1).refined
        r = verify_theorem31(refined)
        assert r.passed
        assert r.volK_margin >= -1e-10 and r.areaF_margin >= -1e-10


class TestVerifyMesh:
    def test_cube_all_nine_pass(self):
        report = verify_mesh(gen_cube_kuhn(2))
        assert report.all_passed
        assert tuple(c.check for c in report.checks) == CHECK_IDS
        assert len(report.checks) == 9

    def test_report_fields(self):
        report = verify_mesh(gen_two_tet_mirror())
        obj = json.loads(report.to_json())
        assert obj["mesh"]["c0"] == pytest.approx(SQRT6, rel=1e-8)
        assert set(obj["refined"]) == {"observed_wf_ratio", "c1_bound", "slack"}
        assert obj["all_passed"] is True
        csv = report.to_csv()
        assert csv.startswith("field,value\n")
        for field in ("c0,", "observed_wf_ratio,", "c1_bound,", "slack,"):
            assert f"\n{field}" in csv

    def test_single_tet_prop32_vacuous(self):
        report = verify_mesh(gen_regular_tet())
        assert report["prop32"].passed
        assert report["prop32"].margin is None
        assert report.all_passed

    def test_tolerance_override(self):
        report = verify_mesh(gen_regular_tet(), tolerance=1e-6)
        assert all(c.tolerance == 1e-6 for c in report.checks)

    def test_margins_invariant_under_similarity(self):
        m = perturb(gen_cube_kuhn(2), 0.2, seed=4)
        rot = random_rotation(23)
        moved = TetMesh(m.vertices @ rot.T * 0.37 + np.array([1.0, 2.0, -3.0]), m.tets)
        r1 = verify_mesh(m)
        r2 = verify_mesh(moved)
        assert r2.c0 == pytest.approx(r1.c0, rel=1e-10)
        assert r2.observed_wf_ratio == pytest.approx(r1.observed_wf_ratio, rel=1e-9)
        for c1, c2 in zip(r1.checks, r2.checks):
            if c1.margin is not None and abs(c1.margin) > 1e-13:
                assert c2.margin == pytest.approx(c1.margin, abs=1e-9)

    def test_empty_mesh_raises(self):
        with pytest.raises(ValueError, match="no tetrahedra"):
            verify_mesh(TetMesh(np.empty((0, 3)), np.empty((0, 4), int)))

    def test_randomized_batch_margins(self):
        from wftet.geometry import tet_quantities
        from wftet.regularity import _margins_from_quantities

        verts = random_valid_tets(2000, seed=77)
        margins = _margins_from_quantities(tet_quantities(verts), verts)
        assert margins["prop21_dev"].max() < 1e-10
        assert margins["prop22"].min() > 0
        assert margins["lemma_dist_face"].min() >= -1e-10
        assert margins["lemma_cos"].min() >= -1e-10


class TestAnalyze:
    def test_regular_tet_stats(self):
        stats = wftet.analyze_mesh(gen_regular_tet())
        assert stats.c0 == pytest.approx(SQRT6, rel=1e-12)
        assert stats.dihedral_min == pytest.approx(math.acos(1 / 3), rel=1e-12)
        assert stats.dihedral_max == pytest.approx(math.acos(1 / 3), rel=1e-12)
        obj = json.loads(stats.to_json())
        assert obj["num_tets"] == 1

    def test_csv_shape(self):
        csv = wftet.analyze_mesh(gen_cube_kuhn(1)).to_csv()
        lines = csv.strip().split("\n")
        assert len(lines) == 2
        assert lines[0].split(",")[0] == "num_vertices"


class TestSweep:
    def test_sliver_sweep_monotone_and_bounded(self):
        records = sweep_sharpness("sliver", [0.5, 0.2, 0.1, 0.05])
        assert len(records) == 4
        c0s = [r.c0 for r in records]
        assert all(a < b for a, b in zip(c0s, c0s[1:]))
        assert all(r.observed <= r.c1 for r in records)
        assert all(r.slack > 1 for r in records)

    def test_degenerate_param_skipped_with_note(self):
        with pytest.warns(UserWarning, match="skipping"):
            records = sweep_sharpness("sliver", [0.5, 1e-16])
        assert len(records) == 1

    def test_slope_of_log_c1_vs_log_c0(self):
        # eps ~ sqrt(2)/c0 targets c0 in [10, 1000]
        eps_grid = math.sqrt(2) / np.geomspace(10, 1000, 12)
        records = sweep_sharpness("sliver", eps_grid)
        c0 = np.array([r.c0 for r in records])
        c1 = np.array([r.c1 for r in records])
        keep = (c0 >= 10) & (c0 <= 1000)
        assert keep.sum() >= 8
        slope = np.polyfit(np.log(c0[keep]), np.log(c1[keep]), 1)[0]
        assert slope == pytest.approx(5.0, abs=0.1)

    def test_csv_serialization(self):
        records = sweep_sharpness("sliver", [0.5, 0.1])
        csv = sweep_to_csv(records)
        lines = csv.strip().split("\n")
        assert lines[0] == "eps,c0,observed,c1,slack"
        assert len(lines) == 3
