import numpy as np
import pytest
from math import comb

from ipbm.tet_spline import (bernstein_index_set, bernstein_values,
                             build_s0d_space, build_smoothness_matrix,
                             build_type5_partition, domain_points,
                             eval_bernstein, eval_s0d_batch, interpolate_s0d,
                             s0d_design_matrix)

UNIT_BOX = np.array([[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]])


def tet_volume(verts):
    return abs(np.linalg.det(verts[1:] - verts[0])) / 6.0


class TestPartition:
    def test_single_box_five_split(self):
        part = build_type5_partition(UNIT_BOX, 2)
        assert part.n_tets == 5
        vols = np.sort(part.volumes)
        # determinant oracle: four corner tets of volume 1/6, center 1/3
        assert np.allclose(vols[:4], 1.0 / 6.0, atol=1e-14)
        assert abs(vols[4] - 1.0 / 3.0) < 1e-14
        assert abs(part.volumes.sum() - 1.0) < 1e-14

    def test_tet_count_formula(self):
        part = build_type5_partition(UNIT_BOX, 5)
        assert part.n_tets == 5 * 4 ** 3 == 320

    @pytest.mark.parametrize("m", [2, 3, 4, 6])
    def test_conformity_census(self, m):
        part = build_type5_partition(UNIT_BOX, m)
        counts = [len(v) for v in part.face_table().values()]
        assert set(counts) <= {1, 2}
        n_boundary = sum(1 for c in counts if c == 1)
        # each boundary subbox face exposes two triangles
        assert n_boundary == 6 * (m - 1) ** 2 * 2

    @pytest.mark.parametrize("m", [2, 3, 5, 7])
    def test_volume_conservation(self, m):
        bbox = np.array([[-0.5, 0.0, 2.0], [0.5, 0.7, 2.3]])
        part = build_type5_partition(bbox, m)
        exact = 1.0 * 0.7 * 0.3
        assert abs(part.volumes.sum() - exact) < 1e-12 * exact
        assert part.volumes.min() > 0.0

    def test_too_few_grid_lines(self):
        with pytest.raises(ValueError):
            build_type5_partition(UNIT_BOX, 1)

    def test_locate_is_deterministic_and_correct(self):
        part = build_type5_partition(UNIT_BOX, 4)
        rng = np.random.default_rng(0)
        pts = rng.random((500, 3))
        tets, bary = part.locate(pts)
        tets2, _ = part.locate(pts)
        assert np.array_equal(tets, tets2)
        assert bary.min() > -1e-12
        recon = np.einsum("ni,nij->nj", bary,
                          part.vertices[part.tets[tets]])
        assert np.abs(recon - pts).max() < 1e-12


class TestDomainPoints:
    def test_degree_one_is_vertices(self):
        part = build_type5_partition(UNIT_BOX, 2)
        verts = part.tet_vertices(0)
        pts = domain_points(verts, 1)
        assert sorted(map(tuple, pts)) == sorted(map(tuple, verts))

    @pytest.mark.parametrize("d,count", [(2, 10), (3, 20), (5, 56)])
    def test_counts(self, d, count):
        verts = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1.0]])
        assert len(domain_points(verts, d)) == count == comb(d + 3, 3)

    def test_points_inside_closed_tet(self):
        verts = np.array([[0, 0, 0], [2, 0, 0], [0, 1, 0], [0, 0, 3.0]])
        pts = domain_points(verts, 4)
        mat = np.vstack([verts.T, np.ones(4)])
        bary = np.linalg.solve(mat, np.vstack([pts.T, np.ones(len(pts))]))
        assert bary.min() > -1e-14


class TestBernstein:
    def test_vertex_value(self):
        verts = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1.0]])
        vals = eval_bernstein(verts, 4, verts[0])
        idx = bernstein_index_set(4).index((4, 0, 0, 0))
        assert abs(vals[idx] - 1.0) < 1e-15
        assert np.abs(np.delete(vals, idx)).max() < 1e-15

    def test_partition_of_unity(self):
        rng = np.random.default_rng(1)
        bary = rng.dirichlet([1, 1, 1, 1], 1000)
        vals = bernstein_values(5, bary)
        assert np.abs(vals.sum(axis=1) - 1.0).max() < 1e-13

    def test_derivatives_against_finite_differences(self):
        part = build_type5_partition(UNIT_BOX, 3)
        space = build_s0d_space(part, 4)
        rng = np.random.default_rng(2)
        c = rng.random(space.dim)
        pts = rng.uniform(0.3, 0.45, (20, 3))  # interior of one subbox
        h = 1e-5
        shifts = np.eye(3) * h
        for deriv in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            axis = deriv.index(1)
            exact = eval_s0d_batch(space, c, pts, deriv)
            fd = (eval_s0d_batch(space, c, pts + shifts[axis])
                  - eval_s0d_batch(space, c, pts - shifts[axis])) / (2 * h)
            scale = np.maximum(np.abs(fd), 1.0)
            assert np.abs((exact - fd) / scale).max() < 1e-5
        for deriv in ((2, 0, 0), (0, 2, 0), (0, 0, 2)):
            axis = deriv.index(2)
            exact = eval_s0d_batch(space, c, pts, deriv)
            fd = (eval_s0d_batch(space, c, pts + shifts[axis])
                  - 2 * eval_s0d_batch(space, c, pts)
                  + eval_s0d_batch(space, c, pts - shifts[axis])) / h ** 2
            scale = np.maximum(np.abs(fd), 1.0)
            assert np.abs((exact - fd) / scale).max() < 1e-4
        exact = eval_s0d_batch(space, c, pts, (1, 1, 0))
        fd = (eval_s0d_batch(space, c, pts + shifts[0] + shifts[1])
              - eval_s0d_batch(space, c, pts + shifts[0] - shifts[1])
              - eval_s0d_batch(space, c, pts - shifts[0] + shifts[1])
              + eval_s0d_batch(space, c, pts - shifts[0] - shifts[1])
              ) / (4 * h * h)
        assert np.abs((exact - fd) / np.maximum(np.abs(fd), 1.0)).max() < 1e-4

    def test_point_outside_rejected(self):
        verts = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1.0]])
        with pytest.raises(ValueError):
            eval_bernstein(verts, 3, [0.5, 0.5, 0.5])

    def test_degenerate_tet_rejected(self):
        verts = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0.0]])
        with pytest.raises(ValueError):
            eval_bernstein(verts, 2, [0.25, 0.25, 0.0])


class TestS0dSpace:
    def test_single_tet_dimension(self):
        # one subbox still has 5 tets; a truly single tet comes from the
        # local index count
        assert len(bernstein_index_set(2)) == 10

    @pytest.mark.parametrize("d,dim", [(5, 7981), (4, 4273)])
    def test_m5_dimensions(self, d, dim):
        part = build_type5_partition(UNIT_BOX, 5)
        assert build_s0d_space(part, d).dim == dim

    def test_dimension_matches_independent_hash(self):
        part = build_type5_partition(UNIT_BOX, 4)
        space = build_s0d_space(part, 3)
        seen = set()
        idx = np.array(bernstein_index_set(3), dtype=float) / 3
        for t in range(part.n_tets):
            for p in idx @ part.tet_vertices(t):
                seen.add("%.8f_%.8f_%.8f" % tuple(p))
        assert space.dim == len(seen)

    def test_shared_face_dofs_identical(self):
        part = build_type5_partition(UNIT_BOX, 3)
        space = build_s0d_space(part, 3)
        interior = part.interior_faces()
        key = sorted(interior)[0]
        (ta, _), (tb, _) = interior[key]
        dofs_a = set(space.tet_dofs[ta])
        dofs_b = set(space.tet_dofs[tb])
        # a shared face of degree 3 carries 10 shared coefficients
        assert len(dofs_a & dofs_b) == 10

    def test_continuity_across_faces(self):
        part = build_type5_partition(UNIT_BOX, 3)
        space = build_s0d_space(part, 4)
        rng = np.random.default_rng(3)
        c = rng.random(space.dim)
        interior = part.interior_faces()
        for key in sorted(interior)[:5]:
            (ta, _), (tb, _) = interior[key]
            w = part.vertices[list(key)]
            lam = rng.dirichlet([1, 1, 1], 100)
            fpts = lam @ w
            va = bernstein_values(4, part.barycentric(ta, fpts)) \
                @ c[space.tet_dofs[ta]]
            vb = bernstein_values(4, part.barycentric(tb, fpts)) \
                @ c[space.tet_dofs[tb]]
            assert np.abs(va - vb).max() < 1e-12

    def test_interpolation_reproduces_polynomial(self):
        part = build_type5_partition(UNIT_BOX, 3)
        space = build_s0d_space(part, 4)

        def poly(p):
            return (p[:, 0] ** 2 * p[:, 1] * p[:, 2]
                    - 3 * p[:, 0] * p[:, 2] ** 3 + p[:, 1] ** 4 + 1.5)

        c = interpolate_s0d(space, poly)
        pts = np.random.default_rng(4).random((300, 3))
        assert np.abs(eval_s0d_batch(space, c, pts) - poly(pts)).max() < 1e-12


class TestSmoothnessMatrix:
    def test_row_count_and_sparsity(self):
        part = build_type5_partition(UNIT_BOX, 3)
        space = build_s0d_space(part, 4)
        E = build_smoothness_matrix(space)
        assert E.shape == (len(part.interior_faces()) * comb(5, 2),
                           space.dim)
        assert np.diff(E.indptr).max() <= 5

    @pytest.mark.parametrize("d", [1, 2, 4])
    def test_linear_polynomial_in_kernel(self, d):
        part = build_type5_partition(UNIT_BOX, 3)
        space = build_s0d_space(part, d)
        E = build_smoothness_matrix(space)
        c = interpolate_s0d(space, lambda p: p[:, 0] + 2 * p[:, 1]
                            + 3 * p[:, 2])
        assert np.abs(E @ c).max() < 1e-12

    @pytest.mark.parametrize("d", [3, 5])
    def test_full_degree_monomial_in_kernel(self, d):
        part = build_type5_partition(UNIT_BOX, 3)
        space = build_s0d_space(part, d)
        E = build_smoothness_matrix(space)
        c = interpolate_s0d(space, lambda p: p[:, 0] ** d)
        assert np.abs(E @ c).max() < 1e-10

    def test_perturbation_leaves_kernel(self):
        part = build_type5_partition(UNIT_BOX, 3)
        space = build_s0d_space(part, 3)
        E = build_smoothness_matrix(space)
        c = interpolate_s0d(space, lambda p: p[:, 0] ** 2)
        row = E.getrow(0)
        dof = row.indices[np.argmax(np.abs(row.data))]
        c[dof] += 1.0
        min_entry = np.abs(E.data[E.data != 0]).min()
        assert np.abs(E @ c).max() >= min_entry > 0.0

    def test_c1_certificate(self):
        # coefficients with E c = 0 have matching cross-face derivatives
        part = build_type5_partition(UNIT_BOX, 3)
        space = build_s0d_space(part, 4)
        E = build_smoothness_matrix(space)

        def poly(p):
            return p[:, 0] ** 3 * p[:, 1] - p[:, 2] ** 4 + p[:, 0] * p[:, 1]

        c = interpolate_s0d(space, poly)
        assert np.abs(E @ c).max() < 1e-12
        rng = np.random.default_rng(5)
        interior = part.interior_faces()
        from ipbm.tet_spline import bernstein_bary_derivs
        for key in sorted(interior)[:4]:
            (ta, _), (tb, _) = interior[key]
            w = part.vertices[list(key)]
            nrm = np.cross(w[1] - w[0], w[2] - w[0])
            nrm /= np.linalg.norm(nrm)
            fpts = rng.dirichlet([1, 1, 1], 50) @ w
            ga = part.barycentric_gradients(ta) @ nrm
            gb = part.barycentric_gradients(tb) @ nrm
            da = bernstein_bary_derivs(4, part.barycentric(ta, fpts))
            db = bernstein_bary_derivs(4, part.barycentric(tb, fpts))
            va = np.einsum("r,rnl->nl", ga, da) @ c[space.tet_dofs[ta]]
            vb = np.einsum("r,rnl->nl", gb, db) @ c[space.tet_dofs[tb]]
            assert np.abs(va - vb).max() < 1e-8


class TestDesignMatrix:
    def test_rows_partition_of_unity(self):
        part = build_type5_partition(UNIT_BOX, 3)
        space = build_s0d_space(part, 3)
        pts = np.random.default_rng(6).random((100, 3))
        mat = s0d_design_matrix(space, pts)
        assert np.abs(np.asarray(mat.sum(axis=1)).ravel() - 1.0).max() < 1e-12

    def test_coefficient_length_checked(self):
        part = build_type5_partition(UNIT_BOX, 2)
        space = build_s0d_space(part, 2)
        with pytest.raises(ValueError):
            eval_s0d_batch(space, np.ones(space.dim + 1), [[0.5, 0.5, 0.5]])
