import numpy as np
import pytest

from ipbm.problems import (OPERATORS, SOLUTIONS, classify_ellipticity,
                           ellipticity_eigenvalues, make_preset)


class TestPresets:
    def test_unknown_ids(self):
        with pytest.raises(KeyError):
            make_preset("nope", "laplace")
        with pytest.raises(KeyError):
            make_preset("sin5", "nope")

    def test_mono123_laplace_value(self):
        # hand differentiation: lap(x y^2 z^3) = 2 x z^3 + 6 x y^2 z
        bvp = make_preset("mono123", "laplace")
        assert abs(bvp.f(np.array([[1.0, 1.0, 1.0]]))[0] - 8.0) < 1e-14

    def test_sin5_laplace_is_minus75u(self):
        bvp = make_preset("sin5", "laplace")
        pts = np.random.default_rng(0).random((50, 3))
        assert np.abs(bvp.f(pts) + 75.0 * bvp.u(pts)).max() < 1e-12

    def test_abs3_laplace(self):
        bvp = make_preset("abs3", "laplace")
        pts = np.random.default_rng(1).random((50, 3))
        t = np.abs(pts[:, 0] + pts[:, 1] - pts[:, 2])
        assert np.abs(bvp.f(pts) - 18.0 * t).max() < 1e-13

    def test_boundary_data_is_solution(self):
        for sid in SOLUTIONS:
            bvp = make_preset(sid, "laplace")
            pts = np.random.default_rng(2).random((20, 3))
            assert np.array_equal(bvp.g(pts), bvp.u(pts))

    @pytest.mark.parametrize("sid", sorted(SOLUTIONS))
    @pytest.mark.parametrize("oid", sorted(OPERATORS))
    def test_manufactured_consistency(self, sid, oid):
        # f from stored Hessians vs second-order finite differences of u
        bvp = make_preset(sid, oid)
        rng = np.random.default_rng(3)
        pts = rng.uniform(0.05, 0.95, (100, 3))
        if sid == "abs3":
            keep = np.abs(pts[:, 0] + pts[:, 1] - pts[:, 2]) > 1e-3
            pts = pts[keep]
        h = 1e-5
        shifts = np.eye(3) * h
        hess_fd = np.empty((len(pts), 6))
        for col, axis in enumerate(range(3)):
            hess_fd[:, col] = (bvp.u(pts + shifts[axis]) - 2 * bvp.u(pts)
                               + bvp.u(pts - shifts[axis])) / h ** 2
        for col, (i, j) in enumerate([(0, 1), (0, 2), (1, 2)], start=3):
            hess_fd[:, col] = (bvp.u(pts + shifts[i] + shifts[j])
                               - bvp.u(pts + shifts[i] - shifts[j])
                               - bvp.u(pts - shifts[i] + shifts[j])
                               + bvp.u(pts - shifts[i] - shifts[j])) \
                / (4 * h * h)
        a = bvp.coefficients(pts)
        f_fd = (a[:, :3] * hess_fd[:, :3]).sum(axis=1) \
            + 2 * (a[:, 3:] * hess_fd[:, 3:]).sum(axis=1)
        f = bvp.f(pts)
        if sid == "abs3":
            # kink-adjacent stencils are less accurate
            keep = np.abs(pts[:, 0] + pts[:, 1] - pts[:, 2]) > 10 * h
            f, f_fd = f[keep], f_fd[keep]
        scale = max(np.abs(f).max(), 1.0)  # f crosses zero pointwise
        assert np.abs(f - f_fd).max() / scale < 1e-5

    def test_gradient_consistency(self):
        for sid in SOLUTIONS:
            bvp = make_preset(sid, "laplace")
            rng = np.random.default_rng(4)
            pts = rng.uniform(0.1, 0.9, (50, 3))
            if sid == "abs3":
                pts = pts[np.abs(pts[:, 0] + pts[:, 1] - pts[:, 2]) > 1e-2]
            h = 1e-6
            for axis in range(3):
                shift = np.zeros(3)
                shift[axis] = h
                fd = (bvp.u(pts + shift) - bvp.u(pts - shift)) / (2 * h)
                grad = bvp.grad(pts)[:, axis]
                assert np.abs(grad - fd).max() < 1e-6 * max(
                    1.0, np.abs(fd).max()), sid


class TestEllipticity:
    def test_identity_coefficients(self):
        eig = ellipticity_eigenvalues([1, 1, 1, 0, 0, 0])
        assert np.allclose(eig, [1, 1, 1], atol=1e-14)

    def test_all_ones(self):
        eig = ellipticity_eigenvalues([1, 1, 1, 1, 1, 1])
        assert np.allclose(eig, [0, 0, 3], atol=1e-12)

    def test_large_cross_terms(self):
        eig = ellipticity_eigenvalues([1, 1, 1, 10, 10, 10])
        assert np.allclose(eig, [-9, -9, 21], atol=1e-10)

    def test_trace_identity(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a = rng.normal(size=6)
            eig = ellipticity_eigenvalues(a)
            assert abs(eig.sum() - (a[0] + a[1] + a[2])) < 1e-12
            assert eig[0] <= eig[1] <= eig[2]

    @pytest.mark.parametrize("oid,label", [
        ("laplace", "elliptic"),
        ("var-diag", "elliptic"),
        ("var-full", "elliptic"),
        ("weak", "weakly-elliptic"),
        ("nonelliptic", "non-elliptic"),
    ])
    def test_operator_classification(self, oid, label):
        bvp = make_preset("sin5", oid)
        pts = np.random.default_rng(6).random((200, 3))
        report = classify_ellipticity(bvp, pts)
        assert report.classification == label
        assert report.eigenvalues.shape == (200, 3)
