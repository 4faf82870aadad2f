"""Boxes, vertex lists, translation, and the convex-form maximum."""

import numpy as np
import pytest

from reachmax import Box, VRep, gram_inverse, mu, translate, vertices
from reachmax.errors import DimensionTooLarge, NotConvexForm

from support import osc_eigvec_basis


class TestVertices:
    def test_unit_box_corners_in_order(self):
        V = vertices(Box([-1.0, -1.0], [1.0, 1.0]))
        np.testing.assert_array_equal(V, [[-1, -1], [-1, 1], [1, -1], [1, 1]])

    def test_interval(self):
        np.testing.assert_array_equal(vertices(Box([0.25], [0.5])), [[0.25], [0.5]])

    def test_vrep_passthrough(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        np.testing.assert_array_equal(vertices(VRep(pts)), pts)

    def test_vrep_dedup_keeps_first_occurrence_order(self):
        pts = np.array([[1.0, 2.0], [0.0, 0.0], [1.0, 2.0 + 1e-13], [3.0, 3.0]])
        np.testing.assert_array_equal(vertices(VRep(pts)), [[1.0, 2.0], [0.0, 0.0], [3.0, 3.0]])

    def test_corner_count(self):
        for d in (1, 2, 3, 4, 5):
            box = Box(-np.ones(d), np.ones(d))
            assert vertices(box).shape == (2**d, d)

    def test_cap_exceeded(self):
        with pytest.raises(DimensionTooLarge):
            vertices(Box(-np.ones(5), np.ones(5)), cap=16)

    def test_empty_box_rejected_at_construction(self):
        with pytest.raises(ValueError):
            Box([1.0], [0.0])


class TestTranslate:
    def test_box_shift(self):
        shifted = translate(Box([-1.0, -1.0], [1.0, 1.0]), [1.0, -1.0])
        np.testing.assert_array_equal(shifted.lower, [-2.0, 0.0])
        np.testing.assert_array_equal(shifted.upper, [0.0, 2.0])

    def test_vrep_shift(self):
        shifted = translate(VRep([[1.0, 1.0]]), [1.0, 1.0])
        np.testing.assert_array_equal(shifted.points, [[0.0, 0.0]])

    def test_zero_shift_is_identity(self):
        box = Box([-1.0, 2.0], [0.5, 3.0])
        same = translate(box, np.zeros(2))
        np.testing.assert_array_equal(same.lower, box.lower)
        np.testing.assert_array_equal(same.upper, box.upper)

    def test_roundtrip_exact_on_integer_data(self):
        # two float subtractions cancel exactly when the inputs are integers
        rng = np.random.default_rng(5)
        for _ in range(50):
            d = int(rng.integers(1, 6))
            lo = rng.integers(-50, 0, size=d).astype(float)
            up = lo + rng.integers(0, 50, size=d)
            t = rng.integers(-100, 100, size=d).astype(float)
            box = Box(lo, up)
            back = translate(translate(box, t), -t)
            np.testing.assert_array_equal(back.lower, box.lower)
            np.testing.assert_array_equal(back.upper, box.upper)
            pts = rng.integers(-100, 100, size=(4, d)).astype(float)
            vback = translate(translate(VRep(pts), t), -t)
            np.testing.assert_array_equal(vback.points, pts)


class TestMu:
    def test_oscillator_gram_form(self):
        B = gram_inverse(osc_eigvec_basis())
        assert mu(B, Box([-1.0, -1.0], [1.0, 1.0])) == pytest.approx(2.0, abs=1e-12)

    def test_identity_form_on_unit_box(self):
        assert mu(np.eye(2), Box([-1.0, -1.0], [1.0, 1.0])) == pytest.approx(2.0, abs=0.0)

    def test_single_point(self):
        assert mu(np.eye(2), VRep([[3.0, 4.0]])) == pytest.approx(25.0, abs=0.0)

    def test_rejects_nonconvex_form(self):
        with pytest.raises(NotConvexForm):
            mu(np.diag([1.0, -1.0]), Box([-1.0, -1.0], [1.0, 1.0]))

    def test_matches_grid_search_on_random_boxes(self):
        rng = np.random.default_rng(17)
        for _ in range(30):
            d = int(rng.integers(1, 7))
            M = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            B = M @ M.conj().T  # Hermitian PSD
            center = rng.uniform(-1.0, 1.0, size=d)
            radius = rng.uniform(0.1, 1.0, size=d)
            box = Box(center - radius, center + radius)
            got = mu(B, box)
            R = np.real(B)
            axes = [np.linspace(lo, up, 5) for lo, up in zip(box.lower, box.upper)]
            mesh = np.meshgrid(*axes, indexing="ij")
            pts = np.stack([m.ravel() for m in mesh], axis=1)
            ref = float(np.max(np.einsum("ij,jk,ik->i", pts, R, pts)))
            assert got == pytest.approx(ref, rel=1e-6)
