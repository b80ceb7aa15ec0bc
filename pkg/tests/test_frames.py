"""Classical frame operations against closed forms and eigenvalue oracles."""

import math

import numpy as np
import pytest

from fusionframes.errors import LengthMismatch, NotAFrame
from fusionframes.frames import (
    Frame,
    analysis,
    canonical_dual,
    frame_bounds,
    frame_bounds_within,
    frame_operator,
    is_dual_frame,
    synthesis,
)
from fusionframes.linalg import frobenius_norm, orthonormalize

from conftest import random_matrix

S3 = math.sqrt(3.0)

# Unit-norm tight frames for the two coordinate planes of F^3, plus their
# union, whose frame operator is diagonal with entries (3/2, 3/2, 3).
PLANE_FRAME_1 = np.array([[0.0, 0.0, 1.0],
                          [0.0, S3 / 2.0, -0.5],
                          [0.0, -S3 / 2.0, -0.5]])
PLANE_FRAME_2 = np.array([[0.0, 0.0, 1.0],
                          [S3 / 2.0, 0.0, -0.5],
                          [-S3 / 2.0, 0.0, -0.5]])
UNION_FRAME = Frame(np.vstack([PLANE_FRAME_1, PLANE_FRAME_2]))


def random_frame(rng, d, m, complex_field=False):
    while True:
        f = Frame(random_matrix(rng, m, d, complex_field))
        if f.is_frame():
            return f


class TestOperators:
    def test_standard_basis(self):
        f = Frame(np.eye(3))
        np.testing.assert_allclose(frame_operator(f), np.eye(3), atol=1e-14)
        np.testing.assert_allclose(synthesis(f), np.eye(3))
        np.testing.assert_allclose(analysis(f), np.eye(3))

    def test_union_frame_operator_diagonal(self):
        np.testing.assert_allclose(frame_operator(UNION_FRAME),
                                   np.diag([1.5, 1.5, 3.0]), atol=1e-12)

    def test_random_operator_psd_and_rank(self, rng):
        f = Frame(random_matrix(rng, 5, 4, complex_field=True))
        op = frame_operator(f)
        np.testing.assert_allclose(op, op.conj().T, atol=1e-12)
        eigs = np.linalg.eigvalsh(op)
        assert np.all(eigs >= -1e-10)
        rank_op = np.sum(eigs > 1e-10 * eigs[-1])
        rank_synth = np.linalg.matrix_rank(synthesis(f), tol=1e-10)
        assert rank_op == rank_synth

    def test_synthesis_not_conjugated(self):
        f = Frame(np.array([[1j, 0.0]]))
        np.testing.assert_allclose(synthesis(f), np.array([[1j], [0.0]]))
        np.testing.assert_allclose(analysis(f), np.array([[-1j, 0.0]]))


class TestBounds:
    def test_parseval(self):
        # two copies of an orthonormal basis scaled by 1/sqrt(2)
        f = Frame(np.vstack([np.eye(2), np.eye(2)]) / np.sqrt(2.0))
        lo, hi = frame_bounds(f)
        assert abs(lo - 1.0) < 1e-12 and abs(hi - 1.0) < 1e-12

    def test_union_frame_bounds(self):
        lo, hi = frame_bounds(UNION_FRAME)
        assert abs(lo - 1.5) < 1e-12
        assert abs(hi - 3.0) < 1e-12

    def test_two_orthonormal_bases_are_2_tight(self, rng):
        u = np.linalg.qr(random_matrix(rng, 4, 4))[0]
        f = Frame(np.vstack([np.eye(4), u.T]))
        lo, hi = frame_bounds(f)
        assert abs(lo - 2.0) < 1e-10 and abs(hi - 2.0) < 1e-10

    def test_bounds_sandwich_random_vectors(self, rng):
        f = random_frame(rng, 4, 7, complex_field=True)
        lo, hi = frame_bounds(f)
        op = frame_operator(f)
        for _ in range(100):
            vec = rng.normal(size=4) + 1j * rng.normal(size=4)
            vec = vec / np.linalg.norm(vec)
            energy = float(np.real(vec.conj() @ op @ vec))
            assert lo - 1e-9 * hi <= energy <= hi * (1 + 1e-9)

    def test_not_a_frame(self):
        with pytest.raises(NotAFrame):
            frame_bounds(Frame(np.array([[1.0, 0.0, 0.0], [2.0, 0.0, 0.0]])))


class TestDuality:
    def test_orthonormal_basis_self_dual(self):
        f = Frame(np.eye(3))
        assert is_dual_frame(f, f)

    def test_canonical_dual_certifies(self, rng):
        f = random_frame(rng, 3, 6)
        assert is_dual_frame(f, canonical_dual(f))

    def test_parseval_self_dual(self, rng):
        f = Frame(np.vstack([np.eye(3), np.eye(3)]) / np.sqrt(2.0))
        dual = canonical_dual(f)
        np.testing.assert_allclose(dual.vectors, f.vectors, atol=1e-12)

    def test_union_frame_canonical_dual_closed_form(self):
        dual = canonical_dual(UNION_FRAME)
        scale = np.diag([2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0])
        np.testing.assert_allclose(dual.vectors, UNION_FRAME.vectors @ scale,
                                   atol=1e-12)

    def test_double_dual_roundtrip(self, rng):
        f = random_frame(rng, 4, 6, complex_field=True)
        back = canonical_dual(canonical_dual(f))
        assert np.max(np.abs(back.vectors - f.vectors)) <= 1e-9

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            is_dual_frame(Frame(np.eye(3)), Frame(np.eye(3)[:2]))

    def test_published_dual_pair_in_c4(self):
        f = Frame(np.array([
            [1, 0, 0, 0], [0, 1, 0, 0], [1, 0, 0, 0],
            [0, 1, 0, -1], [0, 0, 1, 0], [0, 0, 1, 0]], dtype=complex))
        g = Frame(np.array([
            [0.5, 0.5, -0.5, 0], [0, 1, 0, 1], [0.5, -0.5, 0.5, 0],
            [0, 0, 0, -1], [0.5, -0.5, 0.5, 0], [-0.5, 0.5, 0.5, 0]],
            dtype=complex))
        assert is_dual_frame(f, g, tol=1e-12)
        # and it is not the canonical dual
        assert np.max(np.abs(canonical_dual(f).vectors - g.vectors)) > 0.1


class TestBoundsWithin:
    def test_tight_local_frame(self):
        plane = orthonormalize(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
        lo, hi = frame_bounds_within(Frame(PLANE_FRAME_1), plane)
        assert abs(lo - 1.5) < 1e-12 and abs(hi - 1.5) < 1e-12

    def test_zero_vector_allowed(self, rng):
        frame = Frame(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
        assert frame.is_frame()
        lo, hi = frame_bounds(frame)
        assert abs(lo - 1.0) < 1e-12 and abs(hi - 1.0) < 1e-12
