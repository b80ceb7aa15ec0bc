"""Substrate tests: orthonormalization, pseudoinverse, norms, subspace ops.

Expected values for the randomized cases come from independent oracles
(classical Gram-Schmidt, the SVD identities, rank counts), never from
the code paths under test.
"""

import numpy as np
import pytest

from fusionframes.errors import DimensionMismatch, NotContained, ZeroSubspace
from fusionframes.linalg import (
    Subspace,
    frobenius_norm,
    intersect,
    orth_complement_within,
    orthonormalize,
    pinv,
    span_union,
    spectral_norm,
)

from conftest import random_matrix, random_subspace


def gram_schmidt(columns):
    """Independent orthonormalization oracle (modified Gram-Schmidt)."""
    basis = []
    for col in np.asarray(columns, dtype=complex).T:
        vec = col.copy()
        for b in basis:
            vec = vec - b * (b.conj() @ vec)
        norm = np.linalg.norm(vec)
        if norm > 1e-10:
            basis.append(vec / norm)
    return np.array(basis).T


class TestOrthonormalize:
    def test_collinear_columns_collapse(self):
        sub = orthonormalize(np.array([[1.0, 2.0], [0.0, 0.0], [0.0, 0.0]]))
        assert sub.dim == 1
        assert abs(abs(sub.basis[0, 0]) - 1.0) < 1e-14

    def test_plane_spanning_set(self):
        spanning = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        sub = orthonormalize(spanning)
        assert sub.dim == 2
        target = np.array([[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        np.testing.assert_allclose(sub.projector(), target, atol=1e-14)

    def test_matches_gram_schmidt_oracle(self, rng):
        mat = random_matrix(rng, 4, 3)
        sub = orthonormalize(mat)
        assert sub.dim == 3
        oracle = gram_schmidt(mat)
        np.testing.assert_allclose(sub.projector(),
                                   oracle @ oracle.conj().T, atol=1e-12)
        gram = sub.basis.conj().T @ sub.basis
        np.testing.assert_allclose(gram, np.eye(3), atol=1e-12)

    def test_zero_input_raises(self):
        with pytest.raises(ZeroSubspace):
            orthonormalize(np.zeros((3, 2)))

    def test_rank_deficiency_detected(self, rng):
        base = random_matrix(rng, 5, 2)
        mat = np.hstack([base, base @ rng.normal(size=(2, 2))])
        assert orthonormalize(mat).dim == 2


class TestPinv:
    def test_identity(self):
        np.testing.assert_allclose(pinv(np.eye(3)), np.eye(3), atol=1e-14)

    def test_diagonal(self):
        np.testing.assert_allclose(pinv(np.diag([2.0, 0.0])),
                                   np.diag([0.5, 0.0]), atol=1e-14)

    def test_left_inverse_residual(self, rng):
        mat = random_matrix(rng, 5, 3)
        np.testing.assert_allclose(pinv(mat) @ mat, np.eye(3), atol=1e-10)

    @pytest.mark.parametrize("complex_field", [False, True])
    def test_penrose_identities(self, rng, complex_field):
        for _ in range(10):
            rows = int(rng.integers(1, 21))
            cols = int(rng.integers(1, 21))
            mat = random_matrix(rng, rows, cols, complex_field)
            plus = pinv(mat)
            scale = 1e-9 * max(frobenius_norm(mat), 1.0)
            assert frobenius_norm(mat @ plus @ mat - mat) <= scale
            assert frobenius_norm(plus @ mat @ plus - plus) <= scale
            assert frobenius_norm((mat @ plus).conj().T - mat @ plus) <= scale
            assert frobenius_norm((plus @ mat).conj().T - plus @ mat) <= scale

    def test_zero_matrix(self):
        np.testing.assert_allclose(pinv(np.zeros((2, 3))), np.zeros((3, 2)))


class TestNorms:
    def test_identity_norms(self):
        assert abs(frobenius_norm(np.eye(4)) - 2.0) < 1e-14
        assert abs(spectral_norm(np.eye(4)) - 1.0) < 1e-14

    def test_diagonal_norms(self):
        mat = np.diag([3.0, 4.0])
        assert abs(frobenius_norm(mat) - 5.0) < 1e-14
        assert abs(spectral_norm(mat) - 4.0) < 1e-14

    def test_frobenius_equals_singular_value_sum(self, rng):
        mat = random_matrix(rng, 6, 4, complex_field=True)
        s = np.linalg.svd(mat, compute_uv=False)
        assert abs(frobenius_norm(mat) ** 2 - np.sum(s ** 2)) < 1e-10


class TestSubspace:
    def test_projector_idempotent_selfadjoint(self, rng):
        for _ in range(5):
            sub = random_subspace(rng, 6, int(rng.integers(1, 5)),
                                  complex_field=bool(rng.integers(2)))
            proj = sub.projector()
            assert frobenius_norm(proj @ proj - proj) <= 1e-9
            assert frobenius_norm(proj.conj().T - proj) <= 1e-9

    def test_zero_subspace(self):
        zero = Subspace.zero(4)
        assert zero.dim == 0
        np.testing.assert_allclose(zero.projector(), np.zeros((4, 4)))

    def test_rejects_non_orthonormal(self):
        with pytest.raises(ValueError):
            Subspace(np.array([[1.0], [1.0]]))


class TestIntersect:
    def test_self_intersection(self, rng):
        sub = random_subspace(rng, 5, 3)
        assert intersect(sub, sub).distance_to(sub) < 1e-9

    def test_coordinate_planes(self):
        e = np.eye(3)
        left = Subspace(e[:, :2])
        right = Subspace(e[:, 1:])
        common = intersect(left, right)
        assert common.dim == 1
        assert common.distance_to(Subspace(e[:, 1:2])) < 1e-12

    def test_direct_sum_blocks_have_zero_intersection(self):
        w1 = orthonormalize(np.array([[1, 0], [0, 1], [0, 0], [0, 0]], dtype=complex).reshape(4, 2))
        w2 = orthonormalize(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]))
        assert intersect(w1, w2).dim == 0

    def test_dimension_mismatch(self, rng):
        with pytest.raises(DimensionMismatch):
            intersect(random_subspace(rng, 3, 1), random_subspace(rng, 4, 1))

    def test_grassmann_dimension_formula(self, rng):
        # rank oracle: dim(U+V) via the rank of the stacked bases
        for _ in range(20):
            d = int(rng.integers(2, 8))
            u = random_subspace(rng, d, int(rng.integers(1, d + 1)))
            v = random_subspace(rng, d, int(rng.integers(1, d + 1)))
            if rng.integers(2):
                # force a genuine intersection by sharing directions
                shared = random_subspace(rng, d, 1)
                u = span_union(u, shared)
                v = span_union(v, shared)
            stacked = np.hstack([u.basis, v.basis])
            union_rank = np.linalg.matrix_rank(stacked, tol=1e-10)
            meet = intersect(u, v)
            union = span_union(u, v)
            assert union.dim == union_rank
            assert meet.dim + union.dim == u.dim + v.dim


class TestOrthComplementWithin:
    def test_zero_complement_is_everything(self, rng):
        sub = random_subspace(rng, 4, 2)
        zero = Subspace.zero(4)
        assert orth_complement_within(sub, zero).distance_to(sub) < 1e-12

    def test_plane_minus_line(self):
        full = Subspace(np.eye(2))
        line = Subspace(np.eye(2)[:, :1])
        out = orth_complement_within(full, line)
        assert out.distance_to(Subspace(np.eye(2)[:, 1:])) < 1e-12

    def test_projector_sum_oracle(self, rng):
        for _ in range(10):
            big = random_subspace(rng, 5, 3)
            inner_coeff = rng.normal(size=(3, 1))
            inner = orthonormalize(big.basis @ inner_coeff)
            rest = orth_complement_within(big, inner)
            assert rest.dim == 2
            total = rest.projector() + inner.projector()
            np.testing.assert_allclose(total, big.projector(), atol=1e-10)

    def test_not_contained_raises(self, rng):
        big = random_subspace(rng, 5, 2)
        outside = random_subspace(rng, 5, 1)
        if big.contains(outside, 1e-6):
            pytest.skip("random draw accidentally contained")
        with pytest.raises(NotContained):
            orth_complement_within(big, outside)
