"""Direct checks of the block-operator container."""

import numpy as np
import pytest

from fusionframes.blockop import BlockOp
from fusionframes.errors import ShapeMismatch
from fusionframes.fusion import BlockVector


class TestConstruction:
    def test_matrix_roundtrip(self, rng):
        mat = rng.normal(size=(5, 7))
        op = BlockOp.from_matrix(mat, (2, 3), (4, 3))
        np.testing.assert_allclose(op.as_matrix(), mat)

    def test_zero_width_blocks(self):
        op = BlockOp.zeros((2, 0, 1), (0, 3))
        assert op.as_matrix().shape == (3, 3)
        assert op.block(1, 1).shape == (0, 3)

    def test_block_shape_validation(self):
        with pytest.raises(ShapeMismatch):
            BlockOp((2,), (2,), ((np.eye(3),),))

    def test_identity_and_mask(self):
        ident = BlockOp.identity((2, 1))
        np.testing.assert_allclose(ident.as_matrix(), np.eye(3))
        mask = BlockOp.mask((2, 1), [1])
        np.testing.assert_allclose(mask.as_matrix(), np.diag([0.0, 0.0, 1.0]))


class TestAlgebra:
    def test_adjoint_involution(self, rng):
        mat = rng.normal(size=(4, 6)) + 1j * rng.normal(size=(4, 6))
        op = BlockOp.from_matrix(mat, (1, 3), (2, 2, 2))
        back = op.adjoint().adjoint()
        np.testing.assert_allclose(back.as_matrix(), mat)

    def test_compose_matches_matrix_product(self, rng):
        a = BlockOp.from_matrix(rng.normal(size=(4, 5)), (2, 2), (2, 3))
        b = BlockOp.from_matrix(rng.normal(size=(5, 3)), (2, 3), (1, 2))
        np.testing.assert_allclose((a @ b).as_matrix(),
                                   a.as_matrix() @ b.as_matrix())

    def test_compose_dimension_mismatch(self, rng):
        a = BlockOp.from_matrix(rng.normal(size=(4, 5)), (2, 2), (2, 3))
        with pytest.raises(ShapeMismatch):
            a.compose(a)

    def test_apply_block_vector(self, rng):
        mat = rng.normal(size=(3, 4))
        op = BlockOp.from_matrix(mat, (1, 2), (2, 2))
        bv = BlockVector.from_concat(rng.normal(size=4), (2, 2))
        out = op.apply(bv)
        assert out.dims == (1, 2)
        np.testing.assert_allclose(out.concat(), mat @ bv.concat())

    def test_off_diagonal_norm(self):
        op = BlockOp.from_matrix(np.arange(16.0).reshape(4, 4), (2, 2), (2, 2))
        manual = np.linalg.norm(np.asarray(op.block(0, 1))) ** 2 \
            + np.linalg.norm(np.asarray(op.block(1, 0))) ** 2
        assert abs(op.off_diagonal_norm() - manual ** 0.5) < 1e-12
