"""Operators between direct sums, stored as a grid of coordinate blocks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ShapeMismatch
from .fusion import BlockVector
from .linalg import adjoint, frobenius_norm


def _offsets(dims: Sequence[int]) -> list[int]:
    out, start = [0], 0
    for n in dims:
        start += n
        out.append(start)
    return out


@dataclass(frozen=True)
class BlockOp:
    """Linear map between direct sums, block (j, i) mapping source block i
    into target block j.

    Blocks are dense arrays of shape (row_dims[j], col_dims[i]); zero
    blocks are materialized.  Row/column dimensions may be zero.
    """

    row_dims: tuple[int, ...]
    col_dims: tuple[int, ...]
    blocks: tuple = field(repr=False)

    def __post_init__(self):
        rows = tuple(int(n) for n in self.row_dims)
        cols = tuple(int(n) for n in self.col_dims)
        grid = []
        if len(self.blocks) != len(rows):
            raise ShapeMismatch("block grid has wrong number of rows")
        for j, row in enumerate(self.blocks):
            if len(row) != len(cols):
                raise ShapeMismatch("block grid has wrong number of columns")
            fixed = []
            for i, blk in enumerate(row):
                blk = np.asarray(blk, dtype=np.result_type(blk, 1.0))
                if blk.shape != (rows[j], cols[i]):
                    raise ShapeMismatch(
                        f"block ({j},{i}) has shape {blk.shape}, "
                        f"expected {(rows[j], cols[i])}")
                fixed.append(blk)
            grid.append(tuple(fixed))
        object.__setattr__(self, "row_dims", rows)
        object.__setattr__(self, "col_dims", cols)
        object.__setattr__(self, "blocks", tuple(grid))

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zeros(cls, row_dims: Sequence[int], col_dims: Sequence[int], dtype=float) -> "BlockOp":
        grid = [[np.zeros((r, c), dtype=dtype) for c in col_dims] for r in row_dims]
        return cls(tuple(row_dims), tuple(col_dims), tuple(map(tuple, grid)))

    @classmethod
    def identity(cls, dims: Sequence[int], dtype=float) -> "BlockOp":
        out = cls.zeros(dims, dims, dtype)
        grid = [list(row) for row in out.blocks]
        for i, n in enumerate(dims):
            grid[i][i] = np.eye(n, dtype=dtype)
        return cls(tuple(dims), tuple(dims), tuple(map(tuple, grid)))

    @classmethod
    def block_diagonal(cls, mats: Iterable[np.ndarray]) -> "BlockOp":
        mats = [np.asarray(m) for m in mats]
        rows = tuple(m.shape[0] for m in mats)
        cols = tuple(m.shape[1] for m in mats)
        dtype = np.result_type(*(m.dtype for m in mats), 1.0)
        out = cls.zeros(rows, cols, dtype)
        grid = [list(row) for row in out.blocks]
        for i, m in enumerate(mats):
            grid[i][i] = m.astype(dtype)
        return cls(rows, cols, tuple(map(tuple, grid)))

    @classmethod
    def from_matrix(cls, mat, row_dims: Sequence[int], col_dims: Sequence[int]) -> "BlockOp":
        mat = np.asarray(mat)
        if mat.shape != (sum(row_dims), sum(col_dims)):
            raise ShapeMismatch("matrix shape does not match block dimensions")
        roff, coff = _offsets(row_dims), _offsets(col_dims)
        grid = tuple(
            tuple(mat[roff[j]:roff[j + 1], coff[i]:coff[i + 1]].copy()
                  for i in range(len(col_dims)))
            for j in range(len(row_dims)))
        return cls(tuple(row_dims), tuple(col_dims), grid)

    @classmethod
    def mask(cls, dims: Sequence[int], kept: Iterable[int], dtype=float) -> "BlockOp":
        """Diagonal 0/1 operator keeping the listed blocks and zeroing the rest."""
        kept = set(kept)
        out = cls.zeros(dims, dims, dtype)
        grid = [list(row) for row in out.blocks]
        for i, n in enumerate(dims):
            if i in kept:
                grid[i][i] = np.eye(n, dtype=dtype)
        return cls(tuple(dims), tuple(dims), tuple(map(tuple, grid)))

    @classmethod
    def weight_diagonal(cls, dims: Sequence[int], factors: Sequence[float], dtype=float) -> "BlockOp":
        """Diagonal operator scaling block i by factors[i]."""
        out = cls.zeros(dims, dims, dtype)
        grid = [list(row) for row in out.blocks]
        for i, n in enumerate(dims):
            grid[i][i] = factors[i] * np.eye(n, dtype=dtype)
        return cls(tuple(dims), tuple(dims), tuple(map(tuple, grid)))

    # -- access / algebra -----------------------------------------------------

    def block(self, j: int, i: int):
        return self.blocks[j][i]

    def as_matrix(self):
        dtype = np.result_type(*(b.dtype for row in self.blocks for b in row), 1.0)
        out = np.zeros((sum(self.row_dims), sum(self.col_dims)), dtype=dtype)
        roff, coff = _offsets(self.row_dims), _offsets(self.col_dims)
        for j, row in enumerate(self.blocks):
            for i, blk in enumerate(row):
                out[roff[j]:roff[j + 1], coff[i]:coff[i + 1]] = blk
        return out

    def adjoint(self) -> "BlockOp":
        grid = tuple(
            tuple(adjoint(self.blocks[j][i]) for j in range(len(self.row_dims)))
            for i in range(len(self.col_dims)))
        return BlockOp(self.col_dims, self.row_dims, grid)

    def compose(self, other: "BlockOp") -> "BlockOp":
        """self after other (matrix product self @ other)."""
        if self.col_dims != other.row_dims:
            raise ShapeMismatch("inner block dimensions do not match")
        return BlockOp.from_matrix(self.as_matrix() @ other.as_matrix(),
                                   self.row_dims, other.col_dims)

    def __matmul__(self, other):
        if isinstance(other, BlockOp):
            return self.compose(other)
        return NotImplemented

    def apply(self, bv: BlockVector) -> BlockVector:
        if bv.dims != self.col_dims:
            raise ShapeMismatch("block vector does not match source dimensions")
        return BlockVector.from_concat(self.as_matrix() @ bv.concat(), self.row_dims)

    def frobenius_norm(self) -> float:
        return frobenius_norm(self.as_matrix())

    def off_diagonal_norm(self) -> float:
        """Frobenius norm of everything outside the diagonal blocks."""
        total = 0.0
        for j, row in enumerate(self.blocks):
            for i, blk in enumerate(row):
                if i != j:
                    total += float(np.sum(np.abs(blk) ** 2))
        return total ** 0.5
