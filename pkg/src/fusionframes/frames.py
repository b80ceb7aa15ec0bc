"""Classical finite frames: synthesis/analysis operators, bounds, duals."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import LengthMismatch, NotAFrame
from .linalg import RANK_TOL, Subspace, adjoint, frobenius_norm, matrix_rank


@dataclass(frozen=True)
class Frame:
    """A finite family of vectors in F^d, one per row of ``vectors``.

    Zero vectors are permitted (they arise as local frames of trivial
    directions); spanning is checked by rank where needed, never assumed.
    """

    vectors: np.ndarray = field(repr=False)
    label: Optional[str] = None

    def __post_init__(self):
        vecs = np.atleast_2d(np.asarray(self.vectors, dtype=np.result_type(self.vectors, 1.0)))
        object.__setattr__(self, "vectors", vecs)

    @property
    def ambient_dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def size(self) -> int:
        return self.vectors.shape[0]

    def scaled(self, factor) -> "Frame":
        return Frame(self.vectors * factor, label=self.label)

    def is_frame(self, tol: float = RANK_TOL) -> bool:
        return matrix_rank(synthesis(self), tol) == self.ambient_dim


def synthesis(f: Frame):
    """d x m matrix with the frame vectors as columns."""
    return f.vectors.T.copy()


def analysis(f: Frame):
    """Adjoint of the synthesis operator; rows are conjugated vectors."""
    return adjoint(synthesis(f))


def frame_operator(f: Frame):
    """Sum of rank-one operators f_i f_i*; self-adjoint positive semidefinite."""
    t = synthesis(f)
    return t @ adjoint(t)


def frame_bounds(f: Frame, tol: float = RANK_TOL) -> tuple[float, float]:
    """Optimal frame bounds: extreme eigenvalues of the frame operator.

    Raises:
        NotAFrame: if the vectors do not span the ambient space.
    """
    if not f.is_frame(tol):
        raise NotAFrame("vectors do not span the ambient space")
    eigs = np.linalg.eigvalsh(frame_operator(f))
    return float(eigs[0]), float(eigs[-1])


def is_dual_frame(f: Frame, g: Frame, tol: float = 1e-9) -> bool:
    """True iff synthesis(g) @ analysis(f) is the identity within ``tol``."""
    if f.ambient_dim != g.ambient_dim or f.size != g.size:
        raise LengthMismatch("dual candidates must have equal length and dimension")
    residual = synthesis(g) @ analysis(f) - np.eye(f.ambient_dim)
    return frobenius_norm(residual) <= tol


def canonical_dual(f: Frame, tol: float = RANK_TOL) -> Frame:
    """Frame whose vectors are the inverse frame operator applied to f_i."""
    if not f.is_frame(tol):
        raise NotAFrame("vectors do not span the ambient space")
    dual_synth = np.linalg.solve(frame_operator(f), synthesis(f))
    return Frame(dual_synth.T, label=f.label)


def frame_bounds_within(f: Frame, subspace: Subspace) -> tuple[float, float]:
    """Optimal bounds of ``f`` regarded as a frame for ``subspace``.

    The vectors must lie in the subspace; bounds are the extreme
    eigenvalues of the frame operator compressed to it.
    """
    if subspace.dim == 0:
        return 0.0, 0.0
    compressed = adjoint(subspace.basis) @ frame_operator(f) @ subspace.basis
    eigs = np.linalg.eigvalsh(compressed)
    return float(eigs[0]), float(eigs[-1])
