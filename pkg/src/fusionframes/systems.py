"""Fusion frame systems: local frames per subspace and their duality.

A fusion frame system attaches to each subspace a frame spanning it.
The coupling operator turns local scalar coefficients into direct-sum
coordinates; composing it with the subspace synthesis gives the global
weighted frame, which is what ties system duality to ordinary frame
duality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import frames as fr
from .blockop import BlockOp
from .duality import DEFAULT_TOL, QDualPair, dual_from_left_inverse, is_q_dual
from .errors import (
    InvalidSystem,
    LengthMismatch,
    NotADual,
    NotLeftInverse,
    NotLocalDual,
    NotProjective,
    ShapeMismatch,
)
from .frames import Frame
from .fusion import FusionFrame
from .linalg import (
    RANK_TOL,
    Subspace,
    adjoint,
    frobenius_norm,
    matrix_rank,
    orthonormalize,
    spectral_norm,
)

#: Tolerance for "local vector lies in its subspace" at construction.
MEMBERSHIP_TOL = 1e-9

#: Relative tolerance for projectivity of reconstruction system blocks.
PROJECTIVE_TOL = 1e-8


@dataclass(frozen=True)
class FusionFrameSystem:
    """A fusion frame together with a spanning local frame per subspace."""

    ff: FusionFrame
    local_frames: tuple[Frame, ...]

    def __post_init__(self):
        locs = tuple(self.local_frames)
        if len(locs) != self.ff.size:
            raise InvalidSystem("one local frame per subspace is required")
        for i, (sub, frame) in enumerate(zip(self.ff.subspaces, locs)):
            if frame.ambient_dim != self.ff.ambient_dim:
                raise InvalidSystem(f"local frame {i} has wrong ambient dimension")
            vecs = frame.vectors
            if vecs.shape[0] == 0:
                raise InvalidSystem(f"local frame {i} is empty")
            proj_err = frobenius_norm(vecs.T - sub.basis @ (adjoint(sub.basis) @ vecs.T))
            if proj_err > MEMBERSHIP_TOL * max(1.0, frobenius_norm(vecs)):
                raise InvalidSystem(
                    f"local frame {i} has vectors outside its subspace "
                    f"(residual {proj_err:.3e})")
            if matrix_rank(adjoint(sub.basis) @ vecs.T) != sub.dim:
                raise InvalidSystem(f"local frame {i} does not span its subspace")
        object.__setattr__(self, "local_frames", locs)

    @property
    def local_sizes(self) -> tuple[int, ...]:
        return tuple(f.size for f in self.local_frames)

    @property
    def total_local(self) -> int:
        return sum(self.local_sizes)

    def local_slices(self) -> list[slice]:
        out, start = [], 0
        for n in self.local_sizes:
            out.append(slice(start, start + n))
            start += n
        return out

    def global_frame(self, weighted: bool = True) -> Frame:
        """All local vectors stacked block by block, optionally weighted."""
        rows = []
        for w, frame in zip(self.ff.weights, self.local_frames):
            rows.append((w if weighted else 1.0) * frame.vectors)
        return Frame(np.vstack(rows))

    def coupling(self) -> BlockOp:
        """Map local scalar coefficients to direct-sum coordinates.

        Block-diagonal by construction; block i holds the local synthesis
        written in the stored subspace basis.  Composed with the subspace
        synthesis it reproduces the global weighted frame synthesis.
        """
        mats = [adjoint(sub.basis) @ fr.synthesis(frame)
                for sub, frame in zip(self.ff.subspaces, self.local_frames)]
        return BlockOp.block_diagonal(mats)


def coupling_q(ws: FusionFrameSystem, vs: FusionFrameSystem) -> BlockOp:
    """The coupling-operator product routing analysis coefficients of one
    system into the other: block i is (local synthesis of G_i) after
    (local analysis of F_i), in coordinates."""
    if ws.ff.size != vs.ff.size:
        raise LengthMismatch("systems have different numbers of subspaces")
    if ws.local_sizes != vs.local_sizes:
        raise LengthMismatch("local frames must be index-aligned with equal sizes")
    mats = []
    for sub_w, f_i, sub_v, g_i in zip(ws.ff.subspaces, ws.local_frames,
                                      vs.ff.subspaces, vs.local_frames):
        synth_g = adjoint(sub_v.basis) @ fr.synthesis(g_i)
        synth_f = adjoint(sub_w.basis) @ fr.synthesis(f_i)
        mats.append(synth_g @ adjoint(synth_f))
    return BlockOp.block_diagonal(mats)


def is_dual_system(ws: FusionFrameSystem, vs: FusionFrameSystem,
                   tol: float = DEFAULT_TOL) -> QDualPair:
    """Certify one system as a dual of another.

    The coupling-operator product above is the candidate Q; it is
    block-diagonal by construction, so this always yields block-diagonal
    dual pairs.  Raises NotADual if the residual exceeds ``tol``.
    """
    q = coupling_q(ws, vs)
    return is_q_dual(ws.ff, vs.ff, q, tol)


def dual_system_iff_dual_frames(ws: FusionFrameSystem, vs: FusionFrameSystem,
                                tol: float = DEFAULT_TOL) -> tuple[bool, bool]:
    """Both sides of the equivalence between global-frame duality and
    system duality; the two booleans agree for every valid input pair."""
    as_frames = fr.is_dual_frame(ws.global_frame(True), vs.global_frame(True), tol)
    try:
        is_dual_system(ws, vs, tol)
        as_systems = True
    except NotADual:
        as_systems = False
    return as_frames, as_systems


def _check_local_dual(sub: Subspace, primal: Frame, dual: Frame,
                      tol: float) -> None:
    if primal.size != dual.size:
        raise NotLocalDual("local dual has different length than its primal")
    vecs = dual.vectors
    proj_err = frobenius_norm(vecs.T - sub.basis @ (adjoint(sub.basis) @ vecs.T))
    if proj_err > tol * max(1.0, frobenius_norm(vecs)):
        raise NotLocalDual("local dual vectors leave the subspace")
    resid = fr.synthesis(dual) @ fr.analysis(primal) - sub.projector()
    if frobenius_norm(resid) > tol:
        raise NotLocalDual("local families do not reconstruct inside the subspace")


def dual_system_from_left_inverse_of_fusion(
        ws: FusionFrameSystem, a, v=None, local_duals: Sequence[Frame] = None,
        tol: float = DEFAULT_TOL) -> FusionFrameSystem:
    """Dual system built from a left inverse of the subspace analysis matrix
    plus a dual frame for each local frame.

    The new local vectors are the left inverse applied to each local dual
    vector embedded in its own block; their spans are the dual subspaces
    of the induced component-preserving dual.
    """
    if local_duals is None:
        raise NotLocalDual("local dual frames are required")
    if len(local_duals) != ws.ff.size:
        raise LengthMismatch("one local dual per subspace is required")
    pair = dual_from_left_inverse(ws.ff, a, v, tol)
    v = pair.dual.weights
    a = np.asarray(a)
    slices = ws.ff.block_slices()
    new_locals = []
    for i, (sub, primal, dual) in enumerate(zip(ws.ff.subspaces, ws.local_frames,
                                                local_duals)):
        _check_local_dual(sub, primal, dual, tol)
        coords = adjoint(sub.basis) @ dual.vectors.T          # n_i x L_i
        vectors = (a[:, slices[i]] @ coords) / v[i]           # d x L_i
        new_locals.append(Frame(vectors.T))
    system = FusionFrameSystem(pair.dual, tuple(new_locals))
    is_dual_system(ws, system, tol)
    return system


def dual_system_from_left_inverse_of_frame(
        ws: FusionFrameSystem, a, v=None,
        tol: float = DEFAULT_TOL) -> FusionFrameSystem:
    """Dual system built from a left inverse of the global weighted frame
    analysis: column blocks of the left inverse become the local duals and
    their column spaces the dual subspaces."""
    if v is None:
        v = ws.ff.weights.copy()
    v = np.asarray(v, dtype=float).ravel()
    if v.size != ws.ff.size or np.any(v <= 0):
        raise ValueError("dual weights must be positive, one per subspace")
    a = np.asarray(a, dtype=np.result_type(a, 1.0))
    wf = ws.global_frame(weighted=True)
    if a.shape != (ws.ff.ambient_dim, ws.total_local):
        raise ShapeMismatch("left inverse has the wrong shape")
    resid = frobenius_norm(a @ fr.analysis(wf) - np.eye(ws.ff.ambient_dim))
    if resid > tol:
        raise NotLeftInverse(
            f"candidate is not a left inverse of the global frame analysis "
            f"(residual {resid:.3e} > tol {tol:.1e})")
    subs, new_locals = [], []
    for i, sl in enumerate(ws.local_slices()):
        block = a[:, sl]
        s = np.linalg.svd(block, compute_uv=False) if block.size else np.zeros(0)
        if s.size == 0 or s[0] <= 0.0:
            subs.append(Subspace.zero(ws.ff.ambient_dim, dtype=block.dtype))
        else:
            subs.append(orthonormalize(block))
        new_locals.append(Frame(block.T / v[i]))
    system = FusionFrameSystem(FusionFrame(tuple(subs), v), tuple(new_locals))
    is_dual_system(ws, system, tol)
    return system


# -- reconstruction systems ---------------------------------------------------

@dataclass(frozen=True)
class ProjectiveRS:
    """A reconstruction system whose blocks are scaled isometries.

    Each operator maps coordinate space F^{n_i} into the ambient space
    with op* op equal to a positive multiple of the identity; the scale
    roots are the implied weights.  Construction validates projectivity.
    """

    ops: tuple = field(repr=False)
    tol: float = PROJECTIVE_TOL

    def __post_init__(self):
        ops = tuple(np.asarray(t, dtype=np.result_type(t, 1.0)) for t in self.ops)
        if not ops:
            raise ValueError("a reconstruction system needs at least one block")
        d = ops[0].shape[0]
        if any(t.shape[0] != d for t in ops):
            raise ShapeMismatch("all blocks must map into the same ambient space")
        for i, t in enumerate(ops):
            w = spectral_norm(t)
            if w <= 0:
                raise NotProjective(f"block {i} is zero")
            gram = adjoint(t) @ t - (w * w) * np.eye(t.shape[1])
            if frobenius_norm(gram) > self.tol * w * w:
                raise NotProjective(
                    f"block {i} is not a scaled isometry "
                    f"(deviation {frobenius_norm(gram):.3e})")
        object.__setattr__(self, "ops", ops)

    @property
    def ambient_dim(self) -> int:
        return self.ops[0].shape[0]

    @property
    def weights_implied(self) -> tuple[float, ...]:
        return tuple(spectral_norm(t) for t in self.ops)

    def synthesis_matrix(self):
        return np.hstack([t for t in self.ops])

    def operator(self):
        """Sum of op_i op_i*; invertible iff the ranges span."""
        d = self.ambient_dim
        s = np.zeros((d, d), dtype=np.result_type(*(t.dtype for t in self.ops)))
        for t in self.ops:
            s = s + t @ adjoint(t)
        return s

    def to_system(self, tol: float = RANK_TOL) -> FusionFrameSystem:
        """The fusion frame system carried by the ranges: subspaces are the
        block ranges, weights the spectral norms, local frames the scaled
        columns."""
        subs, locals_, weights = [], [], []
        for t in self.ops:
            w = spectral_norm(t)
            subs.append(orthonormalize(t, tol))
            locals_.append(Frame((t / w).T))
            weights.append(w)
        return FusionFrameSystem(FusionFrame(tuple(subs), np.array(weights)),
                                 tuple(locals_))


def canonical_dual_ops(ops) -> list:
    """Blocks of the canonical dual reconstruction system (inverse operator
    applied blockwise).  The result need not be projective."""
    ops = [np.asarray(t) for t in ops]
    d = ops[0].shape[0]
    s = np.zeros((d, d), dtype=np.result_type(*(t.dtype for t in ops), 1.0))
    for t in ops:
        s = s + t @ adjoint(t)
    return [np.linalg.solve(s, t) for t in ops]


def projective_rs_bridge(rs: ProjectiveRS, rs_dual: ProjectiveRS,
                         tol: float = DEFAULT_TOL) -> tuple[bool, bool]:
    """Equivalence between reconstruction-system duality and system duality.

    Returns (dual as fusion frame systems, dual as reconstruction
    systems); the two components always agree.  Both inputs must be
    projective; converting a non-projective family raises NotProjective
    at construction, which is the documented asymmetry of this bridge.
    """
    if rs.ambient_dim != rs_dual.ambient_dim:
        raise ShapeMismatch("reconstruction systems live in different spaces")
    if len(rs.ops) != len(rs_dual.ops):
        raise LengthMismatch("reconstruction systems have different block counts")
    if any(t.shape[1] != td.shape[1] for t, td in zip(rs.ops, rs_dual.ops)):
        raise LengthMismatch("paired blocks must have equal coordinate dimensions")
    d = rs.ambient_dim
    total = np.zeros((d, d), dtype=np.result_type(
        *(t.dtype for t in rs.ops + rs_dual.ops)))
    for t, td in zip(rs.ops, rs_dual.ops):
        total = total + td @ adjoint(t)
    as_rs = frobenius_norm(total - np.eye(d)) <= tol
    try:
        is_dual_system(rs.to_system(), rs_dual.to_system(), tol)
        as_systems = True
    except NotADual:
        as_systems = False
    return as_systems, as_rs
