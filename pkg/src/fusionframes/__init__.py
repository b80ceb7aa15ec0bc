"""Finite fusion frames, their duals, and erasure-optimal reconstruction.

The package is organized bottom-up:

- :mod:`fusionframes.linalg` -- subspaces, pseudoinverses, norms;
- :mod:`fusionframes.frames` -- classical finite frames;
- :mod:`fusionframes.fusion` -- weighted subspace families;
- :mod:`fusionframes.blockop` -- operators between direct sums;
- :mod:`fusionframes.duality` -- dual fusion frames via coupling operators;
- :mod:`fusionframes.systems` -- local frames, dual systems,
  reconstruction-system bridge;
- :mod:`fusionframes.erasures` -- erasure error tables and loss-optimal
  duals (mean-square closed form, worst-case minimax solver);
- :mod:`fusionframes.cli` -- the ``ff`` command-line front end.
"""

from .blockop import BlockOp
from .duality import (
    AffineFamily,
    QDualPair,
    QKind,
    alternate_dual_to_q_dual,
    canonical_dual,
    classify_q,
    dual_from_left_inverse,
    is_q_dual,
    left_inverses_parametrization,
    noncanonical_dual,
    q_dual_residual,
    riesz_dual_containment_check,
)
from .erasures import (
    ErasurePattern,
    ErasureReport,
    error_vector,
    hierarchical_optimal,
    local_error_vector,
    local_mse_optimal_system,
    local_worst_case_optimal_system,
    mse_optimal_dual,
    worst_case_optimal_dual,
)
from .frames import Frame, canonical_dual as canonical_dual_frame, frame_bounds, is_dual_frame
from .fusion import BlockVector, ClassificationReport, FusionFrame
from .linalg import (
    Subspace,
    frobenius_norm,
    intersect,
    orth_complement_within,
    orthonormalize,
    pinv,
    span_union,
    spectral_norm,
)
from .minimax import MinimaxResult, SolverConfig
from .systems import (
    FusionFrameSystem,
    ProjectiveRS,
    canonical_dual_ops,
    dual_system_from_left_inverse_of_frame,
    dual_system_from_left_inverse_of_fusion,
    dual_system_iff_dual_frames,
    is_dual_system,
    projective_rs_bridge,
)

__all__ = [
    "AffineFamily",
    "BlockOp",
    "BlockVector",
    "ClassificationReport",
    "ErasurePattern",
    "ErasureReport",
    "Frame",
    "FusionFrame",
    "FusionFrameSystem",
    "MinimaxResult",
    "ProjectiveRS",
    "QDualPair",
    "QKind",
    "SolverConfig",
    "Subspace",
    "alternate_dual_to_q_dual",
    "canonical_dual",
    "canonical_dual_frame",
    "canonical_dual_ops",
    "classify_q",
    "dual_from_left_inverse",
    "dual_system_from_left_inverse_of_frame",
    "dual_system_from_left_inverse_of_fusion",
    "dual_system_iff_dual_frames",
    "error_vector",
    "frame_bounds",
    "frobenius_norm",
    "hierarchical_optimal",
    "intersect",
    "is_dual_frame",
    "is_dual_system",
    "is_q_dual",
    "left_inverses_parametrization",
    "local_error_vector",
    "local_mse_optimal_system",
    "local_worst_case_optimal_system",
    "mse_optimal_dual",
    "noncanonical_dual",
    "orth_complement_within",
    "orthonormalize",
    "pinv",
    "projective_rs_bridge",
    "q_dual_residual",
    "riesz_dual_containment_check",
    "span_union",
    "spectral_norm",
    "worst_case_optimal_dual",
]

__version__ = "0.1.0"
