"""Minimax solver for worst-case erasure objectives.

The problem is always of one shape: over the affine family
``A = A0 + Z @ P`` of left inverses, minimize the largest of a fixed
list of weighted Frobenius norms of column groups of A.  This is convex
(a max of norms of affine maps).  The solver runs subgradient descent
with diminishing steps from Z = 0 and then, by default, polishes the
best iterate with an SLSQP pass on the equivalent smooth program
``min t  s.t.  c_i^2 ||A S_i||_F^2 <= t``, whose constraints are convex
quadratics; the polish turns the slow O(1/sqrt(k)) subgradient tail into
machine-precision agreement with the unique minimizer where one exists.
Everything is deterministic: ties between active groups break toward the
lowest index and no randomness is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .errors import NonConvergence


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the worst-case solver, surfaced as CLI flags."""

    max_iters: int = 50000
    step_scale: float = 0.1
    tol: float = 1e-10
    patience: int = 500
    polish: bool = True


@dataclass(frozen=True)
class MinimaxResult:
    """Outcome of a worst-case minimization."""

    a: np.ndarray = field(repr=False)
    phi: float
    phi_start: float
    phi_subgradient: float
    iterations: int
    converged: bool
    polished: bool

    @property
    def gap_from_start(self) -> float:
        return self.phi_start - self.phi


def _group_norms(a, groups, coeffs):
    return np.array([c * np.linalg.norm(a[:, g], "fro")
                     for g, c in zip(groups, coeffs)])


def _phi(a, groups, coeffs) -> float:
    return float(np.max(_group_norms(a, groups, coeffs)))


def _subgradient(a, proj, groups, coeffs):
    # np.argmax returns the first maximizer, which is the tie-break rule.
    vals = _group_norms(a, groups, coeffs)
    i = int(np.argmax(vals))
    g, c = groups[i], coeffs[i]
    norm = np.linalg.norm(a[:, g], "fro")
    grad = np.zeros_like(a)
    if norm > 0:
        grad[:, g] = c * a[:, g] / norm
    return grad @ proj


def _polish(a0, proj, groups, coeffs, z_start):
    """SLSQP pass on min t s.t. c_i^2 ||(A0 + Z P) S_i||_F^2 <= t."""
    d, n = a0.shape
    cplx = np.iscomplexobj(a0) or np.iscomplexobj(z_start)
    size = d * n

    def unpack(x):
        if cplx:
            return x[:size].reshape(d, n) + 1j * x[size:2 * size].reshape(d, n)
        return x[:size].reshape(d, n)

    def pack(z, t):
        parts = [np.real(z).ravel()]
        if cplx:
            parts.append(np.imag(z).ravel())
        parts.append([t])
        return np.concatenate(parts)

    def quad_and_grad(z, g, c):
        a = a0 + z @ proj
        masked = np.zeros_like(a)
        masked[:, g] = a[:, g]
        value = (c * c) * float(np.sum(np.abs(masked) ** 2))
        grad_mat = 2.0 * (c * c) * (masked @ proj)
        if cplx:
            grad = np.concatenate([grad_mat.real.ravel(), grad_mat.imag.ravel()])
        else:
            grad = grad_mat.real.ravel()
        return value, grad

    constraints = []
    for g, c in zip(groups, coeffs):
        def fun(x, g=g, c=c):
            z = unpack(x)
            value, _ = quad_and_grad(z, g, c)
            return x[-1] - value

        def jac(x, g=g, c=c):
            z = unpack(x)
            _, grad = quad_and_grad(z, g, c)
            return np.concatenate([-grad, [1.0]])

        constraints.append({"type": "ineq", "fun": fun, "jac": jac})

    t0 = _phi(a0 + z_start @ proj, groups, coeffs) ** 2
    x0 = pack(z_start, t0)
    objective_grad = np.zeros(x0.size)
    objective_grad[-1] = 1.0
    res = _scipy_minimize(
        lambda x: x[-1], x0, jac=lambda x: objective_grad,
        constraints=constraints, method="SLSQP",
        options={"maxiter": 300, "ftol": 1e-14})
    # Every Z is feasible (the affine family absorbs the constraint), so the
    # returned point is usable whenever it actually lowers the exact
    # objective, regardless of the SLSQP status flag.
    return unpack(res.x)


def minimize_max_group_norms(a0, kernel_projector,
                             groups: Sequence[Sequence[int]],
                             coeffs: Sequence[float],
                             config: SolverConfig | None = None) -> MinimaxResult:
    """Minimize ``max_i coeffs[i] * ||A[:, groups[i]]||_F`` over the affine
    family A = a0 + Z @ kernel_projector.

    Raises:
        NonConvergence: the iteration budget ran out while the objective
            was still improving faster than ``config.tol`` per
            ``config.patience`` iterations, and the polish pass is
            disabled or failed.
    """
    config = config or SolverConfig()
    a0 = np.asarray(a0, dtype=np.result_type(a0, 1.0))
    proj = np.asarray(kernel_projector, dtype=np.result_type(kernel_projector, 1.0))
    groups = [np.asarray(g, dtype=int) for g in groups]
    coeffs = [float(c) for c in coeffs]
    if len(groups) != len(coeffs):
        raise ValueError("one coefficient per column group is required")

    phi_start = _phi(a0, groups, coeffs)
    z = np.zeros_like(a0)
    best_z = z.copy()
    best_phi = phi_start
    step_base = config.step_scale * np.linalg.norm(a0, "fro")
    history = [best_phi]
    plateaued = False
    iterations = 0
    for k in range(1, config.max_iters + 1):
        iterations = k
        a = a0 + z @ proj
        grad = _subgradient(a, proj, groups, coeffs)
        gnorm = np.linalg.norm(grad, "fro")
        if gnorm == 0.0:
            plateaued = True
            break
        z = z - (step_base / np.sqrt(k)) * grad
        value = _phi(a0 + z @ proj, groups, coeffs)
        if value < best_phi:
            best_phi = value
            best_z = z.copy()
        history.append(best_phi)
        if k >= config.patience:
            old = history[k - config.patience]
            if (old - best_phi) <= config.tol * max(best_phi, 1e-30):
                plateaued = True
                break

    phi_subgradient = best_phi
    polished = False
    if config.polish:
        z_polished = _polish(a0, proj, groups, coeffs, best_z)
        value = _phi(a0 + z_polished @ proj, groups, coeffs)
        if value <= best_phi:
            best_phi = value
            best_z = z_polished
            polished = True

    if not plateaued and not polished and iterations >= config.max_iters:
        raise NonConvergence(
            f"objective still improving after {config.max_iters} iterations",
            result=MinimaxResult(a0 + best_z @ proj, best_phi, phi_start,
                                 phi_subgradient, iterations, False, False))

    return MinimaxResult(
        a=a0 + best_z @ proj,
        phi=best_phi,
        phi_start=phi_start,
        phi_subgradient=phi_subgradient,
        iterations=iterations,
        converged=True,
        polished=polished,
    )
