"""Saddle-point system build and direct sparse solve.

After eliminating the homogeneous Dirichlet rows/columns the coupled system
is symmetric indefinite:

    [ S_V  A^T ] [u]   [g]
    [ A   -S_W ] [z] = [l]

restricted to the free DOFs of each space.  A sparse LU factorization treats
the matrix generically; the relative residual is always checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .assembly import (BlockSystem, assemble_blocks, assemble_dual_stab,
                       assemble_primal_stab, assemble_stiffness)
from .mesh import BoundaryPart
from .spaces import build_space

RESIDUAL_TOL = 1e-10
SYMMETRY_TOL = 1e-12


class SingularSystemError(RuntimeError):
    """Factorization hit an exactly singular pivot (γ = 0 or broken constraints)."""


@dataclass(frozen=True)
class SaddleSystem:
    matrix: sp.csc_matrix
    rhs: np.ndarray
    v_free: np.ndarray
    w_free: np.ndarray
    n_v: int
    n_w: int


@dataclass(frozen=True)
class DiscreteSolution:
    """Primal/dual coefficient vectors over all DOFs; constrained entries are 0."""

    u: np.ndarray
    z: np.ndarray
    residual: float
    converged: bool


def build_system(blocks, trial, test):
    """Eliminate Dirichlet DOFs and stack the symmetric block matrix."""
    if blocks.s_v.shape != (trial.num_dofs, trial.num_dofs):
        raise ValueError("primal stabilizer does not match the trial space")
    if blocks.a.shape != (test.num_dofs, trial.num_dofs):
        raise ValueError("stiffness block does not match the spaces")
    if blocks.s_w.shape != (test.num_dofs, test.num_dofs):
        raise ValueError("dual stabilizer does not match the test space")

    v_free = trial.free_dofs
    w_free = test.free_dofs
    s_v = blocks.s_v[np.ix_(v_free, v_free)]
    a = blocks.a[np.ix_(w_free, v_free)]
    s_w = blocks.s_w[np.ix_(w_free, w_free)]
    matrix = sp.bmat([[s_v, a.T], [a, -s_w]], format="csc")
    defect = abs(matrix - matrix.T).max() if matrix.nnz else 0.0
    if defect > SYMMETRY_TOL:
        raise ValueError(f"saddle matrix asymmetry {defect:g} exceeds {SYMMETRY_TOL:g}")
    rhs = np.concatenate([blocks.data[v_free], blocks.load[w_free]])
    return SaddleSystem(matrix=matrix, rhs=rhs, v_free=v_free, w_free=w_free,
                        n_v=trial.num_dofs, n_w=test.num_dofs)


def solve(system):
    """Direct sparse LU solve with a residual check."""
    try:
        lu = spla.splu(system.matrix)
    except RuntimeError as err:
        raise SingularSystemError(
            f"sparse factorization failed ({err}); "
            "check that the stabilization parameters are positive and the "
            "constraint sets are intact") from err
    x = lu.solve(system.rhs)
    rhs_norm = np.linalg.norm(system.rhs)
    res = np.linalg.norm(system.matrix @ x - system.rhs)
    residual = float(res / rhs_norm) if rhs_norm > 0 else float(res)

    nv_free = len(system.v_free)
    u = np.zeros(system.n_v)
    z = np.zeros(system.n_w)
    u[system.v_free] = x[:nv_free]
    z[system.w_free] = x[nv_free:]
    return DiscreteSolution(u=u, z=z, residual=residual,
                            converged=residual < RESIDUAL_TOL)


def solve_problem(mesh, degree, problem, gamma_v, gamma_w, variant="jump"):
    """Convenience: spaces, blocks, system, solve.  Returns (solution, V, W, blocks)."""
    trial = build_space(mesh, degree, BoundaryPart.DATA)
    test = build_space(mesh, degree, BoundaryPart.FREE)
    blocks = assemble_blocks(trial, test, problem, gamma_v, gamma_w, variant)
    solution = solve(build_system(blocks, trial, test))
    return solution, trial, test, blocks


def discrete_consistency_probe(mesh, degree, gamma_v, gamma_w, variant="jump",
                               probe=None, seed=0):
    """Manufacture data from a coefficient vector and check it is reproduced.

    With l := A v and g := S_V v for any v in the trial space, the coupled
    system is solved exactly by (u, z) = (v, 0); the return value is the max
    of the two recovery errors in the sup norm (zero up to solver accuracy).
    """
    trial = build_space(mesh, degree, BoundaryPart.DATA)
    test = build_space(mesh, degree, BoundaryPart.FREE)
    if probe is None:
        rng = np.random.default_rng(seed)
        probe = rng.standard_normal(trial.num_dofs)
        probe[trial.dirichlet_dofs] = 0.0
    else:
        probe = np.asarray(probe, dtype=float)
        if np.any(probe[trial.dirichlet_dofs] != 0.0):
            raise ValueError("probe must vanish on constrained DOFs")

    s_v = assemble_primal_stab(trial, gamma_v)
    a = assemble_stiffness(trial, test)
    s_w = assemble_dual_stab(test, variant, gamma_w)
    blocks = BlockSystem(s_v=s_v, a=a, s_w=s_w, load=a @ probe, data=s_v @ probe,
                         gamma_v=gamma_v, gamma_w=gamma_w, variant=variant)
    sol = solve(build_system(blocks, trial, test))
    return float(max(np.abs(sol.u - probe).max(), np.abs(sol.z).max()))
