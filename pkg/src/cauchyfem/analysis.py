"""Error norms, stabilization semi-norms, the a posteriori quantity, rates.

The local error window ω = (0.5, 1) × (0, 0.5) follows the interior-functional
setting: an element belongs to ω when its barycenter does, which is exact on
unjittered even-n meshes whose element edges align with x = 0.5 and y = 0.5.
Unknown continuity constants are set to 1 throughout, so the reported
estimator is a monitorable surrogate, not a certified bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mesh import BoundaryPart, mesh_size
from .spaces import (affine_map, segment_rule, shape_grads, shape_values,
                     triangle_rule)
from .assembly import (FACE_DATA_DEGREE, VOLUME_DEGREE, _cell_laplacians,
                       _face_frame, _trace_normal_derivs)

#: lower-left and upper-right corners of the local error window
LOCAL_WINDOW = ((0.5, 0.0), (1.0, 0.5))


@dataclass(frozen=True)
class ErrorReport:
    h: float
    dofs_v: int
    dofs_w: int
    global_l2: float
    local_l2: float
    h1_semi: float
    stab_u: float
    stab_z: float
    eta: float


def _region_triangles(mesh, region):
    if region == "global":
        return range(mesh.num_triangles)
    if region != "local":
        raise ValueError("region must be 'global' or 'local'")
    (x0, y0), (x1, y1) = LOCAL_WINDOW
    bary = mesh.vertices[mesh.triangles].mean(axis=1)
    keep = (bary[:, 0] > x0) & (bary[:, 0] < x1) & (bary[:, 1] > y0) & (bary[:, 1] < y1)
    return np.flatnonzero(keep)


def l2_error(space, uh, exact_u, region="global"):
    """‖u - u_h‖ over Ω or the local window ω.

    `uh` is either a coefficient vector or a callable field; passing the exact
    solution itself as a field gives zero, which pins down the quadrature path.
    """
    mesh = space.mesh
    rule = triangle_rule(VOLUME_DEGREE)
    vals = shape_values(space.degree, rule.points)
    by_coeffs = not callable(uh)
    total = 0.0
    for t in _region_triangles(mesh, region):
        pts = mesh.triangle_points(t)
        jac, det, _ = affine_map(pts)
        phys = pts[0] + rule.points @ jac.T
        if by_coeffs:
            uh_q = vals @ uh[space.cell_dofs[t]]
        else:
            uh_q = uh(phys[:, 0], phys[:, 1])
        diff = exact_u(phys[:, 0], phys[:, 1]) - uh_q
        total += det * (rule.weights @ (diff * diff))
    return math.sqrt(max(total, 0.0))


def l2_norm_field(mesh, field, region="global"):
    """‖field‖ over Ω or ω by the shared volume rule."""
    rule = triangle_rule(VOLUME_DEGREE)
    total = 0.0
    for t in _region_triangles(mesh, region):
        pts = mesh.triangle_points(t)
        jac, det, _ = affine_map(pts)
        phys = pts[0] + rule.points @ jac.T
        fq = field(phys[:, 0], phys[:, 1])
        total += det * (rule.weights @ (fq * fq))
    return math.sqrt(max(total, 0.0))


def h1_semi_error(space, coeffs, exact_grad):
    """‖∇u - ∇u_h‖ over Ω."""
    mesh = space.mesh
    rule = triangle_rule(VOLUME_DEGREE)
    grads = shape_grads(space.degree, rule.points)
    total = 0.0
    for t in range(mesh.num_triangles):
        pts = mesh.triangle_points(t)
        jac, det, jinv = affine_map(pts)
        phys = pts[0] + rule.points @ jac.T
        gh = np.einsum("qid,i->qd", grads @ jinv, coeffs[space.cell_dofs[t]])
        gx, gy = exact_grad(phys[:, 0], phys[:, 1])
        dx, dy = gx - gh[:, 0], gy - gh[:, 1]
        total += det * (rule.weights @ (dx * dx + dy * dy))
    return math.sqrt(max(total, 0.0))


def _face_jump_sq(space, coeffs, f, rule, flux=None):
    """∫_F h_F (jump of ∂_n u_h, or flux - ∂_n u_h on a data face)² ds."""
    mesh = space.mesh
    length, normal, points = _face_frame(mesh, f, rule)
    lt, rt = mesh.face_tris[f]
    dn = _trace_normal_derivs(space, lt, points, normal) @ coeffs[space.cell_dofs[lt]]
    if rt >= 0:
        dn = dn - (_trace_normal_derivs(space, rt, points, normal)
                   @ coeffs[space.cell_dofs[rt]])
        mis = -dn
    else:
        psi_q = 0.0 if flux is None else flux(points[:, 0], points[:, 1],
                                              normal[0], normal[1])
        mis = psi_q - dn
    return length ** 2 * (rule.weights @ (mis * mis))


def _laplacian_jump_sq(space, coeffs, f):
    mesh = space.mesh
    lt, rt = mesh.face_tris[f]
    a, b = mesh.face_vertices[f]
    d = mesh.vertices[b] - mesh.vertices[a]
    length = float(np.hypot(d[0], d[1]))
    jump = (_cell_laplacians(space, lt) @ coeffs[space.cell_dofs[lt]]
            - _cell_laplacians(space, rt) @ coeffs[space.cell_dofs[rt]])
    return length ** 4 * jump ** 2


def stab_seminorm_u(space, coeffs, problem, gamma_v):
    """|u - u_h| in the primal stabilizer, computed from the data.

    The smooth solution contributes no interior gradient or Laplacian jumps,
    so interior faces see -[∂_n u_h] while data faces see ψ - ∂_n u_h.
    """
    mesh = space.mesh
    rule = segment_rule(FACE_DATA_DEGREE)
    total = 0.0
    for f in mesh.interior_faces():
        total += _face_jump_sq(space, coeffs, f, rule)
        if space.degree == 2:
            total += _laplacian_jump_sq(space, coeffs, f)
    for f in mesh.faces_of_part(BoundaryPart.DATA):
        total += _face_jump_sq(space, coeffs, f, rule, flux=problem.psi)
    return math.sqrt(max(gamma_v * total, 0.0))


def fe_jump_seminorm(space, coeffs, gamma, boundary_part=BoundaryPart.DATA,
                     include_laplacian=True):
    """Face-jump semi-norm of a finite element function by direct quadrature.

    Matrix-free twin of x^T S x with the corresponding jump-penalty matrix;
    boundary_part=None restricts to interior faces.
    """
    mesh = space.mesh
    rule = segment_rule(FACE_DATA_DEGREE)
    total = 0.0
    for f in mesh.interior_faces():
        total += _face_jump_sq(space, coeffs, f, rule)
        if space.degree == 2 and include_laplacian:
            total += _laplacian_jump_sq(space, coeffs, f)
    if boundary_part is not None:
        for f in mesh.faces_of_part(boundary_part):
            total += _face_jump_sq(space, coeffs, f, rule)
    return math.sqrt(max(gamma * total, 0.0))


def stab_seminorm_z(coeffs, stab_matrix):
    """|z_h| in the dual stabilizer: the matrix quadratic form."""
    return math.sqrt(max(float(coeffs @ (stab_matrix @ coeffs)), 0.0))


def eta(h, f_l2, stab_u, stab_z):
    """A posteriori quantity h ‖f‖ + |u - u_h|_sV + |z_h|_sW (constants = 1)."""
    return h * f_l2 + stab_u + stab_z


def error_report(solution, trial, test, blocks, problem):
    """All error quantities for one solve, for convergence tables."""
    if not problem.has_exact:
        raise ValueError("error report needs the exact solution")
    h = mesh_size(trial.mesh)
    stab_u = stab_seminorm_u(trial, solution.u, problem, blocks.gamma_v)
    stab_z = stab_seminorm_z(solution.z, blocks.s_w)
    return ErrorReport(
        h=h,
        dofs_v=trial.num_dofs,
        dofs_w=test.num_dofs,
        global_l2=l2_error(trial, solution.u, problem.exact_u, "global"),
        local_l2=l2_error(trial, solution.u, problem.exact_u, "local"),
        h1_semi=h1_semi_error(trial, solution.u, problem.exact_grad),
        stab_u=stab_u,
        stab_z=stab_z,
        eta=eta(h, l2_norm_field(trial.mesh, problem.f), stab_u, stab_z),
    )


def convergence_rate(values, hs):
    """Observed rates log(v_{i-1}/v_i) / log(h_{i-1}/h_i) between levels."""
    values = np.asarray(values, dtype=float)
    hs = np.asarray(hs, dtype=float)
    if len(values) != len(hs) or len(values) < 2:
        raise ValueError("need two equally long sequences")
    if np.any(values <= 0) or np.any(hs <= 0):
        raise ValueError("rates need positive values and mesh sizes")
    return list(np.log(values[:-1] / values[1:]) / np.log(hs[:-1] / hs[1:]))


def poincare_ratio(space, stab_matrix, stiffness, samples=100, seed=0):
    """max over random free vectors of h ‖∇v_h‖ / |v_h|_stab.

    Boundedness of this ratio across refinement levels is the computable
    shadow of the discrete Poincaré inequality; vectors with negligible
    stabilizer norm are skipped.
    """
    h = mesh_size(space.mesh)
    rng = np.random.default_rng(seed)
    free = space.free_dofs
    worst = 0.0
    for _ in range(samples):
        v = np.zeros(space.num_dofs)
        v[free] = rng.standard_normal(len(free))
        stab = math.sqrt(max(float(v @ (stab_matrix @ v)), 0.0))
        if stab < 1e-14:
            continue
        energy = math.sqrt(max(float(v @ (stiffness @ v)), 0.0))
        worst = max(worst, h * energy / stab)
    return worst


# ---------------------------------------------------------------------------
# continuous-dependence reference curves

@dataclass(frozen=True)
class XiCurve:
    """Modulus-of-continuity curve: C x^ς or C (|log x| + offset)^(-ς)."""

    kind: str           # "hoelder" | "logarithmic"
    scale: float        # C > 0
    exponent: float     # ς > 0, intended range (0, 1)
    offset: float = 1.0

    def __post_init__(self):
        if self.kind not in ("hoelder", "logarithmic"):
            raise ValueError(f"unknown curve kind {self.kind!r}")
        if self.scale <= 0 or self.exponent <= 0 or self.offset < 0:
            raise ValueError("need scale > 0, exponent > 0, offset >= 0")


def xi_eval(curve, x):
    """Evaluate a reference curve at x in (0, 1)."""
    if not 0.0 < x < 1.0:
        raise ValueError("reference curves are defined on (0, 1)")
    if curve.kind == "hoelder":
        return curve.scale * x ** curve.exponent
    return curve.scale * (abs(math.log(x)) + curve.offset) ** (-curve.exponent)


def xi_fit(xs, ys, kind="hoelder", offset=1.0):
    """Least-squares fit of (C, ς) on log-transformed data, for plot overlays."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if np.any(xs <= 0) or np.any(xs >= 1) or np.any(ys <= 0):
        raise ValueError("fit needs x in (0, 1) and positive values")
    if kind == "hoelder":
        design = np.log(xs)
    elif kind == "logarithmic":
        design = -np.log(np.abs(np.log(xs)) + offset)
    else:
        raise ValueError(f"unknown curve kind {kind!r}")
    coef = np.polyfit(design, np.log(ys), 1)
    exponent = min(max(float(coef[0]), 1e-6), 1.0 - 1e-6)
    return XiCurve(kind=kind, scale=float(np.exp(coef[1])), exponent=exponent,
                   offset=offset)
