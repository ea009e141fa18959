"""Assembly of the primal-dual system blocks.

The discrete problem couples a primal unknown u_h (trial space V, zero trace
on the data boundary) with a dual variable z_h (space W, zero trace on the
free boundary):

    a(u_h, w) - s_W(z_h, w) = l(w)          for all w in W_h
    a(v, z_h) + s_V(u_h, v) = g(v)          for all v in V_h

with a(u, w) = ∫ ∇u·∇w, the gradient-jump penalties s_V (interior faces plus
the data boundary) and s_W (Galerkin energy, or jumps over interior faces plus
the free boundary), l(w) = ∫ f w + ∫_data ψ w, and the data functional
g(v) = γ_V Σ_data ∫ h_F ψ ∂_n v.  For quadratics both penalties gain an
h_F³-weighted jump of the elementwise Laplacian on interior faces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.io
import scipy.sparse as sp

from .mesh import BoundaryPart
from .spaces import (affine_map, segment_rule, shape_grads, shape_hessians,
                     shape_values, triangle_rule)

#: volume rule shared by loads and error integrals (exact for quartic data
#: against quadratic basis functions)
VOLUME_DEGREE = 8
#: face rule for integrals involving boundary data
FACE_DATA_DEGREE = 9

SW_VARIANTS = ("galerkin", "jump")


@dataclass(frozen=True)
class BlockSystem:
    """Assembled operators over the full (unconstrained) DOF sets.

    s_v   (n_V, n_V) primal stabilizer, symmetric PSD, γ_V folded in
    a     (n_W, n_V) stiffness, rows test against W basis functions
    s_w   (n_W, n_W) dual stabilizer, symmetric PSD (γ_W folded into the
          jump variant; the Galerkin variant is the plain energy matrix)
    load  (n_W,) right side l
    data  (n_V,) right side g built from the flux data
    """

    s_v: sp.csr_matrix
    a: sp.csr_matrix
    s_w: sp.csr_matrix
    load: np.ndarray
    data: np.ndarray
    gamma_v: float
    gamma_w: float
    variant: str


def _physical_points(tri_points, ref_points):
    jac, det, jinv = affine_map(tri_points)
    return tri_points[0] + ref_points @ jac.T, det, jinv


def assemble_stiffness(trial, test):
    """Stiffness matrix A[i, j] = ∫ ∇φ_j^trial · ∇φ_i^test."""
    if trial.mesh is not test.mesh:
        raise ValueError("trial and test spaces must share one mesh")
    mesh = trial.mesh
    rule = triangle_rule(max(2 * (max(trial.degree, test.degree) - 1), 1))
    g_tr = shape_grads(trial.degree, rule.points)
    g_te = shape_grads(test.degree, rule.points)

    rows, cols, vals = [], [], []
    for t in range(mesh.num_triangles):
        _, det, jinv = affine_map(mesh.triangle_points(t))
        pt = g_tr @ jinv   # physical gradients, (nq, nd, 2)
        pe = g_te @ jinv
        local = np.einsum("qid,qjd,q->ij", pe, pt, rule.weights) * det
        dt = trial.cell_dofs[t]
        de = test.cell_dofs[t]
        rows.append(np.repeat(de, len(dt)))
        cols.append(np.tile(dt, len(de)))
        vals.append(local.ravel())
    return sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(test.num_dofs, trial.num_dofs)).tocsr()


def _face_frame(mesh, f, rule):
    a, b = mesh.face_vertices[f]
    pa, pb = mesh.vertices[a], mesh.vertices[b]
    tang = pb - pa
    length = float(np.hypot(tang[0], tang[1]))
    normal = np.array([tang[1], -tang[0]]) / length
    points = pa + rule.points[:, None] * tang
    return length, normal, points


def _trace_normal_derivs(space, t, phys_points, normal):
    """∂φ/∂n of triangle t's basis functions at physical points on a face."""
    pts = space.mesh.triangle_points(t)
    _, _, jinv = affine_map(pts)
    ref = (phys_points - pts[0]) @ jinv.T
    return (shape_grads(space.degree, ref) @ jinv) @ normal


def _trace_values(space, t, phys_points):
    pts = space.mesh.triangle_points(t)
    _, _, jinv = affine_map(pts)
    ref = (phys_points - pts[0]) @ jinv.T
    return shape_values(space.degree, ref)


def _cell_laplacians(space, t):
    """Elementwise Laplacian of each basis function (constant for degree <= 2)."""
    _, _, jinv = affine_map(space.mesh.triangle_points(t))
    hess = shape_hessians(space.degree)
    phys = np.einsum("ca,ncd,db->nab", jinv, hess, jinv)
    return phys[:, 0, 0] + phys[:, 1, 1]


def assemble_face_jumps(space, boundary_part, gamma):
    """γ-weighted jump penalty Σ_F ∫ h_F [∂_n φ_j][∂_n φ_i] over interior faces
    plus single-sided traces on the given boundary part.

    For degree 2 the interior faces additionally carry
    γ Σ_F ∫ h_F³ [Δφ_j][Δφ_i].
    """
    mesh = space.mesh
    rule = segment_rule(max(2 * (space.degree - 1), 1))
    faces = np.concatenate([mesh.interior_faces(), mesh.faces_of_part(boundary_part)])

    rows, cols, vals = [], [], []
    for f in faces:
        length, normal, points = _face_frame(mesh, f, rule)
        lt, rt = mesh.face_tris[f]
        if rt >= 0:
            dofs = np.concatenate([space.cell_dofs[lt], space.cell_dofs[rt]])
            jumps = np.hstack([_trace_normal_derivs(space, lt, points, normal),
                               -_trace_normal_derivs(space, rt, points, normal)])
        else:
            dofs = space.cell_dofs[lt]
            jumps = _trace_normal_derivs(space, lt, points, normal)
        # ∫_F h_F [..][..] ds = L² Σ_q w_q jump_i jump_j
        local = length ** 2 * np.einsum("q,qi,qj->ij", rule.weights, jumps, jumps)
        if space.degree == 2 and rt >= 0:
            lap = np.concatenate([_cell_laplacians(space, lt),
                                  -_cell_laplacians(space, rt)])
            local += length ** 4 * np.outer(lap, lap)
        rows.append(np.repeat(dofs, len(dofs)))
        cols.append(np.tile(dofs, len(dofs)))
        vals.append(gamma * local.ravel())
    return sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(space.num_dofs, space.num_dofs)).tocsr()


def assemble_primal_stab(space, gamma_v):
    """Primal stabilizer s_V: jumps over interior faces and the data boundary."""
    return assemble_face_jumps(space, BoundaryPart.DATA, gamma_v)


def assemble_dual_stab(space, variant, gamma_w):
    """Dual stabilizer s_W: either the Galerkin energy a(z, w) itself (no γ)
    or γ_W-weighted jumps over interior faces and the free boundary."""
    if variant == "galerkin":
        return assemble_stiffness(space, space)
    if variant == "jump":
        return assemble_face_jumps(space, BoundaryPart.FREE, gamma_w)
    raise ValueError(f"unknown dual stabilizer variant {variant!r}; "
                     f"expected one of {SW_VARIANTS}")


def assemble_load(space, problem):
    """Load vector l[i] = ∫ f φ_i + Σ_data ∫ ψ φ_i."""
    mesh = space.mesh
    rule = triangle_rule(VOLUME_DEGREE)
    vals = shape_values(space.degree, rule.points)
    out = np.zeros(space.num_dofs)
    for t in range(mesh.num_triangles):
        phys, det, _ = _physical_points(mesh.triangle_points(t), rule.points)
        fq = problem.f(phys[:, 0], phys[:, 1])
        out[space.cell_dofs[t]] += det * ((rule.weights * fq) @ vals)

    frule = segment_rule(FACE_DATA_DEGREE)
    for f in mesh.faces_of_part(BoundaryPart.DATA):
        length, normal, points = _face_frame(mesh, f, frule)
        lt = mesh.face_tris[f][0]
        psi_q = problem.psi(points[:, 0], points[:, 1], normal[0], normal[1])
        trace = _trace_values(space, lt, points)
        out[space.cell_dofs[lt]] += length * ((frule.weights * psi_q) @ trace)
    return out


def assemble_data_term(space, problem, gamma_v):
    """Data functional g[i] = γ_V Σ_data ∫ h_F ψ ∂_n φ_i.

    This is the primal stabilizer applied to the (smooth) exact solution: its
    interior gradient and Laplacian jumps vanish, leaving only the flux data
    on the data boundary.
    """
    mesh = space.mesh
    rule = segment_rule(FACE_DATA_DEGREE)
    out = np.zeros(space.num_dofs)
    for f in mesh.faces_of_part(BoundaryPart.DATA):
        length, normal, points = _face_frame(mesh, f, rule)
        lt = mesh.face_tris[f][0]
        psi_q = problem.psi(points[:, 0], points[:, 1], normal[0], normal[1])
        dn = _trace_normal_derivs(space, lt, points, normal)
        out[space.cell_dofs[lt]] += gamma_v * length ** 2 * ((rule.weights * psi_q) @ dn)
    return out


def assemble_blocks(trial, test, problem, gamma_v, gamma_w, variant="jump"):
    """Assemble every operator and functional of the coupled system."""
    return BlockSystem(
        s_v=assemble_primal_stab(trial, gamma_v),
        a=assemble_stiffness(trial, test),
        s_w=assemble_dual_stab(test, variant, gamma_w),
        load=assemble_load(test, problem),
        data=assemble_data_term(trial, problem, gamma_v),
        gamma_v=gamma_v,
        gamma_w=gamma_w,
        variant=variant,
    )


def dump_matrix(matrix, path):
    """Matrix-market text dump, for diffing against external oracles."""
    scipy.io.mmwrite(str(path), sp.coo_matrix(matrix))
