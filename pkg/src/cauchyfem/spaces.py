"""Continuous Lagrange spaces of degree 1 and 2, plus quadrature rules.

Degrees of freedom sit at vertices (degree 1) or at vertices followed by face
midpoints (degree 2); the enumeration is fixed by the mesh ordering so that
assembled matrices are reproducible.  Dirichlet constraints pin all DOFs on
the closure of one boundary part to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .mesh import BoundaryPart, Mesh

# gradients of the barycentric coordinates (1-x-y, x, y) on the reference triangle
_DLAMBDA = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])
# local edge m (opposite vertex m) joins the other two vertices
_EDGE_PAIRS = ((1, 2), (0, 2), (0, 1))

MAX_TRIANGLE_DEGREE = 8
MAX_SEGMENT_DEGREE = 9


@dataclass(frozen=True)
class QuadratureRule:
    """Points and weights on the reference triangle or the unit segment."""

    points: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class FeSpace:
    """Scalar Lagrange space on a mesh with optional one-sided constraints."""

    mesh: Mesh
    degree: int
    dof_coords: np.ndarray      # (ndof, 2)
    cell_dofs: np.ndarray       # (nt, 3) or (nt, 6)
    dirichlet_dofs: np.ndarray  # sorted global indices constrained to zero
    constraint_side: Optional[BoundaryPart]

    @property
    def num_dofs(self):
        return len(self.dof_coords)

    @property
    def free_dofs(self):
        mask = np.ones(self.num_dofs, dtype=bool)
        mask[self.dirichlet_dofs] = False
        return np.flatnonzero(mask)


def build_space(mesh, degree, constraint_side=None):
    """Enumerate DOFs (vertices first, then faces for degree 2) and constraints.

    Constrained DOFs are those on the closure of the requested boundary part:
    the endpoints of every tagged face plus, for degree 2, its midpoint DOF.
    """
    if degree not in (1, 2):
        raise ValueError("degree must be 1 or 2")
    if constraint_side is not None and not mesh.is_tagged:
        raise ValueError("mesh boundary must be tagged before constraining a space")

    if degree == 1:
        dof_coords = mesh.vertices.copy()
        cell_dofs = mesh.triangles.copy()
    else:
        midpoints = 0.5 * (mesh.vertices[mesh.face_vertices[:, 0]]
                           + mesh.vertices[mesh.face_vertices[:, 1]])
        dof_coords = np.vstack([mesh.vertices, midpoints])
        cell_dofs = np.hstack([mesh.triangles, mesh.num_vertices + mesh.tri_faces])

    if constraint_side is None:
        dirichlet = np.empty(0, dtype=np.int64)
    else:
        pinned = set()
        for f in mesh.faces_of_part(constraint_side):
            a, b = mesh.face_vertices[f]
            pinned.update((int(a), int(b)))
            if degree == 2:
                pinned.add(mesh.num_vertices + int(f))
        dirichlet = np.array(sorted(pinned), dtype=np.int64)

    return FeSpace(mesh=mesh, degree=degree, dof_coords=dof_coords,
                   cell_dofs=cell_dofs, dirichlet_dofs=dirichlet,
                   constraint_side=constraint_side)


# ---------------------------------------------------------------------------
# reference basis

def shape_values(degree, points):
    """Basis values at reference points; shape (npts, ndof_local)."""
    pts = np.atleast_2d(points)
    lam = np.column_stack([1.0 - pts[:, 0] - pts[:, 1], pts[:, 0], pts[:, 1]])
    if degree == 1:
        return lam
    vals = np.empty((len(pts), 6))
    vals[:, :3] = lam * (2.0 * lam - 1.0)
    for m, (j, k) in enumerate(_EDGE_PAIRS):
        vals[:, 3 + m] = 4.0 * lam[:, j] * lam[:, k]
    return vals


def shape_grads(degree, points):
    """Reference gradients at reference points; shape (npts, ndof_local, 2)."""
    pts = np.atleast_2d(points)
    lam = np.column_stack([1.0 - pts[:, 0] - pts[:, 1], pts[:, 0], pts[:, 1]])
    if degree == 1:
        return np.broadcast_to(_DLAMBDA, (len(pts), 3, 2)).copy()
    grads = np.empty((len(pts), 6, 2))
    for i in range(3):
        grads[:, i] = (4.0 * lam[:, i, None] - 1.0) * _DLAMBDA[i]
    for m, (j, k) in enumerate(_EDGE_PAIRS):
        grads[:, 3 + m] = 4.0 * (lam[:, k, None] * _DLAMBDA[j]
                                 + lam[:, j, None] * _DLAMBDA[k])
    return grads


def shape_hessians(degree):
    """Reference Hessians; constant for degree <= 2, shape (ndof_local, 2, 2)."""
    if degree == 1:
        return np.zeros((3, 2, 2))
    hess = np.empty((6, 2, 2))
    for i in range(3):
        hess[i] = 4.0 * np.outer(_DLAMBDA[i], _DLAMBDA[i])
    for m, (j, k) in enumerate(_EDGE_PAIRS):
        hess[3 + m] = 4.0 * (np.outer(_DLAMBDA[j], _DLAMBDA[k])
                             + np.outer(_DLAMBDA[k], _DLAMBDA[j]))
    return hess


def shape_eval(degree, point):
    """(values, gradients) of the local basis at one reference point."""
    pt = np.asarray(point, dtype=float).reshape(1, 2)
    return shape_values(degree, pt)[0], shape_grads(degree, pt)[0]


def affine_map(tri_points):
    """Jacobian of the reference-to-physical map x = p0 + J xi.

    Returns (J, det J, J^{-1}); row-vector gradients transform as g_ref @ Jinv.
    """
    j00 = tri_points[1, 0] - tri_points[0, 0]
    j10 = tri_points[1, 1] - tri_points[0, 1]
    j01 = tri_points[2, 0] - tri_points[0, 0]
    j11 = tri_points[2, 1] - tri_points[0, 1]
    det = j00 * j11 - j01 * j10
    jac = np.array([[j00, j01], [j10, j11]])
    jinv = np.array([[j11, -j01], [-j10, j00]]) / det
    return jac, det, jinv


# ---------------------------------------------------------------------------
# quadrature

def segment_rule(degree):
    """Gauss-Legendre rule on [0, 1] exact for polynomials up to `degree`."""
    if degree > MAX_SEGMENT_DEGREE:
        raise ValueError(f"segment rules support degree <= {MAX_SEGMENT_DEGREE}")
    npts = max(1, math.ceil((degree + 1) / 2))
    x, w = np.polynomial.legendre.leggauss(npts)
    return QuadratureRule(points=0.5 * (x + 1.0), weights=0.5 * w)


def triangle_rule(degree):
    """Rule on the reference triangle exact for polynomials up to `degree`.

    Degree 1 is the one-point centroid rule; higher degrees use a collapsed
    tensor Gauss rule on the square (x, y) = (s, t(1-s)), whose Jacobian 1-s
    raises the s-degree by one.
    """
    if degree > MAX_TRIANGLE_DEGREE:
        raise ValueError(f"triangle rules support degree <= {MAX_TRIANGLE_DEGREE}")
    if degree <= 1:
        return QuadratureRule(points=np.array([[1.0 / 3.0, 1.0 / 3.0]]),
                              weights=np.array([0.5]))
    ns = math.ceil((degree + 2) / 2)
    nt = math.ceil((degree + 1) / 2)
    xs, ws = np.polynomial.legendre.leggauss(ns)
    xt, wt = np.polynomial.legendre.leggauss(nt)
    xs, ws = 0.5 * (xs + 1.0), 0.5 * ws
    xt, wt = 0.5 * (xt + 1.0), 0.5 * wt
    pts, wts = [], []
    for s, w1 in zip(xs, ws):
        for t, w2 in zip(xt, wt):
            pts.append((s, t * (1.0 - s)))
            wts.append(w1 * w2 * (1.0 - s))
    return QuadratureRule(points=np.array(pts), weights=np.array(wts))


# ---------------------------------------------------------------------------
# interpolation and point evaluation

def nodal_interpolant(space, field):
    """Coefficients of the pointwise interpolant: field values at DOF nodes."""
    coords = space.dof_coords
    return np.asarray(field(coords[:, 0], coords[:, 1]), dtype=float)


def locate_point(mesh, x, y, tol=1e-10):
    """Brute-force point location: (triangle, reference coords).  Test-grade."""
    target = np.array([x, y])
    for t in range(mesh.num_triangles):
        pts = mesh.triangle_points(t)
        _, _, jinv = affine_map(pts)
        xi = (target - pts[0]) @ jinv.T
        if xi[0] >= -tol and xi[1] >= -tol and xi[0] + xi[1] <= 1.0 + tol:
            return t, xi
    raise ValueError(f"point ({x:g}, {y:g}) lies in no triangle")


def eval_fe(space, coeffs, x, y):
    """Value of the finite element function with given coefficients at (x, y)."""
    t, xi = locate_point(space.mesh, x, y)
    vals = shape_values(space.degree, xi.reshape(1, 2))[0]
    return float(coeffs[space.cell_dofs[t]] @ vals)
