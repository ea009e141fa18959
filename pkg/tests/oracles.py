"""Independent dense brute-force oracles for the assembled operators.

Everything here deliberately avoids the package's assembly path: basis
functions are evaluated through global barycentric coordinates obtained by
inverting the vertex matrix of each triangle (no reference-element mapping),
quadrature rules use a different collapsed-square construction, and matrices
are accumulated entry by entry into dense arrays.
"""

import numpy as np

from cauchyfem.mesh import BoundaryPart


def oracle_triangle_rule(degree):
    """Collapsed rule on the reference triangle via (x, y) = (u(1-v), v)."""
    mu = int(np.ceil((degree + 1) / 2))
    mv = int(np.ceil((degree + 2) / 2))
    xu, wu = np.polynomial.legendre.leggauss(mu)
    xv, wv = np.polynomial.legendre.leggauss(mv)
    xu, wu = 0.5 * (xu + 1.0), 0.5 * wu
    xv, wv = 0.5 * (xv + 1.0), 0.5 * wv
    pts, wts = [], []
    for u, a in zip(xu, wu):
        for v, b in zip(xv, wv):
            pts.append((u * (1.0 - v), v))
            wts.append(a * b * (1.0 - v))
    return np.array(pts), np.array(wts)


def oracle_segment_rule(degree):
    x, w = np.polynomial.legendre.leggauss(max(2, degree))  # more points than needed
    return 0.5 * (x + 1.0), 0.5 * w


def _bary_system(tri_pts):
    """Barycentric coordinates as affine functions of (x, y).

    Returns (3, 3) coefficients: lambda_i(x, y) = c[i, 0] + c[i, 1] x + c[i, 2] y.
    """
    m = np.vstack([np.ones(3), tri_pts[:, 0], tri_pts[:, 1]])
    return np.linalg.inv(m)


def oracle_basis(tri_pts, degree, xy):
    """(values, grads, laplacians) of the local basis at physical points."""
    coef = _bary_system(tri_pts)
    xy = np.atleast_2d(xy)
    ones = np.ones(len(xy))
    lam = np.stack([coef[i, 0] * ones + coef[i, 1] * xy[:, 0] + coef[i, 2] * xy[:, 1]
                    for i in range(3)], axis=1)
    dlam = coef[:, 1:3]
    if degree == 1:
        vals = lam
        grads = np.broadcast_to(dlam, (len(xy), 3, 2)).copy()
        laps = np.zeros(3)
        return vals, grads, laps
    vals = np.empty((len(xy), 6))
    grads = np.empty((len(xy), 6, 2))
    laps = np.empty(6)
    for i in range(3):
        vals[:, i] = lam[:, i] * (2.0 * lam[:, i] - 1.0)
        grads[:, i] = (4.0 * lam[:, i, None] - 1.0) * dlam[i]
        laps[i] = 4.0 * dlam[i] @ dlam[i]
    for m, (j, k) in enumerate(((1, 2), (0, 2), (0, 1))):
        vals[:, 3 + m] = 4.0 * lam[:, j] * lam[:, k]
        grads[:, 3 + m] = 4.0 * (lam[:, k, None] * dlam[j] + lam[:, j, None] * dlam[k])
        laps[3 + m] = 8.0 * dlam[j] @ dlam[k]
    return vals, grads, laps


def _tri_area(tri_pts):
    d1 = tri_pts[1] - tri_pts[0]
    d2 = tri_pts[2] - tri_pts[0]
    return 0.5 * (d1[0] * d2[1] - d1[1] * d2[0])


def _tri_phys_points(tri_pts, ref_pts):
    return (tri_pts[0]
            + np.outer(ref_pts[:, 0], tri_pts[1] - tri_pts[0])
            + np.outer(ref_pts[:, 1], tri_pts[2] - tri_pts[0]))


def dense_stiffness(trial, test):
    mesh = trial.mesh
    ref_pts, ref_wts = oracle_triangle_rule(8)
    out = np.zeros((test.num_dofs, trial.num_dofs))
    for t in range(mesh.num_triangles):
        pts = mesh.triangle_points(t)
        scale = 2.0 * _tri_area(pts)  # d(phys)/d(ref)
        xy = _tri_phys_points(pts, ref_pts)
        _, gt, _ = oracle_basis(pts, trial.degree, xy)
        _, ge, _ = oracle_basis(pts, test.degree, xy)
        for q, w in enumerate(ref_wts):
            for i, gi in enumerate(test.cell_dofs[t]):
                for j, gj in enumerate(trial.cell_dofs[t]):
                    out[gi, gj] += w * scale * (ge[q, i] @ gt[q, j])
    return out


def _face_data(mesh, f, spts):
    a, b = mesh.face_vertices[f]
    pa, pb = mesh.vertices[a], mesh.vertices[b]
    tang = pb - pa
    length = float(np.hypot(tang[0], tang[1]))
    normal = np.array([tang[1], -tang[0]]) / length
    return length, normal, pa + np.outer(spts, tang)


def dense_face_jumps(space, boundary_part, gamma):
    mesh = space.mesh
    spts, swts = oracle_segment_rule(9)
    out = np.zeros((space.num_dofs, space.num_dofs))
    faces = list(mesh.interior_faces()) + list(mesh.faces_of_part(boundary_part))
    for f in faces:
        length, normal, xy = _face_data(mesh, f, spts)
        lt, rt = mesh.face_tris[f]
        sides = [(lt, 1.0)] + ([(rt, -1.0)] if rt >= 0 else [])
        dofs, dn, laps = [], [], []
        for t, sign in sides:
            pts = mesh.triangle_points(t)
            _, grads, lap = oracle_basis(pts, space.degree, xy)
            dofs.extend(space.cell_dofs[t])
            dn.append(sign * grads @ normal)
            laps.append(sign * lap)
        dn = np.hstack(dn)
        laps = np.concatenate(laps)
        for q, w in enumerate(swts):
            for i, gi in enumerate(dofs):
                for j, gj in enumerate(dofs):
                    out[gi, gj] += gamma * w * length * length * dn[q, i] * dn[q, j]
        if space.degree == 2 and rt >= 0:
            for i, gi in enumerate(dofs):
                for j, gj in enumerate(dofs):
                    out[gi, gj] += gamma * length ** 4 * laps[i] * laps[j]
    return out


def dense_dual_stab(space, variant, gamma):
    if variant == "galerkin":
        return dense_stiffness(space, space)
    return dense_face_jumps(space, BoundaryPart.FREE, gamma)


def dense_load(space, problem):
    mesh = space.mesh
    ref_pts, ref_wts = oracle_triangle_rule(8)
    out = np.zeros(space.num_dofs)
    for t in range(mesh.num_triangles):
        pts = mesh.triangle_points(t)
        scale = 2.0 * _tri_area(pts)
        xy = _tri_phys_points(pts, ref_pts)
        vals, _, _ = oracle_basis(pts, space.degree, xy)
        for q, w in enumerate(ref_wts):
            fq = problem.f(xy[q, 0], xy[q, 1])
            for i, gi in enumerate(space.cell_dofs[t]):
                out[gi] += w * scale * fq * vals[q, i]
    spts, swts = oracle_segment_rule(9)
    for f in mesh.faces_of_part(BoundaryPart.DATA):
        length, normal, xy = _face_data(mesh, f, spts)
        lt = mesh.face_tris[f][0]
        pts = mesh.triangle_points(lt)
        vals, _, _ = oracle_basis(pts, space.degree, xy)
        for q, w in enumerate(swts):
            psi = problem.psi(xy[q, 0], xy[q, 1], normal[0], normal[1])
            for i, gi in enumerate(space.cell_dofs[lt]):
                out[gi] += w * length * psi * vals[q, i]
    return out


def dense_data_term(space, problem, gamma):
    mesh = space.mesh
    spts, swts = oracle_segment_rule(9)
    out = np.zeros(space.num_dofs)
    for f in mesh.faces_of_part(BoundaryPart.DATA):
        length, normal, xy = _face_data(mesh, f, spts)
        lt = mesh.face_tris[f][0]
        pts = mesh.triangle_points(lt)
        _, grads, _ = oracle_basis(pts, space.degree, xy)
        for q, w in enumerate(swts):
            psi = problem.psi(xy[q, 0], xy[q, 1], normal[0], normal[1])
            for i, gi in enumerate(space.cell_dofs[lt]):
                out[gi] += gamma * w * length * length * psi * (grads[q, i] @ normal)
    return out
