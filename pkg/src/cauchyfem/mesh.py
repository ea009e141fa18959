"""Conforming triangulations of the unit square with a two-part boundary.

The boundary is split into a *data* part (where the Cauchy pair -- zero trace
and prescribed normal flux -- lives) and a *free* part carrying no data.  All
faces carry adjacency information so that jump terms across interior faces and
single-sided traces on boundary faces can be assembled.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import IntEnum

import numpy as np

GEOM_TOL = 1e-12

#: face_part codes for faces that are not (yet) assigned to a boundary part
INTERIOR = -1
UNTAGGED = -2


class BoundaryPart(IntEnum):
    """Boundary classification: faces with Cauchy data vs. data-free faces."""

    DATA = 0
    FREE = 1


@dataclass(frozen=True)
class Mesh:
    """Triangle mesh with face adjacency.

    vertices       (nv, 2) float, coordinates
    triangles      (nt, 3) int, counter-clockwise vertex triples
    face_vertices  (nf, 2) int, endpoints ordered along the left triangle's
                   boundary loop, so the face normal points out of it
    face_tris      (nf, 2) int, (left, right) triangle; right = -1 on the
                   boundary
    tri_faces      (nt, 3) int, tri_faces[t, i] is the face opposite local
                   vertex i of triangle t
    face_part      (nf,) int8, INTERIOR / UNTAGGED / BoundaryPart value
    """

    vertices: np.ndarray
    triangles: np.ndarray
    face_vertices: np.ndarray
    face_tris: np.ndarray
    tri_faces: np.ndarray
    face_part: np.ndarray

    @property
    def num_vertices(self):
        return len(self.vertices)

    @property
    def num_triangles(self):
        return len(self.triangles)

    @property
    def num_faces(self):
        return len(self.face_vertices)

    @property
    def is_tagged(self):
        return not np.any(self.face_part == UNTAGGED)

    def triangle_points(self, t):
        return self.vertices[self.triangles[t]]

    def signed_areas(self):
        p = self.vertices[self.triangles]
        d1 = p[:, 1] - p[:, 0]
        d2 = p[:, 2] - p[:, 0]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    def boundary_faces(self):
        return np.flatnonzero(self.face_tris[:, 1] < 0)

    def interior_faces(self):
        return np.flatnonzero(self.face_tris[:, 1] >= 0)

    def faces_of_part(self, part):
        if not self.is_tagged:
            raise ValueError("mesh boundary has not been tagged")
        return np.flatnonzero(self.face_part == int(part))

    def face_lengths(self):
        d = self.vertices[self.face_vertices[:, 1]] - self.vertices[self.face_vertices[:, 0]]
        return np.hypot(d[:, 0], d[:, 1])

    def min_angle_deg(self):
        """Smallest interior angle over all triangles, in degrees."""
        p = self.vertices[self.triangles]
        worst = np.inf
        for i in range(3):
            a = p[:, (i + 1) % 3] - p[:, i]
            b = p[:, (i + 2) % 3] - p[:, i]
            cosang = (a * b).sum(1) / (np.hypot(a[:, 0], a[:, 1]) * np.hypot(b[:, 0], b[:, 1]))
            worst = min(worst, np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0))).min())
        return worst


def from_triangles(vertices, triangles):
    """Build a Mesh from vertex coordinates and CCW vertex triples.

    Faces are enumerated in the order they are first met when walking the
    triangles; the first triangle touching a face becomes its left neighbor.
    Raises ValueError on non-positive triangle areas or non-manifold edges.
    """
    vertices = np.asarray(vertices, dtype=float)
    triangles = np.asarray(triangles, dtype=np.int64)

    p = vertices[triangles]
    d1 = p[:, 1] - p[:, 0]
    d2 = p[:, 2] - p[:, 0]
    areas = 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
    bad = np.flatnonzero(areas <= 0)
    if len(bad):
        raise ValueError(f"triangle {bad[0]} has non-positive area {areas[bad[0]]:g}")

    face_of = {}
    face_vertices = []
    face_tris = []
    tri_faces = np.empty((len(triangles), 3), dtype=np.int64)
    for t, (a, b, c) in enumerate(triangles):
        # edges opposite local vertices 0, 1, 2, each in CCW loop order
        for local, (u, v) in enumerate(((b, c), (c, a), (a, b))):
            key = (u, v) if u < v else (v, u)
            idx = face_of.get(key)
            if idx is None:
                idx = len(face_vertices)
                face_of[key] = idx
                face_vertices.append((u, v))
                face_tris.append([t, -1])
            else:
                if face_tris[idx][1] != -1:
                    raise ValueError(f"edge {key} is shared by more than two triangles")
                face_tris[idx][1] = t
            tri_faces[t, local] = idx

    face_tris = np.asarray(face_tris, dtype=np.int64)
    face_part = np.where(face_tris[:, 1] < 0, UNTAGGED, INTERIOR).astype(np.int8)
    return Mesh(
        vertices=vertices,
        triangles=triangles,
        face_vertices=np.asarray(face_vertices, dtype=np.int64),
        face_tris=face_tris,
        tri_faces=tri_faces,
        face_part=face_part,
    )


def build_structured(n, jitter=0.0, seed=0):
    """n-by-n grid of the unit square, each cell split along its (+1,+1) diagonal.

    Interior vertices are displaced by jitter/n in a pseudo-random direction
    drawn per vertex index (deterministic for a given seed); boundary vertices
    stay put, so boundary faces remain on the square's edges.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= jitter < 0.3:
        raise ValueError("jitter must lie in [0, 0.3)")

    side = np.linspace(0.0, 1.0, n + 1)
    xx, yy = np.meshgrid(side, side, indexing="xy")
    vertices = np.column_stack([xx.ravel(), yy.ravel()])

    if jitter > 0.0:
        rng = np.random.default_rng(seed)
        angles = rng.uniform(0.0, 2.0 * np.pi, len(vertices))
        ii, jj = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="xy")
        interior = ((ii > 0) & (ii < n) & (jj > 0) & (jj < n)).ravel()
        step = jitter / n
        vertices[interior, 0] += step * np.cos(angles[interior])
        vertices[interior, 1] += step * np.sin(angles[interior])

    def vid(i, j):
        return j * (n + 1) + i

    triangles = []
    for j in range(n):
        for i in range(n):
            p00, p10 = vid(i, j), vid(i + 1, j)
            p11, p01 = vid(i + 1, j + 1), vid(i, j + 1)
            triangles.append((p00, p10, p11))
            triangles.append((p00, p11, p01))
    return from_triangles(vertices, triangles)


_SIDES = {
    "bottom": lambda x, y: abs(y) < GEOM_TOL,
    "right": lambda x, y: abs(x - 1.0) < GEOM_TOL,
    "top": lambda x, y: abs(y - 1.0) < GEOM_TOL,
    "left": lambda x, y: abs(x) < GEOM_TOL,
}


def tag_boundary(mesh, data_sides=("bottom", "right")):
    """Assign each boundary face to BoundaryPart.DATA or .FREE by its midpoint.

    The default split puts the Cauchy data on bottom and right.  A face whose
    midpoint lies on none of the four sides of the unit square is an error.
    """
    part = mesh.face_part.copy()
    for f in mesh.boundary_faces():
        a, b = mesh.face_vertices[f]
        mx, my = 0.5 * (mesh.vertices[a] + mesh.vertices[b])
        for side, on_side in _SIDES.items():
            if on_side(mx, my):
                part[f] = BoundaryPart.DATA if side in data_sides else BoundaryPart.FREE
                break
        else:
            raise ValueError(f"boundary face {f} with midpoint ({mx:g}, {my:g}) "
                             "lies on no side of the unit square")
    return replace(mesh, face_part=part)


def unit_square_mesh(n, jitter=0.0, seed=0, data_sides=("bottom", "right")):
    """build_structured followed by tag_boundary."""
    return tag_boundary(build_structured(n, jitter, seed), data_sides)


def face_geometry(mesh, face):
    """Return (length, unit normal, (left, right)) for a face.

    The normal points out of the left triangle; on the boundary that is the
    outward normal of the domain.
    """
    a, b = mesh.face_vertices[face]
    t = mesh.vertices[b] - mesh.vertices[a]
    length = float(np.hypot(t[0], t[1]))
    normal = np.array([t[1], -t[0]]) / length
    left, right = mesh.face_tris[face]
    return length, normal, (int(left), int(right))


def mesh_size(mesh):
    """Largest triangle diameter, i.e. the longest edge in the mesh."""
    if mesh.num_triangles == 0:
        raise ValueError("empty mesh")
    return float(mesh.face_lengths().max())
