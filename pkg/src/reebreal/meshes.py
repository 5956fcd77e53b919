"""Small closed triangulated surfaces used by tests and the CLI demos."""

from __future__ import annotations

import math
from typing import Dict, Iterable, List, Sequence, Tuple

from .meshreeb import TriMesh


def tilted_height(points: Sequence[Sequence[float]], direction=(0.0, 0.0, 1.0)) -> Tuple[float, ...]:
    d = [float(x) for x in direction]
    norm = math.sqrt(sum(x * x for x in d))
    return tuple(sum(p[k] * d[k] for k in range(3)) / norm for p in points)


def octahedron(direction=(0.0, 0.0, 1.0)) -> TriMesh:
    pts = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    tris = []
    for a in (0, 1):
        for b in (2, 3):
            for c in (4, 5):
                t = (a, b, c)
                # outward orientation: sign of the determinant of the three corners
                det = (pts[a][0] * (pts[b][1] * pts[c][2] - pts[b][2] * pts[c][1])
                       - pts[a][1] * (pts[b][0] * pts[c][2] - pts[b][2] * pts[c][0])
                       + pts[a][2] * (pts[b][0] * pts[c][1] - pts[b][1] * pts[c][0]))
                tris.append(t if det > 0 else (a, c, b))
    pts_f = tuple(tuple(float(x) for x in p) for p in pts)
    return TriMesh(pts_f, tuple(tris), tilted_height(pts_f, direction))


def _grid_faces(nu: int, nv: int, vid) -> List[Tuple[int, int, int]]:
    tris = []
    for i in range(nu):
        for j in range(nv):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            tris.append((a, b, c))
            tris.append((a, c, d))
    return tris


def torus(nu: int = 8, nv: int = 8, major: float = 2.0, minor: float = 1.0,
          direction=(0.05, 0.02, 1.0)) -> TriMesh:
    """Torus standing upright (axis horizontal), height along ``direction``."""

    def vid(i: int, j: int) -> int:
        return (i % nu) * nv + (j % nv)

    pts = []
    for i in range(nu):
        u = 2 * math.pi * i / nu
        for j in range(nv):
            v = 2 * math.pi * j / nv
            rho = major + minor * math.cos(v)
            pts.append((rho * math.cos(u), minor * math.sin(v), rho * math.sin(u)))
    pts_t = tuple(pts)
    return TriMesh(pts_t, tuple(_grid_faces(nu, nv, vid)), tilted_height(pts_t, direction))


def klein_bottle(nu: int = 8, nv: int = 8, direction=(0.05, 0.02, 1.0)) -> TriMesh:
    """Square grid with ``(i + nu, j) ~ (i, -j)``, placed by the figure-8 immersion."""

    def vid(i: int, j: int) -> int:
        while i >= nu:
            i -= nu
            j = -j
        return i * nv + (j % nv)

    pts = []
    for i in range(nu):
        u = 2 * math.pi * i / nu
        for j in range(nv):
            v = 2 * math.pi * j / nv
            w = 2.0 + math.cos(u / 2) * math.sin(v) - math.sin(u / 2) * math.sin(2 * v)
            pts.append((w * math.cos(u), w * math.sin(u),
                        math.sin(u / 2) * math.sin(v) + math.cos(u / 2) * math.sin(2 * v)))
    pts_t = tuple(pts)
    return TriMesh(pts_t, tuple(_grid_faces(nu, nv, vid)), tilted_height(pts_t, direction))


_DIRS = {
    (1, 0, 0): ((1, 0, 0), (1, 1, 0), (1, 1, 1), (1, 0, 1)),
    (-1, 0, 0): ((0, 0, 0), (0, 0, 1), (0, 1, 1), (0, 1, 0)),
    (0, 1, 0): ((0, 1, 0), (0, 1, 1), (1, 1, 1), (1, 1, 0)),
    (0, -1, 0): ((0, 0, 0), (1, 0, 0), (1, 0, 1), (0, 0, 1)),
    (0, 0, 1): ((0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)),
    (0, 0, -1): ((0, 0, 0), (0, 1, 0), (1, 1, 0), (1, 0, 0)),
}


def voxel_surface(cells: Iterable[Tuple[int, int, int]], direction=(1.0, 0.13, 0.071)) -> TriMesh:
    """Boundary of a union of unit cubes, each face split into two triangles.

    The cube set must not have cubes meeting only along an edge or corner.
    """
    cells = set(cells)
    index: Dict[Tuple[int, int, int], int] = {}
    pts: List[Tuple[float, float, float]] = []
    tris = []

    def vid(p):
        if p not in index:
            index[p] = len(pts)
            pts.append(tuple(float(x) for x in p))
        return index[p]

    for c in sorted(cells):
        for d, quad in _DIRS.items():
            if (c[0] + d[0], c[1] + d[1], c[2] + d[2]) in cells:
                continue
            q = [vid((c[0] + a, c[1] + b, c[2] + e)) for a, b, e in quad]
            tris.append((q[0], q[1], q[2]))
            tris.append((q[0], q[2], q[3]))
    pts_t = tuple(pts)
    return TriMesh(pts_t, tuple(tris), tilted_height(pts_t, direction))


def genus2_slab(direction=(1.0, 0.13, 0.071)) -> TriMesh:
    """A 5 x 3 slab of cubes with two holes: a genus-2 surface."""
    holes = {(1, 1), (3, 1)}
    cells = [(x, y, 0) for x in range(5) for y in range(3) if (x, y) not in holes]
    return voxel_surface(cells, direction)
