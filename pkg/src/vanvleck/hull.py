"""Convex hulls of point sets in the complex plane and Euclidean distances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput

__all__ = ["ConvexRegion", "convex_hull", "hull_distance"]


@dataclass(frozen=True)
class ConvexRegion:
    """Convex hull given by counterclockwise vertices.

    degenerate is True for single points and collinear sets, which are stored
    as 1- and 2-vertex regions: the classical all-real-roots case lands here.
    """

    vertices: tuple
    degenerate: bool = False

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        return hull_distance(self, z) <= tol


def _cross(o: complex, a: complex, b: complex) -> float:
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def convex_hull(points) -> ConvexRegion:
    """Minimal convex region containing the points (Andrew's monotone chain).

    Collinear subsets collapse: interior and edge-interior points are dropped.
    Raises EmptyInput on an empty collection.
    """
    pts = [complex(p) for p in points]
    if not pts:
        raise EmptyInput("convex hull of an empty point set")
    uniq = sorted(set((p.real, p.imag) for p in pts))
    pts = [complex(x, y) for x, y in uniq]
    if len(pts) == 1:
        return ConvexRegion(vertices=(pts[0],), degenerate=True)

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    verts = lower[:-1] + upper[:-1]
    if len(verts) < 3:
        # collinear: keep the two extreme points as a segment
        return ConvexRegion(vertices=(pts[0], pts[-1]), degenerate=True)
    return ConvexRegion(vertices=tuple(verts), degenerate=False)


def _point_segment_distance(z: complex, a: complex, b: complex) -> float:
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0.0:
        return abs(z - a)
    t = ((z - a).real * ab.real + (z - a).imag * ab.imag) / denom
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * ab))


def hull_distance(region: ConvexRegion, z) -> float:
    """Euclidean distance from z to the region (0 if inside or on boundary)."""
    z = complex(z)
    verts = region.vertices
    if len(verts) == 1:
        return abs(z - verts[0])
    if len(verts) == 2:
        return _point_segment_distance(z, verts[0], verts[1])
    inside = True
    for i in range(len(verts)):
        if _cross(verts[i], verts[(i + 1) % len(verts)], z) < 0:
            inside = False
            break
    if inside:
        return 0.0
    return min(
        _point_segment_distance(z, verts[i], verts[(i + 1) % len(verts)])
        for i in range(len(verts))
    )
