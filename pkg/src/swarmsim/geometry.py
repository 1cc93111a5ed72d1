"""Vectorized closest-point queries between 2D shapes.

Every routine operates on a batch of B poses at once and returns, per
environment, the pair of points realizing the minimum distance between the
two shapes' supports. Support conventions: a sphere is represented by its
center (its radius lives in the pair's minimum contact distance); boxes and
lines are represented by their perimeter/segment points. Box queries use the
perimeter rather than the filled area, so a point strictly inside a box maps
to the nearest wall -- boxes behave as thin-walled rectangles, which also
gives correct contact behavior for bodies enclosed inside one.
"""
from __future__ import annotations

import numpy as np

from .batching import Vec2
from .errors import UnsupportedShapePair
from .shapes import Box, Line, Shape, Sphere


def segment_endpoints(pos: Vec2, rot: np.ndarray, length: float) -> tuple[Vec2, Vec2]:
    """World-frame endpoints of a line entity."""
    half = length / 2
    dx, dy = np.cos(rot), np.sin(rot)
    offset = Vec2(dx * half, dy * half)
    return pos - offset, pos + offset


def box_corners(pos: Vec2, rot: np.ndarray, box: Box) -> list[Vec2]:
    """World-frame corners, counter-clockwise starting at (+l/2, +w/2)."""
    hx, hy = box.length / 2, box.width / 2
    ca, sa = np.cos(rot), np.sin(rot)
    corners = []
    for lx, ly in ((hx, hy), (-hx, hy), (-hx, -hy), (hx, -hy)):
        corners.append(Vec2(pos.x + lx * ca - ly * sa, pos.y + lx * sa + ly * ca))
    return corners


def box_edges(pos: Vec2, rot: np.ndarray, box: Box) -> list[tuple[Vec2, Vec2]]:
    c = box_corners(pos, rot, box)
    return [(c[k], c[(k + 1) % 4]) for k in range(4)]


def closest_point_on_segment(p: Vec2, a: Vec2, b: Vec2) -> Vec2:
    ab = b - a
    denom = ab.dot(ab)
    t = np.clip((p - a).dot(ab) / np.maximum(denom, 1e-12), 0.0, 1.0)
    return a + ab * t


def closest_points_segment_segment(
    p1: Vec2, q1: Vec2, p2: Vec2, q2: Vec2
) -> tuple[Vec2, Vec2]:
    """Closest points between segments [p1,q1] and [p2,q2], batched.

    Clamped-projection method: solve the unconstrained line-line minimum,
    clamp the first parameter, recompute and clamp the second, then re-clamp
    the first against the clamped second. Parallel segments fall out of the
    degenerate-denominator branch with a valid (non-unique) minimizing pair.
    """
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = d1.dot(d1)
    e = d2.dot(d2)
    b = d1.dot(d2)
    c = d1.dot(r)
    f = d2.dot(r)
    denom = a * e - b * b
    nondeg = denom > 1e-12
    s = np.where(nondeg, np.clip((b * f - c * e) / np.where(nondeg, denom, 1.0), 0.0, 1.0), 0.0)
    t = (b * s + f) / np.maximum(e, 1e-12)
    t_cl = np.clip(t, 0.0, 1.0)
    recompute = t != t_cl
    s = np.where(recompute, np.clip((b * t_cl - c) / np.maximum(a, 1e-12), 0.0, 1.0), s)
    return p1 + d1 * s, p2 + d2 * t_cl


def closest_point_on_box(p: Vec2, box_pos: Vec2, box_rot: np.ndarray, box: Box) -> Vec2:
    """Closest point on a box's perimeter to p (interior points map outward)."""
    hx, hy = box.length / 2, box.width / 2
    ca, sa = np.cos(box_rot), np.sin(box_rot)
    rel = p - box_pos
    # into box frame
    qx = rel.x * ca + rel.y * sa
    qy = -rel.x * sa + rel.y * ca
    cx = np.clip(qx, -hx, hx)
    cy = np.clip(qy, -hy, hy)
    inside = (np.abs(qx) < hx) & (np.abs(qy) < hy)
    # interior: snap to the nearest of the four walls
    gap_x = hx - np.abs(qx)
    gap_y = hy - np.abs(qy)
    wall_x = np.where(qx >= 0, hx, -hx)
    wall_y = np.where(qy >= 0, hy, -hy)
    ix = np.where(gap_x <= gap_y, wall_x, qx)
    iy = np.where(gap_x <= gap_y, qy, wall_y)
    bx = np.where(inside, ix, cx)
    by = np.where(inside, iy, cy)
    # back to world frame
    return Vec2(box_pos.x + bx * ca - by * sa, box_pos.y + bx * sa + by * ca)


def _pick_min(candidates: list[tuple[Vec2, Vec2]]) -> tuple[Vec2, Vec2]:
    """Select, per environment, the candidate pair with minimum distance.

    Ties resolve to the first candidate in list order (deterministic).
    """
    if len(candidates) == 1:
        return candidates[0]
    d2 = np.stack([(pi - pj).dot(pi - pj) for pi, pj in candidates])
    best = np.argmin(d2, axis=0)
    env = np.arange(best.shape[0])
    pix = np.stack([pi.x for pi, _ in candidates])[best, env]
    piy = np.stack([pi.y for pi, _ in candidates])[best, env]
    pjx = np.stack([pj.x for _, pj in candidates])[best, env]
    pjy = np.stack([pj.y for _, pj in candidates])[best, env]
    return Vec2(pix, piy), Vec2(pjx, pjy)


def closest_points(
    pos_i: Vec2,
    rot_i: np.ndarray,
    shape_i: Shape,
    pos_j: Vec2,
    rot_j: np.ndarray,
    shape_j: Shape,
) -> tuple[Vec2, Vec2]:
    """Per-env closest points (p_i, p_j) between two posed shapes.

    Raises UnsupportedShapePair for shape types with no routine.
    """
    si, sj = shape_i, shape_j
    if isinstance(si, Sphere) and isinstance(sj, Sphere):
        return pos_i.copy(), pos_j.copy()
    if isinstance(si, Sphere) and isinstance(sj, Line):
        a, b = segment_endpoints(pos_j, rot_j, sj.length)
        return pos_i.copy(), closest_point_on_segment(pos_i, a, b)
    if isinstance(si, Sphere) and isinstance(sj, Box):
        return pos_i.copy(), closest_point_on_box(pos_i, pos_j, rot_j, sj)
    if isinstance(si, Line) and isinstance(sj, Line):
        a1, b1 = segment_endpoints(pos_i, rot_i, si.length)
        a2, b2 = segment_endpoints(pos_j, rot_j, sj.length)
        return closest_points_segment_segment(a1, b1, a2, b2)
    if isinstance(si, Line) and isinstance(sj, Box):
        a, b = segment_endpoints(pos_i, rot_i, si.length)
        cands = [
            closest_points_segment_segment(a, b, ea, eb)
            for ea, eb in box_edges(pos_j, rot_j, sj)
        ]
        return _pick_min(cands)
    if isinstance(si, Box) and isinstance(sj, Box):
        cands = []
        for ea, eb in box_edges(pos_i, rot_i, si):
            for fa, fb in box_edges(pos_j, rot_j, sj):
                cands.append(closest_points_segment_segment(ea, eb, fa, fb))
        return _pick_min(cands)
    # try the mirrored order before giving up
    if (isinstance(si, (Line, Box)) and isinstance(sj, Sphere)) or (
        isinstance(si, Box) and isinstance(sj, Line)
    ):
        pj, pi = closest_points(pos_j, rot_j, sj, pos_i, rot_i, si)
        return pi, pj
    raise UnsupportedShapePair(f"no closest-point routine for {type(si).__name__}-{type(sj).__name__}")
