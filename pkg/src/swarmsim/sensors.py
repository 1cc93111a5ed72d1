"""Range sensors: batched ray casting against the world's collidable entities.

Intersections are computed in float64 regardless of the working dtype and
cast on return, so hit distances stay accurate even when the simulation
itself runs in float32. A ray reports the nearest hit strictly in front of
its origin; rays that hit nothing report the maximum range.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .batching import Vec2, default_dtype
from .core import Agent, Entity, World
from .shapes import Box, Line, Sphere

RAY_EPS = 1e-9  # hits closer than this are behind/at the origin and ignored


@dataclass(frozen=True)
class Lidar:
    """A fan of range-finding rays attached to an agent.

    Ray m points at start_angle + m * (end_angle - start_angle) / n_rays,
    plus the agent's own rotation when attach_rotation is set; a full-circle
    fan therefore includes the start direction and excludes the end.
    """

    n_rays: int = 12
    max_range: float = 1.0
    start_angle: float = 0.0
    end_angle: float = 2 * np.pi
    attach_rotation: bool = True

    def __post_init__(self):
        if self.n_rays < 1:
            raise ValueError(f"n_rays must be >= 1, got {self.n_rays}")
        if self.max_range <= 0:
            raise ValueError(f"max_range must be positive, got {self.max_range}")


def _ray_circle(ox, oy, dx, dy, cx, cy, radius: float) -> np.ndarray:
    """Smallest positive ray parameter hitting a circle, inf on miss."""
    fx, fy = ox - cx, oy - cy
    b = fx * dx + fy * dy  # |d| == 1
    c = fx * fx + fy * fy - radius * radius
    disc = b * b - c
    hit = disc >= 0.0
    sq = np.sqrt(np.where(hit, disc, 0.0))
    t1 = -b - sq
    t2 = -b + sq
    t = np.where(t1 > RAY_EPS, t1, np.where(t2 > RAY_EPS, t2, np.inf))
    return np.where(hit, t, np.inf)


def _ray_segment(ox, oy, dx, dy, ax, ay, bx, by) -> np.ndarray:
    """Ray parameter at a segment crossing, inf on miss or parallel."""
    ex, ey = bx - ax, by - ay
    denom = dx * ey - dy * ex
    safe = np.where(np.abs(denom) < 1e-12, 1.0, denom)
    qx, qy = ax - ox, ay - oy
    t = (qx * ey - qy * ex) / safe
    u = (qx * dy - qy * dx) / safe
    ok = (np.abs(denom) >= 1e-12) & (t > RAY_EPS) & (u >= 0.0) & (u <= 1.0)
    return np.where(ok, t, np.inf)


def _ray_rect(ox, oy, dx, dy, cx, cy, rot, box: Box) -> np.ndarray:
    """Slab test in the box frame; rays starting inside hit the exit wall."""
    hx, hy = box.length / 2, box.width / 2
    ca, sa = np.cos(rot), np.sin(rot)
    lox = (ox - cx) * ca + (oy - cy) * sa
    loy = -(ox - cx) * sa + (oy - cy) * ca
    ldx = dx * ca + dy * sa
    ldy = -dx * sa + dy * ca
    tmin = np.full_like(lox, -np.inf)
    tmax = np.full_like(lox, np.inf)
    miss = np.zeros(lox.shape, dtype=bool)
    for o, d, h in ((lox, ldx, hx), (loy, ldy, hy)):
        axis_parallel = np.abs(d) < 1e-12
        safe = np.where(axis_parallel, 1.0, d)
        t_lo = (-h - o) / safe
        t_hi = (h - o) / safe
        lo = np.minimum(t_lo, t_hi)
        hi = np.maximum(t_lo, t_hi)
        tmin = np.where(axis_parallel, tmin, np.maximum(tmin, lo))
        tmax = np.where(axis_parallel, tmax, np.minimum(tmax, hi))
        miss |= axis_parallel & (np.abs(o) > h)
    hit = ~miss & (tmax >= np.maximum(tmin, RAY_EPS))
    t = np.where(tmin > RAY_EPS, tmin, tmax)
    return np.where(hit, t, np.inf)


def _entity_hit(ox, oy, dx, dy, entity: Entity) -> np.ndarray:
    pos = entity.state.pos
    cx = pos.x.astype(np.float64)
    cy = pos.y.astype(np.float64)
    shape = entity.shape
    if isinstance(shape, Sphere):
        return _ray_circle(ox, oy, dx, dy, cx, cy, shape.radius)
    if isinstance(shape, Line):
        rot = entity.state.rot.astype(np.float64)
        half = shape.length / 2
        ex, ey = np.cos(rot) * half, np.sin(rot) * half
        return _ray_segment(ox, oy, dx, dy, cx - ex, cy - ey, cx + ex, cy + ey)
    if isinstance(shape, Box):
        rot = entity.state.rot.astype(np.float64)
        return _ray_rect(ox, oy, dx, dy, cx, cy, rot, shape)
    return np.full(ox.shape, np.inf)


def cast_ray(
    origin: Vec2,
    angle: np.ndarray,
    world: World,
    max_range: float,
    exclude: str | None = None,
) -> np.ndarray:
    """Distance to the nearest collidable entity along one ray per env.

    Ties between entities at identical distance resolve to the earlier entity
    in the world's list order. Result lies in (0, max_range].
    """
    ox = origin.x.astype(np.float64)
    oy = origin.y.astype(np.float64)
    a = np.asarray(angle, dtype=np.float64)
    dx, dy = np.cos(a), np.sin(a)
    best = np.full(ox.shape, np.inf)
    for entity in world.entities:
        if not entity.collidable or entity.name == exclude:
            continue
        t = _entity_hit(ox, oy, dx, dy, entity)
        best = np.minimum(best, t)
    return np.minimum(best, max_range).astype(default_dtype())


def lidar_scan(agent: Agent, lidar: Lidar, world: World) -> np.ndarray:
    """(B, n_rays) of ranges for one agent's lidar, self excluded."""
    rot = agent.state.rot.astype(np.float64) if lidar.attach_rotation else 0.0
    span = lidar.end_angle - lidar.start_angle
    columns = []
    for m in range(lidar.n_rays):
        angle = lidar.start_angle + m * span / lidar.n_rays + rot
        columns.append(cast_ray(agent.state.pos, angle, world, lidar.max_range, exclude=agent.name))
    return np.stack(columns, axis=1)
