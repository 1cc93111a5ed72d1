"""Shared building blocks for scenario definitions."""
from __future__ import annotations

import numpy as np

from ..batching import SeededRng, Vec2, default_dtype, uniform_in_box
from ..core import Entity, World
from ..shapes import Sphere, min_contact_distance


def scatter(
    rng: SeededRng,
    entity: Entity,
    lo: tuple[float, float],
    hi: tuple[float, float],
    world: World,
    env_index: int | None = None,
) -> None:
    """Spawn an entity uniformly in a rectangle with zeroed motion."""
    n = 1 if env_index is not None else world.batch_size
    entity.state.set_pos(uniform_in_box(rng, lo, hi, n), env_index)
    entity.state.zero_motion(env_index)


def place(
    entity: Entity, x: float, y: float, world: World, env_index: int | None = None
) -> None:
    """Spawn an entity at a fixed point with zeroed motion."""
    n = 1 if env_index is not None else world.batch_size
    dtype = default_dtype()
    entity.state.set_pos(
        Vec2(np.full(n, x, dtype=dtype), np.full(n, y, dtype=dtype)), env_index
    )
    entity.state.zero_motion(env_index)


def rel_pos(frm: Entity, to: Entity) -> np.ndarray:
    """(B, 2) vector from one entity's center to another's."""
    d = to.state.pos - frm.state.pos
    return np.stack([d.x, d.y], axis=1)


def distance(a: Entity, b: Entity) -> np.ndarray:
    return (a.state.pos - b.state.pos).norm()


def pos_vel(entity: Entity) -> list[np.ndarray]:
    """Own-state observation columns: x, y, vx, vy."""
    s = entity.state
    return [s.pos.x, s.pos.y, s.vel.x, s.vel.y]


def touching(a: Entity, b: Entity, slack: float = 0.0) -> np.ndarray:
    """(B,) bool: centers closer than the shapes' contact onset distance.

    Meaningful for sphere-sphere pairs, which is what the reward terms use.
    """
    return distance(a, b) <= min_contact_distance(a.shape, b.shape) + slack


def contact_count(agent: Entity, others: list[Entity], slack: float = 0.0) -> np.ndarray:
    """(B,) number of listed entities this agent is overlapping."""
    total = np.zeros(agent.state.batch_size, dtype=default_dtype())
    for other in others:
        if other is agent:
            continue
        total = total + touching(agent, other, slack).astype(default_dtype())
    return total


def columns(*parts) -> np.ndarray:
    """Assemble (B,) and (B, k) pieces into one (B, obs_dim) array."""
    arrs = []
    for p in parts:
        a = np.asarray(p, dtype=default_dtype())
        arrs.append(a[:, None] if a.ndim == 1 else a)
    return np.concatenate(arrs, axis=1)


def clip_unit(force: np.ndarray, limit: float = 1.0) -> np.ndarray:
    """Clamp a raw heuristic force into the action box."""
    return np.clip(force, -limit, limit).astype(default_dtype())


def unit(v: np.ndarray, eps: float = 1e-8) -> np.ndarray:
    """Row-normalize a (B, 2) array, zero rows left as zero."""
    n = np.linalg.norm(v, axis=1, keepdims=True)
    return v / np.maximum(n, eps)


def marker(name: str, radius: float = 0.05, color=(0.2, 0.65, 0.3)) -> Entity:
    """A visual-only landmark: no collisions, never moves."""
    return Entity(
        name=name,
        shape=Sphere(radius=radius),
        movable=False,
        rotatable=False,
        collidable=False,
        color=color,
    )
