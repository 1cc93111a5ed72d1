"""Batched rigid-body dynamics: soft contacts and semi-implicit Euler.

The contact model is a smooth penalty force: two bodies closer than their
minimum contact distance repel along the line between their closest points
with magnitude c * k * log(1 + exp((d_min - dist) / k)). Outside that
distance the force is exactly zero, so resting bodies exchange no force.
Each contact also contributes torque about both bodies' centers, which is
the only way orientation changes: actions never produce torque.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .batching import Vec2, clamp_norm, default_dtype
from .core import Agent, AgentAction, Entity, PhysParams, World
from .errors import ContractViolation
from .geometry import closest_points
from .shapes import min_contact_distance

# below this separation the contact normal is ill-defined; use a fixed axis
DEGENERATE_DIST = 1e-8


@dataclass
class ContactResult:
    """One batched contact query between entities i and j."""

    force_i: Vec2  # force applied to i; j receives its exact negation
    point_i: Vec2
    point_j: Vec2
    active: np.ndarray  # (B,) bool, True where the pair is within range


def collision_force(
    p_i: Vec2,
    p_j: Vec2,
    d_min: float,
    params: PhysParams,
    fallback_sign: float = 1.0,
) -> ContactResult:
    """Penalty force on body i from body j given their closest points.

    fallback_sign picks the +x or -x axis as the push direction when the
    points coincide and no normal exists; callers derive it from the pair's
    entity indices so the choice is deterministic.
    """
    dtype = default_dtype()
    x_ij = p_i - p_j
    dist = x_ij.norm()
    degenerate = dist < DEGENERATE_DIST
    safe = np.where(degenerate, 1.0, dist).astype(dtype)
    dir_x = np.where(degenerate, dtype(fallback_sign), x_ij.x / safe)
    dir_y = np.where(degenerate, dtype(0.0), x_ij.y / safe)
    active = dist <= d_min
    k = params.contact_margin
    # log1p(exp(z)) via logaddexp: z can reach ~1e2/k, exp would overflow
    magnitude = params.contact_force * k * np.logaddexp(0.0, (d_min - dist) / k)
    magnitude = np.where(active, magnitude, 0.0).astype(dtype)
    return ContactResult(
        force_i=Vec2(dir_x * magnitude, dir_y * magnitude),
        point_i=p_i,
        point_j=p_j,
        active=active,
    )


def integrate(entity: Entity, force: Vec2, torque: np.ndarray, params: PhysParams) -> None:
    """Advance one entity by dt: velocity first, then position from the new velocity."""
    state = entity.state
    dtype = default_dtype()
    dt = dtype(params.dt)
    keep = dtype(1.0 - params.damping)
    if entity.movable:
        inv_m = dtype(1.0 / entity.mass)
        vel = state.vel * keep + force * (inv_m * dt)
        if entity.max_speed is not None:
            vel = clamp_norm(vel, entity.max_speed)
        state.vel = vel
        state.pos = state.pos + vel * dt
    if entity.rotatable:
        inv_i = dtype(1.0 / entity.moment_of_inertia)
        ang_vel = state.ang_vel * keep + torque * (inv_i * dt)
        state.ang_vel = ang_vel
        state.rot = state.rot + ang_vel * dt


def _collidable_pairs(world: World) -> list[tuple[int, int]]:
    pairs = []
    ents = world.entities
    for i in range(len(ents)):
        for j in range(i + 1, len(ents)):
            a, b = ents[i], ents[j]
            if not (a.collidable and b.collidable):
                continue
            if not (a.movable or a.rotatable or b.movable or b.rotatable):
                continue  # nothing this contact could move
            pairs.append((i, j))
    return pairs


def _validate_action(agent: Agent, action: AgentAction, batch_size: int) -> None:
    if action.force.batch_size != batch_size:
        raise ContractViolation(
            f"action for '{agent.name}' has batch size {action.force.batch_size}, "
            f"world has {batch_size}"
        )
    if np.isnan(action.force.x).any() or np.isnan(action.force.y).any():
        raise ContractViolation(f"action for '{agent.name}' contains NaN")
    if action.comm is not None:
        if agent.silent:
            raise ContractViolation(f"agent '{agent.name}' is silent but got a comm vector")
        if action.comm.shape != (batch_size, agent.comm_dim):
            raise ContractViolation(
                f"comm for '{agent.name}' has shape {action.comm.shape}, "
                f"expected {(batch_size, agent.comm_dim)}"
            )
        if np.isnan(action.comm).any():
            raise ContractViolation(f"comm for '{agent.name}' contains NaN")


def world_step(world: World, actions: list[AgentAction | None]) -> None:
    """One physics tick for every environment in the batch.

    actions align with world.agents; None is allowed only for scripted
    agents, whose action_script is invoked here. Decoded forces feed the
    integrator together with contact forces and gravity.
    """
    agents = world.agents
    if len(actions) != len(agents):
        raise ContractViolation(f"got {len(actions)} actions for {len(agents)} agents")
    B = world.batch_size
    dtype = default_dtype()

    for agent, action in zip(agents, actions):
        if agent.action_script is not None:
            action = agent.action_script(agent, world)
        if action is None:
            raise ContractViolation(f"agent '{agent.name}' has no script and got no action")
        _validate_action(agent, action, B)
        agent.action = action
        if not agent.silent and action.comm is not None:
            world.comm[agent.name] = action.comm

    params = world.params
    zeros = lambda: np.zeros(B, dtype=dtype)
    forces = {e.name: Vec2.zeros(B) for e in world.entities}
    torques = {e.name: zeros() for e in world.entities}

    for agent in agents:
        forces[agent.name] = forces[agent.name] + agent.action.force

    gx, gy = params.gravity
    if gx != 0.0 or gy != 0.0:
        for e in world.entities:
            if e.movable:
                m = dtype(e.mass)
                forces[e.name] = forces[e.name] + Vec2(
                    np.full(B, gx * m, dtype=dtype), np.full(B, gy * m, dtype=dtype)
                )

    for i, j in world.collidable_pairs(_collidable_pairs):
        a, b = world.entities[i], world.entities[j]
        p_i, p_j = closest_points(
            a.state.pos, a.state.rot, a.shape, b.state.pos, b.state.rot, b.shape
        )
        d_min = min_contact_distance(a.shape, b.shape)
        sign = 1.0 if (i + j) % 2 == 0 else -1.0
        contact = collision_force(p_i, p_j, d_min, params, fallback_sign=sign)
        if not contact.active.any():
            continue
        forces[a.name] = forces[a.name] + contact.force_i
        forces[b.name] = forces[b.name] - contact.force_i
        if a.rotatable:
            r = contact.point_i - a.state.pos
            torques[a.name] = torques[a.name] + r.cross(contact.force_i)
        if b.rotatable:
            r = contact.point_j - b.state.pos
            torques[b.name] = torques[b.name] - r.cross(contact.force_i)

    for e in world.entities:
        if e.movable or e.rotatable:
            integrate(e, forces[e.name], torques[e.name], params)
