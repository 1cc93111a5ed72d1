"""Cohesive swarm: agents gather around a beacon while threading between
fixed obstacles and avoiding each other.

Reward is individual: negative distance to the beacon minus a stiff
penalty for touching anything, which makes pure center-rushing lose to
spaced-out flocking.
"""
from __future__ import annotations

import numpy as np

from ..batching import SeededRng
from ..core import Agent, Entity, World
from ..env import Scenario
from ..shapes import Sphere
from . import register
from .common import clip_unit, columns, contact_count, marker, pos_vel, rel_pos, scatter, unit


@register("flocking")
class Flocking(Scenario):
    max_steps = 200

    def __init__(self, n_agents: int = 4, n_obstacles: int = 3, collision_penalty: float = 3.0):
        self.n_agents = n_agents
        self.n_obstacles = n_obstacles
        self.collision_penalty = collision_penalty

    def make_world(self, batch_size: int, rng: SeededRng) -> World:
        world = World(batch_size, rng=rng)
        for i in range(self.n_agents):
            world.add(Agent(f"agent_{i}", shape=Sphere(radius=0.05)))
        world.add(marker("beacon", radius=0.06, color=(0.9, 0.3, 0.6)))
        for i in range(self.n_obstacles):
            world.add(
                Entity(
                    f"rock_{i}",
                    shape=Sphere(radius=0.1),
                    movable=False,
                    color=(0.4, 0.4, 0.45),
                )
            )
        return world

    def reset_world_at(self, world: World, env_index: int | None = None) -> None:
        for agent in world.agents:
            scatter(world.rng, agent, (-1.0, -1.0), (1.0, 1.0), world, env_index)
        scatter(world.rng, world.entity("beacon"), (-0.5, -0.5), (0.5, 0.5), world, env_index)
        for i in range(self.n_obstacles):
            scatter(world.rng, world.entity(f"rock_{i}"), (-0.8, -0.8), (0.8, 0.8), world, env_index)

    def reward(self, agent: Agent, world: World) -> np.ndarray:
        beacon = world.entity("beacon")
        gap = (agent.state.pos - beacon.state.pos).norm()
        rocks = [world.entity(f"rock_{i}") for i in range(self.n_obstacles)]
        bumps = contact_count(agent, world.agents) + contact_count(agent, rocks)
        return -gap - self.collision_penalty * bumps

    def observation(self, agent: Agent, world: World) -> np.ndarray:
        beacon = world.entity("beacon")
        rocks = [world.entity(f"rock_{i}") for i in range(self.n_obstacles)]
        others = [a for a in world.agents if a is not agent]
        return columns(
            *pos_vel(agent),
            rel_pos(agent, beacon),
            *[rel_pos(agent, r) for r in rocks],
            *[rel_pos(agent, o) for o in others],
        )

    def heuristic_action(self, agent_index: int, obs: np.ndarray) -> np.ndarray:
        to_beacon = obs[:, 4:6]
        force = 1.5 * to_beacon
        base = 6
        for k in range(self.n_obstacles):
            rel = obs[:, base + 2 * k : base + 2 * k + 2]
            force = force + self._repulse(rel, reach=0.3, strength=6.0)
        base = 6 + 2 * self.n_obstacles
        for k in range(self.n_agents - 1):
            rel = obs[:, base + 2 * k : base + 2 * k + 2]
            force = force + self._repulse(rel, reach=0.18, strength=4.0)
        return clip_unit(force)

    @staticmethod
    def _repulse(rel: np.ndarray, reach: float, strength: float) -> np.ndarray:
        d = np.linalg.norm(rel, axis=1, keepdims=True)
        push = np.maximum(0.0, reach - d) * strength
        return -unit(rel) * push
