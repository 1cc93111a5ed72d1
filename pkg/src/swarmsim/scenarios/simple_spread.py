"""Cooperative coverage: n agents spread out to stand on n markers.

Every agent is rewarded by how well the team covers all markers (negative
sum over markers of the nearest-agent distance) and individually penalized
for overlapping teammates.
"""
from __future__ import annotations

import numpy as np

from ..batching import SeededRng
from ..core import Agent, World
from ..env import Scenario
from ..shapes import Sphere
from . import register
from .common import clip_unit, columns, contact_count, marker, pos_vel, rel_pos, scatter


@register("simple_spread")
class SimpleSpread(Scenario):
    max_steps = 200

    def __init__(self, n_agents: int = 3, collision_penalty: float = 1.0):
        self.n_agents = n_agents
        self.collision_penalty = collision_penalty

    def make_world(self, batch_size: int, rng: SeededRng) -> World:
        world = World(batch_size, rng=rng)
        for i in range(self.n_agents):
            world.add(Agent(f"agent_{i}", shape=Sphere(radius=0.05)))
        for i in range(self.n_agents):
            world.add(marker(f"mark_{i}"))
        return world

    def reset_world_at(self, world: World, env_index: int | None = None) -> None:
        for e in world.entities:
            scatter(world.rng, e, (-1.0, -1.0), (1.0, 1.0), world, env_index)

    def reward(self, agent: Agent, world: World) -> np.ndarray:
        agents = world.agents
        cover = np.zeros(world.batch_size)
        for mark in world.landmarks:
            dists = np.stack([(a.state.pos - mark.state.pos).norm() for a in agents])
            cover = cover + dists.min(axis=0)
        collisions = contact_count(agent, agents)
        return -cover - self.collision_penalty * collisions

    def observation(self, agent: Agent, world: World) -> np.ndarray:
        others = [a for a in world.agents if a is not agent]
        return columns(
            *pos_vel(agent),
            *[rel_pos(agent, m) for m in world.landmarks],
            *[rel_pos(agent, o) for o in others],
        )

    def heuristic_action(self, agent_index: int, obs: np.ndarray) -> np.ndarray:
        # drive straight at this agent's own marker
        target = obs[:, 4 + 2 * agent_index : 6 + 2 * agent_index]
        return clip_unit(5.0 * target)
