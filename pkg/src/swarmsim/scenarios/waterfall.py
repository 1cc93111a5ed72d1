"""Descent course: agents drift down under gravity through staggered
baffles to a basin at the bottom.

Two offset rows of fixed blocks force lateral maneuvering on the way down.
Rewards are individual: progress toward the basin minus a penalty for
hitting blocks or teammates.
"""
from __future__ import annotations

import numpy as np

from ..batching import SeededRng
from ..core import Agent, Entity, PhysParams, World
from ..env import Scenario
from ..shapes import Box, Sphere
from . import register
from .common import clip_unit, columns, contact_count, marker, place, pos_vel, rel_pos

# (x, y) centers of the fixed baffle blocks
BLOCKS = [(-0.7, 0.35), (0.0, 0.35), (0.7, 0.35), (-0.35, -0.25), (0.35, -0.25)]
BLOCK_LEN = 0.45
BLOCK_WID = 0.1
BASIN = (0.0, -0.9)


@register("waterfall")
class Waterfall(Scenario):
    max_steps = 200

    def __init__(self, n_agents: int = 4, gravity: float = -0.2, collision_penalty: float = 0.3):
        self.n_agents = n_agents
        self.gravity = gravity
        self.collision_penalty = collision_penalty

    def make_world(self, batch_size: int, rng: SeededRng) -> World:
        world = World(batch_size, params=PhysParams(gravity=(0.0, self.gravity)), rng=rng)
        for i in range(self.n_agents):
            # speed cap under the baffle contact width so blocks can't be skipped
            world.add(Agent(f"agent_{i}", shape=Sphere(radius=0.05), max_speed=0.35))
        world.add(marker("basin", radius=0.15, color=(0.2, 0.5, 0.9)))
        for k in range(len(BLOCKS)):
            world.add(
                Entity(
                    f"block_{k}",
                    shape=Box(length=BLOCK_LEN, width=BLOCK_WID),
                    movable=False,
                    color=(0.45, 0.45, 0.5),
                )
            )
        return world

    def reset_world_at(self, world: World, env_index: int | None = None) -> None:
        n = 1 if env_index is not None else world.batch_size
        rng = world.rng
        for agent in world.agents:
            x = rng.uniform(-0.6, 0.6, (n,))
            y = rng.uniform(0.75, 0.95, (n,))
            agent.state.set_pos_xy(x, y, env_index)
            agent.state.zero_motion(env_index)
        place(world.entity("basin"), *BASIN, world, env_index)
        for k, (bx, by) in enumerate(BLOCKS):
            place(world.entity(f"block_{k}"), bx, by, world, env_index)

    def reward(self, agent: Agent, world: World) -> np.ndarray:
        basin = world.entity("basin")
        gap = (agent.state.pos - basin.state.pos).norm()
        blocks = [world.entity(f"block_{k}") for k in range(len(BLOCKS))]
        bumps = contact_count(agent, world.agents) + self._block_bumps(agent, blocks)
        return -gap - self.collision_penalty * bumps

    @staticmethod
    def _block_bumps(agent: Agent, blocks: list[Entity]) -> np.ndarray:
        from ..geometry import closest_point_on_box

        count = np.zeros(agent.state.batch_size)
        r = agent.shape.radius
        for b in blocks:
            p = closest_point_on_box(agent.state.pos, b.state.pos, b.state.rot, b.shape)
            count = count + ((agent.state.pos - p).norm() <= r)
        return count

    def done(self, world: World) -> np.ndarray:
        basin = world.entity("basin")
        settled = [
            ((a.state.pos - basin.state.pos).norm() < 0.2) for a in world.agents
        ]
        return np.logical_and.reduce(settled)

    def observation(self, agent: Agent, world: World) -> np.ndarray:
        basin = world.entity("basin")
        blocks = [world.entity(f"block_{k}") for k in range(len(BLOCKS))]
        return columns(
            *pos_vel(agent),
            rel_pos(agent, basin),
            *[rel_pos(agent, b) for b in blocks],
        )

    def heuristic_action(self, agent_index: int, obs: np.ndarray) -> np.ndarray:
        own_vy = obs[:, 3]
        to_basin = obs[:, 4:6]
        force = np.stack([0.8 * to_basin[:, 0], 0.4 * to_basin[:, 1] - 0.3 * own_vy], axis=1)
        for k in range(len(BLOCKS)):
            rel = obs[:, 6 + 2 * k : 8 + 2 * k]
            below = (rel[:, 1] < 0.0) & (rel[:, 1] > -0.3)  # block is next on the way down
            lateral = np.abs(rel[:, 0]) < BLOCK_LEN / 2 + 0.1
            dodge = np.where(below & lateral, np.where(rel[:, 0] >= 0, -1.5, 1.5), 0.0)
            force[:, 0] = force[:, 0] + dodge
        return clip_unit(force)
