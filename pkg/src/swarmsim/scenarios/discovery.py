"""Joint survey: points of interest pay out only while at least two agents
hold position near them, then relocate.

Agents must pair up, sweep to a point together, and split the team across
points to keep the payout flowing. Reward is shared: one unit per point
covered this step, plus shaping that pulls a second agent toward each
point.
"""
from __future__ import annotations

import numpy as np

from ..batching import SeededRng, uniform_in_box
from ..core import Agent, World
from ..env import Scenario
from ..shapes import Sphere
from . import register
from .common import clip_unit, columns, marker, pos_vel, rel_pos, scatter


@register("discovery")
class Discovery(Scenario):
    max_steps = 200

    def __init__(
        self,
        n_agents: int = 5,
        n_points: int = 3,
        quorum: int = 2,
        cover_dist: float = 0.35,
    ):
        self.n_agents = n_agents
        self.n_points = n_points
        self.quorum = quorum
        self.cover_dist = cover_dist
        self.covered_now: np.ndarray | None = None  # (B, n_points) bool

    def make_world(self, batch_size: int, rng: SeededRng) -> World:
        world = World(batch_size, rng=rng)
        for i in range(self.n_agents):
            world.add(Agent(f"agent_{i}", shape=Sphere(radius=0.03)))
        for i in range(self.n_points):
            world.add(marker(f"point_{i}", radius=0.05, color=(0.9, 0.3, 0.6)))
        self.covered_now = np.zeros((batch_size, self.n_points), dtype=bool)
        return world

    def reset_world_at(self, world: World, env_index: int | None = None) -> None:
        for agent in world.agents:
            scatter(world.rng, agent, (-1.0, -1.0), (1.0, 1.0), world, env_index)
        for i in range(self.n_points):
            scatter(world.rng, world.entity(f"point_{i}"), (-0.9, -0.9), (0.9, 0.9), world, env_index)
        if env_index is None:
            self.covered_now[:] = False
        else:
            self.covered_now[env_index] = False

    def post_step(self, world: World) -> None:
        agents = world.agents
        rng = world.rng
        B = world.batch_size
        for i in range(self.n_points):
            point = world.entity(f"point_{i}")
            dists = np.stack([(a.state.pos - point.state.pos).norm() for a in agents])
            covered = (dists <= self.cover_dist).sum(axis=0) >= self.quorum
            self.covered_now[:, i] = covered
            # draw a relocation for every env every step so the stream is
            # identical whether or not any particular env hit the quorum
            fresh = uniform_in_box(rng, (-0.9, -0.9), (0.9, 0.9), B)
            pos = point.state.pos
            pos.x[:] = np.where(covered, fresh.x, pos.x)
            pos.y[:] = np.where(covered, fresh.y, pos.y)

    def reward(self, agent: Agent, world: World) -> np.ndarray:
        agents = world.agents
        score = self.covered_now.sum(axis=1).astype(float)
        crowding = np.zeros(world.batch_size)
        for i in range(self.n_points):
            point = world.entity(f"point_{i}")
            dists = np.stack([(a.state.pos - point.state.pos).norm() for a in agents])
            # distance of the quorum-th nearest agent: shaping toward pairs
            kth = np.partition(dists, self.quorum - 1, axis=0)[self.quorum - 1]
            crowding = crowding + kth
        return score - 0.05 * crowding

    def observation(self, agent: Agent, world: World) -> np.ndarray:
        others = [a for a in world.agents if a is not agent]
        return columns(
            *pos_vel(agent),
            *[rel_pos(agent, world.entity(f"point_{i}")) for i in range(self.n_points)],
            *[rel_pos(agent, o) for o in others],
        )

    def heuristic_action(self, agent_index: int, obs: np.ndarray) -> np.ndarray:
        # fixed pairing: agents 2k and 2k+1 sweep point k (mod n_points)
        point_idx = (agent_index // 2) % self.n_points
        target = obs[:, 4 + 2 * point_idx : 6 + 2 * point_idx]
        return clip_unit(4.0 * target)
